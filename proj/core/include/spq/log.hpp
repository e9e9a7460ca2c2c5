// Copyright 2026 The spq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SPQ_LOG_HPP_
#define SPQ_LOG_HPP_

#include <string_view>

namespace spq {

// Sets the log level from `level`, or from the SPQ_LOG environment variable
// when `level` is empty (trace, debug, info, warn, error, off; default warn).
// Messages go to stderr.
void init_logging(std::string_view level = {});

}  // namespace spq

#endif  // SPQ_LOG_HPP_
