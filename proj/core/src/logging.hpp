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

#ifndef SPQ_SRC_LOGGING_HPP_
#define SPQ_SRC_LOGGING_HPP_

#include <spdlog/spdlog.h>

#define SPQ_LOG(level, ...) ::spdlog::level(__VA_ARGS__)

#endif  // SPQ_SRC_LOGGING_HPP_
