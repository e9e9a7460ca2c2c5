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

#ifndef SPQ_ERRORS_HPP_
#define SPQ_ERRORS_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace spq {

// Base of every domain error raised by the library. The CLI maps these to
// exit code 1; anything else is a bug.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
  virtual const char* kind() const noexcept { return "Error"; }
};

#define SPQ_DECLARE_ERROR(Name)                                  \
  class Name : public Error {                                    \
   public:                                                       \
    explicit Name(const std::string& what) : Error(what) {}      \
    const char* kind() const noexcept override { return #Name; } \
  };

SPQ_DECLARE_ERROR(AttributeError)
SPQ_DECLARE_ERROR(SemanticsError)
SPQ_DECLARE_ERROR(SpecError)
SPQ_DECLARE_ERROR(ResourceError)
SPQ_DECLARE_ERROR(ArgumentError)
SPQ_DECLARE_ERROR(UnboundedError)
SPQ_DECLARE_ERROR(CaseError)
SPQ_DECLARE_ERROR(NonConvexError)
SPQ_DECLARE_ERROR(NotApplicableError)
SPQ_DECLARE_ERROR(NumericsError)
SPQ_DECLARE_ERROR(IoError)

#undef SPQ_DECLARE_ERROR

// Lexical or grammatical error in query text. Line and column are 1-based.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t line, std::size_t column,
             std::vector<std::string> expected = {});
  const char* kind() const noexcept override { return "ParseError"; }

  const std::string& message() const { return message_; }
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }
  const std::vector<std::string>& expected() const { return expected_; }

 private:
  std::string message_;
  std::size_t line_;
  std::size_t column_;
  std::vector<std::string> expected_;
};

}  // namespace spq

#endif  // SPQ_ERRORS_HPP_
