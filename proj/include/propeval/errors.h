// Copyright 2026 The propeval Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PROPEVAL_ERRORS_H_
#define PROPEVAL_ERRORS_H_

#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace propeval {

// Malformed or inconsistent user input. Carries the offending source (file
// path or document name) and, when known, a 1-based line number.
class InputError : public std::runtime_error {
 public:
  InputError(std::string source, std::string message, int line = 0);

  const std::string& source() const { return source_; }
  int line() const { return line_; }
  const std::string& detail() const { return detail_; }

 private:
  std::string source_;
  std::string detail_;
  int line_;
};

// Non-fatal diagnostics (clipped boxes, empty ground truth, ...). The default
// handler writes to stderr; tests install their own to capture messages.
using WarningHandler = std::function<void(std::string_view)>;

void Warn(std::string_view message);
WarningHandler SetWarningHandler(WarningHandler handler);

}  // namespace propeval

#endif  // PROPEVAL_ERRORS_H_
