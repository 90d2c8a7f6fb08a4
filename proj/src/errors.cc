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

#include "propeval/errors.h"

#include <iostream>
#include <mutex>
#include <utility>

namespace propeval {

namespace {

std::string FormatMessage(const std::string& source, const std::string& message,
                          int line) {
  std::string out = source;
  if (line > 0) out += ":" + std::to_string(line);
  if (!out.empty()) out += ": ";
  return out + message;
}

std::mutex& HandlerMutex() {
  static std::mutex mu;
  return mu;
}

WarningHandler& Handler() {
  static WarningHandler handler = [](std::string_view msg) {
    std::cerr << "warning: " << msg << "\n";
  };
  return handler;
}

}  // namespace

InputError::InputError(std::string source, std::string message, int line)
    : std::runtime_error(FormatMessage(source, message, line)),
      source_(std::move(source)),
      detail_(std::move(message)),
      line_(line) {}

void Warn(std::string_view message) {
  std::lock_guard<std::mutex> lock(HandlerMutex());
  if (Handler()) Handler()(message);
}

WarningHandler SetWarningHandler(WarningHandler handler) {
  std::lock_guard<std::mutex> lock(HandlerMutex());
  std::swap(Handler(), handler);
  return handler;
}

}  // namespace propeval
