/*
 * Copyright 2026 The HML-RF Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef HMLRF_ERROR_H_
#define HMLRF_ERROR_H_

#include <stdexcept>
#include <string>

namespace hmlrf {

// Every failure raised by the library carries the name of the module that
// detected it, so the command line front end can report "module: cause".
class Error : public std::runtime_error {
 public:
  Error(std::string module, const std::string& message)
      : std::runtime_error(module + ": " + message),
        module_(std::move(module)),
        cause_(message) {}

  const std::string& module() const { return module_; }
  const std::string& cause() const { return cause_; }

 private:
  std::string module_;
  std::string cause_;
};

}  // namespace hmlrf

#endif  // HMLRF_ERROR_H_
