// Copyright 2026 The RAS Authors
// SPDX-License-Identifier: Apache-2.0
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

#ifndef RAS_ERROR_HPP_
#define RAS_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace ras {

// Base of every error the library throws. kind() is a stable token used by
// the CLI when it reports failures on a single machine-parsable line.
class Error : public std::runtime_error {
 public:
  Error(std::string_view kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  std::string_view kind() const noexcept { return kind_; }

 private:
  std::string_view kind_;
};

#define RAS_DEFINE_ERROR(Name)                                     \
  class Name : public Error {                                      \
   public:                                                         \
    explicit Name(const std::string& what) : Error(#Name, what) {} \
  };

RAS_DEFINE_ERROR(ShapeError)
RAS_DEFINE_ERROR(ContractError)
RAS_DEFINE_ERROR(StateError)
RAS_DEFINE_ERROR(ConfigError)
RAS_DEFINE_ERROR(FormatError)
RAS_DEFINE_ERROR(MetricError)
RAS_DEFINE_ERROR(IoError)

#undef RAS_DEFINE_ERROR

}  // namespace ras

#endif  // RAS_ERROR_HPP_
