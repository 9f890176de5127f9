// Copyright 2026 The SoCo Authors.
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

#ifndef SOCO_ERRORS_H_
#define SOCO_ERRORS_H_

#include <stdexcept>
#include <string>

namespace soco {

// Mismatched vector lengths in an elementwise operation.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// NaN or otherwise unusable value handed to an operation.
class InvalidValueError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class EmptyInputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Internal precondition broken by a caller inside the library.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// A loss or gradient turned NaN/inf during training.
class NonFiniteError : public std::runtime_error {
 public:
  NonFiniteError(const std::string& what, long long step, std::size_t task,
                 std::size_t coordinate)
      : std::runtime_error(what),
        step_(step),
        task_(task),
        coordinate_(coordinate) {}

  long long step() const { return step_; }
  std::size_t task() const { return task_; }
  std::size_t coordinate() const { return coordinate_; }

 private:
  long long step_;
  std::size_t task_;
  std::size_t coordinate_;
};

}  // namespace soco

#endif  // SOCO_ERRORS_H_
