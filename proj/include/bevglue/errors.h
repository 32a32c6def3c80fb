// Copyright 2026 The BEVGlue Authors.
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

#ifndef BEVGLUE_ERRORS_H_
#define BEVGLUE_ERRORS_H_

#include <stdexcept>
#include <string>

namespace bevglue {

// Fewer correspondences than the model needs.
class UnderdeterminedError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Point configuration carries no rotational information.
class DegenerateError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Input exceeds a hard size bound (exhaustive search, wire counts).
class SizeLimitError : public std::length_error {
 public:
  using std::length_error::length_error;
};

class GenerationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace bevglue

#endif  // BEVGLUE_ERRORS_H_
