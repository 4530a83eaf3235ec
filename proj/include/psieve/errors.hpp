// Copyright 2026 The psieve Authors
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

#pragma once

#include <stdexcept>
#include <string>

namespace psieve {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operand shapes do not agree with each other or with a SpaceLayout.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A value violates a documented precondition (non-Hermitian, unnormalized, out of range, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// The requested operation is not defined for this model (e.g. closed-form
/// short-time coefficient of a multi-term interaction).
class UnsupportedModel : public Error {
 public:
  using Error::Error;
};

}  // namespace psieve
