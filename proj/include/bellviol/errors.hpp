// Copyright 2026 The bellviol Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace bellviol {

/// Input failed a structural check (shape, normalization, Hermiticity, ...).
class ValidationError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Requested Hilbert space exceeds the configured amplitude cap.
class CapacityError : public std::length_error {
  public:
    using std::length_error::length_error;
};

/// Parameters lie outside the region where a formula is defined.
class PreconditionError : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

/// File or stream failure; the message carries the path.
class IoError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

} // namespace bellviol
