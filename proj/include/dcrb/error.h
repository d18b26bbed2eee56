// Copyright 2026 The dcrb Authors
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

#ifndef DCRB_ERROR_H
#define DCRB_ERROR_H

#include <stdexcept>
#include <string>

namespace dcrb {

/// A numeric argument is outside the domain of the operation.
struct ParameterError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Shapes or dimensions of operands do not agree.
struct DimensionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// A circuit breaks one of its structural invariants.
struct ValidationError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// An experiment, block or noise configuration is inconsistent.
struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// The request would exceed a hard resource limit (e.g. branch count).
struct ResourceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A fit result was used in a way that requires convergence.
struct FitError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace dcrb

#endif
