// Copyright 2026 The fairsamp Authors
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

namespace fairsamp {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Shapes or dimensions of the operands do not agree.
class DimensionError : public Error {
  public:
    using Error::Error;
};

class NotHermitianError : public Error {
  public:
    using Error::Error;
};

/// An operator required to be positive semi-definite has an eigenvalue
/// below the negative PSD tolerance.
class NotPositiveError : public Error {
  public:
    using Error::Error;
};

/**
 * A POVM violates positivity or completeness. The offending setting and
 * outcome (when one is identifiable) and the size of the violation are kept
 * so that command-line tools can report them.
 */
class PovmError : public Error {
  public:
    PovmError(const std::string &what, std::string setting,
              std::string outcome, double residual)
        : Error(what), setting_(std::move(setting)),
          outcome_(std::move(outcome)), residual_(residual) {}

    [[nodiscard]] const std::string &setting() const { return setting_; }
    [[nodiscard]] const std::string &outcome() const { return outcome_; }
    [[nodiscard]] double residual() const { return residual_; }

  private:
    std::string setting_;
    std::string outcome_;
    double residual_;
};

/// Post-selection was requested for a setting whose acceptance probability
/// vanishes. Such settings are erased rather than analysed.
class ZeroAcceptanceError : public Error {
  public:
    using Error::Error;
};

} // namespace fairsamp
