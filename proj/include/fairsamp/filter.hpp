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

/**
 * @file
 * Decomposition of a lossy device into a click/no-click filter followed by
 * a lossless measurement, and the diagonal normal form of classical
 * pre-filters.
 */
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fairsamp/device.hpp"

namespace fairsamp {

/// Two-flag filter with Hermitian Kraus operators sqrt(M_click) and
/// sqrt(M_noclick).
struct QuantumFilter {
    HermitianOperator kraus_click;
    HermitianOperator kraus_noclick;

    /// max |F_c^dag F_c + F_n^dag F_n - I|.
    [[nodiscard]] double completeness_residual() const;
};

/**
 * A device whose good outcomes sum to one common projector for every
 * setting. The wrapped LossyDevice carries I - support as its no-click
 * element.
 */
class LosslessDevice {
  public:
    LosslessDevice(std::size_t dim, std::vector<std::string> settings,
                   std::vector<std::string> outcomes, const PovmTable &good,
                   HermitianOperator support);

    [[nodiscard]] const LossyDevice &device() const { return device_; }
    [[nodiscard]] const HermitianOperator &support() const { return support_; }

  private:
    HermitianOperator support_;
    LossyDevice device_;
};

/// Filter and lossless elements for one setting. Plain data: nothing here
/// is validated, so corrupted decompositions can be fed to the verifier.
struct SettingDecomposition {
    QuantumFilter filter;
    std::vector<HermitianOperator> lossless; ///< one per good outcome
    HermitianOperator support;
};

struct Decomposition {
    std::vector<std::string> settings;
    std::vector<std::string> outcomes;
    std::vector<SettingDecomposition> per_setting; ///< parallel to settings
};

[[nodiscard]] SettingDecomposition
canonical_decomposition(const LossyDevice &dev, const std::string &x);
[[nodiscard]] Decomposition canonical_decomposition(const LossyDevice &dev);

/// Single-setting lossless device of one decomposition entry.
[[nodiscard]] LosslessDevice lossless_device(const Decomposition &d,
                                             const std::string &x);

/// All lossless parts as one device; the no-click element of setting x is
/// I - support_x.
[[nodiscard]] LossyDevice merged_lossless(const Decomposition &d);

/// Outcome probabilities (good outcomes, then no-click) of the composed
/// experiment M-bar after F for setting index `x`.
[[nodiscard]] std::vector<double>
composed_probabilities(const Decomposition &d, std::size_t x,
                       const DensityState &rho);

/// Largest |Pr_composed - Pr_original| over `trials` verification states,
/// all settings and all outcomes including no-click.
[[nodiscard]] double verify_recomposition(const LossyDevice &dev,
                                          const Decomposition &d,
                                          std::size_t trials,
                                          std::uint64_t seed);

/**
 * Classical pre-filter. Without a transition map the filter is diagonal and
 * accept_prob is authoritative; with one, accept_prob(x) must equal the sum
 * of transition[x].
 */
struct ClassicalFilter {
    std::map<std::string, double> accept_prob;
    std::optional<std::map<std::string, std::map<std::string, double>>>
        transition;

    void validate() const;
};

struct NormalForm {
    ClassicalFilter diag;
    LosslessDevice device;
    std::vector<std::string> erased; ///< settings with zero acceptance
};

/// Rewrites a mixing classical filter in diagonal form, absorbing the
/// transition into a new unit-efficiency device.
[[nodiscard]] NormalForm classical_normal_form(const ClassicalFilter &fc,
                                               const LosslessDevice &lossless);

} // namespace fairsamp
