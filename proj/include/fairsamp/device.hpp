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
 * Lossy measurement devices: a POVM per setting over the good outcomes plus
 * the reserved no-click outcome, and the raw and post-selected statistics
 * they produce.
 */
#pragma once

#include <map>
#include <string>
#include <vector>

#include "fairsamp/operator.hpp"

namespace fairsamp {

/// Reserved label of the no-click outcome.
inline constexpr const char *kNoClick = "noclick";
inline constexpr double kCompletenessTol = 1e-9;
/// Acceptance probabilities at or below this value mark a setting as erased.
inline constexpr double kZeroAcceptance = 1e-12;

using PovmTable = std::map<std::string, std::map<std::string, HermitianOperator>>;

class LossyDevice {
  public:
    /**
     * `povm[x][a]` must hold every good outcome of every setting. The
     * no-click element may be omitted, in which case it is reconstructed
     * from completeness; when present, completeness is checked to
     * kCompletenessTol. Violations raise PovmError naming the setting and
     * outcome.
     */
    LossyDevice(std::size_t dim, std::vector<std::string> settings,
                std::vector<std::string> outcomes, const PovmTable &povm);

    [[nodiscard]] std::size_t dim() const { return dim_; }
    [[nodiscard]] const std::vector<std::string> &settings() const {
        return settings_;
    }
    [[nodiscard]] const std::vector<std::string> &outcomes() const {
        return outcomes_;
    }

    [[nodiscard]] std::size_t setting_index(const std::string &x) const;
    /// Index into outcomes(); the no-click label maps to outcomes().size().
    [[nodiscard]] std::size_t outcome_index(const std::string &a) const;

    [[nodiscard]] const HermitianOperator &element(const std::string &x,
                                                   const std::string &a) const;
    [[nodiscard]] const HermitianOperator &element(std::size_t x,
                                                   std::size_t a) const {
        return elements_[x][a];
    }
    [[nodiscard]] const HermitianOperator &noclick(std::size_t x) const {
        return elements_[x].back();
    }
    /// True when the no-click element of setting `x` was inferred.
    [[nodiscard]] bool noclick_inferred(std::size_t x) const {
        return inferred_[x];
    }

    [[nodiscard]] PovmTable table() const;

  private:
    std::size_t dim_;
    std::vector<std::string> settings_;
    std::vector<std::string> outcomes_;
    std::vector<std::vector<HermitianOperator>> elements_;
    std::vector<bool> inferred_;
};

struct OutcomeDistribution {
    std::vector<std::string> labels;
    std::vector<double> probs;

    [[nodiscard]] double at(const std::string &label) const;
};

/// Total variation distance between two distributions over the same labels.
[[nodiscard]] double total_variation(const OutcomeDistribution &p,
                                     const OutcomeDistribution &q);

/// M_click^x, the sum of the good-outcome elements.
[[nodiscard]] HermitianOperator click_element(const LossyDevice &dev,
                                              const std::string &x);

/// Tr(M_click^x rho), clamped to [0, 1].
[[nodiscard]] double efficiency(const LossyDevice &dev, const std::string &x,
                                const DensityState &rho);

/// Probabilities over the good outcomes followed by the no-click entry.
[[nodiscard]] OutcomeDistribution
outcome_distribution(const LossyDevice &dev, const std::string &x,
                     const DensityState &rho);

/// Good-outcome probabilities renormalized by the acceptance probability.
/// Throws ZeroAcceptanceError when the acceptance is below `threshold`.
[[nodiscard]] OutcomeDistribution
postselected_distribution(const LossyDevice &dev, const std::string &x,
                          const DensityState &rho,
                          double threshold = kZeroAcceptance);

/// Projective measurement device (no losses) from a list of orthonormal
/// vectors per setting; outcome `k` measures `bases[x][k]`.
[[nodiscard]] LossyDevice
projective_device(const std::vector<std::string> &settings,
                  const std::vector<std::string> &outcomes,
                  const std::vector<std::vector<Vector>> &bases);

} // namespace fairsamp
