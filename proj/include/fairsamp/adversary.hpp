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
 * Makarov-style detector attack: a device that looks like a fair-sampling
 * CHSH detector of efficiency 1/4 once its hidden variable is traced out,
 * and a source that exploits it to fake the algebraic CHSH value with
 * separable states.
 */
#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "fairsamp/device.hpp"

namespace fairsamp {

/// Settings {0, 1}, outcomes {+, -}: Z and X measurements at efficiency 1/4.
[[nodiscard]] LossyDevice makarov_traced();

struct HiddenVariableDevice {
    std::vector<LossyDevice> branches; ///< r = 1..4
    std::vector<double> branch_prob;
};

[[nodiscard]] HiddenVariableDevice makarov_branches();

/// Probability-weighted sum of the branch POVMs.
[[nodiscard]] LossyDevice mixture(const HiddenVariableDevice &hv);

/// The attacker's view: the qubit together with the 4-level register
/// holding r (register states |1>..|4> at indices 0..3).
[[nodiscard]] LossyDevice makarov_adversary_device();

/**
 * Qubit device measuring cos(phi) Z + sin(phi) X for each angle, with every
 * element scaled by `efficiency`. Outcomes {+, -}; settings "0", "1", ...
 */
[[nodiscard]] LossyDevice flat_qubit_device(const std::vector<double> &angles,
                                            double efficiency);

struct SourceEntry {
    bool vacuum = true;
    Vector alice;
    Vector bob;
};

/// Source state for each pair (r_A, r_B), indices 0..3 for r = 1..4.
[[nodiscard]] std::array<std::array<SourceEntry, 4>, 4> faking_source();

struct FakedChsh {
    double chsh = 0.0;
    double detection_rate = 0.0;
    std::map<std::pair<int, int>, double> correlators; ///< (x, y) -> E
    std::map<std::pair<int, int>, double> acceptance;  ///< (x, y) -> Pr(both)
};

/**
 * Exact enumeration over r_A, r_B, x and y. White noise of weight `noise`
 * replaces each source emission, vacuum entries included, by the maximally
 * mixed two-qubit state.
 */
[[nodiscard]] FakedChsh run_faked_chsh(double noise);

struct SampledChsh {
    double chsh = 0.0;
    double chsh_stderr = 0.0;
    double detection_rate = 0.0;
    double detection_stderr = 0.0;
    std::uint64_t rounds = 0;
    std::uint64_t clicks = 0;
};

/// Monte Carlo version of run_faked_chsh; deterministic for a fixed seed.
[[nodiscard]] SampledChsh sample_faked_chsh(double noise, std::uint64_t rounds,
                                            std::uint64_t seed);

} // namespace fairsamp
