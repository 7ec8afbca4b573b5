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
 * Bell scenarios built from local lossy devices: joint raw and post-selected
 * statistics, the filtered global state, and the multipartite bounds.
 */
#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fairsamp/device.hpp"
#include "fairsamp/fair_sampling.hpp"
#include "fairsamp/random.hpp"

namespace fairsamp {

using SettingTuple = std::vector<std::string>;
using OutcomeTuple = std::vector<std::string>;

/// Cap on the number of outcome tuples per setting tuple.
inline constexpr std::size_t kMaxJointOutcomes = 100000;

/**
 * Linear Bell functional over good outcome tuples. Entries that are not
 * listed are zero; every setting tuple must carry at least one entry.
 */
class BellFunctional {
  public:
    struct Entry {
        SettingTuple x;
        OutcomeTuple a;
        double c;
    };

    BellFunctional(const std::vector<std::vector<std::string>> &settings,
                   const std::vector<std::vector<std::string>> &outcomes,
                   const std::vector<Entry> &entries);

    [[nodiscard]] const std::map<SettingTuple, std::map<OutcomeTuple, double>> &
    table() const {
        return table_;
    }
    [[nodiscard]] const std::vector<std::vector<std::string>> &
    outcomes() const {
        return outcomes_;
    }
    [[nodiscard]] std::size_t outcome_tuple_count() const;

  private:
    std::vector<std::vector<std::string>> outcomes_;
    std::map<SettingTuple, std::map<OutcomeTuple, double>> table_;
};

/// CHSH in correlator form for two parties with settings {x0, x1} and
/// outcomes {+, -}: sum over (-1)^{xy} a b Pr(a, b | x, y).
[[nodiscard]] std::vector<BellFunctional::Entry>
chsh_entries(const std::vector<std::string> &alice_settings,
             const std::vector<std::string> &bob_settings,
             const std::vector<std::string> &outcomes);

class BellScenario {
  public:
    BellScenario(std::vector<LossyDevice> parties, DensityState psi,
                 std::optional<std::vector<BellFunctional::Entry>> coeffs =
                     std::nullopt);

    [[nodiscard]] const std::vector<LossyDevice> &parties() const {
        return parties_;
    }
    [[nodiscard]] const DensityState &psi() const { return psi_; }
    [[nodiscard]] const std::optional<BellFunctional> &bell() const {
        return bell_;
    }
    [[nodiscard]] std::vector<std::size_t> party_dims() const;
    [[nodiscard]] std::vector<SettingTuple> setting_tuples() const;

  private:
    std::vector<LossyDevice> parties_;
    DensityState psi_;
    std::optional<BellFunctional> bell_;
};

struct JointDistribution {
    std::vector<OutcomeTuple> outcomes;
    std::vector<double> probs;

    [[nodiscard]] double at(const OutcomeTuple &a) const;
};

/// Every tuple over the parties' good outcomes followed by no-click,
/// lexicographic by party.
[[nodiscard]] JointDistribution joint_raw(const BellScenario &sc,
                                          const SettingTuple &xs);

/// Probability that every party clicks.
[[nodiscard]] double joint_acceptance(const BellScenario &sc,
                                      const SettingTuple &xs);

/// Restricted to all-click tuples and renormalized. Throws
/// ZeroAcceptanceError when the tuple must be erased.
[[nodiscard]] JointDistribution
joint_postselected(const BellScenario &sc, const SettingTuple &xs,
                   double threshold = kZeroAcceptance);

/// Tensor-product device; setting and outcome labels are the per-party
/// labels joined by commas.
[[nodiscard]] LossyDevice joint_device(const std::vector<LossyDevice> &parties);

[[nodiscard]] FilteredState
filtered_global_state(const std::vector<HermitianOperator> &mqs,
                      const DensityState &psi);

struct Prop2Report {
    double max_deviation = 0.0;
    std::vector<SettingTuple> erased;
    std::vector<HermitianOperator> mqs;
    double acceptance = 0.0; ///< E_Q of the global state
};

/// Compares post-selected statistics with the ideal experiment built from
/// each party's exact-fair-sampling decomposition. Throws when a party
/// fails the exact check.
[[nodiscard]] Prop2Report verify_proposition2(const BellScenario &sc,
                                              double tol = kDecisionTol);

/// 1 - prod (1 - eps_k).
[[nodiscard]] double epsilon_total(const std::vector<double> &eps);

using DistributionSet = std::map<SettingTuple, JointDistribution>;

[[nodiscard]] double bell_value(const DistributionSet &dists,
                                const BellFunctional &b);

/// max over all conditional distributions of |<B>|.
[[nodiscard]] double beta_max(const BellFunctional &b);

/// 2 eps_tot beta_max.
[[nodiscard]] double deviation_bound(double eps_tot, double beta_max);

struct BellBoundReport {
    std::vector<double> eps;
    double eps_tot = 0.0;
    double eps_joint = 0.0;
    double beta_max = 0.0;
    double bell_postselected = 0.0;
    double bell_ideal = 0.0;
    double bound = 0.0;
    double max_tv = 0.0; ///< worst post-selected vs ideal TV over tuples
    DistributionSet postselected;
    DistributionSet ideal;
};

/// Ideal experiment of the whole scenario treated as one device with
/// M_Q = (x) mqs acting on the filtered global state.
[[nodiscard]] BellBoundReport
bell_bound_report(const BellScenario &sc,
                  const std::vector<HermitianOperator> &mqs);

/**
 * Device with M_a^x = E_C(x) sqrt(M_Q) P_a^x sqrt(M_Q) for random lossless
 * POVMs P^x, random E_C(x) in [0.2, 1] and a random unit-norm M_Q (the
 * identity when `strong`).
 */
[[nodiscard]] LossyDevice random_exact_fs_device(std::size_t dim,
                                                 std::size_t n_settings,
                                                 std::size_t n_outcomes,
                                                 Rng &rng, bool strong = false);

/// Parties with local dimension in [2, max_dim], two settings and two or
/// three outcomes, on a random global state.
[[nodiscard]] BellScenario random_exact_fs_scenario(std::size_t n_parties,
                                                    std::size_t max_dim,
                                                    Rng &rng);

/// Splits a comma-joined label into its parts.
[[nodiscard]] std::vector<std::string> split_label(const std::string &s);
[[nodiscard]] std::string join_label(const std::vector<std::string> &parts);

} // namespace fairsamp
