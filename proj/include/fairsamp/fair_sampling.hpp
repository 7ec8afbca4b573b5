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
 * Exact and approximate fair-sampling tests for a single device, the
 * filtered state and ideal lossless device that reproduce post-selected
 * statistics, and the associated total-variation bounds.
 */
#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fairsamp/device.hpp"
#include "fairsamp/filter.hpp"

namespace fairsamp {

inline constexpr double kDecisionTol = 1e-8;
/// Tolerance of the support condition Pi M_click Pi = M_click.
inline constexpr double kSupportTol = 1e-9;

struct FairSamplingVerdict {
    bool weak = false;
    bool strong = false;
    bool homogeneous = false;
    std::map<std::string, double> classical_eff;
    HermitianOperator quantum_elem = HermitianOperator::zero(1); ///< M_Q, or default_mq when not weak
    HermitianOperator support = HermitianOperator::zero(1);
    double epsilon = 0.0; ///< approximate_epsilon against quantum_elem
};

/**
 * Weak fair sampling holds when the click elements of all settings are
 * pairwise proportional. When it does, M_Q is the click element of the
 * first setting scaled to unit norm and E_C(x) is the norm of M_click^x.
 */
[[nodiscard]] FairSamplingVerdict check_exact(const LossyDevice &dev,
                                              double tol = kDecisionTol);

/// max_x || Pi - Mt^x / ||Mt^x|| || with Mt^x = mq^{-1/2} M_click^x mq^{-1/2}.
[[nodiscard]] double approximate_epsilon(const LossyDevice &dev,
                                         const HermitianOperator &mq);

/// Average of the unit-norm click elements.
[[nodiscard]] HermitianOperator default_mq(const LossyDevice &dev);

/// Lossless device on the support of `mq` that measures the filtered state
/// in place of `dev`; the uncovered part of the support is shared evenly
/// between the good outcomes.
[[nodiscard]] LosslessDevice ideal_device_from(const LossyDevice &dev,
                                               const HermitianOperator &mq);

struct FilteredState {
    DensityState state;
    double acceptance;
};

/// sqrt(mq) rho sqrt(mq) / Tr(mq rho).
[[nodiscard]] FilteredState filtered_state(const HermitianOperator &mq,
                                           const DensityState &rho);

/// epsilon / (1 - epsilon).
[[nodiscard]] double tv_bound(double epsilon);

struct ImperfectStateReport {
    double eps_prime = 0.0;
    double coherence_trace_norm = 0.0;
    double tv_bound = 0.0;
    double measured_tv = 0.0;
    double accept_actual = 0.0; ///< Tr(M-hat_click rho-hat)
    double accept_ideal = 0.0;  ///< Tr(M_click rho) on the good block
};

/**
 * Compares post-selected statistics of `dev_hat` on `rho_hat` with those
 * of the compressed device on the normalized good block. The good subspace
 * is spanned by the first `good_dim` basis vectors.
 */
[[nodiscard]] ImperfectStateReport
imperfect_state_bound(const LossyDevice &dev_hat, const DensityState &rho_hat,
                      std::size_t good_dim, const std::string &x);

/// Compression of every element to the first `good_dim` basis vectors.
[[nodiscard]] LossyDevice compress_device(const LossyDevice &dev,
                                          std::size_t good_dim);

struct NecessaryConditions {
    bool weak_consistent = false;
    bool strong_consistent = false;
};

/// Efficiencies indexed by local setting, then remote configuration.
using EfficiencyTable = std::map<std::string, std::map<std::string, double>>;

[[nodiscard]] NecessaryConditions
necessary_conditions(const EfficiencyTable &eff, double tol = kDecisionTol);

using KrausList = std::vector<Matrix>;

struct StateDependentResult {
    bool holds = false;
    std::optional<DensityState> psi_click;
    std::map<std::string, double> acceptance;
};

/**
 * Applies each setting's click map to factor `party` of `psi` and tests
 * whether the unnormalized outputs are pairwise proportional.
 */
[[nodiscard]] StateDependentResult
state_dependent_check(const std::map<std::string, KrausList> &filter_click,
                      const DensityState &psi,
                      const std::vector<std::size_t> &party_dims,
                      std::size_t party, double tol = kDecisionTol);

/// Embeds an operator on factor `party` into the full tensor product.
[[nodiscard]] Matrix embed(const Matrix &local,
                           const std::vector<std::size_t> &party_dims,
                           std::size_t party);

} // namespace fairsamp
