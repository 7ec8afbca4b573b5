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


// Random fixtures shared by the unit tests and the acceptance run.

#pragma once

#include <random>

#include "fairsamp/fair_sampling.hpp"
#include "fairsamp/multipartite.hpp"
#include "fairsamp/random.hpp"

namespace fixtures {

/// Exact fair-sampling device blended with a random lossy POVM:
/// M_a = (1 - t) M_a^FS + t e P_a with P complete and e in [0.2, 1].
inline fairsamp::LossyDevice near_fs_device(std::size_t dim, std::size_t n_settings,
                                            std::size_t n_outcomes, double t,
                                            fairsamp::Rng &rng) {
    using namespace fairsamp;
    const LossyDevice base = random_exact_fs_device(dim, n_settings, n_outcomes, rng);
    std::uniform_real_distribution<double> eff(0.2, 1.0);
    PovmTable table;
    for (std::size_t x = 0; x < n_settings; ++x) {
        const auto p = random_povm(dim, n_outcomes, rng);
        const double e = eff(rng);
        auto &row = table[base.settings()[x]];
        for (std::size_t a = 0; a < n_outcomes; ++a) {
            row.emplace(base.outcomes()[a], (1.0 - t) * base.element(x, a) + (t * e) * p[a]);
        }
    }
    return LossyDevice(dim, base.settings(), base.outcomes(), table);
}

/// Post-selected statistics of `dev` against the ideal experiment built from
/// `mq`; returns the worst total variation over settings, or a negative
/// value when no setting reaches `min_accept`.
inline double worst_ideal_tv(const fairsamp::LossyDevice &dev, const fairsamp::HermitianOperator &mq,
                             const fairsamp::DensityState &rho, double min_accept) {
    using namespace fairsamp;
    const LosslessDevice ideal = ideal_device_from(dev, mq);
    const FilteredState fs = filtered_state(mq, rho);
    double worst = -1.0;
    for (const auto &x : dev.settings()) {
        if (efficiency(dev, x, rho) < min_accept) {
            continue;
        }
        const auto ps = postselected_distribution(dev, x, rho);
        const auto id = postselected_distribution(ideal.device(), x, fs.state);
        worst = std::max(worst, total_variation(ps, id));
    }
    return worst;
}

/// Good-block state plus coherences: rho_hat = [[(1-e) r, c], [c^dag, e s]].
/// Built as a mixture of a pure superposition and a block-diagonal part, so
/// its good-block weight is exactly 1 - e.
inline fairsamp::DensityState imperfect_state(std::size_t good, std::size_t bad, double e,
                                              fairsamp::Rng &rng) {
    using namespace fairsamp;
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double mix = u(rng);
    Vector psi(static_cast<Eigen::Index>(good + bad));
    psi << std::sqrt(1.0 - e) * random_pure_vector(good, rng), std::sqrt(e) * random_pure_vector(bad, rng);
    Matrix block = Matrix::Zero(psi.size(), psi.size());
    const auto g = static_cast<Eigen::Index>(good);
    const auto b = static_cast<Eigen::Index>(bad);
    block.topLeftCorner(g, g) = (1.0 - e) * random_density(good, 1 + good / 2, rng).op().matrix();
    block.bottomRightCorner(b, b) = e * random_density(bad, bad, rng).op().matrix();
    return DensityState(HermitianOperator::hermitize(mix * psi * psi.adjoint() + (1.0 - mix) * block));
}

} // namespace fixtures
