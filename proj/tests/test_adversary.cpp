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


#include <catch2/catch.hpp>

#include <cmath>

#include "fairsamp/adversary.hpp"
#include "fairsamp/fair_sampling.hpp"
#include "fairsamp/random.hpp"
#include "oracles.hpp"

using namespace fairsamp;

namespace {

Vector ket(double a, double b) {
    Vector v(2);
    v << a, b;
    return v;
}

bool parallel(const Vector &a, const Vector &b) {
    return std::abs(std::abs(a.dot(b)) - a.norm() * b.norm()) < 1e-12;
}

} // namespace

TEST_CASE("traced device looks strongly and homogeneously fair", "[adversary]") {
    const auto v = check_exact(makarov_traced());
    CHECK(v.weak);
    CHECK(v.strong);
    CHECK(v.homogeneous);
    CHECK(v.epsilon == 0.0);
    Rng rng(91);
    for (int i = 0; i < 20; ++i) {
        const DensityState rho = random_density(2, 1 + i % 2, rng);
        CHECK(std::abs(efficiency(makarov_traced(), "0", rho) - 0.25) <= 1e-12);
        CHECK(std::abs(efficiency(makarov_traced(), "1", rho) - 0.25) <= 1e-12);
    }
    const double s = 1.0 / std::sqrt(2.0);
    const auto d = outcome_distribution(makarov_traced(), "0", DensityState::pure(ket(s, s)));
    CHECK(d.at("+") == Approx(0.125));
    CHECK(d.at("-") == Approx(0.125));
    CHECK(d.at(kNoClick) == Approx(0.75));
}

TEST_CASE("branches average to the traced device", "[adversary]") {
    const LossyDevice mix = mixture(makarov_branches());
    const LossyDevice traced = makarov_traced();
    for (std::size_t x = 0; x < 2; ++x) {
        for (std::size_t a = 0; a < 3; ++a) {
            CHECK(max_abs_diff(mix.element(x, a), traced.element(x, a)) <= 1e-12);
        }
    }
    const auto hv = makarov_branches();
    CHECK(hv.branches.size() == 4);
    for (double p : hv.branch_prob) {
        CHECK(p == 0.25);
    }
    CHECK(max_abs_diff(hv.branches[0].noclick(1), HermitianOperator::identity(2)) == 0.0);
    CHECK(max_abs_diff(hv.branches[2].noclick(0), HermitianOperator::identity(2)) == 0.0);
    HiddenVariableDevice broken = hv;
    broken.branch_prob.pop_back();
    CHECK_THROWS_AS(mixture(broken), Error);
}

TEST_CASE("the attacker's description is not fair", "[adversary]") {
    const LossyDevice adv = makarov_adversary_device();
    CHECK(adv.dim() == 8);
    CHECK_FALSE(check_exact(adv).weak);
    // Tracing the register with a uniform prior gives back the traced device.
    const std::vector<std::size_t> dims{2, 4};
    const std::vector<std::size_t> keep{0};
    const HermitianOperator prior = tensor({HermitianOperator::identity(2),
                                            0.25 * HermitianOperator::identity(4)});
    for (std::size_t x = 0; x < 2; ++x) {
        for (std::size_t a = 0; a < 3; ++a) {
            const HermitianOperator reduced = partial_trace(
                HermitianOperator::hermitize(adv.element(x, a).matrix() * prior.matrix()), dims, keep);
            CHECK(max_abs_diff(reduced, makarov_traced().element(x, a)) <= 1e-12);
        }
    }
}

TEST_CASE("faking source table", "[adversary]") {
    const auto src = faking_source();
    const double s = 1.0 / std::sqrt(2.0);
    CHECK_FALSE(src[0][0].vacuum);
    CHECK(parallel(src[0][0].alice, ket(1, 0)));
    CHECK(parallel(src[0][0].bob, ket(1, 0)));
    CHECK(src[0][1].vacuum);
    CHECK_FALSE(src[2][3].vacuum);
    CHECK(parallel(src[2][3].alice, ket(s, s)));
    CHECK(parallel(src[2][3].bob, ket(s, -s)));
    int emitted = 0;
    for (const auto &row : src) {
        for (const auto &e : row) {
            emitted += e.vacuum ? 0 : 1;
        }
    }
    CHECK(emitted == 8);
}

TEST_CASE("faked CHSH saturates the algebraic bound with product states", "[adversary]") {
    const FakedChsh f = run_faked_chsh(0.0);
    CHECK(f.chsh == Approx(4.0).epsilon(1e-12));
    for (const auto &[xy, e] : f.correlators) {
        CHECK(e == Approx(xy.first * xy.second == 1 ? -1.0 : 1.0).epsilon(1e-12));
    }
    CHECK(f.chsh > 2.0 * std::sqrt(2.0));
    const auto ref = oracle::faked_chsh(0.0);
    CHECK(f.detection_rate == Approx(ref.detection).epsilon(1e-12));
    CHECK(f.detection_rate == Approx(0.125).epsilon(1e-12));
}

TEST_CASE("white noise pulls the faked value down", "[adversary]") {
    for (double w : {0.0, 0.1, 0.4, 0.75, 1.0}) {
        const FakedChsh f = run_faked_chsh(w);
        const auto ref = oracle::faked_chsh(w);
        INFO("noise " << w);
        CHECK(f.chsh == Approx(ref.chsh).margin(1e-12));
        CHECK(f.detection_rate == Approx(ref.detection).epsilon(1e-12));
        CHECK(f.chsh == Approx(8.0 * (1.0 - w) / (2.0 - w)).margin(1e-12));
    }
    CHECK(run_faked_chsh(1.0).chsh == Approx(0.0).margin(1e-12));
    CHECK(run_faked_chsh(0.4).chsh == Approx(3.0).epsilon(1e-12));
    CHECK_THROWS_AS(run_faked_chsh(1.5), Error);
}

TEST_CASE("sampled attack agrees with enumeration", "[adversary]") {
    for (double w : {0.0, 0.4}) {
        const FakedChsh exact = run_faked_chsh(w);
        const SampledChsh s = sample_faked_chsh(w, 200000, 17);
        CHECK(s.rounds == 200000);
        CHECK(std::abs(s.detection_rate - exact.detection_rate) <= 3.0 * s.detection_stderr);
        if (s.chsh_stderr > 0.0) {
            CHECK(std::abs(s.chsh - exact.chsh) <= 3.0 * s.chsh_stderr);
        } else {
            CHECK(s.chsh == exact.chsh);
        }
        const SampledChsh again = sample_faked_chsh(w, 200000, 17);
        CHECK(again.chsh == s.chsh);
        CHECK(again.clicks == s.clicks);
    }
}

TEST_CASE("flat qubit devices", "[adversary]") {
    const LossyDevice d = flat_qubit_device({0.0, std::acos(-1.0) / 2}, 0.5);
    CHECK(max_abs_diff(d.element(0, 0), 0.5 * HermitianOperator::projector(ket(1, 0))) < 1e-15);
    CHECK(check_exact(d).strong);
    CHECK_THROWS_AS(flat_qubit_device({0.0}, 0.0), Error);
    CHECK_THROWS_AS(flat_qubit_device({0.0}, 1.5), Error);
}
