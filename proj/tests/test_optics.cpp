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
#include <filesystem>

#include "fairsamp/fair_sampling.hpp"
#include "fairsamp/json_io.hpp"
#include "fairsamp/optics.hpp"
#include "fairsamp/random.hpp"
#include "oracles.hpp"

using namespace fairsamp;

namespace {

const double kPi = std::acos(-1.0);
const std::filesystem::path kData = FAIRSAMP_DATA_DIR;
const std::vector<double> kAngles{0.0, kPi / 8, kPi / 4, 3 * kPi / 8};

DensityState fock_state(const TwoModeFock &fock, std::size_t h, std::size_t v) {
    Vector e = Vector::Zero(static_cast<Eigen::Index>(fock.dim()));
    e(static_cast<Eigen::Index>(fock.index(h, v))) = 1.0;
    return DensityState::pure(e);
}

} // namespace

TEST_CASE("Fock basis ordering", "[optics]") {
    const TwoModeFock f(3);
    CHECK(f.dim() == 10);
    CHECK(f.basis()[0] == std::make_pair(std::size_t{0}, std::size_t{0}));
    CHECK(f.basis()[1] == std::make_pair(std::size_t{0}, std::size_t{1}));
    CHECK(f.basis()[2] == std::make_pair(std::size_t{1}, std::size_t{0}));
    CHECK(f.index(2, 1) == 8);
    CHECK(f.total(8) == 3);
    CHECK(f.sector(2).trace() == Approx(3.0));
    CHECK_THROWS_AS(f.index(3, 1), DimensionError);
    CHECK_THROWS_AS(TwoModeFock(0), Error);
}

TEST_CASE("mode rotation is unitary and preserves photon number", "[optics][property]") {
    for (std::size_t n = 1; n <= 5; ++n) {
        const TwoModeFock f(n);
        for (double t : {0.0, 0.3, 1.0, 2.5, -0.7}) {
            const Matrix u = mode_rotation(f, t);
            CHECK((u.adjoint() * u - Matrix::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff() <
                  1e-12);
            const Matrix n_op = total_number(f).matrix();
            CHECK((u * n_op - n_op * u).cwiseAbs().maxCoeff() < 1e-12);
        }
    }
}

TEST_CASE("rotated number operator matches ladder operators", "[optics][property]") {
    for (int n = 1; n <= 5; ++n) {
        const TwoModeFock f(static_cast<std::size_t>(n));
        for (double t : {0.0, 0.2, kPi / 4, 1.3, kPi / 2, 2.9}) {
            const Matrix ref = oracle::ladder_number_theta(n, t);
            CHECK((number_theta(f, t).matrix() - ref).cwiseAbs().maxCoeff() < 1e-12);
        }
    }
}

TEST_CASE("analyser spec parametrisation", "[optics]") {
    const AnalyserSpec s = analyser_spec(0.8, 0.05, {0.0}, 2);
    CHECK(s.eta2 == 0.8);
    CHECK(s.eta1 == Approx(1.0 - 0.2 * 1.05));
    CHECK((1.0 - s.eta1) / (1.0 - s.eta2) - 1.0 == Approx(0.05));
    CHECK_THROWS_AS(analyser_spec(0.0, 0.1, {0.0}, 2), Error);
    CHECK_THROWS_AS(analyser_spec(0.8, -0.1, {0.0}, 2), Error);
    AnalyserSpec bad = s;
    bad.angles.clear();
    CHECK_THROWS_AS(analyser_device(bad), Error);
    bad = s;
    bad.eta1 = 1.5;
    CHECK_THROWS_AS(analyser_device(bad), Error);
}

TEST_CASE("analyser device examples", "[optics]") {
    const double eta = 0.8;
    const LossyDevice dev = analyser_device(analyser_spec(eta, 0.0, {0.0, 0.7}, 3));
    const auto v = check_exact(dev);
    CHECK(v.weak);
    CHECK(v.homogeneous);
    const HermitianOperator mq = analyser_mq(eta, 3);
    CHECK(max_abs_diff(v.quantum_elem, (1.0 / norm(mq, NormKind::Operator)) * mq) < 1e-12);

    const TwoModeFock f(3);
    for (const auto &x : dev.settings()) {
        CHECK(outcome_distribution(dev, x, fock_state(f, 0, 0)).at(kNoClick) == Approx(1.0));
    }

    // One photon in the analyser's own mode.
    const double theta = 0.7;
    Vector one = Vector::Zero(static_cast<Eigen::Index>(f.dim()));
    one(static_cast<Eigen::Index>(f.index(1, 0))) = std::cos(theta);
    one(static_cast<Eigen::Index>(f.index(0, 1))) = std::sin(theta);
    const auto d = outcome_distribution(dev, angle_label(theta), DensityState::pure(one));
    CHECK(d.at("D1") == Approx(eta));
    CHECK(d.at("D2") == Approx(0.0).margin(1e-14));
    CHECK(d.at("both") == Approx(0.0).margin(1e-14));
    CHECK(d.at(kNoClick) == Approx(1.0 - eta));
}

TEST_CASE("folding merges simultaneous clicks into D1", "[optics]") {
    AnalyserSpec s = analyser_spec(0.6, 0.2, {0.4}, 3);
    const LossyDevice open = analyser_device(s);
    s.fold_both = true;
    const LossyDevice folded = analyser_device(s);
    CHECK(folded.outcomes() == std::vector<std::string>{"D1", "D2"});
    CHECK(max_abs_diff(folded.element(0, 0), open.element(0, 0) + open.element(0, 2)) < 1e-14);
    CHECK(max_abs_diff(folded.noclick(0), open.noclick(0)) < 1e-14);
}

TEST_CASE("library analysers agree with the ladder-operator corpus", "[optics]") {
    const LossyDevice eq = load_device(kData / "devices" / "analyser_equal.json");
    const LossyDevice ref_eq = analyser_device(analyser_spec(0.8, 0.0, {0.0, kPi / 4}, 3));
    const LossyDevice un = load_device(kData / "devices" / "analyser_unequal.json");
    const LossyDevice ref_un = analyser_device(analyser_spec(0.8, 0.05, kAngles, 4));
    for (const auto &[a, b] : {std::make_pair(&eq, &ref_eq), std::make_pair(&un, &ref_un)}) {
        REQUIRE(a->settings() == b->settings());
        for (std::size_t x = 0; x < a->settings().size(); ++x) {
            for (std::size_t o = 0; o <= a->outcomes().size(); ++o) {
                CHECK(max_abs_diff(a->element(x, o), b->element(x, o)) < 1e-12);
            }
        }
    }
    const LossyDevice sp = load_device(kData / "devices" / "single_photon_analyser.json");
    const LossyDevice ref_sp = single_photon_analyser(0.8, 0.05, kAngles);
    for (std::size_t x = 0; x < 4; ++x) {
        for (std::size_t o = 0; o < 3; ++o) {
            CHECK(max_abs_diff(sp.element(x, o), ref_sp.element(x, o)) < 1e-15);
        }
    }
}

TEST_CASE("single-photon analyser examples", "[optics]") {
    const auto v = check_exact(single_photon_analyser(0.8, 0.0, kAngles));
    CHECK(v.strong);
    CHECK(v.homogeneous);
    for (const auto &[x, e] : v.classical_eff) {
        CHECK(e == Approx(0.8));
    }
    const LossyDevice dev = single_photon_analyser(0.8, 0.05, kAngles);
    for (const auto &x : dev.settings()) {
        CHECK(norm(click_element(dev, x), NormKind::Operator) == Approx(0.8));
    }
    CHECK(approximate_epsilon(dev, HermitianOperator::identity(2)) == Approx(0.0125));
    CHECK_THROWS_AS(single_photon_analyser(0.5, 2.0, kAngles), NotPositiveError);
}

TEST_CASE("closed form and reference element examples", "[optics]") {
    CHECK(analyser_epsilon_closed_form(1.0, 0.3) == 0.0);
    CHECK(analyser_epsilon_closed_form(0.8, 0.05) == Approx(0.0125));
    CHECK(analyser_epsilon_closed_form(0.5, 0.1) == Approx(0.1));
    CHECK_THROWS_AS(analyser_epsilon_closed_form(0.0, 0.1), Error);

    const HermitianOperator mq = analyser_mq(0.8, 2);
    const TwoModeFock f(2);
    CHECK(std::abs(mq(f.index(0, 0), f.index(0, 0))) == 0.0);
    CHECK(mq(f.index(1, 0), f.index(1, 0)).real() == Approx(0.8));
    CHECK(mq(f.index(1, 1), f.index(1, 1)).real() == Approx(0.96));
}

TEST_CASE("numerical epsilon matches the closed form on the grid", "[optics][property]") {
    for (double eta : {0.5, 0.8, 0.95}) {
        for (double delta : {0.0, 0.01, 0.1}) {
            const double closed = analyser_epsilon_closed_form(eta, delta);
            CHECK(std::abs(approximate_epsilon(single_photon_analyser(eta, delta, kAngles),
                                               HermitianOperator::identity(2)) -
                           closed) <= 1e-9);
            for (std::size_t n = 1; n <= 5; ++n) {
                const LossyDevice dev = analyser_device(analyser_spec(eta, delta, kAngles, n));
                const HermitianOperator mq = analyser_mq(eta, n);
                INFO("eta " << eta << " delta " << delta << " n_max " << n);
                CHECK(std::abs(approximate_epsilon(dev, mq) - closed) <= 1e-9);
                if (delta > 0.0) {
                    const auto prof = sector_deviation_profile(dev, mq, TwoModeFock(n));
                    const auto top = std::max_element(prof.begin(), prof.end()) - prof.begin();
                    CHECK(top == 1);
                    CHECK(prof[1] == Approx(closed).epsilon(1e-9));
                }
            }
        }
    }
}

TEST_CASE("equal detectors pass the exact check at every truncation", "[optics][property]") {
    for (double eta : {0.3, 0.8, 1.0}) {
        for (std::size_t n = 1; n <= 5; ++n) {
            const auto v = check_exact(analyser_device(analyser_spec(eta, 0.0, kAngles, n)));
            CHECK(v.weak);
            CHECK(v.epsilon <= 1e-12);
        }
    }
}

TEST_CASE("filtered states have no vacuum", "[optics][property]") {
    Rng rng(81);
    for (std::size_t n = 1; n <= 4; ++n) {
        const TwoModeFock f(n);
        const HermitianOperator mq = analyser_mq(0.7, n);
        for (int i = 0; i < 10; ++i) {
            const DensityState rho = random_density(f.dim(), 1 + static_cast<std::size_t>(i) % f.dim(), rng);
            const FilteredState fs = filtered_state(mq, rho);
            CHECK(std::abs(fs.state.op()(0, 0)) <= 1e-12);
        }
    }
}

TEST_CASE("perfect detectors only reject the vacuum", "[optics]") {
    for (std::size_t n = 1; n <= 4; ++n) {
        const LossyDevice dev = analyser_device(analyser_spec(1.0, 0.0, kAngles, n));
        const TwoModeFock f(n);
        HermitianOperator expect = HermitianOperator::identity(f.dim());
        expect -= f.sector(0);
        for (const auto &x : dev.settings()) {
            CHECK(max_abs_diff(click_element(dev, x), expect) < 1e-12);
        }
    }
}
