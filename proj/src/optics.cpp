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

#include "fairsamp/optics.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace fairsamp {

TwoModeFock::TwoModeFock(std::size_t n_max) : n_max_(n_max) {
    if (n_max == 0) {
        throw Error("truncation must allow at least one photon");
    }
    check_dimension((n_max + 1) * (n_max + 2) / 2);
    for (std::size_t n = 0; n <= n_max; ++n) {
        for (std::size_t h = 0; h <= n; ++h) {
            basis_.emplace_back(h, n - h);
        }
    }
}

std::size_t TwoModeFock::index(std::size_t n_h, std::size_t n_v) const {
    const std::size_t n = n_h + n_v;
    if (n > n_max_) {
        throw DimensionError("photon number above the truncation");
    }
    return n * (n + 1) / 2 + n_h;
}

HermitianOperator TwoModeFock::sector(std::size_t n) const {
    std::vector<double> d(dim(), 0.0);
    for (std::size_t i = 0; i < dim(); ++i) {
        d[i] = total(i) == n ? 1.0 : 0.0;
    }
    return HermitianOperator::diagonal(d);
}

namespace {

double binom(std::size_t n, std::size_t k) {
    return std::round(std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) -
                               std::lgamma(n - k + 1.0)));
}

double log_factorial(std::size_t n) { return std::lgamma(n + 1.0); }

HermitianOperator rotated_diagonal(const Matrix &u,
                                   const std::vector<double> &d) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(d.size()));
    for (std::size_t i = 0; i < d.size(); ++i) {
        v(static_cast<Eigen::Index>(i)) = d[i];
    }
    return HermitianOperator::hermitize(u * v.cast<Complex>().asDiagonal() *
                                        u.adjoint());
}

void check_efficiency(double eta, const char *what) {
    if (!(eta > 0.0 && eta <= 1.0)) {
        throw Error(std::string(what) + " must lie in (0, 1]");
    }
}

} // namespace

Matrix mode_rotation(const TwoModeFock &fock, double theta) {
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    const auto d = static_cast<Eigen::Index>(fock.dim());
    Matrix u = Matrix::Zero(d, d);
    for (std::size_t j = 0; j < fock.dim(); ++j) {
        const auto [p, q] = fock.basis()[j];
        const std::size_t n = p + q;
        // (c x + s y)^p (-s x + c y)^q, x = a_H^dag, y = a_V^dag.
        for (std::size_t k = 0; k <= n; ++k) {
            double coef = 0.0;
            for (std::size_t i = 0; i <= std::min(p, k); ++i) {
                if (k - i > q) {
                    continue;
                }
                const std::size_t l = k - i;
                coef += binom(p, i) * std::pow(c, static_cast<double>(i)) *
                        std::pow(s, static_cast<double>(p - i)) * binom(q, l) *
                        std::pow(-s, static_cast<double>(l)) *
                        std::pow(c, static_cast<double>(q - l));
            }
            const double norm_factor =
                std::exp(0.5 * (log_factorial(k) + log_factorial(n - k) -
                                log_factorial(p) - log_factorial(q)));
            u(static_cast<Eigen::Index>(fock.index(k, n - k)),
              static_cast<Eigen::Index>(j)) = coef * norm_factor;
        }
    }
    return u;
}

HermitianOperator number_theta(const TwoModeFock &fock, double theta) {
    std::vector<double> d;
    for (const auto &b : fock.basis()) {
        d.push_back(static_cast<double>(b.first));
    }
    return rotated_diagonal(mode_rotation(fock, theta), d);
}

HermitianOperator total_number(const TwoModeFock &fock) {
    std::vector<double> d;
    for (std::size_t i = 0; i < fock.dim(); ++i) {
        d.push_back(static_cast<double>(fock.total(i)));
    }
    return HermitianOperator::diagonal(d);
}

AnalyserSpec analyser_spec(double eta, double delta,
                           std::vector<double> angles, std::size_t n_max) {
    check_efficiency(eta, "efficiency");
    if (!(delta >= 0.0)) {
        throw Error("delta must be nonnegative");
    }
    return AnalyserSpec{1.0 - (1.0 - eta) * (1.0 + delta), eta,
                        std::move(angles), n_max, false};
}

std::string angle_label(double theta) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", theta);
    return buf;
}

LossyDevice analyser_device(const AnalyserSpec &spec) {
    check_efficiency(spec.eta1, "eta1");
    check_efficiency(spec.eta2, "eta2");
    if (spec.angles.empty()) {
        throw Error("analyser needs at least one angle");
    }
    const TwoModeFock fock(spec.n_max);
    const double r1 = 1.0 - spec.eta1;
    const double r2 = 1.0 - spec.eta2;
    std::vector<std::string> outcomes{"D1", "D2"};
    if (!spec.fold_both) {
        outcomes.emplace_back("both");
    }
    std::vector<std::string> settings;
    PovmTable povm;
    for (double theta : spec.angles) {
        const std::string x = angle_label(theta);
        settings.push_back(x);
        const Matrix u = mode_rotation(fock, theta);
        std::vector<double> d1, d2, both, none;
        for (const auto &[p, q] : fock.basis()) {
            const double miss1 = std::pow(r1, static_cast<double>(p));
            const double miss2 = std::pow(r2, static_cast<double>(q));
            d1.push_back((1.0 - miss1) * miss2);
            d2.push_back(miss1 * (1.0 - miss2));
            both.push_back((1.0 - miss1) * (1.0 - miss2));
            none.push_back(miss1 * miss2);
        }
        if (spec.fold_both) {
            for (std::size_t i = 0; i < d1.size(); ++i) {
                d1[i] += both[i];
            }
        }
        auto &row = povm[x];
        row.emplace("D1", rotated_diagonal(u, d1));
        row.emplace("D2", rotated_diagonal(u, d2));
        if (!spec.fold_both) {
            row.emplace("both", rotated_diagonal(u, both));
        }
        row.emplace(kNoClick, rotated_diagonal(u, none));
    }
    return LossyDevice(fock.dim(), settings, outcomes, povm);
}

LossyDevice single_photon_analyser(double eta, double delta,
                                   const std::vector<double> &angles) {
    check_efficiency(eta, "efficiency");
    if (!(delta >= 0.0)) {
        throw Error("delta must be nonnegative");
    }
    const double eta1 = eta - (1.0 - eta) * delta;
    if (eta1 < 0.0) {
        std::ostringstream os;
        os << "eta = " << eta << " and delta = " << delta
           << " give a negative D1 efficiency";
        throw NotPositiveError(os.str());
    }
    if (angles.empty()) {
        throw Error("analyser needs at least one angle");
    }
    std::vector<std::string> settings;
    PovmTable povm;
    for (double theta : angles) {
        const std::string x = angle_label(theta);
        settings.push_back(x);
        Vector par(2), perp(2);
        par << std::cos(theta), std::sin(theta);
        perp << -std::sin(theta), std::cos(theta);
        auto &row = povm[x];
        row.emplace("D1", eta1 * HermitianOperator::projector(par));
        row.emplace("D2", eta * HermitianOperator::projector(perp));
    }
    return LossyDevice(2, settings, {"D1", "D2"}, povm);
}

double analyser_epsilon_closed_form(double eta, double delta) {
    check_efficiency(eta, "efficiency");
    if (!(delta >= 0.0)) {
        throw Error("delta must be nonnegative");
    }
    return (1.0 - eta) * delta / eta;
}

HermitianOperator analyser_mq(double eta2, std::size_t n_max) {
    check_efficiency(eta2, "efficiency");
    const TwoModeFock fock(n_max);
    std::vector<double> d;
    for (std::size_t i = 0; i < fock.dim(); ++i) {
        d.push_back(1.0 - std::pow(1.0 - eta2, static_cast<double>(fock.total(i))));
    }
    return HermitianOperator::diagonal(d);
}

std::vector<double> sector_deviation_profile(const LossyDevice &dev,
                                             const HermitianOperator &mq,
                                             const TwoModeFock &fock) {
    if (dev.dim() != fock.dim() || mq.dim() != fock.dim()) {
        throw DimensionError("device, mq and Fock space dimensions differ");
    }
    const SqrtPair sp = sqrt_pinv_sqrt(mq);
    const HermitianOperator pi = support_projector(mq);
    std::vector<double> out(fock.n_max() + 1, 0.0);
    for (const auto &x : dev.settings()) {
        const HermitianOperator mt = sandwich(sp.pinv_sqrt, click_element(dev, x));
        const double n = norm(mt, NormKind::Operator);
        if (n <= kZeroAcceptance) {
            continue;
        }
        const HermitianOperator gap = pi - (1.0 / n) * mt;
        for (std::size_t k = 0; k <= fock.n_max(); ++k) {
            const double g =
                norm(sandwich(fock.sector(k), gap), NormKind::Operator);
            out[k] = std::max(out[k], g);
        }
    }
    return out;
}

} // namespace fairsamp
