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

#include "fairsamp/fair_sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace fairsamp {

namespace {

double opnorm(const HermitianOperator &h) { return norm(h, NormKind::Operator); }

std::vector<HermitianOperator> click_elements(const LossyDevice &dev) {
    std::vector<HermitianOperator> out;
    for (const auto &x : dev.settings()) {
        out.push_back(click_element(dev, x));
    }
    return out;
}

double epsilon_impl(const LossyDevice &dev, const HermitianOperator &mq,
                    bool skip_erased);

} // namespace

FairSamplingVerdict check_exact(const LossyDevice &dev, double tol) {
    if (!(tol > 0.0)) {
        throw Error("tolerance must be positive");
    }
    const auto clicks = click_elements(dev);
    std::vector<double> s;
    for (const auto &c : clicks) {
        s.push_back(opnorm(c));
    }

    bool weak = true;
    for (std::size_t i = 0; i < clicks.size() && weak; ++i) {
        for (std::size_t j = i + 1; j < clicks.size(); ++j) {
            const HermitianOperator r = s[j] * clicks[i] - s[i] * clicks[j];
            if (opnorm(r) > tol * std::max(s[i], s[j])) {
                weak = false;
                break;
            }
        }
    }

    FairSamplingVerdict v{};
    for (std::size_t i = 0; i < clicks.size(); ++i) {
        v.classical_eff[dev.settings()[i]] = std::clamp(s[i], 0.0, 1.0);
    }
    const std::size_t d = dev.dim();
    if (weak) {
        // The first setting with a nonzero click element fixes M_Q.
        auto it = std::find_if(s.begin(), s.end(),
                               [](double n) { return n > kZeroAcceptance; });
        if (it == s.end()) {
            throw ZeroAcceptanceError("device never clicks");
        }
        const std::size_t x0 = static_cast<std::size_t>(it - s.begin());
        v.quantum_elem = (1.0 / s[x0]) * clicks[x0];
    } else {
        v.quantum_elem = default_mq(dev);
    }
    v.weak = weak;
    v.support = support_projector(v.quantum_elem);
    v.epsilon = epsilon_impl(dev, v.quantum_elem, true);
    if (weak) {
        v.strong =
            opnorm(v.quantum_elem - HermitianOperator::identity(d)) <= tol;
        const auto [lo, hi] = std::minmax_element(s.begin(), s.end());
        v.homogeneous = *hi - *lo <= tol;
    }
    return v;
}

namespace {

double epsilon_impl(const LossyDevice &dev, const HermitianOperator &mq,
                    bool skip_erased) {
    if (mq.dim() != dev.dim()) {
        throw DimensionError("mq and device dimensions differ");
    }
    if (!is_psd(mq)) {
        throw NotPositiveError("mq is not positive semi-definite");
    }
    const SqrtPair sp = sqrt_pinv_sqrt(mq);
    const HermitianOperator pi = support_projector(mq);
    double eps = 0.0;
    for (const auto &x : dev.settings()) {
        const HermitianOperator c = click_element(dev, x);
        const double r = max_abs_diff(sandwich(pi, c), c);
        if (r > kSupportTol * std::max(1.0, opnorm(c))) {
            std::ostringstream os;
            os << "click element of setting '" << x
               << "' is not supported inside the support of mq (residual "
               << r << ")";
            throw Error(os.str());
        }
        if (skip_erased && opnorm(c) <= kZeroAcceptance) {
            continue;
        }
        const HermitianOperator mt = sandwich(sp.pinv_sqrt, c);
        const double n = opnorm(mt);
        if (n <= kZeroAcceptance) {
            throw ZeroAcceptanceError("setting '" + x +
                                      "' has a vanishing filtered click "
                                      "element");
        }
        eps = std::max(eps, opnorm(pi - (1.0 / n) * mt));
    }
    return eps;
}

} // namespace

double approximate_epsilon(const LossyDevice &dev,
                           const HermitianOperator &mq) {
    return epsilon_impl(dev, mq, false);
}

HermitianOperator default_mq(const LossyDevice &dev) {
    HermitianOperator avg = HermitianOperator::zero(dev.dim());
    std::size_t used = 0;
    for (const auto &x : dev.settings()) {
        const HermitianOperator c = click_element(dev, x);
        const double n = opnorm(c);
        if (n > kZeroAcceptance) {
            avg += (1.0 / n) * c;
            ++used;
        }
    }
    if (used == 0) {
        throw ZeroAcceptanceError("device never clicks");
    }
    return (1.0 / static_cast<double>(dev.settings().size())) * avg;
}

LosslessDevice ideal_device_from(const LossyDevice &dev,
                                 const HermitianOperator &mq) {
    const double eps = epsilon_impl(dev, mq, true);
    if (eps >= 1.0) {
        std::ostringstream os;
        os << "epsilon " << eps << " is not below one";
        throw Error(os.str());
    }
    const SqrtPair sp = sqrt_pinv_sqrt(mq);
    const HermitianOperator pi = support_projector(mq);
    const double share = 1.0 / static_cast<double>(dev.outcomes().size());
    PovmTable good;
    for (std::size_t x = 0; x < dev.settings().size(); ++x) {
        const HermitianOperator mt =
            sandwich(sp.pinv_sqrt, click_element(dev, dev.settings()[x]));
        const double n = opnorm(mt);
        auto &row = good[dev.settings()[x]];
        if (n <= kZeroAcceptance) {
            // Erased setting: any unit-efficiency completion will do.
            for (const auto &a : dev.outcomes()) {
                row.emplace(a, share * pi);
            }
            continue;
        }
        const HermitianOperator gap = pi - (1.0 / n) * mt;
        for (std::size_t a = 0; a < dev.outcomes().size(); ++a) {
            HermitianOperator m =
                (1.0 / n) * sandwich(sp.pinv_sqrt, dev.element(x, a)) +
                share * gap;
            row.emplace(dev.outcomes()[a], std::move(m));
        }
    }
    return LosslessDevice(dev.dim(), dev.settings(), dev.outcomes(), good, pi);
}

FilteredState filtered_state(const HermitianOperator &mq,
                             const DensityState &rho) {
    if (mq.dim() != rho.dim()) {
        throw DimensionError("mq and state dimensions differ");
    }
    const double eq = mq.expectation(rho.op());
    if (eq <= kZeroAcceptance) {
        throw ZeroAcceptanceError("filter never accepts this state");
    }
    const SqrtPair sp = sqrt_pinv_sqrt(mq);
    return FilteredState{
        DensityState((1.0 / eq) * sandwich(sp.sqrt, rho.op())), eq};
}

double tv_bound(double epsilon) {
    if (!(epsilon >= 0.0) || epsilon >= 1.0) {
        throw Error("epsilon must lie in [0, 1)");
    }
    return epsilon / (1.0 - epsilon);
}

LossyDevice compress_device(const LossyDevice &dev, std::size_t good_dim) {
    if (good_dim == 0 || good_dim > dev.dim()) {
        throw DimensionError("good subspace dimension out of range");
    }
    const auto g = static_cast<Eigen::Index>(good_dim);
    PovmTable t;
    for (std::size_t x = 0; x < dev.settings().size(); ++x) {
        auto &row = t[dev.settings()[x]];
        for (std::size_t a = 0; a < dev.outcomes().size(); ++a) {
            row.emplace(dev.outcomes()[a],
                        HermitianOperator::hermitize(
                            dev.element(x, a).matrix().topLeftCorner(g, g)));
        }
        row.emplace(kNoClick,
                    HermitianOperator::hermitize(
                        dev.noclick(x).matrix().topLeftCorner(g, g)));
    }
    return LossyDevice(good_dim, dev.settings(), dev.outcomes(), t);
}

ImperfectStateReport imperfect_state_bound(const LossyDevice &dev_hat,
                                           const DensityState &rho_hat,
                                           std::size_t good_dim,
                                           const std::string &x) {
    if (rho_hat.dim() != dev_hat.dim()) {
        throw DimensionError("state and device dimensions differ");
    }
    if (good_dim == 0 || good_dim >= rho_hat.dim()) {
        throw DimensionError("good subspace must be a proper subspace");
    }
    const Matrix &r = rho_hat.op().matrix();
    const auto g = static_cast<Eigen::Index>(good_dim);
    const auto rest = r.rows() - g;

    ImperfectStateReport rep;
    rep.eps_prime = std::clamp(r.bottomRightCorner(rest, rest).trace().real(),
                               0.0, 1.0);
    rep.coherence_trace_norm = trace_norm(r.topRightCorner(g, rest));
    if (rep.eps_prime >= 1.0 - kZeroAcceptance) {
        throw ZeroAcceptanceError("state has no weight on the good subspace");
    }
    const DensityState rho(HermitianOperator::hermitize(
        r.topLeftCorner(g, g) / (1.0 - rep.eps_prime)));
    const LossyDevice dev = compress_device(dev_hat, good_dim);

    rep.accept_actual = efficiency(dev_hat, x, rho_hat);
    rep.accept_ideal = efficiency(dev, x, rho);
    const double denom = std::max(rep.accept_actual, rep.accept_ideal);
    if (denom <= kZeroAcceptance) {
        throw ZeroAcceptanceError("setting '" + x +
                                  "' never clicks on either state");
    }
    rep.tv_bound = 2.0 * (rep.coherence_trace_norm + rep.eps_prime) / denom;
    rep.measured_tv = total_variation(postselected_distribution(dev_hat, x, rho_hat),
                                      postselected_distribution(dev, x, rho));
    return rep;
}

NecessaryConditions necessary_conditions(const EfficiencyTable &eff,
                                         double tol) {
    if (eff.empty()) {
        throw Error("empty efficiency table");
    }
    std::vector<std::string> cols;
    for (const auto &[r, p] : eff.begin()->second) {
        cols.push_back(r);
    }
    if (cols.empty()) {
        throw Error("empty efficiency table");
    }
    Eigen::MatrixXd m(static_cast<Eigen::Index>(eff.size()),
                      static_cast<Eigen::Index>(cols.size()));
    Eigen::Index i = 0;
    for (const auto &[x, row] : eff) {
        if (row.size() != cols.size()) {
            throw Error("efficiency row '" + x +
                        "' has a different set of remote configurations");
        }
        Eigen::Index j = 0;
        for (const auto &c : cols) {
            auto it = row.find(c);
            if (it == row.end()) {
                throw Error("efficiency row '" + x + "' lacks '" + c + "'");
            }
            m(i, j++) = it->second;
        }
        ++i;
    }
    NecessaryConditions nc;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    const auto &sv = svd.singularValues();
    nc.weak_consistent =
        sv.size() < 2 || sv(1) <= tol * std::max(1.0, sv(0));
    nc.strong_consistent = true;
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        if (m.row(r).maxCoeff() - m.row(r).minCoeff() > tol) {
            nc.strong_consistent = false;
        }
    }
    return nc;
}

Matrix embed(const Matrix &local, const std::vector<std::size_t> &party_dims,
             std::size_t party) {
    if (party >= party_dims.size()) {
        throw DimensionError("party index out of range");
    }
    if (static_cast<std::size_t>(local.rows()) != party_dims[party] ||
        local.rows() != local.cols()) {
        throw DimensionError("local operator does not match the party factor");
    }
    std::size_t before = 1;
    std::size_t after = 1;
    for (std::size_t k = 0; k < party_dims.size(); ++k) {
        if (k < party) {
            before *= party_dims[k];
        } else if (k > party) {
            after *= party_dims[k];
        }
    }
    check_dimension(before * party_dims[party] * after);
    return kron(kron(Matrix::Identity(static_cast<Eigen::Index>(before),
                                      static_cast<Eigen::Index>(before)),
                     local),
                Matrix::Identity(static_cast<Eigen::Index>(after),
                                 static_cast<Eigen::Index>(after)));
}

StateDependentResult
state_dependent_check(const std::map<std::string, KrausList> &filter_click,
                      const DensityState &psi,
                      const std::vector<std::size_t> &party_dims,
                      std::size_t party, double tol) {
    const std::size_t total = std::accumulate(
        party_dims.begin(), party_dims.end(), std::size_t{1},
        std::multiplies<>());
    if (total != psi.dim()) {
        throw DimensionError("party dimensions do not match the state");
    }
    if (filter_click.empty()) {
        throw Error("no settings given");
    }
    std::vector<std::string> labels;
    std::vector<Matrix> sigma;
    std::vector<double> tr;
    for (const auto &[x, kraus] : filter_click) {
        Matrix s = Matrix::Zero(psi.op().matrix().rows(),
                                psi.op().matrix().cols());
        for (const auto &k : kraus) {
            const Matrix kf = embed(k, party_dims, party);
            s += kf * psi.op().matrix() * kf.adjoint();
        }
        labels.push_back(x);
        tr.push_back(s.trace().real());
        sigma.push_back(std::move(s));
    }
    StateDependentResult res;
    std::size_t first = sigma.size();
    for (std::size_t i = 0; i < sigma.size(); ++i) {
        res.acceptance[labels[i]] = std::clamp(tr[i], 0.0, 1.0);
        if (first == sigma.size() && tr[i] > kZeroAcceptance) {
            first = i;
        }
    }
    if (first == sigma.size()) {
        throw ZeroAcceptanceError("no setting accepts the state");
    }
    res.holds = true;
    for (std::size_t i = 0; i < sigma.size() && res.holds; ++i) {
        for (std::size_t j = i + 1; j < sigma.size(); ++j) {
            const double r = operator_norm(sigma[i] * tr[j] - sigma[j] * tr[i]);
            if (r > tol * std::max(tr[i], tr[j])) {
                res.holds = false;
                break;
            }
        }
    }
    if (res.holds) {
        res.psi_click.emplace(
            HermitianOperator::hermitize(sigma[first] / tr[first]));
    }
    return res;
}

} // namespace fairsamp
