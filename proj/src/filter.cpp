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

#include "fairsamp/filter.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fairsamp/parallel.hpp"
#include "fairsamp/random.hpp"

namespace fairsamp {

double QuantumFilter::completeness_residual() const {
    const Matrix &c = kraus_click.matrix();
    const Matrix &n = kraus_noclick.matrix();
    const Matrix sum = c.adjoint() * c + n.adjoint() * n;
    const Matrix id = Matrix::Identity(sum.rows(), sum.cols());
    return (sum - id).cwiseAbs().maxCoeff();
}

namespace {

PovmTable with_noclick(const PovmTable &good, const HermitianOperator &support,
                       const std::vector<std::string> &settings) {
    PovmTable t = good;
    const HermitianOperator nc =
        HermitianOperator::identity(support.dim()) - support;
    for (const auto &x : settings) {
        t[x].insert_or_assign(kNoClick, nc);
    }
    return t;
}

void check_projector(const HermitianOperator &p) {
    const Matrix sq = p.matrix() * p.matrix();
    const double r = (sq - p.matrix()).cwiseAbs().maxCoeff();
    if (r > kCompletenessTol) {
        std::ostringstream os;
        os << "support is not a projector (residual " << r << ")";
        throw Error(os.str());
    }
}

} // namespace

LosslessDevice::LosslessDevice(std::size_t dim,
                               std::vector<std::string> settings,
                               std::vector<std::string> outcomes,
                               const PovmTable &good, HermitianOperator support)
    : support_(std::move(support)),
      device_(dim, settings, outcomes, with_noclick(good, support_, settings)) {
    if (support_.dim() != dim) {
        throw DimensionError("lossless device: support has the wrong dimension");
    }
    check_projector(support_);
    for (std::size_t x = 0; x < device_.settings().size(); ++x) {
        HermitianOperator sum = HermitianOperator::zero(dim);
        for (std::size_t a = 0; a < device_.outcomes().size(); ++a) {
            sum += device_.element(x, a);
        }
        const double r = max_abs_diff(sum, support_);
        if (r > kCompletenessTol) {
            std::ostringstream os;
            os << "good outcomes of setting '" << device_.settings()[x]
               << "' do not sum to the support projector (residual " << r
               << ")";
            throw PovmError(os.str(), device_.settings()[x], "", r);
        }
    }
}

SettingDecomposition canonical_decomposition(const LossyDevice &dev,
                                             const std::string &x) {
    const std::size_t xi = dev.setting_index(x);
    const HermitianOperator click = click_element(dev, x);
    const SqrtPair c = sqrt_pinv_sqrt(click);
    const SqrtPair n = sqrt_pinv_sqrt(dev.noclick(xi));
    std::vector<HermitianOperator> lossless;
    for (std::size_t a = 0; a < dev.outcomes().size(); ++a) {
        lossless.push_back(sandwich(c.pinv_sqrt, dev.element(xi, a)));
    }
    return SettingDecomposition{QuantumFilter{c.sqrt, n.sqrt},
                                std::move(lossless), support_projector(click)};
}

Decomposition canonical_decomposition(const LossyDevice &dev) {
    Decomposition d{dev.settings(), dev.outcomes(), {}};
    for (const auto &x : dev.settings()) {
        d.per_setting.push_back(canonical_decomposition(dev, x));
    }
    return d;
}

namespace {

std::size_t index_of(const std::vector<std::string> &v, const std::string &s) {
    auto it = std::find(v.begin(), v.end(), s);
    if (it == v.end()) {
        throw Error("unknown setting '" + s + "'");
    }
    return static_cast<std::size_t>(it - v.begin());
}

} // namespace

LosslessDevice lossless_device(const Decomposition &d, const std::string &x) {
    const SettingDecomposition &s = d.per_setting[index_of(d.settings, x)];
    PovmTable good;
    for (std::size_t a = 0; a < d.outcomes.size(); ++a) {
        good[x].emplace(d.outcomes[a], s.lossless[a]);
    }
    return LosslessDevice(s.support.dim(), {x}, d.outcomes, good, s.support);
}

LossyDevice merged_lossless(const Decomposition &d) {
    PovmTable t;
    std::size_t dim = 0;
    for (std::size_t x = 0; x < d.settings.size(); ++x) {
        const SettingDecomposition &s = d.per_setting[x];
        dim = s.support.dim();
        auto &row = t[d.settings[x]];
        for (std::size_t a = 0; a < d.outcomes.size(); ++a) {
            row.emplace(d.outcomes[a], s.lossless[a]);
        }
        row.emplace(kNoClick, HermitianOperator::identity(dim) - s.support);
    }
    return LossyDevice(dim, d.settings, d.outcomes, t);
}

std::vector<double> composed_probabilities(const Decomposition &d,
                                           std::size_t x,
                                           const DensityState &rho) {
    const SettingDecomposition &s = d.per_setting.at(x);
    const HermitianOperator passed = sandwich(s.filter.kraus_click, rho.op());
    std::vector<double> p;
    double good = 0.0;
    for (const auto &m : s.lossless) {
        p.push_back(m.expectation(passed));
        good += p.back();
    }
    // Flag no-click from the filter plus anything the lossless stage
    // leaves undetected.
    const double dropped =
        sandwich(s.filter.kraus_noclick, rho.op()).trace();
    p.push_back(dropped + (passed.trace() - good));
    return p;
}

double verify_recomposition(const LossyDevice &dev, const Decomposition &d,
                            std::size_t trials, std::uint64_t seed) {
    if (d.settings != dev.settings() || d.outcomes != dev.outcomes()) {
        throw Error("decomposition does not belong to this device");
    }
    std::vector<double> worst(trials, 0.0);
    parallel_for(trials, [&](std::size_t t) {
        Rng rng(derive_seed(seed, t));
        const DensityState rho = verification_state(dev.dim(), t, rng);
        double w = 0.0;
        for (std::size_t x = 0; x < dev.settings().size(); ++x) {
            const std::vector<double> p = composed_probabilities(d, x, rho);
            for (std::size_t a = 0; a <= dev.outcomes().size(); ++a) {
                const double q = dev.element(x, a).expectation(rho.op());
                w = std::max(w, std::abs(p[a] - q));
            }
        }
        worst[t] = w;
    });
    return worst.empty() ? 0.0 : *std::max_element(worst.begin(), worst.end());
}

void ClassicalFilter::validate() const {
    for (const auto &[x, p] : accept_prob) {
        if (!(p >= 0.0 && p <= 1.0 + kCompletenessTol)) {
            throw Error("acceptance probability of '" + x +
                        "' is outside [0, 1]");
        }
    }
    if (!transition) {
        return;
    }
    for (const auto &[x, row] : *transition) {
        double s = 0.0;
        for (const auto &[xp, p] : row) {
            if (p < 0.0) {
                throw Error("negative transition probability from '" + x +
                            "' to '" + xp + "'");
            }
            s += p;
        }
        if (s > 1.0 + kCompletenessTol) {
            throw Error("transition row of '" + x + "' sums above one");
        }
        auto it = accept_prob.find(x);
        if (it != accept_prob.end() &&
            std::abs(it->second - s) > kCompletenessTol) {
            throw Error("acceptance of '" + x +
                        "' disagrees with its transition row");
        }
    }
}

NormalForm classical_normal_form(const ClassicalFilter &fc,
                                 const LosslessDevice &lossless) {
    fc.validate();
    if (!fc.transition) {
        return NormalForm{fc, lossless, {}};
    }
    const LossyDevice &dev = lossless.device();
    ClassicalFilter diag;
    std::vector<std::string> kept;
    std::vector<std::string> erased;
    PovmTable good;
    for (const auto &[x, row] : *fc.transition) {
        (void)dev.setting_index(x);
        for (const auto &entry : row) {
            (void)dev.setting_index(entry.first);
        }
    }
    for (const auto &x : dev.settings()) {
        // A setting without a row never passes the filter.
        auto row_it = fc.transition->find(x);
        double accept = 0.0;
        if (row_it != fc.transition->end()) {
            for (const auto &entry : row_it->second) {
                accept += entry.second;
            }
        }
        if (accept <= kZeroAcceptance) {
            erased.push_back(x);
            continue;
        }
        auto &out = good[x];
        for (std::size_t a = 0; a < dev.outcomes().size(); ++a) {
            HermitianOperator w = HermitianOperator::zero(dev.dim());
            for (const auto &[xp, p] : row_it->second) {
                w += (p / accept) * dev.element(dev.setting_index(xp), a);
            }
            out.emplace(dev.outcomes()[a], std::move(w));
        }
        diag.accept_prob[x] = accept;
        kept.push_back(x);
    }
    if (kept.empty()) {
        throw ZeroAcceptanceError(
            "every setting of the classical filter has zero acceptance");
    }
    LosslessDevice w(dev.dim(), kept, dev.outcomes(), good, lossless.support());
    return NormalForm{std::move(diag), std::move(w), std::move(erased)};
}

} // namespace fairsamp
