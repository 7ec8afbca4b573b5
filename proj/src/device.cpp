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

#include "fairsamp/device.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace fairsamp {

namespace {

void require_unique(const std::vector<std::string> &labels, const char *what) {
    std::set<std::string> seen;
    for (const auto &l : labels) {
        if (!seen.insert(l).second) {
            throw Error(std::string("duplicate ") + what + " label '" + l + "'");
        }
    }
}

std::vector<double> clamp_probs(std::vector<double> p) {
    for (double &v : p) {
        v = std::clamp(v, 0.0, 1.0);
    }
    return p;
}

} // namespace

LossyDevice::LossyDevice(std::size_t dim, std::vector<std::string> settings,
                         std::vector<std::string> outcomes,
                         const PovmTable &povm)
    : dim_(dim), settings_(std::move(settings)), outcomes_(std::move(outcomes)) {
    check_dimension(dim_);
    if (settings_.empty()) {
        throw Error("device needs at least one setting");
    }
    if (outcomes_.empty()) {
        throw Error("device needs at least one good outcome");
    }
    require_unique(settings_, "setting");
    require_unique(outcomes_, "outcome");
    if (std::find(outcomes_.begin(), outcomes_.end(), kNoClick) !=
        outcomes_.end()) {
        throw Error("'noclick' is reserved and cannot be a good outcome");
    }
    for (const auto &[x, row] : povm) {
        if (std::find(settings_.begin(), settings_.end(), x) ==
            settings_.end()) {
            throw PovmError("POVM entry for undeclared setting '" + x + "'", x,
                            "", 0.0);
        }
        for (const auto &[a, op] : row) {
            if (a != kNoClick && std::find(outcomes_.begin(), outcomes_.end(),
                                           a) == outcomes_.end()) {
                throw PovmError("POVM entry for undeclared outcome '" + a +
                                    "' at setting '" + x + "'",
                                x, a, 0.0);
            }
        }
    }

    const HermitianOperator id = HermitianOperator::identity(dim_);
    for (const auto &x : settings_) {
        auto row_it = povm.find(x);
        if (row_it == povm.end()) {
            throw PovmError("missing POVM for setting '" + x + "'", x, "", 0.0);
        }
        const auto &row = row_it->second;
        std::vector<HermitianOperator> elems;
        HermitianOperator click = HermitianOperator::zero(dim_);
        for (const auto &a : outcomes_) {
            auto it = row.find(a);
            if (it == row.end()) {
                throw PovmError("missing element for outcome '" + a +
                                    "' at setting '" + x + "'",
                                x, a, 0.0);
            }
            const HermitianOperator &m = it->second;
            if (m.dim() != dim_) {
                throw PovmError("element ('" + x + "', '" + a +
                                    "') has the wrong dimension",
                                x, a, 0.0);
            }
            const double lo = min_eigenvalue(m);
            if (lo < -kPsdTol) {
                std::ostringstream os;
                os << "element ('" << x << "', '" << a
                   << "') is not positive semi-definite (eigenvalue " << lo
                   << ")";
                throw PovmError(os.str(), x, a, -lo);
            }
            click += m;
            elems.push_back(m);
        }
        auto nc = row.find(kNoClick);
        if (nc == row.end()) {
            HermitianOperator inferred = id - click;
            const double lo = min_eigenvalue(inferred);
            if (lo < -kPsdTol) {
                std::ostringstream os;
                os << "good outcomes of setting '" << x
                   << "' exceed the identity (inferred no-click eigenvalue "
                   << lo << ")";
                throw PovmError(os.str(), x, kNoClick, -lo);
            }
            elems.push_back(std::move(inferred));
            inferred_.push_back(true);
        } else {
            const HermitianOperator &m = nc->second;
            if (m.dim() != dim_) {
                throw PovmError("no-click element of setting '" + x +
                                    "' has the wrong dimension",
                                x, kNoClick, 0.0);
            }
            const double lo = min_eigenvalue(m);
            if (lo < -kPsdTol) {
                std::ostringstream os;
                os << "no-click element of setting '" << x
                   << "' is not positive semi-definite (eigenvalue " << lo
                   << ")";
                throw PovmError(os.str(), x, kNoClick, -lo);
            }
            const double residual = max_abs_diff(click + m, id);
            if (residual > kCompletenessTol) {
                std::ostringstream os;
                os << "POVM of setting '" << x
                   << "' is not complete (residual " << residual << ")";
                throw PovmError(os.str(), x, kNoClick, residual);
            }
            elems.push_back(m);
            inferred_.push_back(false);
        }
        elements_.push_back(std::move(elems));
    }
}

std::size_t LossyDevice::setting_index(const std::string &x) const {
    auto it = std::find(settings_.begin(), settings_.end(), x);
    if (it == settings_.end()) {
        throw Error("unknown setting '" + x + "'");
    }
    return static_cast<std::size_t>(it - settings_.begin());
}

std::size_t LossyDevice::outcome_index(const std::string &a) const {
    if (a == kNoClick) {
        return outcomes_.size();
    }
    auto it = std::find(outcomes_.begin(), outcomes_.end(), a);
    if (it == outcomes_.end()) {
        throw Error("unknown outcome '" + a + "'");
    }
    return static_cast<std::size_t>(it - outcomes_.begin());
}

const HermitianOperator &LossyDevice::element(const std::string &x,
                                              const std::string &a) const {
    return elements_[setting_index(x)][outcome_index(a)];
}

PovmTable LossyDevice::table() const {
    PovmTable t;
    for (std::size_t x = 0; x < settings_.size(); ++x) {
        auto &row = t[settings_[x]];
        for (std::size_t a = 0; a < outcomes_.size(); ++a) {
            row.emplace(outcomes_[a], elements_[x][a]);
        }
        row.emplace(kNoClick, elements_[x].back());
    }
    return t;
}

double OutcomeDistribution::at(const std::string &label) const {
    auto it = std::find(labels.begin(), labels.end(), label);
    if (it == labels.end()) {
        throw Error("distribution has no outcome '" + label + "'");
    }
    return probs[static_cast<std::size_t>(it - labels.begin())];
}

double total_variation(const OutcomeDistribution &p,
                       const OutcomeDistribution &q) {
    if (p.labels != q.labels) {
        throw Error("total_variation: distributions over different outcomes");
    }
    double s = 0.0;
    for (std::size_t i = 0; i < p.probs.size(); ++i) {
        s += std::abs(p.probs[i] - q.probs[i]);
    }
    return 0.5 * s;
}

HermitianOperator click_element(const LossyDevice &dev, const std::string &x) {
    const std::size_t xi = dev.setting_index(x);
    HermitianOperator click = HermitianOperator::zero(dev.dim());
    for (std::size_t a = 0; a < dev.outcomes().size(); ++a) {
        click += dev.element(xi, a);
    }
    return click;
}

double efficiency(const LossyDevice &dev, const std::string &x,
                  const DensityState &rho) {
    if (rho.dim() != dev.dim()) {
        throw DimensionError("efficiency: state and device dimensions differ");
    }
    return std::clamp(click_element(dev, x).expectation(rho.op()), 0.0, 1.0);
}

OutcomeDistribution outcome_distribution(const LossyDevice &dev,
                                         const std::string &x,
                                         const DensityState &rho) {
    if (rho.dim() != dev.dim()) {
        throw DimensionError(
            "outcome_distribution: state and device dimensions differ");
    }
    const std::size_t xi = dev.setting_index(x);
    OutcomeDistribution d;
    d.labels = dev.outcomes();
    d.labels.emplace_back(kNoClick);
    std::vector<double> p;
    for (std::size_t a = 0; a <= dev.outcomes().size(); ++a) {
        p.push_back(dev.element(xi, a).expectation(rho.op()));
    }
    d.probs = clamp_probs(std::move(p));
    return d;
}

OutcomeDistribution postselected_distribution(const LossyDevice &dev,
                                              const std::string &x,
                                              const DensityState &rho,
                                              double threshold) {
    OutcomeDistribution raw = outcome_distribution(dev, x, rho);
    raw.labels.pop_back();
    raw.probs.pop_back();
    double accept = 0.0;
    for (double v : raw.probs) {
        accept += v;
    }
    if (accept <= threshold) {
        std::ostringstream os;
        os << "setting '" << x << "' has acceptance probability " << accept
           << " and is erased from the allowed settings";
        throw ZeroAcceptanceError(os.str());
    }
    for (double &v : raw.probs) {
        v /= accept;
    }
    return raw;
}

LossyDevice projective_device(const std::vector<std::string> &settings,
                              const std::vector<std::string> &outcomes,
                              const std::vector<std::vector<Vector>> &bases) {
    if (bases.size() != settings.size()) {
        throw Error("projective_device: one basis per setting required");
    }
    PovmTable povm;
    std::size_t dim = 0;
    for (std::size_t x = 0; x < settings.size(); ++x) {
        if (bases[x].size() != outcomes.size()) {
            throw Error("projective_device: one vector per outcome required");
        }
        for (std::size_t a = 0; a < outcomes.size(); ++a) {
            dim = static_cast<std::size_t>(bases[x][a].size());
            povm[settings[x]].emplace(outcomes[a],
                                      HermitianOperator::projector(bases[x][a]));
        }
    }
    return LossyDevice(dim, settings, outcomes, povm);
}

} // namespace fairsamp
