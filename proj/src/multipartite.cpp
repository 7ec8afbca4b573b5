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

#include "fairsamp/multipartite.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace fairsamp {

namespace {

/// Mixed-radix counter; returns false after the last combination.
bool advance(std::vector<std::size_t> &idx,
             const std::vector<std::size_t> &radix) {
    for (std::size_t k = idx.size(); k-- > 0;) {
        if (++idx[k] < radix[k]) {
            return true;
        }
        idx[k] = 0;
    }
    return false;
}

std::size_t product(const std::vector<std::size_t> &v) {
    std::size_t p = 1;
    for (std::size_t n : v) {
        p *= n;
    }
    return p;
}

std::size_t position(const std::vector<std::string> &v, const std::string &s,
                     const char *what) {
    auto it = std::find(v.begin(), v.end(), s);
    if (it == v.end()) {
        throw Error(std::string("unknown ") + what + " '" + s + "'");
    }
    return static_cast<std::size_t>(it - v.begin());
}

std::string describe(const std::vector<std::string> &t) {
    return "(" + join_label(t) + ")";
}

} // namespace

std::vector<std::string> split_label(const std::string &s) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : s) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    out.push_back(cur);
    return out;
}

std::string join_label(const std::vector<std::string> &parts) {
    std::string s;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i > 0) {
            s.push_back(',');
        }
        s += parts[i];
    }
    return s;
}

BellFunctional::BellFunctional(
    const std::vector<std::vector<std::string>> &settings,
    const std::vector<std::vector<std::string>> &outcomes,
    const std::vector<Entry> &entries)
    : outcomes_(outcomes) {
    const std::size_t n = settings.size();
    if (n == 0 || outcomes.size() != n) {
        throw Error("Bell functional needs settings and outcomes per party");
    }
    for (const auto &e : entries) {
        if (e.x.size() != n || e.a.size() != n) {
            throw Error("Bell coefficient " + describe(e.x) + " " +
                        describe(e.a) + " has the wrong number of parties");
        }
        for (std::size_t k = 0; k < n; ++k) {
            if (e.a[k] == kNoClick) {
                throw Error("Bell coefficients are defined on good outcomes "
                            "only; found 'noclick'");
            }
            (void)position(settings[k], e.x[k], "setting");
            (void)position(outcomes[k], e.a[k], "outcome");
        }
        if (!std::isfinite(e.c)) {
            throw Error("Bell coefficient is not finite");
        }
        if (!table_[e.x].emplace(e.a, e.c).second) {
            throw Error("duplicate Bell coefficient for " + describe(e.x) +
                        " " + describe(e.a));
        }
    }
    std::vector<std::size_t> radix;
    for (const auto &s : settings) {
        radix.push_back(s.size());
    }
    std::vector<std::size_t> idx(n, 0);
    do {
        SettingTuple xs;
        for (std::size_t k = 0; k < n; ++k) {
            xs.push_back(settings[k][idx[k]]);
        }
        if (table_.find(xs) == table_.end()) {
            throw Error("no Bell coefficient for setting tuple " +
                        describe(xs));
        }
    } while (advance(idx, radix));
}

std::size_t BellFunctional::outcome_tuple_count() const {
    std::size_t p = 1;
    for (const auto &o : outcomes_) {
        p *= o.size();
    }
    return p;
}

std::vector<BellFunctional::Entry>
chsh_entries(const std::vector<std::string> &alice_settings,
             const std::vector<std::string> &bob_settings,
             const std::vector<std::string> &outcomes) {
    if (alice_settings.size() != 2 || bob_settings.size() != 2 ||
        outcomes.size() != 2) {
        throw Error("CHSH needs two settings and two outcomes per party");
    }
    std::vector<BellFunctional::Entry> e;
    for (int x = 0; x < 2; ++x) {
        for (int y = 0; y < 2; ++y) {
            for (int a = 0; a < 2; ++a) {
                for (int b = 0; b < 2; ++b) {
                    const double sign = (x * y == 1 ? -1.0 : 1.0) *
                                        (a == b ? 1.0 : -1.0);
                    e.push_back({{alice_settings[static_cast<std::size_t>(x)],
                                  bob_settings[static_cast<std::size_t>(y)]},
                                 {outcomes[static_cast<std::size_t>(a)],
                                  outcomes[static_cast<std::size_t>(b)]},
                                 sign});
                }
            }
        }
    }
    return e;
}

BellScenario::BellScenario(
    std::vector<LossyDevice> parties, DensityState psi,
    std::optional<std::vector<BellFunctional::Entry>> coeffs)
    : parties_(std::move(parties)), psi_(std::move(psi)) {
    if (parties_.empty()) {
        throw Error("scenario needs at least one party");
    }
    const auto dims = party_dims();
    if (product(dims) != psi_.dim()) {
        throw DimensionError("product of local dimensions does not match the "
                             "state dimension");
    }
    std::size_t tuples = 1;
    for (const auto &p : parties_) {
        tuples *= p.outcomes().size() + 1;
        if (tuples > kMaxJointOutcomes) {
            throw DimensionError("too many joint outcome tuples");
        }
    }
    if (coeffs) {
        std::vector<std::vector<std::string>> s;
        std::vector<std::vector<std::string>> o;
        for (const auto &p : parties_) {
            s.push_back(p.settings());
            o.push_back(p.outcomes());
        }
        bell_.emplace(s, o, *coeffs);
    }
}

std::vector<std::size_t> BellScenario::party_dims() const {
    std::vector<std::size_t> d;
    for (const auto &p : parties_) {
        d.push_back(p.dim());
    }
    return d;
}

std::vector<SettingTuple> BellScenario::setting_tuples() const {
    std::vector<std::size_t> radix;
    for (const auto &p : parties_) {
        radix.push_back(p.settings().size());
    }
    std::vector<SettingTuple> out;
    std::vector<std::size_t> idx(parties_.size(), 0);
    do {
        SettingTuple xs;
        for (std::size_t k = 0; k < parties_.size(); ++k) {
            xs.push_back(parties_[k].settings()[idx[k]]);
        }
        out.push_back(std::move(xs));
    } while (advance(idx, radix));
    return out;
}

double JointDistribution::at(const OutcomeTuple &a) const {
    auto it = std::find(outcomes.begin(), outcomes.end(), a);
    if (it == outcomes.end()) {
        throw Error("distribution has no outcome tuple " + describe(a));
    }
    return probs[static_cast<std::size_t>(it - outcomes.begin())];
}

namespace {

std::vector<std::size_t> setting_indices(const BellScenario &sc,
                                         const SettingTuple &xs) {
    if (xs.size() != sc.parties().size()) {
        throw Error("one setting per party required");
    }
    std::vector<std::size_t> xi;
    for (std::size_t k = 0; k < xs.size(); ++k) {
        xi.push_back(sc.parties()[k].setting_index(xs[k]));
    }
    return xi;
}

double tuple_probability(const BellScenario &sc,
                         const std::vector<std::size_t> &xi,
                         const std::vector<std::size_t> &ai) {
    std::vector<HermitianOperator> ops;
    for (std::size_t k = 0; k < xi.size(); ++k) {
        ops.push_back(sc.parties()[k].element(xi[k], ai[k]));
    }
    return std::clamp(tensor(ops).expectation(sc.psi().op()), 0.0, 1.0);
}

} // namespace

JointDistribution joint_raw(const BellScenario &sc, const SettingTuple &xs) {
    const auto xi = setting_indices(sc, xs);
    std::vector<std::size_t> radix;
    for (const auto &p : sc.parties()) {
        radix.push_back(p.outcomes().size() + 1);
    }
    JointDistribution d;
    std::vector<std::size_t> ai(xi.size(), 0);
    do {
        OutcomeTuple a;
        for (std::size_t k = 0; k < ai.size(); ++k) {
            const auto &outs = sc.parties()[k].outcomes();
            a.push_back(ai[k] < outs.size() ? outs[ai[k]]
                                            : std::string(kNoClick));
        }
        d.outcomes.push_back(std::move(a));
        d.probs.push_back(tuple_probability(sc, xi, ai));
    } while (advance(ai, radix));
    return d;
}

double joint_acceptance(const BellScenario &sc, const SettingTuple &xs) {
    const auto xi = setting_indices(sc, xs);
    std::vector<HermitianOperator> ops;
    for (std::size_t k = 0; k < xi.size(); ++k) {
        ops.push_back(click_element(sc.parties()[k], xs[k]));
    }
    return std::clamp(tensor(ops).expectation(sc.psi().op()), 0.0, 1.0);
}

JointDistribution joint_postselected(const BellScenario &sc,
                                     const SettingTuple &xs,
                                     double threshold) {
    const auto xi = setting_indices(sc, xs);
    std::vector<std::size_t> radix;
    for (const auto &p : sc.parties()) {
        radix.push_back(p.outcomes().size());
    }
    JointDistribution d;
    double accept = 0.0;
    std::vector<std::size_t> ai(xi.size(), 0);
    do {
        OutcomeTuple a;
        for (std::size_t k = 0; k < ai.size(); ++k) {
            a.push_back(sc.parties()[k].outcomes()[ai[k]]);
        }
        d.outcomes.push_back(std::move(a));
        d.probs.push_back(tuple_probability(sc, xi, ai));
        accept += d.probs.back();
    } while (advance(ai, radix));
    if (accept <= threshold) {
        std::ostringstream os;
        os << "setting tuple " << describe(xs) << " has acceptance " << accept
           << " and is erased";
        throw ZeroAcceptanceError(os.str());
    }
    for (double &p : d.probs) {
        p /= accept;
    }
    return d;
}

LossyDevice joint_device(const std::vector<LossyDevice> &parties) {
    if (parties.empty()) {
        throw Error("joint device needs at least one party");
    }
    std::size_t dim = 1;
    std::vector<std::size_t> srad;
    std::vector<std::size_t> orad;
    for (const auto &p : parties) {
        dim *= p.dim();
        check_dimension(dim);
        srad.push_back(p.settings().size());
        orad.push_back(p.outcomes().size());
        for (const auto &l : p.settings()) {
            if (l.find(',') != std::string::npos) {
                throw Error("setting label '" + l + "' contains a comma");
            }
        }
        for (const auto &l : p.outcomes()) {
            if (l.find(',') != std::string::npos) {
                throw Error("outcome label '" + l + "' contains a comma");
            }
        }
    }
    std::vector<std::string> outcomes;
    std::vector<std::size_t> ai(parties.size(), 0);
    do {
        std::vector<std::string> parts;
        for (std::size_t k = 0; k < parties.size(); ++k) {
            parts.push_back(parties[k].outcomes()[ai[k]]);
        }
        outcomes.push_back(join_label(parts));
    } while (advance(ai, orad));

    std::vector<std::string> settings;
    PovmTable povm;
    std::vector<std::size_t> xi(parties.size(), 0);
    do {
        std::vector<std::string> parts;
        for (std::size_t k = 0; k < parties.size(); ++k) {
            parts.push_back(parties[k].settings()[xi[k]]);
        }
        const std::string x = join_label(parts);
        settings.push_back(x);
        auto &row = povm[x];
        std::size_t o = 0;
        std::fill(ai.begin(), ai.end(), 0);
        do {
            std::vector<HermitianOperator> ops;
            for (std::size_t k = 0; k < parties.size(); ++k) {
                ops.push_back(parties[k].element(xi[k], ai[k]));
            }
            row.emplace(outcomes[o++], tensor(ops));
        } while (advance(ai, orad));
    } while (advance(xi, srad));
    return LossyDevice(dim, settings, outcomes, povm);
}

FilteredState filtered_global_state(const std::vector<HermitianOperator> &mqs,
                                    const DensityState &psi) {
    if (mqs.empty()) {
        throw Error("no local filters given");
    }
    std::vector<HermitianOperator> roots;
    for (const auto &m : mqs) {
        if (!is_psd(m)) {
            throw NotPositiveError("local mq is not positive semi-definite");
        }
        roots.push_back(sqrt_pinv_sqrt(m).sqrt);
    }
    const HermitianOperator root = tensor(roots);
    if (root.dim() != psi.dim()) {
        throw DimensionError("local filters do not match the state dimension");
    }
    const double eq = tensor(mqs).expectation(psi.op());
    if (eq <= kZeroAcceptance) {
        throw ZeroAcceptanceError("the filters never accept this state");
    }
    return FilteredState{DensityState((1.0 / eq) * sandwich(root, psi.op())),
                         eq};
}

Prop2Report verify_proposition2(const BellScenario &sc, double tol) {
    Prop2Report rep;
    std::vector<LossyDevice> ideal;
    for (std::size_t k = 0; k < sc.parties().size(); ++k) {
        const FairSamplingVerdict v = check_exact(sc.parties()[k], tol);
        if (!v.weak) {
            throw Error("party " + std::to_string(k) +
                        " does not satisfy exact fair sampling");
        }
        rep.mqs.push_back(v.quantum_elem);
        ideal.push_back(ideal_device_from(sc.parties()[k], v.quantum_elem)
                            .device());
    }
    const FilteredState fs = filtered_global_state(rep.mqs, sc.psi());
    rep.acceptance = fs.acceptance;
    const BellScenario ideal_sc(std::move(ideal), fs.state);
    for (const auto &xs : sc.setting_tuples()) {
        if (joint_acceptance(sc, xs) <= kZeroAcceptance) {
            rep.erased.push_back(xs);
            continue;
        }
        const JointDistribution ps = joint_postselected(sc, xs);
        const JointDistribution id = joint_raw(ideal_sc, xs);
        for (std::size_t i = 0; i < id.outcomes.size(); ++i) {
            const auto &a = id.outcomes[i];
            const bool good =
                std::find(a.begin(), a.end(), kNoClick) == a.end();
            const double ref = good ? ps.at(a) : 0.0;
            rep.max_deviation =
                std::max(rep.max_deviation, std::abs(id.probs[i] - ref));
        }
    }
    return rep;
}

double epsilon_total(const std::vector<double> &eps) {
    double keep = 1.0;
    for (double e : eps) {
        if (!(e >= 0.0) || e >= 1.0) {
            throw Error("each epsilon must lie in [0, 1)");
        }
        keep *= 1.0 - e;
    }
    return 1.0 - keep;
}

double bell_value(const DistributionSet &dists, const BellFunctional &b) {
    double v = 0.0;
    for (const auto &[xs, row] : b.table()) {
        auto it = dists.find(xs);
        if (it == dists.end()) {
            throw Error("no distribution for setting tuple " + describe(xs));
        }
        for (const auto &[a, c] : row) {
            v += c * it->second.at(a);
        }
    }
    return v;
}

double beta_max(const BellFunctional &b) {
    double hi = 0.0;
    double lo = 0.0;
    const std::size_t count = b.outcome_tuple_count();
    for (const auto &[xs, row] : b.table()) {
        double mx = -INFINITY;
        double mn = INFINITY;
        for (const auto &[a, c] : row) {
            mx = std::max(mx, c);
            mn = std::min(mn, c);
        }
        if (row.size() < count) {
            mx = std::max(mx, 0.0);
            mn = std::min(mn, 0.0);
        }
        hi += mx;
        lo += mn;
    }
    return std::max(std::abs(hi), std::abs(lo));
}

double deviation_bound(double eps_tot, double beta) {
    if (!(eps_tot >= 0.0) || !(beta >= 0.0)) {
        throw Error("deviation bound needs nonnegative arguments");
    }
    return 2.0 * eps_tot * beta;
}

BellBoundReport bell_bound_report(const BellScenario &sc,
                                  const std::vector<HermitianOperator> &mqs) {
    const auto &parties = sc.parties();
    if (mqs.size() != parties.size()) {
        throw Error("one mq per party required");
    }
    BellBoundReport rep;
    for (std::size_t k = 0; k < parties.size(); ++k) {
        rep.eps.push_back(approximate_epsilon(parties[k], mqs[k]));
    }
    rep.eps_tot = epsilon_total(rep.eps);

    const LossyDevice joint = joint_device(parties);
    const HermitianOperator mq = tensor(mqs);
    rep.eps_joint = approximate_epsilon(joint, mq);
    const LosslessDevice ideal = ideal_device_from(joint, mq);
    const FilteredState fs = filtered_global_state(mqs, sc.psi());

    for (const auto &xs : sc.setting_tuples()) {
        JointDistribution ps = joint_postselected(sc, xs);
        const OutcomeDistribution od =
            outcome_distribution(ideal.device(), join_label(xs), fs.state);
        JointDistribution id;
        double tv = 0.0;
        for (std::size_t i = 0; i < od.labels.size(); ++i) {
            if (od.labels[i] == kNoClick) {
                tv += od.probs[i];
                continue;
            }
            OutcomeTuple a = split_label(od.labels[i]);
            tv += std::abs(od.probs[i] - ps.at(a));
            id.outcomes.push_back(std::move(a));
            id.probs.push_back(od.probs[i]);
        }
        rep.max_tv = std::max(rep.max_tv, 0.5 * tv);
        rep.postselected.emplace(xs, std::move(ps));
        rep.ideal.emplace(xs, std::move(id));
    }
    if (sc.bell()) {
        rep.beta_max = beta_max(*sc.bell());
        rep.bell_postselected = bell_value(rep.postselected, *sc.bell());
        rep.bell_ideal = bell_value(rep.ideal, *sc.bell());
        rep.bound = deviation_bound(rep.eps_tot, rep.beta_max);
    }
    return rep;
}

LossyDevice random_exact_fs_device(std::size_t dim, std::size_t n_settings,
                                   std::size_t n_outcomes, Rng &rng,
                                   bool strong) {
    if (n_settings == 0 || n_outcomes == 0) {
        throw Error("need at least one setting and one outcome");
    }
    std::uniform_int_distribution<std::size_t> rank(1, dim);
    std::uniform_real_distribution<double> eff(0.2, 1.0);
    const HermitianOperator mq = strong ? HermitianOperator::identity(dim)
                                        : random_psd(dim, rank(rng), 1.0, rng);
    const HermitianOperator root = sqrt_pinv_sqrt(mq).sqrt;
    std::vector<std::string> settings;
    std::vector<std::string> outcomes;
    for (std::size_t a = 0; a < n_outcomes; ++a) {
        outcomes.push_back(std::to_string(a));
    }
    PovmTable t;
    for (std::size_t x = 0; x < n_settings; ++x) {
        settings.push_back(std::to_string(x));
        const double e = eff(rng);
        const auto p = random_povm(dim, n_outcomes, rng);
        for (std::size_t a = 0; a < n_outcomes; ++a) {
            t[settings.back()].emplace(outcomes[a], e * sandwich(root, p[a]));
        }
    }
    return LossyDevice(dim, settings, outcomes, t);
}

BellScenario random_exact_fs_scenario(std::size_t n_parties,
                                      std::size_t max_dim, Rng &rng) {
    if (n_parties == 0 || max_dim < 2) {
        throw Error("need at least one party of dimension two or more");
    }
    std::uniform_int_distribution<std::size_t> dim(2, max_dim);
    std::uniform_int_distribution<std::size_t> outs(2, 3);
    std::vector<LossyDevice> parties;
    std::size_t total = 1;
    for (std::size_t k = 0; k < n_parties; ++k) {
        const std::size_t d = dim(rng);
        total *= d;
        parties.push_back(random_exact_fs_device(d, 2, outs(rng), rng));
    }
    std::uniform_int_distribution<std::size_t> rank(1, total);
    return BellScenario(std::move(parties), random_density(total, rank(rng), rng));
}

} // namespace fairsamp
