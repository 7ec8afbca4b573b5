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

#include "fairsamp/commands.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fairsamp/adversary.hpp"
#include "fairsamp/optics.hpp"
#include "fairsamp/parallel.hpp"

namespace fairsamp {

namespace {

Json nullable_bound(double eps) {
    return eps < 1.0 ? Json(round15(tv_bound(eps))) : Json(nullptr);
}

} // namespace

Json error_report(const std::exception &e) {
    Json r{{"error", e.what()}};
    if (const auto *p = dynamic_cast<const PovmError *>(&e)) {
        r["setting"] = p->setting();
        r["outcome"] = p->outcome();
        r["residual"] = round15(p->residual());
    }
    return r;
}

CommandResult cmd_check(const std::filesystem::path &device,
                        const std::optional<std::filesystem::path> &mq,
                        double tol) {
    const LossyDevice dev = load_device(device);
    const FairSamplingVerdict v = check_exact(dev, tol);
    Json r = verdict_to_json(v);
    r["mq_source"] = v.weak ? "extracted" : "default";
    double eps = v.epsilon;
    if (mq) {
        const HermitianOperator m = operator_from_json(read_json_file(*mq));
        eps = approximate_epsilon(dev, m);
        r["epsilon"] = round15(eps);
        r["mq"] = matrix_to_json(m.matrix());
        r["support"] = matrix_to_json(support_projector(m).matrix());
        r["mq_source"] = "file";
    }
    r["tv_bound"] = nullable_bound(eps);
    return {v.weak ? exit_code::kOk : exit_code::kNotFair, std::move(r)};
}

CommandResult cmd_decompose(const std::filesystem::path &device,
                            const std::filesystem::path &out_dir,
                            std::size_t trials, std::uint64_t seed) {
    const LossyDevice dev = load_device(device);
    const Decomposition d = canonical_decomposition(dev);
    double kraus = 0.0;
    for (const auto &s : d.per_setting) {
        kraus = std::max(kraus, s.filter.completeness_residual());
    }
    const double dev_max = verify_recomposition(dev, d, trials, seed);
    Json report{{"max_deviation", round15(dev_max)},
                {"trials", trials},
                {"seed", seed},
                {"kraus_completeness_residual", round15(kraus)}};
    std::filesystem::create_directories(out_dir);
    write_file_atomic(out_dir / "filter.json", dump(filter_to_json(d)));
    write_file_atomic(out_dir / "lossless.json",
                      dump(device_to_json(merged_lossless(d))));
    write_file_atomic(out_dir / "report.json", dump(report));
    return {exit_code::kOk, std::move(report)};
}

CommandResult cmd_simulate(const std::filesystem::path &scenario,
                           bool postselect, double tol, std::uint64_t seed) {
    const ScenarioFile sf = load_scenario(scenario);
    const BellScenario &sc = sf.scenario;
    Json raw = Json::object();
    Json ps = Json::object();
    Json accept = Json::object();
    Json erased = Json::array();
    DistributionSet ps_set;
    DistributionSet raw_good;
    for (const auto &xs : sc.setting_tuples()) {
        const std::string key = join_label(xs);
        const JointDistribution jr = joint_raw(sc, xs);
        raw[key] = joint_to_json(jr);
        JointDistribution good;
        for (std::size_t i = 0; i < jr.outcomes.size(); ++i) {
            const auto &a = jr.outcomes[i];
            if (std::find(a.begin(), a.end(), kNoClick) == a.end()) {
                good.outcomes.push_back(a);
                good.probs.push_back(jr.probs[i]);
            }
        }
        raw_good.emplace(xs, std::move(good));
        const double acc = joint_acceptance(sc, xs);
        accept[key] = round15(acc);
        if (acc <= kZeroAcceptance) {
            erased.push_back(key);
            continue;
        }
        if (postselect) {
            JointDistribution d = joint_postselected(sc, xs);
            ps[key] = joint_to_json(d);
            ps_set.emplace(xs, std::move(d));
        }
    }
    Json r{{"seed", seed},
           {"postselect", postselect},
           {"raw", std::move(raw)},
           {"acceptance", std::move(accept)},
           {"erased", erased}};
    if (postselect) {
        r["postselected"] = std::move(ps);
    }
    if (sc.bell()) {
        Json b{{"beta_max", round15(beta_max(*sc.bell()))},
               {"raw_good", round15(bell_value(raw_good, *sc.bell()))}};
        if (postselect) {
            b["postselected"] = erased.empty()
                                    ? Json(round15(bell_value(ps_set, *sc.bell())))
                                    : Json(nullptr);
        }
        r["bell"] = std::move(b);
    }
    try {
        const Prop2Report p2 = verify_proposition2(sc, tol);
        r["ideal_experiment"] = Json{{"applicable", true},
                                     {"max_deviation", round15(p2.max_deviation)},
                                     {"filter_acceptance", round15(p2.acceptance)}};
    } catch (const Error &e) {
        r["ideal_experiment"] = Json{{"applicable", false}, {"reason", e.what()}};
    }
    return {exit_code::kOk, std::move(r)};
}

CommandResult cmd_bound(const std::filesystem::path &scenario, double tol) {
    const ScenarioFile sf = load_scenario(scenario);
    const BellScenario &sc = sf.scenario;
    const auto dims = sc.party_dims();
    std::vector<HermitianOperator> mqs;
    Json parties = Json::array();
    for (std::size_t k = 0; k < sc.parties().size(); ++k) {
        const LossyDevice &dev = sc.parties()[k];
        const HermitianOperator mq = sf.mqs[k] ? *sf.mqs[k] : default_mq(dev);
        mqs.push_back(mq);
        const double eps = approximate_epsilon(dev, mq);
        if (eps >= 1.0) {
            throw Error("party " + std::to_string(k) + " has epsilon >= 1");
        }
        const std::size_t keep[] = {k};
        const DensityState local(partial_trace(sc.psi().op(), dims, keep));
        const LosslessDevice ideal = ideal_device_from(dev, mq);
        double measured = 0.0;
        Json per_setting = Json::object();
        for (const auto &x : dev.settings()) {
            if (efficiency(dev, x, local) <= kZeroAcceptance) {
                continue;
            }
            const OutcomeDistribution p = postselected_distribution(dev, x, local);
            const FilteredState fs = filtered_state(mq, local);
            OutcomeDistribution q = outcome_distribution(ideal.device(), x, fs.state);
            double tv = q.probs.back();
            q.labels.pop_back();
            q.probs.pop_back();
            tv = 0.5 * tv + total_variation(p, q);
            measured = std::max(measured, tv);
        }
        Json pj{{"epsilon", round15(eps)},
                {"tv_bound", round15(tv_bound(eps))},
                {"measured_tv", round15(measured)},
                {"weak", check_exact(dev, tol).weak},
                {"mq_source", sf.mqs[k] ? "scenario" : "default"}};
        if (sf.good_dims[k]) {
            Json imp = Json::object();
            for (const auto &x : dev.settings()) {
                const ImperfectStateReport ir =
                    imperfect_state_bound(dev, local, *sf.good_dims[k], x);
                imp[x] = Json{{"eps_prime", round15(ir.eps_prime)},
                              {"coherence_trace_norm",
                               round15(ir.coherence_trace_norm)},
                              {"tv_bound", round15(ir.tv_bound)},
                              {"measured_tv", round15(ir.measured_tv)}};
            }
            pj["imperfect_state"] = std::move(imp);
        }
        parties.push_back(std::move(pj));
    }
    const BellBoundReport br = bell_bound_report(sc, mqs);
    Json r{{"parties", std::move(parties)},
           {"epsilon_total", round15(br.eps_tot)},
           {"epsilon_joint", round15(br.eps_joint)},
           {"tv_bound", nullable_bound(br.eps_tot)},
           {"measured_tv", round15(br.max_tv)}};
    if (sc.bell()) {
        r["bell"] = Json{
            {"beta_max", round15(br.beta_max)},
            {"postselected", round15(br.bell_postselected)},
            {"ideal", round15(br.bell_ideal)},
            {"measured_deviation",
             round15(std::abs(br.bell_postselected - br.bell_ideal))},
            {"bound", round15(br.bound)}};
    }
    return {exit_code::kOk, std::move(r)};
}

namespace {

Json correlator_json(const std::map<std::pair<int, int>, double> &m) {
    Json j = Json::object();
    for (const auto &[k, v] : m) {
        j[std::to_string(k.first) + std::to_string(k.second)] = round15(v);
    }
    return j;
}

CommandResult demo_makarov(const DemoOptions &opt) {
    const LossyDevice traced = makarov_traced();
    const HiddenVariableDevice hv = makarov_branches();
    const LossyDevice mixed = mixture(hv);
    double dev = 0.0;
    for (std::size_t x = 0; x < 2; ++x) {
        for (std::size_t a = 0; a <= 2; ++a) {
            dev = std::max(dev, max_abs_diff(mixed.element(x, a),
                                             traced.element(x, a)));
        }
    }
    const FakedChsh f = run_faked_chsh(opt.noise);
    const SampledChsh s = sample_faked_chsh(opt.noise, 200000, opt.seed);
    Json r{{"traced_verdict", verdict_to_json(check_exact(traced, opt.tol))},
           {"adversary_verdict",
            verdict_to_json(check_exact(makarov_adversary_device(), opt.tol))},
           {"mixture_deviation", round15(dev)},
           {"noise", opt.noise},
           {"chsh", round15(f.chsh)},
           {"detection_rate", round15(f.detection_rate)},
           {"correlators", correlator_json(f.correlators)},
           {"acceptance", correlator_json(f.acceptance)},
           {"sampled",
            Json{{"seed", opt.seed},
                 {"rounds", s.rounds},
                 {"chsh", round15(s.chsh)},
                 {"chsh_stderr", round15(s.chsh_stderr)},
                 {"detection_rate", round15(s.detection_rate)},
                 {"detection_stderr", round15(s.detection_stderr)}}}};
    return {exit_code::kOk, std::move(r)};
}

Json analyser_row(double eta, double delta, std::size_t n_max) {
    const double pi = std::numbers::pi;
    const std::vector<double> angles{0.0, pi / 8, pi / 4, 3 * pi / 8};
    const LossyDevice multi = analyser_device(analyser_spec(eta, delta, angles, n_max));
    const HermitianOperator mq = analyser_mq(eta, n_max);
    const double eps = approximate_epsilon(multi, mq);
    const LossyDevice single = single_photon_analyser(eta, delta, angles);
    const double eps1 = approximate_epsilon(single, HermitianOperator::identity(2));
    const double closed = analyser_epsilon_closed_form(eta, delta);
    const auto profile = sector_deviation_profile(multi, mq, TwoModeFock(n_max));
    Json prof = Json::array();
    for (double v : profile) {
        prof.push_back(round15(v));
    }
    return Json{{"eta", eta},
                {"delta", delta},
                {"n_max", n_max},
                {"epsilon_numeric", round15(eps)},
                {"epsilon_single_photon", round15(eps1)},
                {"epsilon_closed_form", round15(closed)},
                {"tv_bound", nullable_bound(closed)},
                {"sector_profile", std::move(prof)}};
}

CommandResult demo_analyser(const DemoOptions &opt) {
    Json rows = Json::array();
    if (opt.eta1 || opt.eta2 || opt.delta) {
        const double eta = opt.eta2.value_or(0.8);
        double delta = opt.delta.value_or(0.0);
        if (opt.eta1 && !opt.delta) {
            delta = (1.0 - *opt.eta1) / (1.0 - eta) - 1.0;
            if (!(delta >= 0.0)) {
                throw Error("eta1 must not exceed eta2");
            }
        }
        rows.push_back(analyser_row(eta, delta, opt.n_max));
    } else {
        for (double eta : {0.5, 0.8, 0.95}) {
            for (double delta : {0.0, 0.01, 0.1}) {
                rows.push_back(analyser_row(eta, delta, opt.n_max));
            }
        }
    }
    return {exit_code::kOk, Json{{"rows", std::move(rows)}}};
}

CommandResult demo_chsh_singlet(const DemoOptions &opt) {
    const double pi = std::numbers::pi;
    const double eff = opt.eta2.value_or(0.25);
    const LossyDevice alice = flat_qubit_device({0.0, pi / 2}, eff);
    const LossyDevice bob = flat_qubit_device({5 * pi / 4, 3 * pi / 4}, eff);
    Vector singlet = Vector::Zero(4);
    singlet(1) = 1.0 / std::sqrt(2.0);
    singlet(2) = -1.0 / std::sqrt(2.0);
    const BellScenario sc({alice, bob}, DensityState::pure(singlet),
                          chsh_entries(alice.settings(), bob.settings(),
                                       alice.outcomes()));
    DistributionSet ps;
    Json dists = Json::object();
    for (const auto &xs : sc.setting_tuples()) {
        JointDistribution d = joint_postselected(sc, xs);
        dists[join_label(xs)] = joint_to_json(d);
        ps.emplace(xs, std::move(d));
    }
    const Prop2Report p2 = verify_proposition2(sc, opt.tol);
    const FilteredState fs = filtered_global_state(p2.mqs, sc.psi());
    Json r{{"efficiency", eff},
           {"alice_verdict", verdict_to_json(check_exact(alice, opt.tol))},
           {"bob_verdict", verdict_to_json(check_exact(bob, opt.tol))},
           {"postselected", std::move(dists)},
           {"chsh_postselected", round15(bell_value(ps, *sc.bell()))},
           {"tsirelson", round15(2.0 * std::sqrt(2.0))},
           {"ideal_max_deviation", round15(p2.max_deviation)},
           {"filtered_state_deviation",
            round15(max_abs_diff(fs.state.op(), sc.psi().op()))}};
    return {exit_code::kOk, std::move(r)};
}

CommandResult demo_prop2_random(const DemoOptions &opt) {
    std::vector<double> dev(opt.count, 0.0);
    std::vector<std::size_t> parties(opt.count, 0);
    parallel_for(opt.count, [&](std::size_t i) {
        Rng rng(derive_seed(opt.seed, i));
        parties[i] = 1 + i % 3;
        const BellScenario sc = random_exact_fs_scenario(parties[i], 4, rng);
        dev[i] = verify_proposition2(sc, opt.tol).max_deviation;
    });
    Json by_n = Json::object();
    double worst = 0.0;
    for (std::size_t i = 0; i < opt.count; ++i) {
        const std::string k = std::to_string(parties[i]);
        const double prev = by_n.contains(k) ? by_n[k].get<double>() : 0.0;
        by_n[k] = std::max(prev, round15(dev[i]));
        worst = std::max(worst, dev[i]);
    }
    Json r{{"seed", opt.seed},
           {"scenarios", opt.count},
           {"max_deviation", round15(worst)},
           {"max_deviation_by_parties", std::move(by_n)}};
    return {exit_code::kOk, std::move(r)};
}

} // namespace

CommandResult cmd_demo(const std::string &name, const DemoOptions &opt) {
    if (name == "makarov") {
        return demo_makarov(opt);
    }
    if (name == "analyser") {
        return demo_analyser(opt);
    }
    if (name == "chsh-singlet") {
        return demo_chsh_singlet(opt);
    }
    if (name == "prop2-random") {
        return demo_prop2_random(opt);
    }
    throw Error("unknown demo '" + name +
                "' (expected makarov, analyser, chsh-singlet or prop2-random)");
}

} // namespace fairsamp
