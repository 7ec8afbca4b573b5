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

#include "fairsamp/adversary.hpp"

#include <cmath>

#include "fairsamp/parallel.hpp"
#include "fairsamp/random.hpp"

namespace fairsamp {

namespace {

Vector ket(double a, double b) {
    Vector v(2);
    v << a, b;
    return v;
}

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

Vector k0() { return ket(1.0, 0.0); }
Vector k1() { return ket(0.0, 1.0); }
Vector kplus() { return ket(kInvSqrt2, kInvSqrt2); }
Vector kminus() { return ket(kInvSqrt2, -kInvSqrt2); }

HermitianOperator proj(const Vector &v) { return HermitianOperator::projector(v); }

const std::vector<std::string> kSettings{"0", "1"};
const std::vector<std::string> kOutcomes{"+", "-"};

LossyDevice branch(std::size_t r) {
    const HermitianOperator z = HermitianOperator::zero(2);
    PovmTable t;
    // Active setting and the single outcome it can produce.
    const int x = r < 2 ? 0 : 1;
    const Vector v = r == 0 ? k0() : r == 1 ? k1() : r == 2 ? kplus() : kminus();
    const std::string a = (r % 2 == 0) ? "+" : "-";
    for (int s = 0; s < 2; ++s) {
        auto &row = t[kSettings[static_cast<std::size_t>(s)]];
        for (const auto &o : kOutcomes) {
            row.emplace(o, (s == x && o == a) ? proj(v) : z);
        }
    }
    return LossyDevice(2, kSettings, kOutcomes, t);
}

} // namespace

LossyDevice makarov_traced() {
    PovmTable t;
    t["0"].emplace("+", 0.25 * proj(k0()));
    t["0"].emplace("-", 0.25 * proj(k1()));
    t["1"].emplace("+", 0.25 * proj(kplus()));
    t["1"].emplace("-", 0.25 * proj(kminus()));
    for (const auto &x : kSettings) {
        t[x].emplace(kNoClick, 0.75 * HermitianOperator::identity(2));
    }
    return LossyDevice(2, kSettings, kOutcomes, t);
}

HiddenVariableDevice makarov_branches() {
    HiddenVariableDevice hv;
    for (std::size_t r = 0; r < 4; ++r) {
        hv.branches.push_back(branch(r));
        hv.branch_prob.push_back(0.25);
    }
    return hv;
}

LossyDevice mixture(const HiddenVariableDevice &hv) {
    if (hv.branches.empty() || hv.branches.size() != hv.branch_prob.size()) {
        throw Error("mixture needs one probability per branch");
    }
    const LossyDevice &first = hv.branches.front();
    PovmTable t;
    for (std::size_t x = 0; x < first.settings().size(); ++x) {
        auto &row = t[first.settings()[x]];
        for (std::size_t a = 0; a <= first.outcomes().size(); ++a) {
            HermitianOperator m = HermitianOperator::zero(first.dim());
            for (std::size_t r = 0; r < hv.branches.size(); ++r) {
                const LossyDevice &b = hv.branches[r];
                if (b.settings() != first.settings() ||
                    b.outcomes() != first.outcomes()) {
                    throw Error("branches disagree on settings or outcomes");
                }
                m += hv.branch_prob[r] * b.element(x, a);
            }
            const std::string label = a < first.outcomes().size()
                                          ? first.outcomes()[a]
                                          : std::string(kNoClick);
            row.emplace(label, std::move(m));
        }
    }
    return LossyDevice(first.dim(), first.settings(), first.outcomes(), t);
}

LossyDevice makarov_adversary_device() {
    auto reg = [](std::size_t r) {
        Vector v = Vector::Zero(4);
        v(static_cast<Eigen::Index>(r)) = 1.0;
        return proj(v);
    };
    PovmTable t;
    t["0"].emplace("+", tensor({proj(k0()), reg(0)}));
    t["0"].emplace("-", tensor({proj(k1()), reg(1)}));
    t["1"].emplace("+", tensor({proj(kplus()), reg(2)}));
    t["1"].emplace("-", tensor({proj(kminus()), reg(3)}));
    return LossyDevice(8, kSettings, kOutcomes, t);
}

LossyDevice flat_qubit_device(const std::vector<double> &angles,
                              double efficiency) {
    if (!(efficiency > 0.0 && efficiency <= 1.0)) {
        throw Error("efficiency must lie in (0, 1]");
    }
    std::vector<std::string> settings;
    PovmTable t;
    for (std::size_t i = 0; i < angles.size(); ++i) {
        const std::string x = std::to_string(i);
        settings.push_back(x);
        // Eigenvectors of cos(phi) Z + sin(phi) X.
        const double h = 0.5 * angles[i];
        t[x].emplace("+", efficiency * proj(ket(std::cos(h), std::sin(h))));
        t[x].emplace("-", efficiency * proj(ket(-std::sin(h), std::cos(h))));
    }
    return LossyDevice(2, settings, kOutcomes, t);
}

std::array<std::array<SourceEntry, 4>, 4> faking_source() {
    std::array<std::array<SourceEntry, 4>, 4> t{};
    auto set = [&](int ra, int rb, const Vector &a, const Vector &b) {
        SourceEntry &e = t[static_cast<std::size_t>(ra - 1)]
                          [static_cast<std::size_t>(rb - 1)];
        e.vacuum = false;
        e.alice = a;
        e.bob = b;
    };
    set(1, 1, k0(), k0());
    set(1, 3, k0(), kplus());
    set(2, 2, k1(), k1());
    set(2, 4, k1(), kminus());
    set(3, 1, kplus(), k0());
    set(3, 4, kplus(), kminus());
    set(4, 2, kminus(), k1());
    set(4, 3, kminus(), kplus());
    return t;
}

namespace {

void check_noise(double noise) {
    if (!(noise >= 0.0 && noise <= 1.0)) {
        throw Error("noise must lie in [0, 1]");
    }
}

} // namespace

FakedChsh run_faked_chsh(double noise) {
    check_noise(noise);
    const HiddenVariableDevice hv = makarov_branches();
    const auto source = faking_source();
    const HermitianOperator mixed = 0.25 * HermitianOperator::identity(4);
    FakedChsh out;
    for (int x = 0; x < 2; ++x) {
        for (int y = 0; y < 2; ++y) {
            double accept = 0.0;
            double corr = 0.0;
            for (std::size_t ra = 0; ra < 4; ++ra) {
                for (std::size_t rb = 0; rb < 4; ++rb) {
                    const SourceEntry &e = source[ra][rb];
                    HermitianOperator sigma = noise * mixed;
                    if (!e.vacuum) {
                        sigma += (1.0 - noise) *
                                 tensor({proj(e.alice), proj(e.bob)});
                    }
                    for (std::size_t a = 0; a < 2; ++a) {
                        for (std::size_t b = 0; b < 2; ++b) {
                            const double p =
                                tensor({hv.branches[ra].element(
                                            static_cast<std::size_t>(x), a),
                                        hv.branches[rb].element(
                                            static_cast<std::size_t>(y), b)})
                                    .expectation(sigma) /
                                16.0;
                            accept += p;
                            corr += (a == b ? 1.0 : -1.0) * p;
                        }
                    }
                }
            }
            const double e = accept > kZeroAcceptance ? corr / accept : 0.0;
            out.correlators[{x, y}] = e;
            out.acceptance[{x, y}] = accept;
            out.chsh += (x * y == 1 ? -1.0 : 1.0) * e;
            out.detection_rate += 0.25 * accept;
        }
    }
    return out;
}

SampledChsh sample_faked_chsh(double noise, std::uint64_t rounds,
                              std::uint64_t seed) {
    check_noise(noise);
    const HiddenVariableDevice hv = makarov_branches();
    const auto source = faking_source();

    struct Tally {
        std::array<std::uint64_t, 4> n{};
        std::array<std::int64_t, 4> sum{};
        std::uint64_t clicks = 0;
    };
    constexpr std::size_t kChunks = 64;
    std::vector<Tally> tallies(kChunks);
    parallel_for(kChunks, [&](std::size_t c) {
        Rng rng(derive_seed(seed, c));
        std::uniform_int_distribution<int> pick4(0, 3);
        std::uniform_int_distribution<int> pick2(0, 1);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        const HermitianOperator half = 0.5 * HermitianOperator::identity(2);
        const std::uint64_t begin = rounds * c / kChunks;
        const std::uint64_t end = rounds * (c + 1) / kChunks;
        Tally &t = tallies[c];
        // Outcome 0 = '+', 1 = '-', 2 = no click.
        auto measure = [&](const LossyDevice &d, int x, const HermitianOperator &rho) {
            const double p0 = d.element(static_cast<std::size_t>(x), 0).expectation(rho);
            const double p1 = d.element(static_cast<std::size_t>(x), 1).expectation(rho);
            const double v = u(rng);
            return v < p0 ? 0 : v < p0 + p1 ? 1 : 2;
        };
        for (std::uint64_t i = begin; i < end; ++i) {
            const int x = pick2(rng);
            const int y = pick2(rng);
            const auto ra = static_cast<std::size_t>(pick4(rng));
            const auto rb = static_cast<std::size_t>(pick4(rng));
            const bool noisy = u(rng) < noise;
            const SourceEntry &e = source[ra][rb];
            if (!noisy && e.vacuum) {
                continue;
            }
            const HermitianOperator ra_state = noisy ? half : proj(e.alice);
            const HermitianOperator rb_state = noisy ? half : proj(e.bob);
            const int a = measure(hv.branches[ra], x, ra_state);
            const int b = measure(hv.branches[rb], y, rb_state);
            if (a == 2 || b == 2) {
                continue;
            }
            const auto k = static_cast<std::size_t>(2 * x + y);
            ++t.n[k];
            t.sum[k] += a == b ? 1 : -1;
            ++t.clicks;
        }
    });

    Tally all;
    for (const Tally &t : tallies) {
        for (std::size_t k = 0; k < 4; ++k) {
            all.n[k] += t.n[k];
            all.sum[k] += t.sum[k];
        }
        all.clicks += t.clicks;
    }
    SampledChsh s;
    s.rounds = rounds;
    s.clicks = all.clicks;
    double var = 0.0;
    for (std::size_t k = 0; k < 4; ++k) {
        if (all.n[k] == 0) {
            continue;
        }
        const double n = static_cast<double>(all.n[k]);
        const double e = static_cast<double>(all.sum[k]) / n;
        s.chsh += (k == 3 ? -1.0 : 1.0) * e;
        var += (1.0 - e * e) / n;
    }
    s.chsh_stderr = std::sqrt(var);
    if (rounds > 0) {
        const double r = static_cast<double>(rounds);
        s.detection_rate = static_cast<double>(all.clicks) / r;
        s.detection_stderr =
            std::sqrt(s.detection_rate * (1.0 - s.detection_rate) / r);
    }
    return s;
}

} // namespace fairsamp
