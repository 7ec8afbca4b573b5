#!/usr/bin/env python3
# Copyright 2026 The fairsamp Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Regenerates the device and scenario corpus under data/.

Everything here is built with numpy alone, independently of the C++ library,
so the corpus doubles as a cross-check. Polarization analysers come from
ladder operators on a per-mode Fock box rather than from the symmetric-power
rotation used by the library.
"""

import argparse
import json
import math
from pathlib import Path

import numpy as np

S2 = 1.0 / math.sqrt(2.0)


def mat(m):
    m = np.atleast_2d(np.asarray(m, dtype=complex))
    return [[[float(z.real), float(z.imag)] for z in row] for row in m]


def proj(v):
    v = np.asarray(v, dtype=complex)
    v = v / np.linalg.norm(v)
    return np.outer(v, v.conj())


def device(dim, settings, outcomes, povm, noclick=True):
    table = {}
    for x in settings:
        row = {a: mat(povm[x][a]) for a in outcomes}
        if noclick:
            row["noclick"] = mat(np.eye(dim) - sum(povm[x][a] for a in outcomes))
        table[x] = row
    return {"dim": dim, "settings": settings, "outcomes": outcomes, "povm": table}


def angle_label(theta):
    return "%.10g" % theta


def makarov_traced():
    povm = {
        "0": {"+": 0.25 * proj([1, 0]), "-": 0.25 * proj([0, 1])},
        "1": {"+": 0.25 * proj([S2, S2]), "-": 0.25 * proj([S2, -S2])},
    }
    return device(2, ["0", "1"], ["+", "-"], povm)


def makarov_adversary():
    reg = [proj(np.eye(4)[r]) for r in range(4)]
    povm = {
        "0": {"+": np.kron(proj([1, 0]), reg[0]), "-": np.kron(proj([0, 1]), reg[1])},
        "1": {"+": np.kron(proj([S2, S2]), reg[2]), "-": np.kron(proj([S2, -S2]), reg[3])},
    }
    return device(8, ["0", "1"], ["+", "-"], povm)


def flat_qubit(angles, eff):
    povm = {}
    for i, phi in enumerate(angles):
        h = 0.5 * phi
        povm[str(i)] = {
            "+": eff * proj([math.cos(h), math.sin(h)]),
            "-": eff * proj([-math.sin(h), math.cos(h)]),
        }
    return device(2, [str(i) for i in range(len(angles))], ["+", "-"], povm)


def lossless_z():
    povm = {"z": {"+": proj([1, 0]), "-": proj([0, 1])}}
    return device(2, ["z"], ["+", "-"], povm)


def single_photon_analyser(eta, delta, angles):
    povm = {}
    for t in angles:
        th = [math.cos(t), math.sin(t)]
        perp = [-math.sin(t), math.cos(t)]
        povm[angle_label(t)] = {
            "D1": (eta - (1 - eta) * delta) * proj(th),
            "D2": eta * proj(perp),
        }
    return device(2, [angle_label(t) for t in angles], ["D1", "D2"], povm)


def fock_basis(n_max):
    return [(nh, n - nh) for n in range(n_max + 1) for nh in range(n + 1)]


def ladder_modes(n_max):
    """Annihilators a_H, a_V restricted to total photon number <= n_max."""
    basis = fock_basis(n_max)
    index = {b: i for i, b in enumerate(basis)}
    d = len(basis)
    a_h = np.zeros((d, d))
    a_v = np.zeros((d, d))
    for j, (nh, nv) in enumerate(basis):
        if nh > 0:
            a_h[index[(nh - 1, nv)], j] = math.sqrt(nh)
        if nv > 0:
            a_v[index[(nh, nv - 1)], j] = math.sqrt(nv)
    return a_h, a_v


def spectral(h, f):
    w, v = np.linalg.eigh(h)
    return (v * np.array([f(round(x)) for x in w])) @ v.conj().T


def analyser(eta1, eta2, angles, n_max):
    a_h, a_v = ladder_modes(n_max)
    r1, r2 = 1 - eta1, 1 - eta2
    d = a_h.shape[0]
    eye = np.eye(d)
    povm = {}
    for t in angles:
        b = math.cos(t) * a_h + math.sin(t) * a_v
        c = -math.sin(t) * a_h + math.cos(t) * a_v
        p1 = spectral(b.T @ b, lambda n: r1 ** n)
        p2 = spectral(c.T @ c, lambda n: r2 ** n)
        povm[angle_label(t)] = {
            "D1": (eye - p1) @ p2,
            "D2": p1 @ (eye - p2),
            "both": (eye - p1) @ (eye - p2),
        }
    return device(d, [angle_label(t) for t in angles], ["D1", "D2", "both"], povm)


def analyser_mq(eta, n_max):
    return np.diag([1 - (1 - eta) ** (nh + nv) for nh, nv in fock_basis(n_max)])


def psd_sqrt(m):
    w, v = np.linalg.eigh(m)
    return (v * np.sqrt(np.clip(w, 0, None))) @ v.conj().T


def chsh_coeffs(xa, xb, outcomes):
    out = []
    for i, x in enumerate(xa):
        for j, y in enumerate(xb):
            for p, a in enumerate(outcomes):
                for q, b in enumerate(outcomes):
                    sign = (-1) ** (i * j) * (1 if p == q else -1)
                    out.append({"x": [x, y], "a": [a, b], "c": sign})
    return out


def random_density(dim, rng):
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    r = g @ g.conj().T
    return r / np.trace(r).real


def exact_fs_device(mq, ecs, bases):
    root = psd_sqrt(mq)
    povm = {}
    settings = []
    for k, (ec, basis) in enumerate(zip(ecs, bases)):
        x = str(k)
        settings.append(x)
        povm[x] = {a: ec * root @ proj(v) @ root for a, v in zip(["+", "-"], basis)}
    return device(mq.shape[0], settings, ["+", "-"], povm)


def imperfect(rng):
    # Two good levels followed by two bad ones.
    eps = 0.05
    good = rng.normal(size=2) + 1j * rng.normal(size=2)
    bad = rng.normal(size=2) + 1j * rng.normal(size=2)
    psi = np.concatenate([math.sqrt(1 - eps) * good / np.linalg.norm(good),
                          math.sqrt(eps) * bad / np.linalg.norm(bad)])
    block = np.zeros((4, 4), dtype=complex)
    block[:2, :2] = (1 - eps) * random_density(2, rng)
    block[2:, 2:] = eps * random_density(2, rng)
    rho = 0.5 * np.outer(psi, psi.conj()) + 0.5 * block
    povm = {}
    for x in ["0", "1"]:
        elems = []
        for _ in range(2):
            g = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
            elems.append(g @ g.conj().T)
        total = sum(elems)
        scale = np.linalg.eigvalsh(total).max() / 0.9
        povm[x] = {"0": elems[0] / scale, "1": elems[1] / scale}
    return device(4, ["0", "1"], ["0", "1"], povm), rho


def write(path, obj):
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default=str(Path(__file__).resolve().parent.parent / "data"))
    out = Path(ap.parse_args().out)
    rng = np.random.default_rng(20260101)
    dev = out / "devices"
    pi = math.pi

    write(dev / "makarov_traced.json", makarov_traced())
    write(dev / "makarov_adversary.json", makarov_adversary())
    write(dev / "lossless_z.json", lossless_z())
    write(dev / "single_photon_analyser.json",
          single_photon_analyser(0.8, 0.05, [0.0, pi / 8, pi / 4, 3 * pi / 8]))
    write(dev / "analyser_equal.json", analyser(0.8, 0.8, [0.0, pi / 4], 3))
    write(dev / "analyser_unequal.json",
          analyser(1 - 0.2 * 1.05, 0.8, [0.0, pi / 8, pi / 4, 3 * pi / 8], 4))
    rank_def = {"z": {"+": np.diag([1.0, 0.0]), "-": np.zeros((2, 2))}}
    write(dev / "rank_deficient.json", device(2, ["z"], ["+", "-"], rank_def))
    mq = np.diag([1.0, 0.6])
    write(dev / "exact_fs.json",
          exact_fs_device(mq, [1.0, 0.7], [[[1, 0], [0, 1]], [[S2, S2], [S2, -S2]]]))
    write(dev / "lossy_no_noclick.json",
          device(2, ["0", "1"], ["+", "-"], {
              "0": {"+": 0.5 * proj([1, 0]), "-": 0.5 * proj([0, 1])},
              "1": {"+": 0.5 * proj([S2, S2]), "-": 0.5 * proj([S2, -S2])},
          }, noclick=False))

    bad = device(2, ["0"], ["+", "-"], {"0": {"+": np.diag([0.5, 0.0]), "-": np.diag([0.0, 0.5])}})
    bad["povm"]["0"]["noclick"] = mat(np.diag([0.4, 0.5]))
    write(out / "invalid" / "noncomplete.json", bad)
    (out / "invalid").mkdir(parents=True, exist_ok=True)
    (out / "invalid" / "malformed.json").write_text('{"dim": 2, "settings": ["0"],\n')

    write(out / "mq" / "identity2.json", mat(np.eye(2)))
    write(out / "mq" / "analyser_nmax4.json", mat(analyser_mq(0.8, 4)))

    sc = out / "scenarios"
    singlet = np.array([0, S2, -S2, 0])
    phi_plus = np.array([S2, 0, 0, S2])
    alice = flat_qubit([0.0, pi / 2], 0.25)
    bob = flat_qubit([5 * pi / 4, 3 * pi / 4], 0.25)
    write(sc / "chsh_singlet.json", {
        "parties": [{"device": alice, "dim": 2}, {"device": bob, "dim": 2}],
        "state": mat(proj(singlet)),
        "bell": {"coeffs": chsh_coeffs(["0", "1"], ["0", "1"], ["+", "-"])},
    })
    xa = [0.0, pi / 4]
    xb = [pi / 8, -pi / 8]
    write(sc / "two_analysers.json", {
        "parties": [
            {"device": single_photon_analyser(0.8, 0.05, xa), "dim": 2, "mq": mat(np.eye(2))},
            {"device": single_photon_analyser(0.8, 0.05, xb), "dim": 2, "mq": mat(np.eye(2))},
        ],
        "state": mat(proj(phi_plus)),
        "bell": {"coeffs": chsh_coeffs([angle_label(t) for t in xa],
                                       [angle_label(t) for t in xb], ["D1", "D2"])},
    })
    write(sc / "exact_fs.json", {
        "parties": [{"device": "../devices/exact_fs.json"},
                    {"device": "../devices/exact_fs.json"}],
        "state": mat(random_density(4, rng)),
        "bell": {"coeffs": chsh_coeffs(["0", "1"], ["0", "1"], ["+", "-"])},
    })
    write(sc / "lossless.json", {
        "parties": [{"device": "../devices/lossless_z.json"},
                    {"device": "../devices/lossless_z.json"}],
        "state": mat(proj(singlet)),
    })
    off = {"on": {"+": proj([1, 0]), "-": proj([0, 1])},
           "off": {"+": np.zeros((2, 2)), "-": np.zeros((2, 2))}}
    write(sc / "erased_setting.json", {
        "parties": [{"device": device(2, ["on", "off"], ["+", "-"], off)},
                    {"device": "../devices/lossless_z.json"}],
        "state": mat(proj([1, 0, 0, 0])),
    })
    dev_hat, rho_hat = imperfect(rng)
    write(sc / "imperfect_state.json", {
        "parties": [{"device": dev_hat, "good_dim": 2}],
        "state": mat(rho_hat),
    })


if __name__ == "__main__":
    main()
