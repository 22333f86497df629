"""Regenerate demos/sessions/*.json.

The random hypercomplexes, maps and filtrations come from the seeded
generators in tests/generators.py, so rerunning this script reproduces the
shipped files byte for byte.

    python3 demos/build_sessions.py
"""

import json
import random
import sys
from itertools import product
from pathlib import Path

HERE = Path(__file__).resolve().parent
sys.path.insert(0, str(HERE.parent / "tests"))

from generators import rand_hypercomplex, rand_hypermap, rand_invertible, rand_subspace  # noqa: E402
from nearbycycles.scalars.serial import format_scalar  # noqa: E402

OUT = HERE / "sessions"


def mat(M):
    return [[format_scalar(x) for x in row] for row in M.tolist()]


def cols(M):
    return [[format_scalar(x) for x in c] for c in M.T.tolist()]


def hyper(X):
    return {"n": X.n,
            "entries": [{"k": list(k), "dim": d} for k, d in sorted(X.dims.items())],
            "diffs": [{"i": i, "k": list(k), "matrix": mat(m)} for (i, k), m in sorted(X.diffs.items())
                      if m.nrows and m.ncols]}


def hmap(f):
    return {"source": hyper(f.source), "target": hyper(f.target),
            "components": [{"k": list(k), "matrix": mat(m)} for k, m in sorted(f.components.items())
                           if m.nrows and m.ncols]}


def nil(id_, alpha, k):
    return {"id": id_, "kind": "nilsson", "alpha": alpha, "k": k}


CORPUS = [
    {"id": "O1", "kind": "O_loc", "p": 1},
    nil("nil_half_0", ["-1/2"], [0]),
    nil("nil_m1_1", ["-1"], [1]),
    nil("nil_half_2", ["-1/2"], [2]),
    {"id": "sum_p1", "kind": "direct_sum",
     "of": ["O1", nil("a", ["-1/3"], [1]), "nil_half_0"]},
    {"id": "lat_shift", "kind": "lattice", "residues": [[["3/2", "0"], ["0", "-5/2"]]]},
    {"id": "O2", "kind": "O_loc", "p": 2},
    nil("nil_ht_00", ["-1/2", "-1/3"], [0, 0]),
    nil("nil_ht_11", ["-1/2", "-1/3"], [1, 1]),
    nil("nil_m1m1_11", ["-1", "-1"], [1, 1]),
    {"id": "tensor_p2", "kind": "tensor",
     "of": [nil("a", ["-1/2", "-1"], [1, 0]), nil("b", ["-1/3", "-1"], [0, 1])]},
    {"id": "sum_p2", "kind": "direct_sum",
     "of": [nil("a", ["-1", "-1/2"], [1, 0]), "O2", nil("b", ["-1/4", "-1"], [0, 1])]},
    {"id": "lat_p2", "kind": "lattice",
     "residues": [[["1/2", "1"], ["0", "1/2"]], [["-2", "0"], ["0", "-2"]]]},
    {"id": "O3", "kind": "O_loc", "p": 3},
    {"id": "tensor_p3", "kind": "tensor",
     "of": [nil("a", ["-1/2", "-1", "-1/3"], [0, 0, 0]), nil("b", ["-1", "-1", "-1"], [1, 0, 0])]},
    nil("nil_p3", ["-1", "-1/2", "-1"], [1, 0, 1]),
]
P = {"O1": 1, "nil_half_0": 1, "nil_m1_1": 1, "nil_half_2": 1, "sum_p1": 1, "lat_shift": 1}
P.update({k: 2 for k in ("O2", "nil_ht_00", "nil_ht_11", "nil_m1m1_11", "tensor_p2", "sum_p2", "lat_p2")})
P.update({k: 3 for k in ("O3", "tensor_p3", "nil_p3")})


def per_module(name, ids=None, **params):
    return [{"name": name, "module": m, "params": params} for m in (ids or [c["id"] for c in CORPUS])]


def s01():
    rng = random.Random(101)
    tasks = []
    for _ in range(6):
        X = hyper(rand_hypercomplex(rng))
        tasks.append({"name": "hyper-total", "params": {"hypercomplex": X}})
        tasks.append({"name": "hyper-cohomology", "params": {"hypercomplex": X}})
    for _ in range(8):
        tasks.append({"name": "hyper-quasiiso", "params": {"map": hmap(rand_hypermap(rng))}})
    return {"modules": [], "tasks": tasks}


def split_filtrations(rng, ambient, n):
    B = rand_invertible(rng, ambient)
    levels = [[rng.randint(-1, 1) for _ in range(ambient)] for _ in range(n)]
    out = []
    for lv in levels:
        jumps = [{"level": ell, "basis": cols(B.select(cols=[j for j in range(ambient) if lv[j] <= ell]))}
                 for ell in sorted(set(lv))]
        out.append({"ambient_dim": ambient, "jumps": jumps})
    return out


def s02():
    rng = random.Random(202)
    tasks = []
    for _ in range(8):
        n = rng.randint(1, 6)
        tasks.append({"name": "check-compat",
                      "params": {"ambient": n, "subspaces": [cols(rand_subspace(rng, n).basis) for _ in range(2)]}})
    tasks.append({"name": "check-compat", "params": {"ambient": 2, "subspaces": [[["1", "0"]], [["0", "1"]], [["1", "1"]]],
                                                     "expect": False}})
    lines = [{"ambient_dim": 2, "jumps": [{"level": 0, "basis": [v]}, {"level": 1, "basis": [["1", "0"], ["0", "1"]]}]}
             for v in (["1", "0"], ["0", "1"], ["1", "1"])]
    tasks.append({"name": "check-fcompat", "params": {"filtrations": lines, "expect": False}})
    for _ in range(4):
        Fs = split_filtrations(rng, rng.randint(1, 3), 3)
        tasks.append({"name": "check-fcompat", "params": {"filtrations": Fs}})
        tasks.append({"name": "check-multigraded", "params": {"filtrations": Fs}})
    return {"modules": [], "tasks": tasks}


def s03():
    O = {"id": "O", "kind": "O_loc", "p": 1}
    alphas = ["-3", "-5/2", "-2", "-4/3", "-1", "-1/2", "0", "1/3", "1", "5/2", "3"]
    tasks = [{"name": "vfilt", "module": "O", "params": {"alpha": [a]}, "window": 5} for a in alphas]
    tasks += [{"name": "bpoly", "module": "O", "params": {"section": [{"v": [v], "coeffs": ["1"]}]}} for v in (-2, 0, 3)]
    return {"modules": [O], "tasks": tasks}


def s04():
    mods = [{"id": "O1", "kind": "O_loc", "p": 1}, nil("N1", ["-1/2"], [1]),
            {"id": "O2", "kind": "O_loc", "p": 2}, nil("N2", ["-1/2", "-1/2"], [1, 1])]
    tasks = []
    for m, p in (("O1", 1), ("N1", 1), ("O2", 2), ("N2", 2)):
        for k in product(range(3), repeat=p):
            if p == 2 and sum(k) > 2:
                continue
            for beta in ("-1/2", "1/2", "-3/2"):
                tasks.append({"name": "check-vnilsson", "module": m,
                              "params": {"alpha": ["-1/2"] * p, "k": list(k), "beta": [beta] * p}})
    return {"modules": mods, "tasks": tasks}


def s05():
    return {"modules": CORPUS, "tasks": per_module("check-nilpotent")}


def s06():
    ids = [c["id"] for c in CORPUS if P[c["id"]] > 1]
    tasks = per_module("check-vcompat", ids)
    for m in ids:
        p = P[m]
        tasks.append({"name": "check-compomult", "module": m,
                      "params": {"I": [0], "J": list(range(1, p)), "alpha": ["-1/2"] * p}})
    return {"modules": CORPUS, "tasks": tasks}


def s07():
    return {"modules": CORPUS, "tasks": per_module("check-psi-iter")}


def s08():
    return {"modules": CORPUS, "tasks": per_module("compare-arrows") + per_module("compare-nils")}


def s09():
    return {"modules": CORPUS,
            "tasks": per_module("compare-monodromy") + per_module("compare-permutation")
            + per_module("model-localsystem")}


def s10():
    """A quick mixed session touching each layer once."""
    mods = [{"id": "O", "kind": "O_loc", "p": 1}, nil("N", ["-1/2"], [1])]
    tasks = [{"name": "bpoly", "module": "O", "params": {"section": [{"v": [-2], "coeffs": ["1"]}]}},
             {"name": "check-vnilsson", "module": "O", "params": {"alpha": ["-1/2"], "k": [1], "beta": ["-1/2"]}},
             {"name": "gr", "module": "N", "params": {"alpha": ["-1/2"]}},
             {"name": "psi", "module": "N"},
             {"name": "compare-nils", "module": "N"},
             {"name": "model-localsystem", "module": "N"}]
    return {"modules": mods, "tasks": tasks}


SESSIONS = {
    "01_hypercomplex_laws": s01,
    "02_compatibility": s02,
    "03_vfiltration_O": s03,
    "04_vnilsson": s04,
    "05_nilpotency": s05,
    "06_compomult_vcompat": s06,
    "07_psi_iteration": s07,
    "08_comparison_arrows": s08,
    "09_monodromy_permutation": s09,
    "10_quickstart": s10,
}


def main():
    OUT.mkdir(exist_ok=True)
    for name, build in SESSIONS.items():
        doc = {"schema": "v1", "field": "auto", **build()}
        (OUT / f"{name}.json").write_text(json.dumps(doc, indent=1) + "\n", encoding="utf-8")
        print(f"wrote {name}.json ({len(doc['tasks'])} tasks)")


if __name__ == "__main__":
    main()
