"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

All checks are exact (rational and cyclotomic arithmetic), so every tolerance
is zero.  Random instances come from fixed seeds.
"""

import json
import random
import subprocess
import sys
import time
from fractions import Fraction as F
from itertools import combinations, product
from math import ceil
from pathlib import Path

import flint
import pytest

from nearbycycles import hypercomplex as hc
from nearbycycles.compat import compatibility_hypercomplex, multigraded_all_orders
from nearbycycles.compare import (calibrate, compgrad_arrows, i_dagger, i_sharp, local_system_model,
                                  monodromy_commutation, nils_map, permutation_independence_all, relative_dr)
from nearbycycles.compare.monodromy import jordan_comparison
from nearbycycles.ncmod import checks
from nearbycycles.ncmod import lattice as L
from nearbycycles.ncmod.bernstein import v_membership
from nearbycycles.ncmod.vfilt import gr, psi_alg, v_basis
from nearbycycles.scalars.field import ScalarField
from nearbycycles.scalars.matrix import Matrix

from corpus import CORPUS
from generators import (closed_formula_dims, exact_complex, rand_hypercomplex, rand_hypermap,
                        rand_split_filtrations, rand_subspace, rationals_in)

ROOT = Path(__file__).resolve().parent.parent
SESSIONS = sorted((ROOT / "demos" / "sessions").glob("*.json"))
TOLERANCE = 0  # exact arithmetic throughout


@pytest.fixture
def report(capsys):
    def emit(n: int, ok: bool, detail: str):
        with capsys.disabled():
            print(f"\ncriterion {n:>2}: {'PASS' if ok else 'FAIL'}  {detail}")
        assert ok, detail

    return emit


def _squares_to_zero(T: hc.Hypercomplex) -> bool:
    return all((T.d(0, (m + 1,)) @ T.d(0, (m,))).is_zero() for (m,) in T.dims)


# 1 ---------------------------------------------------------------------------------------------


def test_c01_hypercomplex_laws(report):
    dd_bad = acyc_bad = impl_bad = 0
    hyp_true = 0
    N = 500
    for seed in range(N):
        rng = random.Random(seed)
        X = rand_hypercomplex(rng, maxdim=4, length=4)
        assert X.n <= 3 and max(X.dims.values(), default=0) <= 4
        assert all(max(k[i] for k in X.dims) - min(k[i] for k in X.dims) < 4 for i in range(X.n) if X.dims)
        T = hc.total_complex(X)
        dd_bad += not _squares_to_zero(T)

        n = rng.randint(1, 3)
        E = exact_complex(rng, 2)
        Y = E if n == 1 else hc.tensor(E, rand_hypercomplex(rng, n - 1, 2))
        perm = tuple(rng.sample(range(n), n))
        Y = hc.permute_directions(Y, perm)
        v = hc.check_acyclic_direction(Y)
        acyc_bad += not (v.ok and v.details["hypothesis"] == "present"
                         and hc.cohomology_dims(hc.total_complex(Y)) == {})

        f = rand_hypermap(rng)
        rec = hc.check_quasihyp(f)
        hyp_true += rec.hypothesis_holds
        impl_bad += not (hc.check_hypermap(f).ok and rec.implication_holds)
    ok = dd_bad == acyc_bad == impl_bad == 0 and hyp_true >= N // 5
    report(1, ok, f"{N} hypercomplexes: d∘d failures {dd_bad}; {N} exact-direction instances: "
                  f"acyclicity failures {acyc_bad}; {N} maps ({hyp_true} with iterated iso): "
                  f"implication failures {impl_bad}")


# 2 ---------------------------------------------------------------------------------------------


def test_c02_compatibility(report):
    rng = random.Random(2)
    pair_bad = 0
    for _ in range(200):
        n = rng.randint(1, 6)
        pair_bad += not compatibility_hypercomplex(n, [rand_subspace(rng, n), rand_subspace(rng, n)]).compatible
    from nearbycycles.compat import Subspace
    lines = [Subspace.span(2, [v]) for v in ([1, 0], [0, 1], [1, 1])]
    flagged = not compatibility_hypercomplex(2, lines).compatible
    triple_bad = 0
    for _ in range(100):
        ambient = rng.randint(1, 4)
        Fs, levels = rand_split_filtrations(rng, ambient, 3, spread=1)
        total = 0
        for ell in product(*[sorted(set(l)) for l in levels]):
            res = multigraded_all_orders(Fs, ell, check=False)
            expect = closed_formula_dims(ambient, levels, ell)
            if len(res) != 6 or not all(r.iterated.dim == r.closed.dim == expect and r.is_iso for r in res.values()):
                triple_bad += 1
            total += expect
        triple_bad += total != ambient
    ok = pair_bad == 0 and flagged and triple_bad == 0
    report(2, ok, f"200 pairs: incompatible {pair_bad}; three lines flagged {flagged}; "
                  f"100 split triples: mismatches {triple_bad}")


# 3 ---------------------------------------------------------------------------------------------


def krylov_roots(E: Matrix, x: Matrix) -> list[F]:
    """Rational roots of the monic generator of {b : b(E)x = 0}."""
    vecs = [x]
    while Matrix.hstack(vecs, nrows=x.nrows).rank() == len(vecs):
        vecs.append(E @ vecs[-1])
    if len(vecs) == 1:  # x = 0
        return []
    c = Matrix.hstack(vecs[:-1], nrows=x.nrows).solve(vecs[-1])
    coeffs = [-F(c[j, 0]) for j in range(len(vecs) - 1)] + [F(1)]
    b = flint.fmpq_poly([flint.fmpq(q.numerator, q.denominator) for q in coeffs])
    return [F(int(r.p), int(r.q)) for r, _ in b.roots()]


def brute_force_member(M: L.LatticeModule, terms: dict, alpha: F) -> bool:
    """m ∈ V_α iff each homogeneous piece has all b-roots at least −α − 1."""
    for (v,), vec in terms.items():
        E = M.residues[0] + Matrix.identity(M.rank) * v
        x = Matrix([[F(a)] for a in vec], ncols=1)
        if any(r < -alpha - 1 for r in krylov_roots(E, x)):
            return False
    return True


def test_c03_vfiltration_of_O(report):
    rng = random.Random(3)
    M = L.O_loc(1)
    alphas = sorted({rationals_in(rng, -3, 3) for _ in range(200)})
    alphas = rng.sample(alphas, 25)
    bad = []
    for a in alphas:
        thr = ceil(-a - 1)
        V = v_basis(M, (a,), 6)
        for (v,), B in V.items():
            closed = v >= thr
            if (B.ncols == 1) != closed:
                bad.append((a, v, "basis"))
            mono = L.Section.monomial(M, (v,))
            if v_membership(mono, (a,)) != closed or brute_force_member(M, {(v,): (1,)}, a) != closed:
                bad.append((a, v, "monomial"))
        # a two-term section is in V_α iff its lowest term is
        for v in range(-4, 4):
            terms = {(v,): (1,), (v + 2,): (3,)}
            m = L.Section(M, terms)
            if not (v_membership(m, (a,)) == brute_force_member(M, terms, a) == (v >= thr)):
                bad.append((a, v, "sum"))
    report(3, not bad, f"25 alphas in [-3,3], degrees -6..6: disagreements {bad[:3] or 0}")


# 4 ---------------------------------------------------------------------------------------------


def test_c04_vnilsson(report):
    rng = random.Random(4)
    h = F(-1, 2)
    cases = [(L.O_loc(1), 1), (L.nilsson((h,), (1,)), 1),
             (L.O_loc(2), 2), (L.nilsson((h, h), (1, 1)), 2)]
    betas = {p: [tuple(rationals_in(rng, -2, 2) for _ in range(p)) for _ in range(10)] for p in (1, 2)}
    n = 0
    bad = []
    for M, p in cases:
        # the twisting exponent must lie in [-1, 0)
        alpha = tuple(rng.choice([F(-1), F(-3, 4), F(-2, 3), F(-1, 2), F(-1, 3), F(-1, 4)]) for _ in range(p))
        for k in product(range(3), repeat=p):
            for beta in betas[p]:
                n += 1
                v = checks.check_vnilsson(M, alpha, k, beta)  # runs at W and W+1
                if not v.ok:
                    bad.append((M.name, k, beta))
    report(4, not bad, f"{n} checks (2 modules, p in {{1,2}}, k <= (2,2), 10 betas): failures {bad[:3] or 0}")


# 5 ---------------------------------------------------------------------------------------------


def test_c05_nilpotency(report):
    pieces = 0
    bad = []
    for name, M in CORPUS.items():
        for pc in psi_alg(M):
            for shift in product((-1, 0, 1), repeat=M.p):
                alpha = tuple(a + s for a, s in zip(pc.alpha, shift))
                piece = gr(M, alpha)
                if piece.dim == 0:
                    continue
                pieces += 1
                if not checks.check_nilpotency_piece(piece).ok:
                    bad.append((name, alpha))
    ok = not bad and len(CORPUS) >= 12 and pieces > 0
    report(5, ok, f"{len(CORPUS)} modules, {pieces} nonzero graded pieces: non-nilpotent {bad[:3] or 0}")


# 6 ---------------------------------------------------------------------------------------------


def test_c06_compomult_and_vcompat(report):
    n = 0
    bad = []
    mods = {k: M for k, M in CORPUS.items() if M.p in (2, 3)}
    for name, M in mods.items():
        alphas = sorted({pc.alpha for pc in psi_alg(M)})[:2] + [(F(-1),) * M.p]
        pairs = [(I, J) for r in range(1, M.p) for I in combinations(range(M.p), r)
                 for J in combinations([a for a in range(M.p) if a not in I], M.p - r)]
        for alpha in alphas:
            for I, J in pairs:
                n += 1
                if not checks.check_compomult(M, I, J, alpha).ok:
                    bad.append((name, I, J, alpha))
        for alpha in alphas:
            n += 1
            if not checks.check_v_compatibility(M, alpha).ok:
                bad.append((name, "vcompat", alpha))
    report(6, not bad, f"{len(mods)} modules with p in {{2,3}}, {n} checks: failures {bad[:3] or 0}")


# 7 ---------------------------------------------------------------------------------------------


def test_c07_psi_iteration(report):
    n = 0
    bad = []
    for name, M in CORPUS.items():
        for r in range(M.p + 1):
            for I in combinations(range(M.p), r):
                n += 1
                if not checks.check_psi_iteration(M, I).ok:
                    bad.append((name, I))
        n += 1
        if not checks.check_psi_iteration_all_orders(M).ok:
            bad.append((name, "orders"))
    report(7, not bad, f"{n} checks over all I and all orders: failures {bad[:3] or 0}")


# 8 ---------------------------------------------------------------------------------------------


def test_c08_comparison_arrows_and_nils(report):
    bad = []
    lags = set()
    for name, M in CORPUS.items():
        res = compgrad_arrows(M)
        if not all(a.quasi_iso for a in res["arrows"]):
            bad.append((name, "arrows"))
        for pc in psi_alg(M):
            r = nils_map(M, pc.alpha)
            lags.add(r.lag)
            if not (r.quasi_iso and r.stabilizing_k is not None):
                bad.append((name, "nils", pc.alpha))
    O = L.O_loc(1)
    dims = [i_sharp(O).dim_vector(), i_dagger(O).dim_vector(), relative_dr(O).dim_vector()]
    ok = not bad and dims == [(1, 1)] * 3
    report(8, ok, f"{len(CORPUS)} modules: failures {bad[:3] or 0}; O[1/t] dims {dims}; Nils lags seen {sorted(lags)}")


# 9 ---------------------------------------------------------------------------------------------


def test_c09_monodromy_and_permutation(report):
    cal = calibrate()
    minus_one = local_system_model(L.nilsson((F(-1, 2),), (0,))).monodromy[0] == Matrix([[ScalarField(2)(-1)]])
    bad = []
    for name, M in CORPUS.items():
        if not monodromy_commutation(M).ok:
            bad.append((name, "monodromy"))
        if not permutation_independence_all(M).ok:
            bad.append((name, "permutation"))
        if not jordan_comparison(M).ok:
            bad.append((name, "jordan"))
    ok = not bad and cal.sign == -1 and minus_one
    report(9, ok, f"{len(CORPUS)} modules: failures {bad[:3] or 0}; calibrated sign {cal.sign}, "
                  f"p=1 alpha=-1/2 model monodromy is -1: {minus_one}")


# 10 --------------------------------------------------------------------------------------------


def _cli(path: Path, *extra) -> bytes:
    cmd = [sys.executable, "-m", "nearbycycles", "run", str(path), "--format", "machine", *extra]
    return subprocess.run(cmd, capture_output=True, check=False, cwd=ROOT).stdout


def test_c10_cli_determinism(report):
    assert len(SESSIONS) >= 10
    t0 = time.time()
    bad = []
    for path in SESSIONS:
        a, b, c = _cli(path), _cli(path), _cli(path, "--jobs", "4")
        rep = json.loads(a)
        if not (a == b == c):
            bad.append(path.name)
        if rep["exit_status"] != 0:
            bad.append(f"{path.name}: exit {rep['exit_status']}")
    report(10, not bad, f"{len(SESSIONS)} sessions, serial twice and parallel once: "
                        f"differences {bad or 0} ({time.time() - t0:.0f} s)")
