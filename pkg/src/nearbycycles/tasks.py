"""Task catalog: names, parameter schemas and the functions behind them."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Any, Callable, Mapping

from . import compat
from . import hypercomplex as hc
from .compare import complexes as cx
from .compare import monodromy as mono
from .compare.nils import nils_map
from .compare.permutation import permutation_independence, permutation_independence_all, stabilizing_levels
from .compare.report import comparison_report, jordan_to_json
from .ncmod import checks
from .ncmod.bernstein import bernstein_poly
from .ncmod.lattice import LatticeModule, Section, window_points
from .ncmod.vfilt import FiltrationLattice, default_window, field_order, gr, psi_alg
from .scalars.matrix import Matrix
from .scalars.serial import format_rational, format_scalar
from .session import SessionError, columns, integers, matrix, rationals

ASSERTION, INFO = "assertion", "informational"


@dataclass
class Outcome:
    kind: str  # assertion | informational
    ok: bool | None
    summary: str
    data: dict = field(default_factory=dict)


@dataclass
class Context:
    module: LatticeModule | None
    params: Mapping[str, Any]
    window: int | None
    strict: bool
    order: int


@dataclass(frozen=True)
class TaskEntry:
    name: str
    params: Mapping[str, str]  # name -> type tag
    required: tuple[str, ...]
    needs_module: bool
    kind: str
    run: Callable[[Context], Outcome]
    example: Mapping

    def schema(self) -> dict:
        return {"name": self.name, "kind": self.kind, "module": self.needs_module,
                "params": dict(self.params), "required": list(self.required), "example": dict(self.example)}


# -- serialization helpers -----------------------------------------------------------


def mat_json(M: Matrix) -> list:
    return [[format_scalar(x) for x in row] for row in M.tolist()]


def qs(xs) -> list[str]:
    return [format_rational(x) for x in xs]


def dims_json(d: Mapping[int, int]) -> dict:
    return {str(m): n for m, n in sorted(d.items())}


def verdict_json(v: hc.Verdict) -> dict:
    return {"ok": bool(v.ok), "message": v.message}


# -- parameter parsing ------------------------------------------------------------------


_TYPES = {
    "rationals": lambda v, w: rationals(v, w),
    "ints": lambda v, w: integers(v, w),
    "int": lambda v, w: _int(v, w),
    "bool": lambda v, w: _bool(v, w),
    "section": lambda v, w: _shape_section(v, w),
    "hypercomplex": lambda v, w: _shape_hyper(v, w),
    "hypermap": lambda v, w: _shape_map(v, w),
    "subspaces": lambda v, w: _list(v, w),
    "filtrations": lambda v, w: _list(v, w),
}


def _int(v, w):
    if not isinstance(v, int) or isinstance(v, bool):
        raise SessionError(f"{w} must be an integer")
    return v


def _bool(v, w):
    if not isinstance(v, bool):
        raise SessionError(f"{w} must be true or false")
    return v


def _list(v, w):
    if not isinstance(v, list):
        raise SessionError(f"{w} must be a list")
    return v


def _shape_section(v, w):
    if not isinstance(v, list) or not all(isinstance(t, dict) and {"v", "coeffs"} <= set(t) for t in v):
        raise SessionError(f"{w} must be a list of {{'v': [...], 'coeffs': [...]}} terms")
    return v


def _shape_hyper(v, w):
    if not isinstance(v, dict) or not isinstance(v.get("n"), int):
        raise SessionError(f"{w} must be {{'n': ..., 'entries': [...], 'diffs': [...]}}")
    return v


def _shape_map(v, w):
    if not isinstance(v, dict) or not {"source", "target"} <= set(v):
        raise SessionError(f"{w} must have 'source', 'target' and 'components'")
    return v


def validate_params(entry: TaskEntry, params: Mapping, what: str):
    extra = set(params) - set(entry.params)
    if extra:
        raise SessionError(f"{what}: unknown parameter(s) {sorted(extra)}")
    for name in entry.required:
        if name not in params:
            raise SessionError(f"{what}: missing parameter {name!r}")
    for name, val in params.items():
        _TYPES[entry.params[name]](val, f"{what}.{name}")


def _alpha(ctx: Context, key: str = "alpha", default=None):
    if key not in ctx.params:
        return default
    a = rationals(ctx.params[key], key)
    if ctx.module is not None and len(a) != ctx.module.p:
        raise SessionError(f"{key} has length {len(a)}, module has p = {ctx.module.p}")
    return a


def _index_set(ctx: Context, key: str):
    I = integers(ctx.params[key], key)
    if any(not 0 <= i < ctx.module.p for i in I) or len(set(I)) != len(I):
        raise SessionError(f"{key} must list distinct indices in 0..{ctx.module.p - 1}")
    return tuple(sorted(I))


def parse_section(M: LatticeModule, rec) -> Section:
    """[{v: [int], coeffs: [scalar]}]; repeated degrees add up."""
    terms = {}
    for t in rec:
        v = integers(t["v"], "v")
        vec = rationals(t["coeffs"], "coeffs")
        if len(v) != M.p or len(vec) != M.rank:
            raise SessionError(f"section term {t} does not fit a rank {M.rank} module in {M.p} variables")
        prev = terms.get(v, (0,) * M.rank)
        terms[v] = tuple(x + y for x, y in zip(prev, vec))
    return Section(M, terms)


def parse_hypercomplex(rec) -> hc.Hypercomplex:
    """{n, entries: [{k, dim, labels?}], diffs: [{i, k, matrix}]}."""
    n = rec["n"]
    dims, labels = {}, {}
    for o in rec.get("entries", []):
        if not isinstance(o, dict):
            raise SessionError("entries are {k, dim, labels} records")
        k = integers(o.get("k"), "entries.k")
        if len(k) != n:
            raise SessionError(f"entry at {k} is not in Z^{n}")
        dims[k] = _int(o.get("dim"), "entries.dim")
        if "labels" in o:
            if not isinstance(o["labels"], list) or len(o["labels"]) != dims[k]:
                raise SessionError(f"entry at {k}: one label per basis vector")
            labels[k] = tuple(str(x) for x in o["labels"])
    diffs = {}
    for d in rec.get("diffs", []):
        if not isinstance(d, dict):
            raise SessionError("diffs are {i, k, matrix} records")
        k = integers(d.get("k"), "diffs.k")
        i = _int(d.get("i"), "diffs.i")
        if not 0 <= i < n or len(k) != n:
            raise SessionError(f"differential ({i}, {k}) out of range")
        if dims.get(hc.shift(k, i), 0):
            diffs[(i, k)] = matrix(d.get("matrix", []), "diffs.matrix", ncols=dims.get(k, 0))
    try:
        return hc.Hypercomplex(n, dims, diffs, labels)
    except hc.InvalidHypercomplex as exc:
        raise SessionError(str(exc)) from None


def parse_hypermap(rec) -> hc.HyperMap:
    X, Y = parse_hypercomplex(rec["source"]), parse_hypercomplex(rec["target"])
    comps = {}
    for c in rec.get("components", []):
        k = integers(c.get("k"), "components.k")
        if Y.dim(k):
            comps[k] = matrix(c.get("matrix", []), "components.matrix", ncols=X.dim(k))
    try:
        return hc.HyperMap(X, Y, comps)
    except hc.InvalidHypercomplex as exc:
        raise SessionError(str(exc)) from None


def parse_filtrations(recs) -> tuple[int, list[compat.Filtration]]:
    """[{ambient_dim, jumps: [{level, basis}]}], all in one ambient space."""
    out, ambient = [], None
    for F in recs:
        if not isinstance(F, dict) or not {"ambient_dim", "jumps"} <= set(F):
            raise SessionError("a filtration is {'ambient_dim': n, 'jumps': [{'level', 'basis'}]}")
        n = _int(F["ambient_dim"], "ambient_dim")
        if ambient is not None and n != ambient:
            raise SessionError("filtrations live in different ambient spaces")
        ambient = n
        jumps = [(_int(j.get("level"), "level"), columns(j.get("basis", []), n, "basis")) for j in F["jumps"]]
        try:
            out.append(compat.Filtration.from_bases(n, jumps))
        except ValueError as exc:
            raise SessionError(f"filtration: {exc}") from None
    if ambient is None:
        raise SessionError("need at least one filtration")
    return ambient, out


# -- runners --------------------------------------------------------------------------------


def _bpoly(ctx: Context) -> Outcome:
    M = ctx.module
    m = parse_section(M, ctx.params["section"])
    idx = [ctx.params["index"]] if "index" in ctx.params else list(range(M.p))
    polys = []
    for i in idx:
        if not 0 <= i < M.p:
            raise SessionError(f"index {i} out of range")
        b = bernstein_poly(m, i, ctx.window)
        polys.append(dict(b.to_dict(), certified=b.certified, window=b.window,
                          coefficients=qs(b.coefficients())))
    ok = all(p["certified"] for p in polys)
    roots = "; ".join(f"b_{p['i']}: " + (", ".join(f"{r['root']}^{r['mult']}" for r in p["roots"]) or "1")
                      for p in polys)
    return Outcome(INFO, ok, roots, {"polynomials": polys})


def _vfilt(ctx: Context) -> Outcome:
    M = ctx.module
    alpha = _alpha(ctx)
    W = ctx.window if ctx.window is not None else default_window(M, [alpha])
    F = FiltrationLattice(M)
    blocks = [{"mu": qs(M.axis_mu(b)), "dim": blk.dim, "threshold": list(F.threshold(b, alpha))}
              for b, blk in enumerate(M.spectrum.blocks)]
    table = [{"degree": list(v), "dim": F.V(alpha, v).ncols} for v in window_points(M.p, W)]
    return Outcome(INFO, None, f"{len(blocks)} blocks, window {W}",
                   {"alpha": qs(alpha), "blocks": blocks, "window": W, "dims": table})


def _gr(ctx: Context) -> Outcome:
    M = ctx.module
    alpha = _alpha(ctx)
    order = field_order(M, alpha)
    pc = gr(M, alpha, order)
    data = {"alpha": qs(alpha), "dim": pc.dim, "field_order": order,
            "E": {str(i): mat_json(E) for i, E in sorted(pc.E.items())},
            "T": {str(i): mat_json(T) for i, T in sorted(pc.T.items())},
            "jordan_data": jordan_to_json(pc.jordan_data()) if pc.dim else []}
    return Outcome(INFO, None, f"dim gr = {pc.dim}", data)


def _psi(ctx: Context) -> Outcome:
    M = ctx.module
    order = field_order(M)
    pieces = psi_alg(M, order)
    dim, jd = checks.psi_data(pieces, list(range(M.p)), order)
    data = {"pieces": [{"alpha": qs(pc.alpha), "dim": pc.dim} for pc in pieces], "dim": dim,
            "field_order": order, "jordan_data": jordan_to_json(jd)}
    return Outcome(INFO, None, f"dim Psi = {dim} over {len(pieces)} pieces", data)


def _hyper_total(ctx: Context) -> Outcome:
    X = parse_hypercomplex(ctx.params["hypercomplex"])
    v = hc.validate(X)
    if not v:
        return Outcome(ASSERTION, False, v.message, {"valid": False})
    T = hc.total_complex(X)
    dd = all((T.d(0, (m + 1,)) @ T.d(0, (m,))).is_zero() for (m,) in T.support)
    data = {"valid": True, "total_dims": dims_json({m: T.dim((m,)) for (m,) in T.support}),
            "differentials": {str(m): mat_json(T.d(0, (m,))) for (m,) in T.support
                              if T.dim((m + 1,))}, "d_squared_zero": dd}
    return Outcome(ASSERTION, dd, "d∘d = 0" if dd else "d∘d ≠ 0", data)


def _hyper_cohomology(ctx: Context) -> Outcome:
    X = parse_hypercomplex(ctx.params["hypercomplex"])
    v = hc.validate(X)
    if not v:
        return Outcome(ASSERTION, False, v.message, {"valid": False})
    total = hc.cohomology_dims(hc.total_complex(X))
    per = {}
    for i in range(X.n):
        H = hc.cohomology_in_direction(X, i).result
        per[str(i)] = [{"k": list(k), "dim": d} for k, d in sorted(H.dims.items())]
    acyc = hc.check_acyclic_direction(X)
    data = {"total": dims_json(total), "directions": per, "acyclic_direction": verdict_json(acyc),
            "hypothesis": acyc.details.get("hypothesis")}
    return Outcome(ASSERTION, acyc.ok, f"H = {dims_json(total)}; {acyc.message}", data)


def _hyper_quasiiso(ctx: Context) -> Outcome:
    f = parse_hypermap(ctx.params["map"])
    chain = hc.check_hypermap(f)
    if not chain:
        return Outcome(ASSERTION, False, chain.message, {"chain_map": False})
    rec = hc.check_quasihyp(f)
    data = {"chain_map": True, "iterated_iso": rec.hypothesis_holds, "quasi_iso": rec.conclusion_holds,
            "implication_holds": rec.implication_holds}
    return Outcome(ASSERTION, rec.implication_holds,
                   f"quasi-iso {rec.conclusion_holds}, iterated iso {rec.hypothesis_holds}", data)


def _expect(ctx: Context, got: bool) -> bool:
    return got == ctx.params.get("expect", True)


def _check_compat(ctx: Context) -> Outcome:
    n = ctx.params["ambient"]
    subs = [compat.Subspace.span(n, columns(s, n, "subspace")) for s in ctx.params["subspaces"]]
    res = compat.compatibility_hypercomplex(n, subs)
    data = {"compatible": res.compatible, "failure": res.failure, "expect": ctx.params.get("expect", True)}
    return Outcome(ASSERTION, _expect(ctx, res.compatible),
                   "compatible" if res.compatible else f"incompatible: {res.failure}", data)


def _check_fcompat(ctx: Context) -> Outcome:
    n, Fs = parse_filtrations(ctx.params["filtrations"])
    v = compat.are_filtrations_compatible(Fs)
    data = {"compatible": v.ok, "message": v.message, "expect": ctx.params.get("expect", True)}
    return Outcome(ASSERTION, _expect(ctx, v.ok), v.message, data)


def _check_multigraded(ctx: Context) -> Outcome:
    n, Fs = parse_filtrations(ctx.params["filtrations"])
    v = compat.are_filtrations_compatible(Fs)
    if not v:
        return Outcome(ASSERTION, False, f"not compatible: {v.message}", {"compatible": False})
    if "ell" in ctx.params:
        ells = [integers(ctx.params["ell"], "ell")]
        if len(ells[0]) != len(Fs):
            raise SessionError("ell needs one level per filtration")
    else:
        ells = compat.jump_box(Fs)
    rows, ok = [], True
    for ell in ells:
        res = compat.multigraded_all_orders(Fs, ell, check=False)
        closed = next(iter(res.values())).closed.dim
        dims = {"".join(map(str, s)): r.iterated.dim for s, r in sorted(res.items())}
        good = all(r.is_iso and r.iterated.dim == closed for r in res.values())
        ok &= good
        rows.append({"ell": list(ell), "closed": closed, "orders": dims, "ok": good})
    total = sum(r["closed"] for r in rows)
    return Outcome(ASSERTION, ok, f"{len(rows)} multi-indices, total dim {total}", {"pieces": rows})


def _check_nilpotent(ctx: Context) -> Outcome:
    M = ctx.module
    alpha = _alpha(ctx)
    alphas = [alpha] if alpha is not None else [pc.alpha for pc in psi_alg(M)]
    rows = []
    for a in alphas:
        v = checks.check_nilpotency(M, a)
        rows.append({"alpha": qs(a), "ok": v.ok, "message": v.message})
    ok = all(r["ok"] for r in rows)
    return Outcome(ASSERTION, ok, f"{len(rows)} graded pieces checked", {"pieces": rows})


def _check_sanspente(ctx: Context) -> Outcome:
    m = parse_section(ctx.module, ctx.params["section"])
    v = checks.check_sans_pente(m, ctx.window)
    return Outcome(ASSERTION, v.ok, v.message, {"witnesses": v.details.get("witnesses", [])})


def _check_localize(ctx: Context) -> Outcome:
    M = ctx.module
    i = ctx.params["index"]
    if not 0 <= i < M.p:
        raise SessionError(f"index {i} out of range")
    v = checks.localize_check(M, i, _alpha(ctx), ctx.window)
    asserted = v.details.get("asserted", False)
    data = {"asserted": asserted, "message": v.message, "window": v.details.get("window"),
            "equal": v.details.get("equal", v.ok)}
    if asserted:
        return Outcome(ASSERTION, v.ok, v.message, data)
    return Outcome(INFO, data["equal"], v.message, data)


def _check_compomult(ctx: Context) -> Outcome:
    M = ctx.module
    I, J = _index_set(ctx, "I"), _index_set(ctx, "J")
    if set(I) & set(J):
        raise SessionError("I and J must be disjoint")
    v = checks.check_compomult(M, I, J, _alpha(ctx), ctx.window)
    return Outcome(ASSERTION, v.ok, v.message, {"I": list(I), "J": list(J)})


def _check_vcompat(ctx: Context) -> Outcome:
    v = checks.check_v_compatibility(ctx.module, _alpha(ctx), ctx.window)
    return Outcome(ASSERTION, v.ok, v.message, {"window": v.details.get("window")})


def _check_vnilsson(ctx: Context) -> Outcome:
    M = ctx.module
    alpha, beta = _alpha(ctx), _alpha(ctx, "beta")
    k = integers(ctx.params["k"], "k")
    if len(k) != M.p:
        raise SessionError("k needs one entry per variable")
    v = checks.check_vnilsson(M, alpha, k, beta, ctx.window)
    return Outcome(ASSERTION, v.ok, v.message, {"window": v.details.get("window")})


def _check_psi_iter(ctx: Context) -> Outcome:
    M = ctx.module
    if "I" in ctx.params:
        subsets = [_index_set(ctx, "I")]
    else:
        subsets = [I for r in range(M.p + 1) for I in combinations(range(M.p), r)]
    rows = []
    for I in subsets:
        v = checks.check_psi_iteration(M, I)
        rows.append({"I": list(I), "ok": v.ok, "dim": v.details["one_step"][0]})
    orders = checks.check_psi_iteration_all_orders(M) if "I" not in ctx.params else None
    ok = all(r["ok"] for r in rows) and (orders is None or orders.ok)
    data = {"subsets": rows}
    if orders is not None:
        data["all_orders"] = orders.ok
    return Outcome(ASSERTION, ok, f"{len(rows)} subsets" + ("" if orders is None else ", all orders"), data)


def _compare_arrows(ctx: Context) -> Outcome:
    M = ctx.module
    if ctx.params.get("full"):
        r = comparison_report(M, ctx.window)
        return Outcome(ASSERTION, r.ok, "full comparison " + ("holds" if r.ok else "fails"), r.to_dict())
    res = cx.compgrad_arrows(M, ctx.window)
    W = res["window"]
    arrows = [a.to_dict() for a in res["arrows"]]
    dims = {kind: dims_json(cx.cube_complex(M, kind, W).dims()) for kind in (cx.SHARP, cx.DAGGER, cx.DR)}
    ok = all(a["quasi_iso"] for a in arrows)
    data = {"arrows": arrows, "dims": dims, "window": W,
            "renumbering": {"".join(map(str, k)): list(v) for k, v in cx.renumbering(M.p).items()}}
    return Outcome(ASSERTION, ok, ", ".join(f"{a['arrow']} {'qis' if a['quasi_iso'] else 'not qis'}"
                                            for a in arrows), data)


def _compare_nils(ctx: Context) -> Outcome:
    M = ctx.module
    alpha = _alpha(ctx)
    alphas = [alpha] if alpha is not None else [pc.alpha for pc in psi_alg(M)]
    rows = [nils_map(M, a, ctx.params.get("k_max")).to_dict() for a in alphas]
    ok = all(r["quasi_iso"] for r in rows)
    ks = ", ".join(f"{','.join(r['alpha'])}: k={r['stabilizing_k']}" for r in rows)
    return Outcome(ASSERTION, ok, ks or "no graded pieces", {"pieces": rows})


def _compare_monodromy(ctx: Context) -> Outcome:
    v = mono.monodromy_commutation(ctx.module, ctx.window)
    cal = mono.calibrate()
    data = {"ok": v.ok, "arrows": v.details["arrows"], "nils": v.details["nils"],
            "calibration": cal.to_dict()}
    return Outcome(ASSERTION, v.ok, v.message, data)


def _compare_permutation(ctx: Context) -> Outcome:
    M = ctx.module
    if "I" in ctx.params:
        r = permutation_independence(M, _index_set(ctx, "I"), ctx.window, stabilizing_levels(M))
        return Outcome(ASSERTION, r.ok, "routes agree" if r.ok else "routes differ", {"results": [r.to_dict()]})
    v = permutation_independence_all(M, ctx.window)
    return Outcome(ASSERTION, v.ok, v.message, v.details)


def _model_localsystem(ctx: Context) -> Outcome:
    M = ctx.module
    ls = mono.local_system_model(M)
    jc = mono.jordan_comparison(M)
    data = {"dim": ls.dim, "field_order": ls.order, "calibration": mono.calibrate().to_dict(),
            "monodromy": [mat_json(T) for T in ls.monodromy], "jordan_data": jordan_to_json(ls.jordan_data()),
            "matches_psi": jc.ok}
    return Outcome(INFO, jc.ok, f"rank {ls.dim}; Jordan data {'match' if jc.ok else 'differ from'} Psi", data)


# -- catalog -------------------------------------------------------------------------------

_O = {"module": "O"}
_SEC = [{"v": [-2], "coeffs": ["1"]}]
_FIL = [{"ambient_dim": 1, "jumps": [{"level": 0, "basis": [["1"]]}]}]
_HC = {"n": 1, "entries": [{"k": [0], "dim": 1}, {"k": [1], "dim": 1}],
       "diffs": [{"i": 0, "k": [0], "matrix": [["1"]]}]}


def _entry(name, params, required, needs_module, kind, run, example_params):
    ex = {"name": name, "params": example_params}
    if needs_module:
        ex.update(_O)
    return TaskEntry(name, params, tuple(required), needs_module, kind, run, ex)


CATALOG: dict[str, TaskEntry] = {e.name: e for e in [
    _entry("bpoly", {"section": "section", "index": "int"}, ["section"], True, INFO, _bpoly,
           {"section": _SEC, "index": 0}),
    _entry("vfilt", {"alpha": "rationals"}, ["alpha"], True, INFO, _vfilt, {"alpha": ["-1"]}),
    _entry("gr", {"alpha": "rationals"}, ["alpha"], True, INFO, _gr, {"alpha": ["-1"]}),
    _entry("psi", {}, [], True, INFO, _psi, {}),
    _entry("hyper-total", {"hypercomplex": "hypercomplex"}, ["hypercomplex"], False, ASSERTION, _hyper_total,
           {"hypercomplex": _HC}),
    _entry("hyper-cohomology", {"hypercomplex": "hypercomplex"}, ["hypercomplex"], False, ASSERTION,
           _hyper_cohomology, {"hypercomplex": _HC}),
    _entry("hyper-quasiiso", {"map": "hypermap"}, ["map"], False, ASSERTION, _hyper_quasiiso,
           {"map": {"source": _HC, "target": _HC,
                    "components": [{"k": [0], "matrix": [["1"]]}, {"k": [1], "matrix": [["1"]]}]}}),
    _entry("check-compat", {"ambient": "int", "subspaces": "subspaces", "expect": "bool"},
           ["ambient", "subspaces"], False, ASSERTION, _check_compat,
           {"ambient": 2, "subspaces": [[["1", "0"]], [["0", "1"]]]}),
    _entry("check-fcompat", {"filtrations": "filtrations", "expect": "bool"},
           ["filtrations"], False, ASSERTION, _check_fcompat, {"filtrations": _FIL}),
    _entry("check-multigraded", {"filtrations": "filtrations", "ell": "ints"},
           ["filtrations"], False, ASSERTION, _check_multigraded, {"filtrations": _FIL}),
    _entry("check-nilpotent", {"alpha": "rationals"}, [], True, ASSERTION, _check_nilpotent, {}),
    _entry("check-sanspente", {"section": "section"}, ["section"], True, ASSERTION, _check_sanspente,
           {"section": _SEC}),
    _entry("check-localize", {"index": "int", "alpha": "rationals"}, ["index", "alpha"], True, ASSERTION,
           _check_localize, {"index": 0, "alpha": ["-1/2"]}),
    _entry("check-compomult", {"I": "ints", "J": "ints", "alpha": "rationals"}, ["I", "J", "alpha"], True,
           ASSERTION, _check_compomult, {"I": [0], "J": [], "alpha": ["-1"]}),
    _entry("check-vcompat", {"alpha": "rationals"}, [], True, ASSERTION, _check_vcompat, {}),
    _entry("check-vnilsson", {"alpha": "rationals", "k": "ints", "beta": "rationals"}, ["alpha", "k", "beta"],
           True, ASSERTION, _check_vnilsson, {"alpha": ["-1/2"], "k": [1], "beta": ["-1/2"]}),
    _entry("check-psi-iter", {"I": "ints"}, [], True, ASSERTION, _check_psi_iter, {}),
    _entry("compare-arrows", {"full": "bool"}, [], True, ASSERTION, _compare_arrows, {}),
    _entry("compare-nils", {"alpha": "rationals", "k_max": "int"}, [], True, ASSERTION, _compare_nils, {}),
    _entry("compare-monodromy", {}, [], True, ASSERTION, _compare_monodromy, {}),
    _entry("compare-permutation", {"I": "ints"}, [], True, ASSERTION, _compare_permutation, {}),
    _entry("model-localsystem", {}, [], True, INFO, _model_localsystem, {}),
]}


def list_tasks() -> list[dict]:
    return [CATALOG[name].schema() for name in CATALOG]
