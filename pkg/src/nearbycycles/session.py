"""Session files: JSON documents naming modules and the tasks to run on them.

    {
      "schema": "v1",
      "field": "auto",                      # or {"cyclotomic_order": 6}
      "modules": [
        {"id": "O", "kind": "O_loc", "p": 1},
        {"id": "N", "kind": "nilsson", "alpha": ["-1/2"], "k": [1]},
        {"id": "ON", "kind": "tensor", "of": ["O", "N"]},
        {"id": "L", "kind": "lattice", "p": 1, "rank": 2, "residues": [[["0", "1"], ["0", "0"]]]}
      ],
      "tasks": [{"name": "bpoly", "module": "O", "params": {...}, "window": 4}]
    }
"""

from __future__ import annotations

import difflib
import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Any, Mapping

from .errors import NearbyCyclesError
from .ncmod import lattice as L
from .scalars.matrix import Matrix
from .scalars.serial import parse_rational

SCHEMA = "v1"


class SessionError(ValueError):
    """Malformed session input (exit status 2)."""


@dataclass(frozen=True)
class TaskSpec:
    index: int
    name: str
    module: str | None
    params: Mapping[str, Any]
    window: int | None = None


@dataclass
class Session:
    modules: dict[str, L.LatticeModule]
    tasks: list[TaskSpec]
    order: int
    requested_order: Any = "auto"
    raw: Mapping = field(default_factory=dict)


def rational(x, what: str = "value") -> Fraction:
    try:
        return parse_rational(x)
    except ValueError as exc:
        raise SessionError(f"{what}: {exc}") from None


def rationals(xs, what: str) -> tuple[Fraction, ...]:
    if not isinstance(xs, list):
        raise SessionError(f"{what} must be a list")
    return tuple(rational(x, what) for x in xs)


def integers(xs, what: str) -> tuple[int, ...]:
    if not isinstance(xs, list) or not all(isinstance(x, int) and not isinstance(x, bool) for x in xs):
        raise SessionError(f"{what} must be a list of integers")
    return tuple(xs)


def matrix(rows, what: str = "matrix", ncols: int | None = None) -> Matrix:
    if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
        raise SessionError(f"{what} must be a list of rows")
    try:
        return Matrix([[rational(x, what) for x in r] for r in rows], ncols=ncols)
    except ValueError as exc:
        raise SessionError(f"{what}: {exc}") from None


def columns(vectors, ambient: int, what: str) -> Matrix:
    """A list of column vectors as a matrix with ``ambient`` rows."""
    if not isinstance(vectors, list):
        raise SessionError(f"{what} must be a list of vectors")
    if not vectors:
        return Matrix.zeros(ambient, 0)
    cols = [[rational(x, what) for x in v] for v in vectors]
    if any(len(c) != ambient for c in cols):
        raise SessionError(f"{what}: vectors must have length {ambient}")
    return Matrix.from_columns(cols, nrows=ambient)


# -- modules -----------------------------------------------------------------------------


MODULE_KINDS = ("O_loc", "nilsson", "tensor", "direct_sum", "lattice")


def _keys(rec: Mapping, allowed: set, what: str):
    extra = set(rec) - allowed
    if extra:
        raise SessionError(f"{what}: unknown field(s) {sorted(extra)}")


def build_module(rec, known: Mapping[str, L.LatticeModule]) -> L.LatticeModule:
    if isinstance(rec, str):
        if rec not in known:
            raise SessionError(f"unknown module {rec!r}")
        return known[rec]
    if not isinstance(rec, dict) or "kind" not in rec:
        raise SessionError(f"module description needs a 'kind': {rec!r}")
    kind = rec["kind"]
    what = f"module {rec.get('id', kind)}"
    try:
        if kind == "O_loc":
            _keys(rec, {"id", "kind", "p"}, what)
            p = rec.get("p", 1)
            if not isinstance(p, int) or p < 1:
                raise SessionError(f"{what}: p must be a positive integer")
            return L.O_loc(p)
        if kind == "nilsson":
            _keys(rec, {"id", "kind", "alpha", "k"}, what)
            alpha = rationals(rec.get("alpha"), f"{what}.alpha")
            k = integers(rec.get("k"), f"{what}.k")
            if len(alpha) != len(k):
                raise SessionError(f"{what}: alpha and k differ in length")
            return L.nilsson(alpha, k)
        if kind in ("tensor", "direct_sum"):
            _keys(rec, {"id", "kind", "of"}, what)
            parts = rec.get("of")
            if not isinstance(parts, list) or not parts:
                raise SessionError(f"{what}: 'of' must be a nonempty list")
            mods = [build_module(x, known) for x in parts]
            if kind == "direct_sum":
                return L.direct_sum(*mods)
            out = mods[0]
            for m in mods[1:]:
                out = L.tensor(out, m)
            return out
        if kind == "lattice":
            _keys(rec, {"id", "kind", "p", "rank", "residues", "labels", "name"}, what)
            res = rec.get("residues")
            if not isinstance(res, list) or not res:
                raise SessionError(f"{what}: residues must be a nonempty list of matrices")
            M = L.lattice([matrix(r, f"{what}.residues") for r in res], rec.get("labels", ()),
                          rec.get("name", rec.get("id", "")))
            if rec.get("p", M.p) != M.p or rec.get("rank", M.rank) != M.rank:
                raise SessionError(f"{what}: p/rank disagree with the residues")
            return M
    except (NearbyCyclesError, ValueError) as exc:
        if isinstance(exc, SessionError):
            raise
        raise SessionError(f"{what}: {exc}") from None
    raise SessionError(f"{what}: unknown kind {kind!r}{_suggest(kind, MODULE_KINDS)}")


def _suggest(word: str, options) -> str:
    close = difflib.get_close_matches(str(word), list(options), n=1)
    return f" (did you mean {close[0]!r}?)" if close else ""


# -- session ------------------------------------------------------------------------------


def _rationals_in(obj) -> list[Fraction]:
    """Every string that reads as a rational inside task parameters named alpha/beta."""
    out = []
    if isinstance(obj, dict):
        for key, val in obj.items():
            if key in ("alpha", "beta") and isinstance(val, list):
                out.extend(rational(x, key) for x in val)
            else:
                out.extend(_rationals_in(val))
    elif isinstance(obj, list):
        for x in obj:
            out.extend(_rationals_in(x))
    return out


def parse_task(rec, index: int, modules: Mapping[str, L.LatticeModule]) -> TaskSpec:
    from .tasks import CATALOG, validate_params

    if not isinstance(rec, dict) or "name" not in rec:
        raise SessionError(f"task {index}: needs a 'name'")
    _keys(rec, {"name", "module", "params", "window"}, f"task {index}")
    name = rec["name"]
    if name not in CATALOG:
        raise SessionError(f"task {index}: unknown task {name!r}{_suggest(name, CATALOG)}")
    entry = CATALOG[name]
    module = rec.get("module")
    if entry.needs_module:
        if module is None:
            raise SessionError(f"task {index} ({name}): needs a module")
        if not isinstance(module, str):
            raise SessionError(f"task {index} ({name}): module must be an id")
        if module not in modules:
            raise SessionError(f"task {index} ({name}): unknown module {module!r}{_suggest(module, modules)}")
    elif module is not None:
        raise SessionError(f"task {index} ({name}): takes no module")
    params = rec.get("params", {})
    if not isinstance(params, dict):
        raise SessionError(f"task {index} ({name}): params must be an object")
    validate_params(entry, params, f"task {index} ({name})")
    window = rec.get("window")
    if window is not None and (not isinstance(window, int) or isinstance(window, bool) or window < 0):
        raise SessionError(f"task {index} ({name}): window must be a nonnegative integer")
    return TaskSpec(index, name, module, params, window)


def parse_session(data) -> Session:
    if isinstance(data, (str, bytes)):
        try:
            data = json.loads(data)
        except json.JSONDecodeError as exc:
            raise SessionError(f"not valid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise SessionError("a session is a JSON object")
    _keys(data, {"schema", "field", "modules", "tasks"}, "session")
    schema = data.get("schema", SCHEMA)
    if schema != SCHEMA:
        raise SessionError(f"unsupported schema {schema!r}")
    modules: dict[str, L.LatticeModule] = {}
    recs = data.get("modules", [])
    if not isinstance(recs, list):
        raise SessionError("modules must be a list")
    for j, rec in enumerate(recs):
        if not isinstance(rec, dict) or not isinstance(rec.get("id"), str):
            raise SessionError(f"module {j}: needs a string 'id'")
        if rec["id"] in modules:
            raise SessionError(f"module id {rec['id']!r} used twice")
        modules[rec["id"]] = build_module(rec, modules)
    trecs = data.get("tasks", [])
    if not isinstance(trecs, list):
        raise SessionError("tasks must be a list")
    tasks = [parse_task(rec, j, modules) for j, rec in enumerate(trecs)]

    dens = [M.exponent_denominators for M in modules.values()]
    dens += [q.denominator for q in _rationals_in(trecs)]
    auto = lcm(1, *dens)
    requested = data.get("field", "auto")
    if isinstance(requested, dict):
        _keys(requested, {"cyclotomic_order"}, "field")
        requested = requested.get("cyclotomic_order", "auto")
    if requested == "auto":
        order = auto
    elif isinstance(requested, int) and not isinstance(requested, bool) and requested > 0:
        if requested % auto:
            raise SessionError(f"cyclotomic order {requested} is not a multiple of the required {auto}")
        order = requested
    else:
        raise SessionError(f"field must be 'auto' or a positive cyclotomic order, got {requested!r}")
    return Session(modules, tasks, order, requested, data)
