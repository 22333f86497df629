"""One record collecting every comparison verdict for a module."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..ncmod.lattice import LatticeModule
from ..ncmod.vfilt import default_window, field_order, psi_alg
from .complexes import compgrad_arrows, cube_complex, DAGGER, DR, SHARP, renumbering
from .monodromy import calibrate, jordan_comparison, monodromy_commutation
from .nils import nils_map
from .permutation import permutation_independence_all


def jordan_to_json(data) -> list:
    """(eigenvalue exponents, partitions per index, dim) triples as plain lists."""
    return [{"q": [str(x) for x in q], "partitions": [list(p) for p in parts], "dim": d} for q, parts, d in data]


def _dims(wc) -> dict:
    return {str(m): d for m, d in sorted(wc.dims().items())}


@dataclass
class ComparisonReport:
    module: str
    arrows: list
    verdicts: dict
    dims: dict
    jordan_data: dict
    windows: dict
    calibration_sign: int
    renumbering: dict = field(default_factory=dict)
    nils: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(a["quasi_iso"] for a in self.arrows) and all(self.verdicts.values())

    def to_dict(self) -> dict:
        return {"module": self.module, "arrows": self.arrows, "verdicts": self.verdicts, "dims": self.dims,
                "jordan_data": self.jordan_data, "windows": self.windows,
                "calibration_sign": self.calibration_sign, "renumbering": self.renumbering,
                "nils": self.nils, "ok": self.ok}


def comparison_report(M: LatticeModule, window: int | None = None, permutations: bool = True) -> ComparisonReport:
    W = window if window is not None else default_window(M)
    cal = calibrate()
    arrows = compgrad_arrows(M, W)
    dims = {kind: _dims(cube_complex(M, kind, arrows["window"])) for kind in (SHARP, DAGGER, DR)}
    nils = [nils_map(M, pc.alpha).to_dict() for pc in psi_alg(M, field_order(M))]
    mono = monodromy_commutation(M, W)
    jc = jordan_comparison(M)
    verdicts = {"nils_quasi_iso": all(n["quasi_iso"] for n in nils), "monodromy_commutes": mono.ok,
                "jordan_matches_model": jc.ok}
    if permutations:
        verdicts["permutation_independent"] = permutation_independence_all(M, W).ok
    return ComparisonReport(
        module=M.describe(),
        arrows=[a.to_dict() for a in arrows["arrows"]],
        verdicts=verdicts,
        dims=dims,
        jordan_data={"psi": jordan_to_json(jc.details["psi"]),
                     "model": jordan_to_json(jc.details["model"])},
        windows={"arrows": arrows["window"], "monodromy": mono.details["arrows"]["window"]},
        calibration_sign=cal.sign,
        renumbering={"".join(map(str, k)): list(v) for k, v in renumbering(M.p).items()},
        nils=nils,
    )
