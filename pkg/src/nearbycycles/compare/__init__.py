"""Comparison complexes, the Nils map, monodromy and order independence."""

from .complexes import (DAGGER, DR, SHARP, adapted, adapted_two_step, compgrad_arrows, cube_complex, i_dagger,
                        i_sharp, relative_dr, renumbering)
from .monodromy import calibrate, jordan_comparison, local_system_model, monodromy_commutation
from .nils import nils_level, nils_map
from .permutation import permutation_independence, permutation_independence_all
from .report import ComparisonReport, comparison_report

__all__ = [
    "DAGGER", "DR", "SHARP", "adapted", "adapted_two_step", "compgrad_arrows", "cube_complex", "i_dagger",
    "i_sharp", "relative_dr", "renumbering", "calibrate", "jordan_comparison", "local_system_model",
    "monodromy_commutation", "nils_level", "nils_map", "permutation_independence",
    "permutation_independence_all", "ComparisonReport", "comparison_report",
]
