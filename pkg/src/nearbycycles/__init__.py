"""Exact nearby cycles for lattice-graded modules with commuting residues."""

from .errors import (IncompatibleFiltrations, InvalidHypercomplex, NearbyCyclesError, NonCommuting,
                     NotAChainMap, WindowTooSmall)
from .ncmod.lattice import LatticeModule, O_loc, Section, direct_sum, lattice, nilsson, tensor, tensor_nilsson
from .scalars.field import ScalarField
from .scalars.matrix import Matrix

__all__ = [
    "IncompatibleFiltrations", "InvalidHypercomplex", "NearbyCyclesError", "NonCommuting", "NotAChainMap",
    "WindowTooSmall", "LatticeModule", "O_loc", "Section", "direct_sum", "lattice", "nilsson", "tensor",
    "tensor_nilsson", "ScalarField", "Matrix",
]
__version__ = "0.1.0"
