"""Exact scalar tower and finite-dimensional linear algebra."""

from .field import Scalar, ScalarField, to_fraction
from .matrix import Matrix
from .serial import format_rational, format_scalar, parse_rational, parse_scalar
from .spectrum import (
    JointSpectrum,
    SpectralBlock,
    exp_nilpotent,
    joint_spectrum,
    nilpotency_degree,
    rational_roots,
)


def rank(M: Matrix) -> int:
    return M.rank()


def kernel_basis(M: Matrix) -> Matrix:
    return M.kernel()


def image_basis(M: Matrix) -> Matrix:
    return M.image()


__all__ = [
    "JointSpectrum",
    "Matrix",
    "Scalar",
    "ScalarField",
    "SpectralBlock",
    "exp_nilpotent",
    "format_rational",
    "format_scalar",
    "image_basis",
    "joint_spectrum",
    "kernel_basis",
    "nilpotency_degree",
    "parse_rational",
    "parse_scalar",
    "rank",
    "rational_roots",
    "to_fraction",
]
