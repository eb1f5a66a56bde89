"""Noncommutative BV integration over contractible Frobenius algebras."""

from .series import TruncatedHSeries
from .frobenius import DgFrobeniusAlgebra, hodge_for, matrix_algebra, tensor_algebras, validate, xi_algebra
from .cyclic_words import LambdaElement, odd_power_potential, parse_lambda, qme_residual, xi_line_space
from .bv_integration import matrix_pairing_series, pairing_series

__all__ = [
    "TruncatedHSeries",
    "DgFrobeniusAlgebra",
    "hodge_for",
    "matrix_algebra",
    "tensor_algebras",
    "validate",
    "xi_algebra",
    "LambdaElement",
    "odd_power_potential",
    "parse_lambda",
    "qme_residual",
    "xi_line_space",
    "matrix_pairing_series",
    "pairing_series",
]
