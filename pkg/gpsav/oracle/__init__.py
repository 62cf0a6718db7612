"""
Brute-force reference implementations for tiny grids
"""

from gpsav.oracle.dense import (
    DenseOperator,
    assemble_dense,
    dense_laplacian,
    dense_lz,
    dense_step,
    pade_propagator,
)
from gpsav.oracle.quadrature import IntegrandSpec, QuadratureResult, quadrature_oracle

__all__ = [
    "DenseOperator",
    "assemble_dense",
    "dense_laplacian",
    "dense_lz",
    "dense_step",
    "pade_propagator",
    "IntegrandSpec",
    "QuadratureResult",
    "quadrature_oracle",
]
