"""
Gauss collocation Butcher tableaux, generated at runtime
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from numpy.polynomial import Legendre, Polynomial
from numpy.polynomial.polynomial import polyfromroots

from gpsav.exceptions import InvalidArgumentError

MAX_STAGES = 5


@dataclass(frozen=True, eq=False)
class ButcherTableau:
    """Coefficients (A, b, c) of an s-stage Runge-Kutta method"""
    s: int
    a: np.ndarray
    b: np.ndarray
    c: np.ndarray

    def __post_init__(self):
        a = np.array(self.a, dtype=float)
        b = np.array(self.b, dtype=float)
        c = np.array(self.c, dtype=float)
        if a.shape != (self.s, self.s) or b.shape != (self.s,) or c.shape != (self.s,):
            raise InvalidArgumentError(
                f"tableau shapes {a.shape}, {b.shape}, {c.shape} do not match s={self.s}"
            )
        for name, array in (("a", a), ("b", b), ("c", c)):
            array.setflags(write=False)
            object.__setattr__(self, name, array)

    @property
    def order(self) -> int:
        return 2 * self.s

    def symplectic_residual(self) -> float:
        """max |b_i a_ij + b_j a_ji - b_i b_j|"""
        weighted = self.b[:, None] * self.a
        return float(np.max(np.abs(weighted + weighted.T - np.outer(self.b, self.b))))

    def to_dict(self) -> dict:
        return {
            "s": self.s,
            "a": self.a.tolist(),
            "b": self.b.tolist(),
            "c": self.c.tolist(),
        }


@dataclass(frozen=True)
class OrderReport:
    """Residuals of the simplifying conditions B(2s), C(s) and symplecticity"""
    quadrature_residual: float
    collocation_residual: float
    symplectic_residual: float
    tolerance: float = 1e-12

    @property
    def max_residual(self) -> float:
        return max(self.quadrature_residual, self.collocation_residual, self.symplectic_residual)

    @property
    def passed(self) -> bool:
        return self.max_residual <= self.tolerance


def _shifted_legendre_roots(s: int) -> np.ndarray:
    # Newton on P_s(2x - 1) from Chebyshev points
    legendre = Legendre.basis(s, domain=[0.0, 1.0])
    slope = legendre.deriv()
    k = np.arange(1, s + 1)
    x = 0.5 - 0.5 * np.cos((2 * k - 1) * np.pi / (2 * s))
    for _ in range(100):
        delta = legendre(x) / slope(x)
        x = x - delta
        if np.max(np.abs(delta)) <= 1e-16:
            break
    # one extra polish step
    x = x - legendre(x) / slope(x)
    return np.sort(x)


def _lagrange_basis(nodes: np.ndarray, j: int) -> Polynomial:
    others = np.delete(nodes, j)
    return Polynomial(polyfromroots(others)) / np.prod(nodes[j] - others)


@lru_cache(maxsize=None)
def gauss_tableau(s: int) -> ButcherTableau:
    """
    s-stage Gauss collocation method (order 2s).

    Nodes are the roots of the shifted Legendre polynomial, weights the
    Gauss-Legendre weights on [0, 1], and a_ij the exact integrals of the
    Lagrange basis polynomials from 0 to c_i.

    Raises:
        InvalidArgumentError: If s is outside 1..5
    """
    if not isinstance(s, (int, np.integer)) or not 1 <= s <= MAX_STAGES:
        raise InvalidArgumentError(f"stage count must be in 1..{MAX_STAGES}, got {s}")
    s = int(s)
    c = _shifted_legendre_roots(s)

    # Gauss weights from the derivative of P_s on [-1, 1], mapped to [0, 1]
    t = 2.0 * c - 1.0
    dp = Legendre.basis(s).deriv()(t)
    b = 1.0 / ((1.0 - t**2) * dp**2)

    a = np.empty((s, s))
    for j in range(s):
        antiderivative = _lagrange_basis(c, j).integ(lbnd=0.0)
        a[:, j] = antiderivative(c)

    return ButcherTableau(s=s, a=a, b=b, c=c)


def verify_order_conditions(tab: ButcherTableau, tolerance: float = 1e-12) -> OrderReport:
    """
    Check B(2s): sum b_i c_i^(k-1) = 1/k, k = 1..2s, and
    C(s): sum_j a_ij c_j^(k-1) = c_i^k / k, k = 1..s.
    """
    s = tab.s
    quadrature = max(
        abs(float(np.sum(tab.b * tab.c ** (k - 1))) - 1.0 / k) for k in range(1, 2 * s + 1)
    )
    collocation = max(
        float(np.max(np.abs(tab.a @ tab.c ** (k - 1) - tab.c**k / k))) for k in range(1, s + 1)
    )
    return OrderReport(
        quadrature_residual=quadrature,
        collocation_residual=collocation,
        symplectic_residual=tab.symplectic_residual(),
        tolerance=tolerance,
    )
