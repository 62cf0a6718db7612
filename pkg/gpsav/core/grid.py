"""
Periodic tensor-product grids and Fourier pseudo-spectral differentiation

Fields are stored flat with the x-index fastest. Internally the values are
viewed with shape ``(N_z, N_y, N_x)`` (trailing dimensions for lower ``dim``),
so spatial axis ``w`` (0 = x, 1 = y, 2 = z) is numpy axis ``-(w + 1)``. Array
helpers in this module act on the trailing ``dim`` axes, which lets the
integrator push a leading stage axis through the same code.

Nyquist convention: the first-derivative symbol zeroes the ``N/2`` mode, the
second-derivative symbol keeps it (``-(mu N/2)^2``). The two are therefore not
related by squaring at that one mode.
"""

import logging
import os
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np
import scipy.fft

from gpsav.exceptions import (
    ConfigError,
    InvalidArgumentError,
    NumericalBlowupError,
)

logger = logging.getLogger(__name__)

THREADS_ENV_VAR = "GPSAV_THREADS"


def fft_workers() -> int:
    """Number of FFT worker threads, capped by GPSAV_THREADS (default 1)"""
    raw = os.environ.get(THREADS_ENV_VAR)
    if raw is None or raw.strip() == "":
        return 1
    try:
        workers = int(raw)
    except ValueError:
        raise ConfigError(f"{THREADS_ENV_VAR} must be a positive integer, got {raw!r}")
    if workers < 1:
        raise ConfigError(f"{THREADS_ENV_VAR} must be a positive integer, got {raw!r}")
    return workers


@dataclass(frozen=True, eq=False)
class Grid:
    """Uniform periodic grid on a box [a_w, b_w) per axis"""
    dim: int
    sizes: tuple[int, ...]
    lower: tuple[float, ...]
    upper: tuple[float, ...]
    spacing: tuple[float, ...]
    coords: tuple[np.ndarray, ...] = field(repr=False)
    mu: tuple[float, ...] = field(repr=False)
    eig1: tuple[np.ndarray, ...] = field(repr=False)
    eig2: tuple[np.ndarray, ...] = field(repr=False)

    @property
    def shape(self) -> tuple[int, ...]:
        """Array shape of a field, slowest axis first"""
        return tuple(reversed(self.sizes))

    @property
    def npoints(self) -> int:
        return int(np.prod(self.sizes))

    @property
    def cell_volume(self) -> float:
        """Quadrature weight h_1 h_2 h_3 of the discrete inner product"""
        return float(np.prod(self.spacing))

    @property
    def spatial_axes(self) -> tuple[int, ...]:
        return tuple(range(-self.dim, 0))

    def axis_of(self, axis: int) -> int:
        """Numpy axis (counted from the end) holding spatial axis ``axis``"""
        if not 0 <= axis < self.dim:
            raise InvalidArgumentError(f"axis {axis} out of range for a {self.dim}D grid")
        return -(axis + 1)

    def broadcast(self, values: np.ndarray, axis: int) -> np.ndarray:
        """Reshape a per-axis 1D array so it broadcasts along ``axis``"""
        shape = [1] * self.dim
        shape[self.dim - 1 - axis] = values.shape[0]
        return values.reshape(shape)

    def broadcast_stages(self, values: np.ndarray) -> np.ndarray:
        """Reshape one scalar per stage to broadcast against (s, *shape) arrays"""
        values = np.asarray(values)
        return values.reshape(values.shape + (1,) * self.dim)

    def coordinate(self, axis: int) -> np.ndarray:
        """Physical coordinate of ``axis`` as a broadcastable array"""
        self.axis_of(axis)
        return self.broadcast(self.coords[axis], axis)

    @cached_property
    def laplacian_symbol(self) -> np.ndarray:
        """Total second-derivative eigenvalue per Fourier mode (grid-shaped, <= 0)"""
        symbol = np.zeros(self.shape)
        for axis in range(self.dim):
            symbol = symbol + self.broadcast(self.eig2[axis], axis)
        symbol.setflags(write=False)
        return symbol

    def same_as(self, other: "Grid") -> bool:
        return (
            self is other
            or (
                self.sizes == other.sizes
                and self.lower == other.lower
                and self.upper == other.upper
            )
        )


def _first_derivative_symbol(n: int, mu: float) -> np.ndarray:
    p = np.arange(n, dtype=float)
    p_tilde = np.where(p < n // 2, p, p - n)
    p_tilde[n // 2] = 0.0
    return 1j * mu * p_tilde


def _second_derivative_symbol(n: int, mu: float) -> np.ndarray:
    p = np.arange(n, dtype=float)
    p_hat = np.where(p <= n // 2, p, p - n)
    return -((mu * p_hat) ** 2)


def make_grid(
    dim: int,
    sizes: Sequence[int],
    lower: Sequence[float],
    upper: Sequence[float],
) -> Grid:
    """
    Build a periodic grid with precomputed spectral eigenvalue arrays.

    Args:
        dim: Number of spatial dimensions (1, 2 or 3)
        sizes: Points per axis, each even and at least 4
        lower: Domain lower bounds a_w
        upper: Domain upper bounds b_w

    Raises:
        InvalidArgumentError: On bad dimension, odd/small sizes or empty intervals
    """
    if dim not in (1, 2, 3):
        raise InvalidArgumentError(f"dim must be 1, 2 or 3, got {dim}")
    sizes = tuple(int(n) for n in sizes)
    lower = tuple(float(a) for a in lower)
    upper = tuple(float(b) for b in upper)
    if not (len(sizes) == len(lower) == len(upper) == dim):
        raise InvalidArgumentError(
            f"expected {dim} sizes/bounds, got {len(sizes)}/{len(lower)}/{len(upper)}"
        )
    for axis, (n, a, b) in enumerate(zip(sizes, lower, upper)):
        if n < 4 or n % 2:
            raise InvalidArgumentError(f"axis {axis}: size must be even and >= 4, got {n}")
        if not (np.isfinite(a) and np.isfinite(b)) or b <= a:
            raise InvalidArgumentError(f"axis {axis}: empty interval [{a}, {b}]")

    spacing = tuple((b - a) / n for n, a, b in zip(sizes, lower, upper))
    mu = tuple(2.0 * np.pi / (b - a) for a, b in zip(lower, upper))
    coords = tuple(a + np.arange(n) * h for n, a, h in zip(sizes, lower, spacing))
    eig1 = tuple(_first_derivative_symbol(n, m) for n, m in zip(sizes, mu))
    eig2 = tuple(_second_derivative_symbol(n, m) for n, m in zip(sizes, mu))
    for array in (*coords, *eig1, *eig2):
        array.setflags(write=False)

    grid = Grid(
        dim=dim,
        sizes=sizes,
        lower=lower,
        upper=upper,
        spacing=spacing,
        coords=coords,
        mu=mu,
        eig1=eig1,
        eig2=eig2,
    )
    logger.debug("grid %s on %s..%s, h=%s", sizes, lower, upper, spacing)
    return grid


@dataclass(frozen=True, eq=False)
class Field:
    """Complex grid function stored flat in x-fastest order"""
    grid: Grid
    data: np.ndarray = field(repr=False)

    def __post_init__(self):
        data = np.array(self.data, dtype=np.complex128).reshape(-1)
        if data.shape[0] != self.grid.npoints:
            raise InvalidArgumentError(
                f"field has {data.shape[0]} values, grid has {self.grid.npoints}"
            )
        if not np.all(np.isfinite(data)):
            raise NumericalBlowupError("field contains NaN or Inf")
        data.setflags(write=False)
        object.__setattr__(self, "data", data)

    @classmethod
    def from_array(cls, grid: Grid, values: np.ndarray) -> "Field":
        """Wrap a grid-shaped (or flat) array"""
        return cls(grid=grid, data=np.asarray(values).reshape(-1))

    @classmethod
    def zeros(cls, grid: Grid) -> "Field":
        return cls(grid=grid, data=np.zeros(grid.npoints, dtype=np.complex128))

    @property
    def values(self) -> np.ndarray:
        """Read-only grid-shaped view"""
        return self.data.reshape(self.grid.shape)

    def __len__(self) -> int:
        return self.data.shape[0]


# Array-level operators (trailing ``grid.dim`` axes are spatial)

def spectral_derivative(values: np.ndarray, grid: Grid, axis: int, order: int) -> np.ndarray:
    """Apply D_order along one spatial axis via a 1D FFT"""
    if order not in (1, 2):
        raise InvalidArgumentError(f"derivative order must be 1 or 2, got {order}")
    np_axis = grid.axis_of(axis)
    symbol = grid.eig1[axis] if order == 1 else grid.eig2[axis]
    workers = fft_workers()
    transformed = scipy.fft.fft(values, axis=np_axis, workers=workers)
    transformed *= grid.broadcast(symbol, axis)
    return scipy.fft.ifft(transformed, axis=np_axis, workers=workers)


def spectral_laplacian(values: np.ndarray, grid: Grid) -> np.ndarray:
    """Apply Delta_h with a single multi-dimensional FFT pair"""
    workers = fft_workers()
    transformed = scipy.fft.fftn(values, axes=grid.spatial_axes, workers=workers)
    transformed *= grid.laplacian_symbol
    return scipy.fft.ifftn(transformed, axes=grid.spatial_axes, workers=workers)


# Field-level operations

def deriv(field: Field, axis: int, order: int) -> Field:
    """Pseudo-spectral derivative of ``order`` (1 or 2) along ``axis``"""
    return Field.from_array(
        field.grid, spectral_derivative(field.values, field.grid, axis, order)
    )


def laplacian(field: Field) -> Field:
    """Sum of second derivatives over all axes of the grid"""
    return Field.from_array(field.grid, spectral_laplacian(field.values, field.grid))


def _check_same_grid(u: Field, v: Field) -> None:
    if not u.grid.same_as(v.grid):
        raise InvalidArgumentError("fields live on different grids")


def inner(u: Field, v: Field) -> complex:
    """Discrete inner product <u, v>_h = h1 h2 h3 sum u_j conj(v_j)"""
    _check_same_grid(u, v)
    return complex(u.grid.cell_volume * np.vdot(v.data, u.data))


def norm(u: Field) -> float:
    """Discrete L2 norm ||u||_h"""
    return float(np.sqrt(inner(u, u).real))


def max_norm(u: Field) -> float:
    """Discrete maximum norm ||u||_{inf,h}"""
    return float(np.max(np.abs(u.data)))


def lp_norm(u: Field, p: float) -> float:
    """Discrete ||u||_{p,h} = (h1 h2 h3 sum |u_j|^p)^(1/p)"""
    if p <= 0:
        raise InvalidArgumentError(f"p must be positive, got {p}")
    return float((u.grid.cell_volume * np.sum(np.abs(u.data) ** p)) ** (1.0 / p))
