"""Uniform grids, sampled functions and finite-difference stencils.

All functions in the package live on a shared uniform grid. Derivatives used
in *checks* are 4th-order central stencils; the two points nearest each edge
use one-sided formulas and are excluded from residual norms (EDGE_PAD).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import GridMismatch

# points per edge whose stencils are one-sided, excluded from residual norms
EDGE_PAD = 2


@dataclass(frozen=True)
class Grid:
    """Uniform sampling of [x_min, x_max] with n points."""

    x_min: float
    x_max: float
    n: int
    x: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.n < 16:
            raise ValueError(f"grid needs at least 16 points, got {self.n}")
        if not self.x_min < self.x_max:
            raise ValueError(f"empty grid range [{self.x_min}, {self.x_max}]")
        object.__setattr__(self, "x", np.linspace(self.x_min, self.x_max, self.n))

    @property
    def h(self) -> float:
        return (self.x_max - self.x_min) / (self.n - 1)

    def interior(self, pad: int = EDGE_PAD):
        return slice(pad, self.n - pad)


def _check_values(grid, values):
    values = np.asarray(values)
    if values.shape != (grid.n,):
        raise ValueError(f"expected {grid.n} samples, got shape {values.shape}")
    if not np.all(np.isfinite(values)):
        raise ValueError("samples contain NaN or Inf")
    return values


@dataclass(frozen=True)
class RealFunctionSamples:
    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "values", _check_values(self.grid, self.values).astype(float))


@dataclass(frozen=True)
class ComplexFunctionSamples:
    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "values", _check_values(self.grid, self.values).astype(complex))


def same_grid(*objs):
    """Return the common grid of samples/seeds, raising GridMismatch otherwise."""
    grids = [o.grid for o in objs]
    g0 = grids[0]
    for g in grids[1:]:
        if (g.x_min, g.x_max, g.n) != (g0.x_min, g0.x_max, g0.n):
            raise GridMismatch(f"grids differ: {g0} vs {g}")
    return g0


def diff1(values: np.ndarray, h: float) -> np.ndarray:
    """First derivative, 4th-order central; one-sided 4th-order at the edges."""
    f = np.asarray(values)
    g = np.empty_like(f)
    g[2:-2] = (f[:-4] - 8 * f[1:-3] + 8 * f[3:-1] - f[4:]) / (12 * h)
    g[0] = (-25 * f[0] + 48 * f[1] - 36 * f[2] + 16 * f[3] - 3 * f[4]) / (12 * h)
    g[1] = (-3 * f[0] - 10 * f[1] + 18 * f[2] - 6 * f[3] + f[4]) / (12 * h)
    g[-2] = (3 * f[-1] + 10 * f[-2] - 18 * f[-3] + 6 * f[-4] - f[-5]) / (12 * h)
    g[-1] = (25 * f[-1] - 48 * f[-2] + 36 * f[-3] - 16 * f[-4] + 3 * f[-5]) / (12 * h)
    return g


def diff1_hi(values: np.ndarray, h: float) -> np.ndarray:
    """First derivative, 6th-order central; falls back to diff1 at the edges.

    Used by residual checks whose tolerances sit below 4th-order truncation
    on sharp (grid-resolved) features; the three points nearest each edge
    carry lower-order values.
    """
    f = np.asarray(values)
    g = diff1(f, h)
    g[3:-3] = (-f[:-6] + 9 * f[1:-5] - 45 * f[2:-4]
               + 45 * f[4:-2] - 9 * f[5:-1] + f[6:]) / (60 * h)
    return g


def diff2(values: np.ndarray, h: float) -> np.ndarray:
    """Second derivative, 4th-order central; lower-order one-sided at the edges."""
    f = np.asarray(values)
    g = np.empty_like(f)
    h2 = h * h
    g[2:-2] = (-f[:-4] + 16 * f[1:-3] - 30 * f[2:-2] + 16 * f[3:-1] - f[4:]) / (12 * h2)
    g[0] = (2 * f[0] - 5 * f[1] + 4 * f[2] - f[3]) / h2
    g[1] = (f[0] - 2 * f[1] + f[2]) / h2
    g[-2] = (f[-1] - 2 * f[-2] + f[-3]) / h2
    g[-1] = (2 * f[-1] - 5 * f[-2] + 4 * f[-3] - f[-4]) / h2
    return g


def trapezoid(values: np.ndarray, h: float) -> float:
    """Trapezoidal quadrature with exact (fsum) accumulation, ascending index."""
    f = np.asarray(values, dtype=float)
    s = math.fsum(f[1:-1])
    return h * (s + 0.5 * (f[0] + f[-1]))


def max_interior(values: np.ndarray, pad: int = EDGE_PAD) -> float:
    """Max-norm over the grid interior."""
    return float(np.max(np.abs(np.asarray(values)[pad:-pad])))
