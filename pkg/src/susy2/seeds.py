"""Base potentials and Schrodinger seed solutions at complex energy.

A seed is a solution u of -u'' + V u = eps1 u picked for decay at one end of
the domain. Closed forms are provided for the free particle, the one-soliton
(Poschl-Teller) well and the harmonic oscillator; arbitrary tabulated
potentials are integrated numerically. The factorization energy is kept on
the canonical branch Im(eps1) > 0; the conjugate partner energy is implicit.
"""
from __future__ import annotations

import cmath
import enum
import os
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import specfun
from .errors import (
    BlowUpError,
    ConditioningWarning,
    DegenerateEnergy,
    GridMismatch,
    NodeError,
    SeedResidualError,
)
from .grid import Grid, diff2, max_interior

DEFAULT_SEED_TOL = 1e-6


class Side(enum.Enum):
    LEFT = "left"
    RIGHT = "right"


@dataclass(frozen=True)
class ComplexEnergy:
    """Factorization energy eps1 on the canonical branch Im(eps1) > 0."""

    eps1: complex

    def __post_init__(self):
        if self.eps1.imag == 0:
            raise DegenerateEnergy("factorization energy must have Im(eps1) != 0")
        if self.eps1.imag < 0:
            raise ValueError("ComplexEnergy holds the Im > 0 branch; use .canonical()")

    @classmethod
    def canonical(cls, value: complex) -> "ComplexEnergy":
        value = complex(value)
        if value.imag < 0:
            value = value.conjugate()
        return cls(value)

    @property
    def d(self) -> float:
        return self.eps1.real

    @property
    def c(self) -> float:
        return -self.eps1.imag ** 2

    @property
    def xi(self) -> complex:
        return 1j * self.eps1.imag


def energy_from_k(k1: float, k2: float) -> ComplexEnergy:
    """eps1 = -(k1 + i k2)^2, branch-normalized to Im(eps1) > 0."""
    if k1 <= 0:
        raise ValueError(f"k1 must be positive, got {k1}")
    if k2 == 0:
        raise DegenerateEnergy("k2 = 0 gives a real factorization energy")
    return ComplexEnergy.canonical(-((k1 + 1j * k2) ** 2))


def wavenumber(energy: ComplexEnergy) -> complex:
    """Complex k with eps1 = -k^2 and Re k > 0 (sets the decay rate)."""
    k = cmath.sqrt(-energy.eps1)
    return k if k.real > 0 else -k


# ---------------------------------------------------------------------------
# potentials


class Potential:
    def sample(self, grid: Grid) -> np.ndarray:
        raise NotImplementedError


@dataclass(frozen=True)
class FreePotential(Potential):
    def sample(self, grid):
        return np.zeros(grid.n)


@dataclass(frozen=True)
class PoschlTellerPotential(Potential):
    """One-soliton well V(x) = -2 k0^2 sech^2(k0 x)."""

    k0: float

    def __post_init__(self):
        if self.k0 <= 0:
            raise ValueError(f"k0 must be positive, got {self.k0}")

    def sample(self, grid):
        return -2 * self.k0 ** 2 / np.cosh(self.k0 * grid.x) ** 2


@dataclass(frozen=True)
class OscillatorPotential(Potential):
    """V(x) = x^2 (units 2m = hbar = 1, quadratic coefficient fixed)."""

    def sample(self, grid):
        return grid.x ** 2


@dataclass(frozen=True)
class TabulatedPotential(Potential):
    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.shape != (self.grid.n,):
            raise ValueError("tabulated samples do not match their grid")
        if not np.all(np.isfinite(v)):
            raise ValueError("tabulated potential contains NaN or Inf")
        object.__setattr__(self, "values", v)

    def sample(self, grid):
        g = self.grid
        if (grid.n != g.n or abs(grid.x_min - g.x_min) > 1e-9 * g.h
                or abs(grid.x_max - g.x_max) > 1e-9 * g.h):
            raise GridMismatch("tabulated potential is aligned to a different grid")
        return self.values.copy()


def load_potential_table(text: str) -> TabulatedPotential:
    """Parse a two-column (x, V) table; '#' starts a comment."""
    xs, vs = [], []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ValueError(f"line {lineno}: expected two columns, got {len(parts)}")
        try:
            x, v = float(parts[0]), float(parts[1])
        except ValueError as exc:
            raise ValueError(f"line {lineno}: {exc}") from None
        if not (np.isfinite(x) and np.isfinite(v)):
            raise ValueError(f"line {lineno}: non-finite entry")
        xs.append(x)
        vs.append(v)
    if len(xs) < 16:
        raise ValueError(f"table has {len(xs)} rows; at least 16 required")
    xs = np.array(xs)
    h = (xs[-1] - xs[0]) / (len(xs) - 1)
    if h <= 0:
        raise ValueError("x column must be strictly increasing")
    expected = xs[0] + h * np.arange(len(xs))
    if np.max(np.abs(xs - expected)) > 1e-9 * h:
        raise ValueError("x column is not a uniform grid")
    grid = Grid(float(xs[0]), float(xs[-1]), len(xs))
    return TabulatedPotential(grid, np.array(vs))


# ---------------------------------------------------------------------------
# seed functions


@dataclass(frozen=True)
class SeedFunction:
    """Samples of u and u' on a grid, tagged with the decay side.

    Construction validates nodelessness (min |u| > 0) and the finite
    difference Schrodinger residual against the potential samples ``v``.
    The residual coefficient defaults to 1e-6 and can be overridden through
    the SUSY2_SEED_TOL environment variable.
    """

    grid: Grid
    u: np.ndarray
    du: np.ndarray
    decay_side: Side
    energy: ComplexEnergy
    v: np.ndarray
    end_flatness: float | None = field(default=None, compare=False)

    def __post_init__(self):
        for name in ("u", "du"):
            arr = np.asarray(getattr(self, name), dtype=complex)
            if arr.shape != (self.grid.n,):
                raise ValueError(f"{name} has wrong length")
            if not np.all(np.isfinite(arr.view(float))):
                raise ValueError(f"{name} contains NaN or Inf")
            object.__setattr__(self, name, arr)
        object.__setattr__(self, "v", np.asarray(self.v, dtype=float))
        if np.min(np.abs(self.u)) <= 0.0:
            raise NodeError("seed solution has a node on the grid")
        tol_coef = float(os.environ.get("SUSY2_SEED_TOL", DEFAULT_SEED_TOL))
        resid = -diff2(self.u, self.grid.h) + (self.v - self.energy.eps1) * self.u
        bound = tol_coef * np.max(np.abs(self.u)) * (1 + abs(self.energy.eps1))
        worst = max_interior(resid)
        if worst > bound:
            raise SeedResidualError(
                f"seed residual {worst:.3e} exceeds tolerance {bound:.3e}")

    @property
    def abs_u_sq(self) -> np.ndarray:
        return self.u.real ** 2 + self.u.imag ** 2


def _warn_if_flat_decay(k: complex, grid: Grid):
    if 2 * k.real * (grid.x_max - grid.x_min) < 1:
        warnings.warn(
            "decay rate 2*Re(k)*(x_max - x_min) < 1: the Wronskian is nearly "
            "flat and the transformation is ill-conditioned",
            ConditioningWarning, stacklevel=3)


def _free_samples(eps: complex, side: Side, grid: Grid):
    k = cmath.sqrt(-eps)
    if k.real < 0:
        k = -k
    sgn = 1.0 if side is Side.LEFT else -1.0
    u = np.exp(sgn * k * grid.x)
    return u, sgn * k * u, k


def free_seed(energy: ComplexEnergy, side: Side, grid: Grid) -> SeedFunction:
    """Exponential seed of the null potential, decaying at the chosen end."""
    u, du, k = _free_samples(energy.eps1, side, grid)
    _warn_if_flat_decay(k, grid)
    return SeedFunction(grid, u, du, side, energy, np.zeros(grid.n))


def _poschl_teller_samples(k0: float, eps: complex, side: Side, grid: Grid):
    k = cmath.sqrt(-eps)
    if k.real < 0:
        k = -k
    x = grid.x
    th = np.tanh(k0 * x)
    sech2 = 1 / np.cosh(k0 * x) ** 2
    sgn = 1.0 if side is Side.LEFT else -1.0
    # upper signs decay at -inf, lower at +inf
    bracket = k0 * th - sgn * k
    e = np.exp(sgn * k * x)
    u = e * bracket
    du = e * (k0 ** 2 * sech2 + sgn * k * bracket)
    return u, du, k


def poschl_teller_seed(k0: float, energy: ComplexEnergy, side: Side, grid: Grid) -> SeedFunction:
    """One-soliton seed: the 1-SUSY image of the free exponentials."""
    if k0 <= 0:
        raise ValueError(f"k0 must be positive, got {k0}")
    u, du, k = _poschl_teller_samples(k0, energy.eps1, side, grid)
    _warn_if_flat_decay(k, grid)
    v = PoschlTellerPotential(k0).sample(grid)
    return SeedFunction(grid, u, du, side, energy, v)


def _oscillator_samples(eps: complex, nu_sign: int, grid: Grid):
    a1 = (1 - eps) / 4
    a2 = (3 - eps) / 4
    ratio = specfun.gamma(a2) / specfun.gamma(a1)
    x = grid.x
    z = x * x
    m1 = specfun.kummer_series(a1, 0.5, z)
    m2 = specfun.kummer_series(a2, 1.5, z)
    m1p = (a1 / 0.5) * specfun.kummer_series(a1 + 1, 1.5, z)
    m2p = (a2 / 1.5) * specfun.kummer_series(a2 + 1, 2.5, z)
    bracket = m1 + 2 * nu_sign * x * ratio * m2
    dbracket = 2 * x * m1p + 2 * nu_sign * ratio * (m2 + 2 * x * x * m2p)
    gauss = np.exp(-z / 2)
    u = gauss * bracket
    du = gauss * (dbracket - x * bracket)
    return u, du


def oscillator_seed(energy: ComplexEnergy, nu_sign: int, grid: Grid) -> SeedFunction:
    """Oscillator seed built from Kummer functions; nu = +1 decays at -inf,
    nu = -1 at +inf."""
    if nu_sign not in (+1, -1):
        raise ValueError(f"nu_sign must be +1 or -1, got {nu_sign}")
    if max(abs(grid.x_min), abs(grid.x_max)) > 10:
        raise ValueError("oscillator seed supports |x| <= 10 (series domain)")
    u, du = _oscillator_samples(energy.eps1, nu_sign, grid)
    side = Side.LEFT if nu_sign == +1 else Side.RIGHT
    v = OscillatorPotential().sample(grid)
    return SeedFunction(grid, u, du, side, energy, v)


def _lagrange_midpoint(v: np.ndarray, i: int, forward: bool) -> float:
    """Cubic interpolation of tabulated v at the half step beside node i."""
    n = len(v)
    j = min(max((i - 1) if forward else (i - 2), 0), n - 4)
    xm = (i + 0.5) if forward else (i - 0.5)  # in index units
    xs = np.arange(j, j + 4, dtype=float)
    out = 0.0
    for p in range(4):
        lag = 1.0
        for q in range(4):
            if p != q:
                lag *= (xm - xs[q]) / (xs[p] - xs[q])
        out += v[j + p] * lag
    return out


def numeric_seed(potential: TabulatedPotential, energy: ComplexEnergy,
                 side: Side, grid: Grid) -> SeedFunction:
    """Integrate the seed from the decay end inward with fixed-step RK4.

    The start values follow the WKB decaying asymptote u'/u = +-sqrt(V - eps);
    the result is rescaled to max |u| = 1. Half-step potential values come
    from cubic Lagrange interpolation of the table.
    """
    if not isinstance(potential, TabulatedPotential):
        raise TypeError("numeric_seed integrates tabulated potentials")
    v = potential.sample(grid)
    eps = energy.eps1
    h = grid.h
    n = grid.n

    u = np.zeros(n, dtype=complex)
    du = np.zeros(n, dtype=complex)
    if side is Side.LEFT:
        start, step, order = 0, h, range(0, n - 1)
        flat = abs(v[0] - v[min(10, n - 1)])
    else:
        start, step, order = n - 1, -h, range(n - 1, 0, -1)
        flat = abs(v[-1] - v[max(n - 11, 0)])
    kappa = cmath.sqrt(v[start] - eps)
    if kappa.real < 0:
        kappa = -kappa
    _warn_if_flat_decay(kappa, grid)
    u[start] = 1.0
    du[start] = kappa if side is Side.LEFT else -kappa

    for i in order:
        j = i + (1 if side is Side.LEFT else -1)
        vm = _lagrange_midpoint(v, i, side is Side.LEFT)
        y0, y1 = u[i], du[i]
        k1a, k1b = y1, (v[i] - eps) * y0
        k2a = y1 + 0.5 * step * k1b
        k2b = (vm - eps) * (y0 + 0.5 * step * k1a)
        k3a = y1 + 0.5 * step * k2b
        k3b = (vm - eps) * (y0 + 0.5 * step * k2a)
        k4a = y1 + step * k3b
        k4b = (v[j] - eps) * (y0 + step * k3a)
        u[j] = y0 + step / 6 * (k1a + 2 * k2a + 2 * k3a + k4a)
        du[j] = y1 + step / 6 * (k1b + 2 * k2b + 2 * k3b + k4b)
        if abs(u[j]) > 1e150:
            raise BlowUpError(f"|u| exceeded 1e150 at x={grid.x[j]:g}")

    scale = np.max(np.abs(u))
    u /= scale
    du /= scale
    if np.min(np.abs(u)) < 1e-12:
        raise NodeError("numeric seed dipped below 1e-12 of its maximum")
    return SeedFunction(grid, u, du, side, energy, v, end_flatness=float(flat))


def build_seed(potential: Potential, energy: ComplexEnergy, grid: Grid,
               side: Side | None = None, nu_sign: int | None = None) -> SeedFunction:
    """Dispatch seed construction for a potential model."""
    if isinstance(potential, OscillatorPotential):
        if nu_sign is None:
            if side is None:
                raise ValueError("oscillator seed needs nu_sign or side")
            nu_sign = +1 if side is Side.LEFT else -1
        return oscillator_seed(energy, nu_sign, grid)
    if nu_sign is not None:
        raise ValueError("nu_sign only selects oscillator seeds; use side")
    if side is None:
        raise ValueError("decay side required")
    if isinstance(potential, FreePotential):
        return free_seed(energy, side, grid)
    if isinstance(potential, PoschlTellerPotential):
        return poschl_teller_seed(potential.k0, energy, side, grid)
    if isinstance(potential, TabulatedPotential):
        return numeric_seed(potential, energy, side, grid)
    raise TypeError(f"unsupported potential {type(potential).__name__}")
