"""Independent numerical certification of a transformation.

Residual checks re-derive every differential identity by finite differences
(never reusing the analytic derivatives that built the transform), evaluated
on the grid interior. Spectra are certified with a Numerov shooting solver:
node counts bracket each level, bisection on the two-sided matching mismatch
pins it down.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import TransformResult, apply_A, apply_A1, apply_A1_minus, l2_norm_values
from .errors import BracketError
from .grid import (ComplexFunctionSamples, Grid, RealFunctionSamples,
                   diff1, diff1_hi, diff2, max_interior, same_grid)

PROBE_TOL = 1e-4
BISECT_TOL = 1e-10
MAX_BISECT = 200
COMPOSITE_PAD = 4  # two stacked stencils pollute four points per edge


@dataclass(frozen=True)
class ResidualReport:
    name: str
    norm: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return bool(self.norm <= self.tolerance)

    def as_dict(self) -> dict:
        return {"name": self.name, "norm": self.norm,
                "tolerance": self.tolerance, "pass": self.passed}


@dataclass(frozen=True)
class Level:
    index: int
    energy: float
    node_count: int


@dataclass(frozen=True)
class SpectrumResult:
    levels: list[Level]
    solver_meta: dict = field(default_factory=dict)

    def __post_init__(self):
        energies = [lv.energy for lv in self.levels]
        if any(b <= a for a, b in zip(energies, energies[1:])):
            raise ValueError("spectrum energies must be strictly increasing")
        for lv in self.levels:
            if lv.node_count != lv.index:
                raise ValueError(
                    f"level {lv.index} has {lv.node_count} nodes (Sturm violation)")

    def as_dict(self) -> dict:
        return {"levels": [{"index": lv.index, "energy": lv.energy,
                            "nodes": lv.node_count} for lv in self.levels],
                "solver_meta": dict(self.solver_meta)}


# ---------------------------------------------------------------------------
# residual reports


def riccati_residual(beta, V, eps: complex, sign: int, name: str = "riccati") -> ResidualReport:
    """Residual of sign*beta' + beta^2 - (V - eps), with sign=+1 for the
    beta-type and sign=-1 for the alpha-type first-order equations.

    The derivative uses a 6th-order stencil so that truncation on sharp
    superpotential features stays below the 1e-6-scaled tolerance.
    """
    g = same_grid(beta, V)
    r = sign * diff1_hi(beta.values, g.h) + beta.values ** 2 - V.values + eps
    tol = 1e-6 * (1 + float(np.max(np.abs(V.values))) + abs(eps))
    return ResidualReport(name, max_interior(r, pad=3), tol)


def eta_ode_residual(tr: TransformResult, V: RealFunctionSamples,
                     name: str = "eta-ode") -> ResidualReport:
    """Residual of the nonlinear second-order equation satisfied by eta."""
    g = same_grid(tr.eta, V)
    e = tr.eta.values
    ep = diff1(e, g.h)
    epp = diff2(e, g.h)
    d = tr.energy.d
    c = tr.energy.c
    r = e * epp - ep ** 2 / 2 + 2 * e ** 2 * (e ** 2 / 4 - ep - V.values + d) + 2 * c
    tol = 1e-4 * (1 + float(np.max(np.abs(e)))) ** 4
    return ResidualReport(name, max_interior(r), tol)


def gaussian_probes(grid: Grid, count: int = 10, width: float = 0.8) -> list[ComplexFunctionSamples]:
    """Gaussian bumps spread over the central half of the grid."""
    if count < 1:
        raise ValueError("need at least one probe")
    span = grid.x_max - grid.x_min
    centers = np.linspace(grid.x_min + 0.25 * span, grid.x_max - 0.25 * span, count)
    return [ComplexFunctionSamples(grid, np.exp(-((grid.x - c) ** 2) / (2 * width ** 2)))
            for c in centers]


def _schrodinger(f: ComplexFunctionSamples, V) -> ComplexFunctionSamples:
    return ComplexFunctionSamples(f.grid, -diff2(f.values, f.grid.h) + V.values * f.values)


def intertwining_residual(V: RealFunctionSamples, v_tilde: RealFunctionSamples,
                          tr: TransformResult, probes: int = 10,
                          name: str = "intertwining") -> ResidualReport:
    """max over probes of |(-D^2+Vt)(A f) - A((-D^2+V) f)| / max(1, |A f|)."""
    same_grid(V, v_tilde, tr.eta)
    worst = 0.0
    for f in gaussian_probes(V.grid, probes):
        af = apply_A(f, tr.eta, tr.gamma_coef)
        lhs = _schrodinger(af, v_tilde)
        rhs = apply_A(_schrodinger(f, V), tr.eta, tr.gamma_coef)
        num = max_interior(lhs.values - rhs.values, COMPOSITE_PAD)
        den = max(1.0, max_interior(af.values, COMPOSITE_PAD))
        worst = max(worst, num / den)
    return ResidualReport(name, worst, PROBE_TOL)


def factorization_residual(tr: TransformResult, V: RealFunctionSamples,
                           v_tilde: RealFunctionSamples, which: str,
                           probes: int = 10) -> ResidualReport:
    """Probe residual of one of the four factorization identities:

    H = A1^- A1 + eps1, H1 = A1 A1^- + eps1 = A2^- A2 + conj(eps1),
    Ht = A2 A2^- + conj(eps1), with H1 = -D^2 + V1 and Ht = -D^2 + Vt.
    """
    same_grid(V, v_tilde, tr.alpha1)
    eps = tr.energy.eps1
    v1 = tr.v1
    recipes = {
        "H": (tr.alpha1, eps, V, "minus_last"),
        "H1_lower": (tr.alpha1, eps, v1, "plus_last"),
        "H1_upper": (tr.alpha2, np.conj(eps), v1, "minus_last"),
        "Htilde": (tr.alpha2, np.conj(eps), v_tilde, "plus_last"),
    }
    if which not in recipes:
        raise ValueError(f"unknown factorization {which!r}")
    alpha, shift, pot, order = recipes[which]
    worst = 0.0
    for f in gaussian_probes(V.grid, probes):
        if order == "minus_last":
            lhs = apply_A1_minus(apply_A1(f, alpha), alpha)
        else:
            lhs = apply_A1(apply_A1_minus(f, alpha), alpha)
        lhs_vals = lhs.values + shift * f.values
        rhs = _schrodinger(f, pot)
        num = max_interior(lhs_vals - rhs.values, COMPOSITE_PAD)
        den = max(1.0, max_interior(rhs.values, COMPOSITE_PAD))
        worst = max(worst, num / den)
    return ResidualReport(f"factorization[{which}]", worst, PROBE_TOL)


def operator_relation_residual(tr: TransformResult, V: RealFunctionSamples,
                               probes: int = 10) -> ResidualReport:
    """Probe residual of eta A1 f = (H - eps1) f + A f."""
    same_grid(V, tr.eta)
    eps = tr.energy.eps1
    worst = 0.0
    for f in gaussian_probes(V.grid, probes):
        lhs = tr.eta.values * apply_A1(f, tr.alpha1).values
        rhs = (_schrodinger(f, V).values - eps * f.values
               + apply_A(f, tr.eta, tr.gamma_coef).values)
        num = max_interior(lhs - rhs, COMPOSITE_PAD)
        den = max(1.0, max_interior(rhs, COMPOSITE_PAD))
        worst = max(worst, num / den)
    return ResidualReport("operator-relation", worst, PROBE_TOL)


def l2_norm(f) -> float:
    """Trapezoidal L2 norm of sampled (possibly complex) function values."""
    return l2_norm_values(f.values, f.grid.h)


def standard_reports(tr: TransformResult, V: RealFunctionSamples,
                     v_tilde: RealFunctionSamples | None = None,
                     probes: int = 10) -> list[ResidualReport]:
    """The full certification bundle for one transformation."""
    vt = v_tilde if v_tilde is not None else tr.v_tilde
    beta = ComplexFunctionSamples(tr.grid, -tr.alpha1.values)
    eps = tr.energy.eps1
    reports = [
        riccati_residual(beta, V, eps, sign=+1, name="riccati[beta1]"),
        riccati_residual(tr.alpha1, V, eps, sign=-1, name="riccati[alpha1]"),
        riccati_residual(tr.alpha2, tr.v1, np.conj(eps), sign=-1, name="riccati[alpha2]"),
        eta_ode_residual(tr, V),
        intertwining_residual(V, vt, tr, probes),
        factorization_residual(tr, V, vt, "H", probes),
        factorization_residual(tr, V, vt, "H1_lower", probes),
        factorization_residual(tr, V, vt, "H1_upper", probes),
        factorization_residual(tr, V, vt, "Htilde", probes),
        operator_relation_residual(tr, V, probes),
    ]
    return reports


# ---------------------------------------------------------------------------
# Numerov spectral certification


def _count_nodes(v: np.ndarray, E: float, h: float) -> int:
    """Interior node count of the left Dirichlet shot (= # eigenvalues < E)."""
    f = 1.0 - (h * h / 12.0) * (v - E)
    psi_prev = 0.0
    psi = 1e-8
    nodes = 0
    for i in range(1, len(v) - 1):
        nxt = ((12.0 - 10.0 * f[i]) * psi - f[i - 1] * psi_prev) / f[i + 1]
        if nxt * psi < 0:
            nodes += 1
        psi_prev, psi = psi, nxt
        if abs(psi) > 1e100:
            psi_prev *= 1e-100
            psi *= 1e-100
    return nodes


def _mismatch(v: np.ndarray, E: float, h: float, m: int):
    """Wronskian-type matching defect of left and right shots at index m."""
    f = 1.0 - (h * h / 12.0) * (v - E)
    n = len(v)

    lphi = np.zeros(n)
    lphi[1] = 1e-8
    for i in range(1, m + 1):
        lphi[i + 1] = ((12.0 - 10.0 * f[i]) * lphi[i] - f[i - 1] * lphi[i - 1]) / f[i + 1]
        if abs(lphi[i + 1]) > 1e100:
            lphi[:i + 2] *= 1e-100

    rphi = np.zeros(n)
    rphi[-2] = 1e-8
    for i in range(n - 2, m - 2, -1):
        rphi[i - 1] = ((12.0 - 10.0 * f[i]) * rphi[i] - f[i + 1] * rphi[i + 1]) / f[i - 1]
        if abs(rphi[i - 1]) > 1e100:
            rphi[i - 1:] *= 1e-100

    dl = (lphi[m + 1] - lphi[m - 1]) / (2 * h)
    dr = (rphi[m + 1] - rphi[m - 1]) / (2 * h)
    wr = dl * rphi[m] - dr * lphi[m]
    scale = abs(dl * rphi[m]) + abs(dr * lphi[m])
    return wr / scale if scale > 0 else 0.0, lphi, rphi


def _composite_nodes(lphi, rphi, m) -> int:
    """Interior nodes of the matched eigenfunction.

    The matching scale comes from whichever of the three overlap points is
    best conditioned; at an eigenvalue the pieces are proportional, so any
    of them works, but symmetric potentials put odd-state nodes exactly at
    the midpoint.
    """
    j = m - 1 + int(np.argmax(np.abs(rphi[m - 1:m + 2])))
    s = lphi[j] / rphi[j]
    psi = np.concatenate([lphi[1:m], s * rphi[m:-1]])
    return int(np.sum(psi[1:] * psi[:-1] < 0))


def numerov_spectrum(V: RealFunctionSamples, n_levels: int,
                     e_bracket: tuple[float, float]) -> SpectrumResult:
    """Locate the lowest n_levels Dirichlet eigenvalues inside e_bracket.

    Node counts of the left shot bracket each level (they count eigenvalues
    below the trial energy); bisection on the midpoint matching mismatch
    refines to BISECT_TOL. Node counting is the fallback when the mismatch
    does not change sign across the isolating bracket.
    """
    if n_levels < 1 or n_levels > 12:
        raise ValueError("n_levels must be in 1..12")
    e_lo, e_hi = float(e_bracket[0]), float(e_bracket[1])
    if not e_lo < e_hi:
        raise ValueError("empty energy bracket")
    v = V.values
    h = V.grid.h
    m = V.grid.n // 2

    base = _count_nodes(v, e_lo, h)
    avail = _count_nodes(v, e_hi, h) - base
    if avail < n_levels:
        raise BracketError(
            f"bracket ({e_lo:g}, {e_hi:g}) holds {avail} states, {n_levels} requested")

    levels = []
    for j in range(n_levels):
        target = base + j
        lo, hi = e_lo, e_hi
        iters = 0
        # isolate [lo, hi] so node count jumps target -> target+1 across it
        while iters < MAX_BISECT and hi - lo > max(BISECT_TOL, 1e-3 * (1 + abs(hi))):
            mid = 0.5 * (lo + hi)
            if _count_nodes(v, mid, h) <= target:
                lo = mid
            else:
                hi = mid
            iters += 1
        g_lo = _mismatch(v, lo, h, m)[0]
        g_hi = _mismatch(v, hi, h, m)[0]
        if g_lo * g_hi < 0:
            while iters < MAX_BISECT and hi - lo > BISECT_TOL:
                mid = 0.5 * (lo + hi)
                g_mid = _mismatch(v, mid, h, m)[0]
                if g_mid * g_lo <= 0:
                    hi, g_hi = mid, g_mid
                else:
                    lo, g_lo = mid, g_mid
                iters += 1
        else:
            while iters < MAX_BISECT and hi - lo > BISECT_TOL:
                mid = 0.5 * (lo + hi)
                if _count_nodes(v, mid, h) <= target:
                    lo = mid
                else:
                    hi = mid
                iters += 1
        energy = 0.5 * (lo + hi)
        _, lphi, rphi = _mismatch(v, energy, h, m)
        levels.append(Level(index=target, energy=energy,
                            node_count=_composite_nodes(lphi, rphi, m)))

    meta = {"x_min": V.grid.x_min, "x_max": V.grid.x_max, "n": V.grid.n,
            "match_index": m, "match_x": float(V.grid.x[m]),
            "e_bracket": [e_lo, e_hi], "bisect_tol": BISECT_TOL}
    return SpectrumResult(levels=levels, solver_meta=meta)
