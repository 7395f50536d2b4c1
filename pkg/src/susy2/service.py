"""FastAPI service wrapping the transformation pipeline.

The handler functions (run_transform, run_verify, run_spectrum, run_figure)
are plain callables over the pydantic models; the CLI invokes them
in-process, the HTTP endpoints expose the same surface to remote clients.
"""
from __future__ import annotations

import numpy as np
from fastapi import FastAPI
from fastapi.requests import Request
from fastapi.responses import JSONResponse, PlainTextResponse

from . import __version__, core, seeds, verify
from .errors import (BlowUpError, BracketError, ConvergenceError,
                     DegenerateDenominator, DegenerateEnergy, GridMismatch,
                     NodeError, PoleError, SeedResidualError, SingularTransform,
                     ZeroState)
from .grid import RealFunctionSamples
from .schemas import (ArraysModel, DiagnosticsModel, FigureRequest, LevelModel,
                      ResidualModel, SpectrumModel, SpectrumRequest,
                      SpectrumResponse, TransformRequest, TransformResponse,
                      VerifyRequest, VerifyResponse)

CONFIG_ERRORS = (DegenerateEnergy, GridMismatch, ValueError, TypeError)
COMPUTE_ERRORS = (BlowUpError, BracketError, ConvergenceError,
                  DegenerateDenominator, NodeError, PoleError,
                  SeedResidualError, ZeroState, OverflowError)


def _normalized_config(req: TransformRequest, energy, grid) -> dict:
    cfg = req.model_dump(mode="json", exclude_none=True)
    cfg["eps_re_canonical"] = energy.eps1.real
    cfg["eps_im_canonical"] = energy.eps1.imag
    cfg["grid_resolved"] = {"x_min": grid.x_min, "x_max": grid.x_max, "n": grid.n}
    return cfg


def _build_pipeline(req: TransformRequest):
    potential = req.potential.build()
    energy = req.energy()
    grid = req.resolve_grid(potential)
    side, nu = req.selector()
    seed = seeds.build_seed(potential, energy, grid, side=side, nu_sign=nu)
    V = RealFunctionSamples(grid, potential.sample(grid))
    tr = core.two_susy_transform(V, seed)
    return potential, energy, grid, seed, V, tr


def _residual_models(reports) -> list[ResidualModel]:
    return [ResidualModel(name=r.name, norm=r.norm, tolerance=r.tolerance,
                          passed=r.passed) for r in reports]


def _spectrum_model(result: verify.SpectrumResult) -> SpectrumModel:
    return SpectrumModel(
        levels=[LevelModel(index=lv.index, energy=lv.energy, nodes=lv.node_count)
                for lv in result.levels],
        solver_meta=result.solver_meta)


def run_transform(req: TransformRequest) -> TransformResponse:
    potential, energy, grid, seed, V, tr = _build_pipeline(req)
    reports = verify.standard_reports(tr, V)
    arrays = ArraysModel(
        x=grid.x.tolist(),
        V=V.values.tolist(),
        w=tr.w.values.tolist(),
        eta=tr.eta.values.tolist(),
        v_tilde=tr.v_tilde.values.tolist(),
        re_v1=tr.v1.values.real.tolist(),
        im_v1=tr.v1.values.imag.tolist(),
        re_alpha1=tr.alpha1.values.real.tolist(),
        im_alpha1=tr.alpha1.values.imag.tolist(),
        re_alpha2=tr.alpha2.values.real.tolist(),
        im_alpha2=tr.alpha2.values.imag.tolist(),
    )
    diagnostics = DiagnosticsModel(scalars=dict(tr.diagnostics),
                                   residuals=_residual_models(reports))
    return TransformResponse(config=_normalized_config(req, energy, grid),
                             arrays=arrays, diagnostics=diagnostics,
                             version=__version__)


def _spectrum_window(req, kind, k0):
    n_levels, e_min, e_max = req.n_levels, req.e_min, req.e_max
    if kind in ("free", "pt", "oscillator"):
        dn, dlo, dhi = {
            "free": (3, 1e-4, 1.0),
            "pt": (1, -2.0 * k0 * k0, -1e-6),
            "oscillator": (6, 0.0, 13.0),
        }[kind]
        n_levels = n_levels if n_levels is not None else dn
        e_min = e_min if e_min is not None else dlo
        e_max = e_max if e_max is not None else dhi
    if n_levels is None or e_min is None or e_max is None:
        return None
    return n_levels, e_min, e_max


def _known_levels(kind, k0, n_levels):
    """Exact bound-state energies where the base model has them."""
    if kind == "pt":
        return {0: -k0 * k0}, 1e-5
    if kind == "oscillator":
        return {n: 2 * n + 1 for n in range(n_levels)}, None  # tol per potential
    return {}, None


def run_verify(req: VerifyRequest) -> VerifyResponse:
    potential, energy, grid, seed, V, tr = _build_pipeline(req)
    reports = list(verify.standard_reports(tr, V, probes=req.probes))

    spec_v = spec_vt = None
    kind = req.potential.kind
    window = _spectrum_window(req, kind, req.potential.k0)
    if window is not None:
        n_levels, e_min, e_max = window
        vt = RealFunctionSamples(grid, tr.v_tilde.values)
        spec_v = verify.numerov_spectrum(V, n_levels, (e_min, e_max))
        spec_vt = verify.numerov_spectrum(vt, n_levels, (e_min, e_max))
        iso_tol = 1e-3 if kind == "oscillator" else 1e-5
        for lv, lvt in zip(spec_v.levels, spec_vt.levels):
            reports.append(verify.ResidualReport(
                f"isospectrality[n={lv.index}]",
                abs(lv.energy - lvt.energy), iso_tol))
        known, tol_known = _known_levels(kind, req.potential.k0, n_levels)
        for lv in spec_v.levels:
            if lv.index in known:
                tol = tol_known if tol_known is not None else 1e-4
                reports.append(verify.ResidualReport(
                    f"known-level[V,n={lv.index}]",
                    abs(lv.energy - known[lv.index]), tol))
        for lv in spec_vt.levels:
            if lv.index in known:
                tol = tol_known if tol_known is not None else 1e-3
                reports.append(verify.ResidualReport(
                    f"known-level[v_tilde,n={lv.index}]",
                    abs(lv.energy - known[lv.index]), tol))

    models = _residual_models(reports)
    return VerifyResponse(config=_normalized_config(req, energy, grid),
                          reports=models,
                          spectrum_v=_spectrum_model(spec_v) if spec_v else None,
                          spectrum_v_tilde=_spectrum_model(spec_vt) if spec_vt else None,
                          all_pass=all(m.passed for m in models),
                          version=__version__)


def run_spectrum(req: SpectrumRequest) -> SpectrumResponse:
    potential = req.potential.build()
    grid = req.resolve_grid(potential)
    kind = req.potential.kind
    window = _spectrum_window(req, kind, req.potential.k0)
    if window is None:
        raise ValueError("tabulated potentials need explicit n_levels/e_min/e_max")
    n_levels, e_min, e_max = window

    if req.of == "v_tilde":
        _, energy, grid, seed, V, tr = _build_pipeline(req)
        target = RealFunctionSamples(grid, tr.v_tilde.values)
        cfg = _normalized_config(req, energy, grid)
    else:
        target = RealFunctionSamples(grid, potential.sample(grid))
        cfg = req.model_dump(mode="json", exclude_none=True)
        cfg["grid_resolved"] = {"x_min": grid.x_min, "x_max": grid.x_max, "n": grid.n}

    result = verify.numerov_spectrum(target, n_levels, (e_min, e_max))
    return SpectrumResponse(config=cfg, spectrum=_spectrum_model(result),
                            version=__version__)


def run_figure(req: FigureRequest) -> str:
    """CSV text for the two reference figures (oscillator model)."""
    treq = TransformRequest(
        potential={"kind": "oscillator"},
        eps_re=req.eps_re, eps_im=req.eps_im, nu=req.nu,
        grid=req.grid.model_dump() if req.grid is not None else None)
    potential, energy, grid, seed, V, tr = _build_pipeline(treq)
    if req.which == "fig1":
        header = "x,V,v_tilde"
        cols = (grid.x, V.values, tr.v_tilde.values)
    else:
        psi0 = core.oscillator_ground_state(grid)
        psi01 = core.complex_partner_state(psi0, seed)
        density = np.abs(psi01.values) ** 2
        header = "x,abs_psi01_sq"
        cols = (grid.x, density)
    lines = [header]
    for row in zip(*cols):
        lines.append(",".join(f"{value:.16e}" for value in row))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# HTTP surface

app = FastAPI(title="susy2", version=__version__,
              description="Second-order SUSY partner potentials from "
                          "complex-conjugate factorization energies")


@app.exception_handler(SingularTransform)
async def _singular_handler(request: Request, exc: SingularTransform):
    return JSONResponse(status_code=422, content={"detail": {
        "error": "singular_transform", "message": str(exc), "x": exc.x}})


@app.exception_handler(DegenerateEnergy)
async def _degenerate_handler(request: Request, exc: DegenerateEnergy):
    return JSONResponse(status_code=400, content={"detail": {
        "error": "config", "message": str(exc)}})


for _exc_type in (GridMismatch, ValueError):
    @app.exception_handler(_exc_type)
    async def _config_handler(request: Request, exc: Exception):
        return JSONResponse(status_code=400, content={"detail": {
            "error": "config", "message": str(exc)}})


for _exc_type in COMPUTE_ERRORS:
    @app.exception_handler(_exc_type)
    async def _compute_handler(request: Request, exc: Exception):
        return JSONResponse(status_code=422, content={"detail": {
            "error": type(exc).__name__, "message": str(exc)}})


@app.get("/health")
def health():
    return {"status": "ok", "version": __version__}


@app.post("/transform", response_model=TransformResponse)
def transform_endpoint(req: TransformRequest):
    return run_transform(req)


@app.post("/verify", response_model=VerifyResponse)
def verify_endpoint(req: VerifyRequest):
    return run_verify(req)


@app.post("/spectrum", response_model=SpectrumResponse)
def spectrum_endpoint(req: SpectrumRequest):
    return run_spectrum(req)


@app.post("/figure", response_class=PlainTextResponse)
def figure_endpoint(req: FigureRequest):
    return PlainTextResponse(run_figure(req), media_type="text/csv")
