"""Pydantic request/response models for the HTTP service and CLI client.

The JSON layout of a transform response is the package's stable wire format:

    {"config": {...}, "arrays": {"x": [...], "V": [...], "w": [...],
     "eta": [...], "v_tilde": [...], "re_v1": [...], "im_v1": [...],
     "re_alpha1": [...], "im_alpha1": [...], "re_alpha2": [...],
     "im_alpha2": [...]},
     "diagnostics": {"scalars": {...}, "residuals": [{"name": ..., "norm": ...,
     "tolerance": ..., "pass": ...}], "spectrum": {...} | null},
     "version": "..."}
"""
from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from . import seeds
from .grid import Grid
from .seeds import ComplexEnergy, Side

DEFAULT_GRIDS = {
    "free": (-10.0, 10.0, 2001),
    "pt": (-10.0, 10.0, 2001),
    "oscillator": (-6.0, 6.0, 1201),
    "tabulated": None,  # taken from the table itself
}

SPECTRUM_DEFAULTS = {
    # kind -> (n_levels, e_min, e_max, known level rule, check tolerances)
    "free": (3, 1e-4, 1.0),
    "pt": (1, None, -1e-6),  # e_min filled from k0
    "oscillator": (6, 0.0, 13.0),
}


class PotentialSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    kind: Literal["free", "pt", "oscillator", "tabulated"] = "free"
    k0: float = 1.0
    table: Optional[list[tuple[float, float]]] = None

    @model_validator(mode="after")
    def _check(self):
        if self.kind == "pt" and self.k0 <= 0:
            raise ValueError("k0 must be positive")
        if self.kind == "tabulated" and not self.table:
            raise ValueError("tabulated potential needs table rows")
        return self

    def build(self) -> seeds.Potential:
        if self.kind == "free":
            return seeds.FreePotential()
        if self.kind == "pt":
            return seeds.PoschlTellerPotential(self.k0)
        if self.kind == "oscillator":
            return seeds.OscillatorPotential()
        return tabulated_from_rows(self.table)


def tabulated_from_rows(rows) -> seeds.TabulatedPotential:
    text = "\n".join(f"{x!r} {v!r}" for x, v in rows)
    return seeds.load_potential_table(text)


class GridSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    x_min: float
    x_max: float
    n: int

    def build(self) -> Grid:
        return Grid(self.x_min, self.x_max, self.n)


class TransformRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    potential: PotentialSpec = Field(default_factory=PotentialSpec)
    k1: Optional[float] = None
    k2: Optional[float] = None
    eps_re: Optional[float] = None
    eps_im: Optional[float] = None
    side: Optional[Literal["left", "right"]] = None
    nu: Optional[Literal[1, -1]] = None
    grid: Optional[GridSpec] = None

    @model_validator(mode="after")
    def _check_energy_route(self):
        k_route = self.k1 is not None or self.k2 is not None
        e_route = self.eps_re is not None or self.eps_im is not None
        if k_route and e_route:
            raise ValueError("--k1/--k2 and --eps-re/--eps-im are mutually exclusive")
        if k_route and (self.k1 is None or self.k2 is None):
            raise ValueError("both k1 and k2 are required")
        if e_route and (self.eps_re is None or self.eps_im is None):
            raise ValueError("both eps_re and eps_im are required")
        if not k_route and not e_route:
            raise ValueError("specify the factorization energy via k1/k2 or eps_re/eps_im")
        if self.side is not None and self.nu is not None:
            raise ValueError("side and nu are mutually exclusive")
        return self

    def energy(self) -> ComplexEnergy:
        if self.k1 is not None:
            return seeds.energy_from_k(self.k1, self.k2)
        return ComplexEnergy.canonical(complex(self.eps_re, self.eps_im))

    def resolve_grid(self, potential: seeds.Potential) -> Grid:
        if self.grid is not None:
            return self.grid.build()
        if isinstance(potential, seeds.TabulatedPotential):
            return potential.grid
        return Grid(*DEFAULT_GRIDS[self.potential.kind])

    def selector(self):
        """(side, nu_sign) with per-potential defaults."""
        if self.nu is not None:
            return None, int(self.nu)
        if self.side is not None:
            return Side(self.side), None
        if self.potential.kind == "oscillator":
            return None, -1
        return Side.LEFT, None


class ResidualModel(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    name: str
    norm: float
    tolerance: float
    passed: bool = Field(alias="pass")


class LevelModel(BaseModel):
    index: int
    energy: float
    nodes: int


class SpectrumModel(BaseModel):
    levels: list[LevelModel]
    solver_meta: dict


class ArraysModel(BaseModel):
    x: list[float]
    V: list[float]
    w: list[float]
    eta: list[float]
    v_tilde: list[float]
    re_v1: list[float]
    im_v1: list[float]
    re_alpha1: list[float]
    im_alpha1: list[float]
    re_alpha2: list[float]
    im_alpha2: list[float]


class DiagnosticsModel(BaseModel):
    scalars: dict[str, float]
    residuals: list[ResidualModel]
    spectrum: Optional[SpectrumModel] = None


class TransformResponse(BaseModel):
    config: dict
    arrays: ArraysModel
    diagnostics: DiagnosticsModel
    version: str


class VerifyRequest(TransformRequest):
    probes: int = 10
    n_levels: Optional[int] = None
    e_min: Optional[float] = None
    e_max: Optional[float] = None


class VerifyResponse(BaseModel):
    config: dict
    reports: list[ResidualModel]
    spectrum_v: Optional[SpectrumModel] = None
    spectrum_v_tilde: Optional[SpectrumModel] = None
    all_pass: bool
    version: str


class SpectrumRequest(TransformRequest):
    of: Literal["v", "v_tilde"] = "v"
    n_levels: Optional[int] = None
    e_min: Optional[float] = None
    e_max: Optional[float] = None

    @model_validator(mode="after")
    def _check_energy_route(self):
        # the base-potential spectrum needs no factorization energy
        if self.of == "v_tilde":
            return super()._check_energy_route()
        if self.side is not None and self.nu is not None:
            raise ValueError("side and nu are mutually exclusive")
        return self


class SpectrumResponse(BaseModel):
    config: dict
    spectrum: SpectrumModel
    version: str


class FigureRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    which: Literal["fig1", "fig2"]
    eps_re: float = 10.0
    eps_im: float = 0.1
    nu: Literal[1, -1] = -1
    grid: Optional[GridSpec] = None
