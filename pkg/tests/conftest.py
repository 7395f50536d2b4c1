import numpy as np
import pytest

from susy2 import (ComplexEnergy, Grid, OscillatorPotential,
                   PoschlTellerPotential, Side, energy_from_k, free_seed,
                   oscillator_seed, poschl_teller_seed, two_susy_transform)
from susy2.grid import RealFunctionSamples


@pytest.fixture(scope="session")
def wide_grid():
    return Grid(-10.0, 10.0, 2001)


@pytest.fixture(scope="session")
def osc_grid():
    return Grid(-6.0, 6.0, 1201)


@pytest.fixture(scope="session")
def pt_energy():
    return energy_from_k(0.5, 0.3)


@pytest.fixture(scope="session")
def free_energy():
    return energy_from_k(1.0, 1.0)


@pytest.fixture(scope="session")
def osc_energy():
    # the reference-figure configuration
    return ComplexEnergy(10 + 0.1j)


@pytest.fixture(scope="session")
def pt_seed(pt_energy, wide_grid):
    return poschl_teller_seed(1.0, pt_energy, Side.RIGHT, wide_grid)


@pytest.fixture(scope="session")
def pt_transform(pt_seed, wide_grid):
    V = RealFunctionSamples(wide_grid, PoschlTellerPotential(1.0).sample(wide_grid))
    return V, two_susy_transform(V, pt_seed)


@pytest.fixture(scope="session")
def free_transform(free_energy, wide_grid):
    seed = free_seed(free_energy, Side.LEFT, wide_grid)
    V = RealFunctionSamples(wide_grid, np.zeros(wide_grid.n))
    return V, seed, two_susy_transform(V, seed)


@pytest.fixture(scope="session")
def osc_seed_fig(osc_energy, osc_grid):
    return oscillator_seed(osc_energy, -1, osc_grid)


@pytest.fixture(scope="session")
def osc_transform_fig(osc_seed_fig, osc_grid):
    V = RealFunctionSamples(osc_grid, OscillatorPotential().sample(osc_grid))
    return V, two_susy_transform(V, osc_seed_fig)


@pytest.fixture(scope="session")
def osc_property_case():
    """Oscillator configuration with grid-resolved features for residual work:
    strongly complex energy, window where the Kummer series keeps full
    accuracy (z <= 9)."""
    grid = Grid(-3.0, 3.0, 1201)
    energy = ComplexEnergy(2.5 + 3.0j)
    seed = oscillator_seed(energy, -1, grid)
    V = RealFunctionSamples(grid, OscillatorPotential().sample(grid))
    return V, seed, two_susy_transform(V, seed)
