"""Second-order SUSY partner potentials from complex-conjugate
factorization energies: seed solutions, the transformation proper, and an
independent numerical certification layer, wrapped in a small service + CLI.
"""

__version__ = "0.1.0"

from .errors import (BlowUpError, BracketError, ConditioningWarning,
                     ConvergenceError, DegenerateDenominator, DegenerateEnergy,
                     GridMismatch, NodeError, PoleError, SeedResidualError,
                     SingularTransform, Susy2Error, ZeroState)
from .grid import ComplexFunctionSamples, Grid, RealFunctionSamples
from .seeds import (ComplexEnergy, FreePotential, OscillatorPotential,
                    PoschlTellerPotential, SeedFunction, Side,
                    TabulatedPotential, build_seed, energy_from_k, free_seed,
                    load_potential_table, numeric_seed, oscillator_seed,
                    poschl_teller_seed, wavenumber)
from .core import (TransformResult, alpha2_backlund, apply_A, apply_A1,
                   apply_A1_minus, beta1, check_nodeless, complex_partner_state,
                   eta_from_w, gamma_coefficient, intermediate_potential,
                   normalized_wronskian, oscillator_ground_state,
                   partner_potential, pt_ground_state, transformed_eigenfunction,
                   two_susy_transform)
from .verify import (ResidualReport, SpectrumResult, eta_ode_residual,
                     factorization_residual, intertwining_residual, l2_norm,
                     numerov_spectrum, operator_relation_residual,
                     riccati_residual, standard_reports)

__all__ = [name for name in dir() if not name.startswith("_")]
