"""Multi-soliton construction for the L2-supercritical generalized KdV equation.

The package builds solutions that stay exponentially close to a sum of N
solitons by preparing final data along the unstable edge directions of the
linearized operator and shooting backward in time over them.
"""

from .grid import (Field, Grid1D, GridError, derivative, field, from_hat,
                   inner_l2, make_grid, norm_h1, norm_l2, resample, shift,
                   suggest_grid, suggest_length, trig_eval, zeros)
from .snapshots import SnapshotError, load_snapshot, save_snapshot
from .soliton import (SeparationError, SolitonEnsemble, SolitonParams, SolitonError,
                      TailWrapError, conserved_quantities, criticality,
                      ensemble_field, ground_state, mass_scaling_exponent,
                      soliton_field)
from .linop import (EdgeSpectrum, EigenError, NoUnstableEigenvalueError,
                    ResolutionError, ScaledDual, apply_L, dual_residuals,
                    edge_eigenpair, ensure_spectrum, measure_mu0, mu0_paper,
                    mu0_symbolic, scaled_dual, spectrum_grid)
from .coercivity import (ConstraintError, constrained_min_rayleigh,
                         localized_form_H, variation_constant)
from .evolver import (BlowUpError, ConservationError, EvolveError, EvolveOptions,
                      Stepper, Trajectory, evolve, kato_rate)
from .modulation import (FinalData, ModulationError, ModulationState,
                         NewtonDivergenceError, OutOfRadiusError, ProfileBasis,
                         decompose, dual_gram, final_data, modulation_radius,
                         probe_modulation_radius, unstable_coeffs)
from .shooting import (BracketError, FailedCondition, ShootResult, ShootingError,
                       TubeSpec, TubeStatus, backward_run, compute_sigma0,
                       continuation_find, diagnostics_weights, find_a_hat,
                       localized_functionals, tube_check)

__version__ = "0.1.0"
