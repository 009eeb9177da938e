"""Pseudo-spectral solver and verification toolkit for the elliptic-elliptic
Davey-Stewartson system in its nonlocal nonlinear-Schrodinger reduction."""

from .errors import ConfigurationError, NumericsError, PrecisionWarning
from .fields import (Field, GridSpec, SpectralField, Trajectory,
                     forward_transform, inverse_transform, lp_norm,
                     spectral_energy_fraction, spectral_resample)
from .multiplier import (MultiplierParams, apply_E, recover_phi,
                         recover_phi_x1, symbol_value)
from .propagator import (ModelParams, alpha_window, free_evolve,
                         free_trajectory, group_property_check,
                         nonlinear_phase_step, split_step_evolve)
from .duhamel import (PicardReport, ScatteringResult, apply_phi, duhamel_G,
                      nonlinearity, picard_solve, scattering_limits, tt_star)
from .lorentz import (SampledMeasureSpace, distribution_function, k_functional,
                      k_functional_curve, mixed_norm, weak_lp_norm,
                      weak_spacetime_norm)
from .selfsim import (DistributionBoundReport, HomogeneousData, SeriesParams,
                      VariantSelection, band_corrected_power_field, cw_envelope,
                      cw_free_evolution, cw_profile, cw_profile_field,
                      distribution_bound_check, homogeneous_field,
                      predicted_decay_exponent, profile_decay_fit,
                      scaling_residual, scaling_residual_table,
                      select_bk_variant, smooth_homogeneous_field)
from .strichartz import (ExponentQuad, Prop3Window, SweepReport, check_admissible,
                         is_admissible, prop3_window, strichartz_ratio_sweep,
                         strichartz_ratios)
from .forcing import (band_limited_field, band_limited_spacetime_samples,
                      trajectory_from_samples)

__version__ = "0.1.0"
