"""Low-regularity exponential-type integrators for the good Boussinesq equation

    z_tt + z_xxxx - z_xx - (z^2)_xx = 0

on a periodic interval, with Fourier pseudospectral discretisation in space,
two classical trigonometric baselines and a convergence-study harness.
"""

from .baselines import OscillatorSystem, deuflhard_step, gautschi_step, linear_flow
from .errors import (
    BlowUpError,
    ConfigError,
    GridMismatchError,
    ParameterError,
    ValidationError,
)
from .experiments import (
    ConvergenceRecord,
    ErrorNorm,
    convergence_study,
    error_norm,
    fit_slope,
    rough_initial,
    run,
    solitary_wave,
)
from .lri1 import I1, I2, I3, SchemeParams, step_phi
from .lri2 import J1, J2, J3, J4, L_op, P_op, PsiStepper, step_psi
from .spectral import (
    Grid,
    Multiplier,
    SpectralField,
    a_multiplier,
    apply_multiplier,
    bracket_c,
    inner_product,
    product,
    psi1,
    psi2,
    sobolev_norm,
)
from .state import ComplexState, GBState, from_u, to_u

__version__ = "0.1.0"
