"""logplate: spectral simulator and decay-rate verification harness for the
Cauchy problem of a plate-type wave equation with logarithmic dispersion and
inverse-log damping.

On the Fourier side every radial mode obeys

    (1 + L) u'' + u' + L (1 + L) u = 0,    L = log(1 + r^2),

and the package evaluates the exact mode solutions, the late-time profiles,
radial-quadrature L^2 norms, and log-log decay-rate fits that reproduce the
known decay classification (diffusion-like / wave-like / both) at desk
scale.  Everything is deterministic: identical inputs give bit-identical
output.
"""

from .symbols import (
    R_UNIT,
    FreqPoint,
    Thresholds,
    CharRoots,
    Regime,
    char_roots,
    compute_thresholds,
    decay_envelope,
    log_weight,
    mult_weight,
)
from .modes import ModeState, EnergyDensity, energy_density, mode_solve, pointwise_bound_check
from .oracle import IntegratorConfig, StepBudgetError, integrate_mode
from .profiles import ProfileKind, phi1, phi2, profile_diff, profile_value
from .quadrature import (
    NORM_KINDS,
    ZONES,
    NormSeries,
    QuadSpec,
    default_time_grid,
    norm_series,
    norm_value,
    radial_integral,
    ref_integral_Ip,
    ref_integral_Jp,
    surface_area,
)
from .data import (
    RadialSpectrum,
    gaussian,
    log_tail,
    low_freq_parts,
    parse_pair,
    parse_profile,
    y_norm,
    zero_mass,
)
from .rates import BandReport, DecayRegime, RateFit, RegimeReport, classify, fit_rate, two_sided_band

__version__ = "0.1.0"
