"""Late-time profiles of the mode family and their pointwise differences.

Two model profiles capture the asymptotics of the exact mode solution:

* a mass-driven heat-like term  (P0 + P1) e^{-t L (1+L)}  that dominates at
  low frequency, and
* a damped oscillatory term
  e^{-t/(2L)} [ sin(sqrt(L) t)/sqrt(L) u1 + cos(sqrt(L) t) u0 ]
  that dominates at high frequency,

with their sum as the combined profile.  The oscillatory profile extends
continuously by 0 to L -> 0 for t > 0 (the damping factor e^{-t/(2L)}
underflows to zero there, which is exactly the continuous limit).
"""

from __future__ import annotations

from enum import Enum

import numpy as np

from .modes import mode_solve
from .symbols import FreqPoint

__all__ = ["ProfileKind", "phi1", "phi2", "profile_value", "profile_diff",
           "phi1_coeff", "phi2_coeffs"]


class ProfileKind(Enum):
    """Profile selector; values double as the CLI tokens."""

    PHI1 = "phi1"
    PHI2 = "phi2"
    PHI_SUM = "phi"


# Below lam * t^2 = 1e-12 the sin(sqrt(lam) t)/sqrt(lam) series avoids 0/0.
_SINC_CUT = 1e-12


def phi1_coeff(lam, t: float):
    """e^{-t L (1+L)} for scalar or array lam."""
    lam = np.asarray(lam, dtype=float)
    out = np.exp(-t * lam * (1.0 + lam))
    return float(out) if out.ndim == 0 else out


def phi2_coeffs(lam, t: float):
    """(envelope, sin-coefficient, cos-coefficient) of the oscillatory profile.

    phi2 = env * (s2 * u1 + c2 * u0) with env = e^{-t/(2L)},
    s2 = sin(sqrt(L) t)/sqrt(L), c2 = cos(sqrt(L) t).  At L = 0 the envelope
    underflows to 0 for t > 0 and equals 1 at t = 0.
    """
    lam_arr = np.atleast_1d(np.asarray(lam, dtype=float))
    t = float(t)
    if t == 0.0:
        env = np.ones_like(lam_arr)
    else:
        with np.errstate(divide="ignore"):
            env = np.exp(-t / (2.0 * lam_arr))
    sq = np.sqrt(lam_arr)
    z = lam_arr * t * t
    small = z < _SINC_CUT
    with np.errstate(invalid="ignore", divide="ignore"):
        s2 = np.where(small, t * (1.0 - z / 6.0 + z * z / 120.0),
                      np.sin(sq * t) / np.where(small, 1.0, sq))
    c2 = np.cos(sq * t)
    if np.isscalar(lam) or np.asarray(lam).ndim == 0:
        return float(env[0]), float(s2[0]), float(c2[0])
    return env, s2, c2


def phi1(d, p: FreqPoint, t: float) -> complex:
    """Mass-driven profile (P0 + P1) e^{-t L (1+L)}."""
    if t < 0.0:
        raise ValueError("time must be nonnegative")
    return complex(d.mass_sum * phi1_coeff(p.lam, t))


def phi2(d, p: FreqPoint, t: float) -> complex:
    """Damped oscillatory profile; continuous extension 0 at r = 0, t > 0."""
    if t < 0.0:
        raise ValueError("time must be nonnegative")
    if p.lam == 0.0:
        return complex(d.u0.value(p.r)) if t == 0.0 else 0j
    env, s2, c2 = phi2_coeffs(p.lam, t)
    return complex(env * (s2 * d.u1.value(p.r) + c2 * d.u0.value(p.r)))


def profile_value(d, p: FreqPoint, t: float, kind: ProfileKind) -> complex:
    if kind is ProfileKind.PHI1:
        return phi1(d, p, t)
    if kind is ProfileKind.PHI2:
        return phi2(d, p, t)
    return phi1(d, p, t) + phi2(d, p, t)


def profile_diff(d, p: FreqPoint, t: float, kind: ProfileKind) -> complex:
    """Exact mode solution minus the selected profile at (r, t)."""
    state = mode_solve(p, complex(d.u0.value(p.r)), complex(d.u1.value(p.r)), t)
    return state.u - profile_value(d, p, t, kind)
