"""Frequency-symbol primitives for the damped logarithmic-dispersion mode family.

Every radial Fourier mode of the evolution equation treated by this package
satisfies the scalar ODE

    (1 + L) u'' + u' + L (1 + L) u = 0,      L = log(1 + r^2),

where r >= 0 is the radial frequency.  All coefficients depend on r only
through the log-weight L, so this module works with the pair (r, L) and
provides the characteristic roots, the regime thresholds where the root
structure changes, and the piecewise multiplier weight that drives the
pointwise energy decay estimate.

Everything here is pure scalar/array arithmetic in double precision; values
are freely shareable across threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

__all__ = [
    "R_UNIT",
    "log_weight",
    "FreqPoint",
    "Thresholds",
    "compute_thresholds",
    "Regime",
    "CharRoots",
    "char_roots",
    "mult_weight",
    "EnvelopeBound",
    "decay_envelope",
    "discriminant",
    "root_ratio_sq",
]

#: Radius where the log-weight equals one: log(1 + r^2) = 1.
R_UNIT = math.sqrt(math.e - 1.0)

# Tolerance below which the discriminant is treated as exactly zero when
# classifying the root regime.  The boundary has measure zero; callers that
# need continuity across it use the unified evaluator in `modes`.
_DEGENERATE_TOL = 1e-14


def log_weight(r):
    """Log-weight L(r) = log(1 + r^2), accurate for small r via log1p.

    Accepts a scalar or ndarray; negative radii are rejected.
    """
    arr = np.asarray(r, dtype=float)
    if np.any(arr < 0.0):
        raise ValueError("radial frequency must be nonnegative")
    out = np.log1p(arr * arr)
    return float(out) if arr.ndim == 0 else out


@dataclass(frozen=True)
class FreqPoint:
    """A radial frequency r together with its log-weight lam = log(1+r^2).

    Construct through :meth:`from_radius` so the pair stays consistent.
    """

    r: float
    lam: float

    @classmethod
    def from_radius(cls, r: float) -> "FreqPoint":
        return cls(float(r), log_weight(float(r)))


def _bisect(f, lo: float, hi: float, residual: float = 1e-12, max_iter: int = 200) -> float:
    """Bisection for an increasing f with f(lo) < 0 < f(hi).

    Plain bisection is enough: each defining function below is strictly
    monotone on the bracket, and the interval is exhausted to the last
    double well inside the 200-iteration cap, leaving residuals at the
    rounding floor (far below the 1e-12 target).
    """
    flo, fhi = f(lo), f(hi)
    if not (flo < 0.0 < fhi):
        raise RuntimeError("bisection bracket does not straddle the root")
    best = 0.5 * (lo + hi)
    best_res = abs(f(best))
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        fm = f(mid)
        if abs(fm) < best_res:
            best, best_res = mid, abs(fm)
        if fm < 0.0:
            lo = mid
        else:
            hi = mid
    if best_res >= residual:
        raise RuntimeError(f"bisection stalled with residual {best_res:.3e}")
    return best


def _assert_increasing(f, lo: float, hi: float, samples: int = 64) -> None:
    xs = np.linspace(lo, hi, samples)
    ys = np.array([f(x) for x in xs])
    if not np.all(np.diff(ys) > 0.0):
        raise RuntimeError("defining function is not increasing on the bracket")


@dataclass(frozen=True)
class Thresholds:
    """Radial frequencies where the symbol changes character.

    delta0 : root of (1+L) sqrt(L) = 1, the crossover of the multiplier weight
    delta  : root of 4 L (1+L)^2 = 1, where the characteristic roots collide
    eta    : root of 4 L (1+L)^2 = 3/4, below which the root gap stays >= 1/2
    r_unit : sqrt(e - 1), where L = 1

    Satisfies 0 < eta < delta < delta0 < r_unit.
    """

    delta0: float
    delta: float
    eta: float
    r_unit: float

    def residuals(self) -> dict[str, float]:
        """Residuals of each defining equation at the stored root."""
        l0 = log_weight(self.delta0)
        ld = log_weight(self.delta)
        le = log_weight(self.eta)
        return {
            "delta0": (1.0 + l0) * math.sqrt(l0) - 1.0,
            "delta": 4.0 * ld * (1.0 + ld) ** 2 - 1.0,
            "eta": 4.0 * le * (1.0 + le) ** 2 - 0.75,
            "r_unit": log_weight(self.r_unit) - 1.0,
        }


def _weight_crossover(r: float) -> float:
    lam = log_weight(r)
    return (1.0 + lam) * math.sqrt(lam) - 1.0


def _disc_defect(r: float) -> float:
    lam = log_weight(r)
    return 4.0 * lam * (1.0 + lam) ** 2 - 1.0


def _gap_defect(r: float) -> float:
    lam = log_weight(r)
    return 4.0 * lam * (1.0 + lam) ** 2 - 0.75


def compute_thresholds() -> Thresholds:
    """Locate all regime thresholds by bisection to |residual| < 1e-12."""
    for f in (_weight_crossover, _disc_defect, _gap_defect):
        _assert_increasing(f, 0.0, R_UNIT)
    th = Thresholds(
        delta0=_bisect(_weight_crossover, 0.0, R_UNIT),
        delta=_bisect(_disc_defect, 0.0, R_UNIT),
        eta=_bisect(_gap_defect, 0.0, R_UNIT),
        r_unit=R_UNIT,
    )
    if not (0.0 < th.eta < th.delta < th.delta0 < th.r_unit):
        raise RuntimeError("threshold ordering violated")
    return th


class Regime(Enum):
    """Root structure of the characteristic polynomial at one frequency."""

    REAL_DISTINCT = "real-distinct"
    DEGENERATE = "degenerate"
    COMPLEX = "complex"


def discriminant(lam):
    """D = 1 - 4 L (1+L)^2; positive iff both characteristic roots are real."""
    return 1.0 - 4.0 * lam * (1.0 + lam) ** 2


@dataclass(frozen=True)
class CharRoots:
    """Characteristic roots of (1+L) z^2 + z + L (1+L) = 0 at one frequency.

    a is the damping half-rate 1/(2(1+L)); the roots are -a +/- c for
    disc >= 0 and -a +/- i b for disc < 0, with c = sqrt(disc)/(2(1+L)) and
    b = sqrt(-disc)/(2(1+L)).  By construction the root sum is exactly
    -1/(1+L) and the product is L.
    """

    regime: Regime
    a: float
    disc: float
    c: float | None
    b: float | None
    lambda_plus: complex
    lambda_minus: complex


def char_roots(p: FreqPoint) -> CharRoots:
    lam = p.lam
    one = 1.0 + lam
    a = 0.5 / one
    disc = discriminant(lam)
    if abs(disc) < _DEGENERATE_TOL:
        lam_dbl = complex(-a, 0.0)
        return CharRoots(Regime.DEGENERATE, a, disc, 0.0, None, lam_dbl, lam_dbl)
    if disc > 0.0:
        # lambda_plus via the product form: no cancellation for small L.
        sq = math.sqrt(disc)
        lp = -2.0 * lam * one / (1.0 + sq)
        lm = -1.0 / one - lp
        return CharRoots(
            Regime.REAL_DISTINCT, a, disc, sq / (2.0 * one), None,
            complex(lp, 0.0), complex(lm, 0.0),
        )
    b = math.sqrt(-disc) / (2.0 * one)
    return CharRoots(Regime.COMPLEX, a, disc, None, b, complex(-a, b), complex(-a, -b))


def mult_weight(p: FreqPoint, th: Thresholds) -> float:
    """Piecewise multiplier weight driving the pointwise energy decay.

    Equals L(1+L)/2 below delta0 and 1/(2(1+L)) above, which coincides with
    min{L(1+L)/2, 1/(2(1+L)), sqrt(L)/2} everywhere.
    """
    lam = p.lam
    if p.r <= th.delta0:
        return 0.5 * lam * (1.0 + lam)
    return 0.5 / (1.0 + lam)


def root_ratio_sq(lam):
    """1 - 1/(4 L (1+L)^2): squared ratio of the oscillation rate b to sqrt(L).

    Defined for frequencies above the root-collision threshold; lies in
    [15/16, 1) for r >= R_UNIT.
    """
    return 1.0 - 1.0 / (4.0 * lam * (1.0 + lam) ** 2)


@dataclass(frozen=True)
class EnvelopeBound:
    """Admissible constant for t^nu e^{-c (1+L)^a t} <= C (1+L)^{-a nu}.

    The substitution s = c (1+L)^a t turns the left side into
    c^{-nu} (1+L)^{-a nu} s^nu e^{-s}, and s^nu e^{-s} peaks at s = nu with
    value (nu/e)^nu, so C = c^{-nu} (nu/e)^nu works for every t >= 0 and r.
    """

    nu: float
    c: float
    a_exp: float
    constant: float

    def check(self, t_grid, r_grid) -> tuple[bool, float]:
        """Verify the envelope on the grid; returns (holds, worst ratio)."""
        t = np.asarray(t_grid, dtype=float)[:, None]
        one = 1.0 + log_weight(np.asarray(r_grid, dtype=float))[None, :]
        lhs = t ** self.nu * np.exp(-self.c * one ** self.a_exp * t)
        rhs = self.constant * one ** (-self.a_exp * self.nu)
        ratio = float(np.max(lhs / rhs))
        return ratio <= 1.0 + 1e-12, ratio


def decay_envelope(nu: float, c: float, a_exp: float) -> EnvelopeBound:
    if nu <= 0.0 or c <= 0.0:
        raise ValueError("nu and c must be positive")
    constant = c ** (-nu) * (nu / math.e) ** nu
    return EnvelopeBound(nu, c, a_exp, constant)
