"""Catalog of radial Fourier-side initial data.

Profiles are defined directly on the Fourier side as real radial functions
of the frequency r; physical-space hypotheses enter only through directly
checkable surrogates (the mass = value at r = 0, and a low-frequency
Lipschitz constant K with |u(r) - mass| <= K r for r <= 1).

Three families:

* gaussian    - transform of a Gaussian bump; every log-weighted norm is
                finite, the physical weighted-L1 norm has a closed form.
* zero_mass   - transform of a Laplacian applied to a Gaussian: same decay,
                but the mass vanishes (the degenerate case of the two-sided
                decay results).
* log_tail    - Gaussian core matched at r_unit to a tail
                c (1+r^2)^{-n/4} (1+L)^{-(m+1+beta)/2}, built so that the
                log-weighted squared norm of order s is finite exactly for
                s < m + beta.  The (1+r^2)^{-n/4} factor makes the radial
                measure cancel exactly, leaving a pure power of (1+L).

Each profile also exposes log |u| as a function of the log-weight alone so
that the high-frequency quadrature can fold the radial measure into the
data in log space (r itself overflows once the log-weight exceeds ~709).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .quadrature import QuadSpec, surface_area, _adaptive, _build_bounds, _log_flat_measure
from .symbols import R_UNIT, log_weight

__all__ = [
    "RadialProfile",
    "GaussianProfile",
    "ZeroMassProfile",
    "LogTailProfile",
    "gaussian",
    "zero_mass",
    "log_tail",
    "parse_profile",
    "RadialSpectrum",
    "parse_pair",
    "LowFreqParts",
    "low_freq_parts",
    "YNormResult",
    "y_norm",
]


class RadialProfile:
    """One radial Fourier-side profile.

    Attributes set by every family: name, n, mass, sign (constant sign of
    the profile), lip_const (low-frequency Lipschitz surrogate), l11_norm
    (physical weighted-L1 norm when it has a closed form, else None).
    """

    name: str
    n: int
    mass: float
    sign: float
    lip_const: float
    l11_norm: float | None

    def value(self, r):
        raise NotImplementedError

    def log_value_from_lam(self, lam):
        """log |value| as a function of the log-weight; -inf where zero."""
        raise NotImplementedError

    def log_flat_from_lam(self, lam):
        """log of |value| (1+r^2)^{n/4} as a function of the log-weight.

        This is the measure-neutralised magnitude: multiplying two of these
        by the flat radial measure w_n (1 - e^{-L})^{(n-2)/2} y dy gives the
        squared-norm integrand in y = sqrt(L) with the exponentially large
        factors cancelled analytically, which keeps the integrand noise at
        eps * log(L) instead of eps * L for arbitrarily large log-weights.
        """
        raise NotImplementedError

    def deviation(self, r):
        """value(r) - mass, evaluated without cancellation."""
        raise NotImplementedError

    def y_norm_finite(self, s: float) -> bool:
        return True

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"<{type(self).__name__} {self.name} n={self.n}>"


class GaussianProfile(RadialProfile):
    def __init__(self, alpha: float, amplitude: float, n: int):
        if alpha <= 0.0:
            raise ValueError("alpha must be positive")
        if n < 1:
            raise ValueError("dimension must be at least 1")
        self.alpha = float(alpha)
        self.amplitude = float(amplitude)
        self.n = int(n)
        self.peak = amplitude * (math.pi / alpha) ** (n / 2.0)
        self.mass = self.peak
        self.sign = math.copysign(1.0, amplitude) if amplitude != 0.0 else 0.0
        self.name = f"gaussian:alpha={alpha:g},amplitude={amplitude:g}"
        # max |d value/dr| on [0, 1]; the slope r e^{-r^2/(4a)} peaks at
        # r = sqrt(2a), so the maximum sits at min(1, sqrt(2a)).
        rstar = min(1.0, math.sqrt(2.0 * alpha))
        self.lip_const = abs(self.peak) * rstar / (2.0 * alpha) * math.exp(
            -rstar * rstar / (4.0 * alpha)
        )
        # physical side |amplitude| e^{-alpha |x|^2}: integral of (1 + |x|)
        self.l11_norm = abs(amplitude) * (
            (math.pi / alpha) ** (n / 2.0)
            + surface_area(n) * math.gamma((n + 1) / 2.0) / (2.0 * alpha ** ((n + 1) / 2.0))
        )

    def value(self, r):
        r = np.asarray(r, dtype=float)
        out = self.peak * np.exp(-r * r / (4.0 * self.alpha))
        return float(out) if out.ndim == 0 else out

    def log_value_from_lam(self, lam):
        lam = np.asarray(lam, dtype=float)
        with np.errstate(over="ignore"):
            rsq = np.expm1(lam)
        if self.peak == 0.0:
            return np.full_like(lam, -np.inf)
        return math.log(abs(self.peak)) - rsq / (4.0 * self.alpha)

    def log_flat_from_lam(self, lam):
        lam = np.asarray(lam, dtype=float)
        if self.peak == 0.0:
            return np.full_like(lam, -np.inf)
        with np.errstate(over="ignore"):
            rsq = np.expm1(lam)
        # rsq grows like e^L, so the n L / 4 correction never wins
        return math.log(abs(self.peak)) + 0.25 * self.n * lam - rsq / (4.0 * self.alpha)

    def deviation(self, r):
        r = np.asarray(r, dtype=float)
        out = self.peak * np.expm1(-r * r / (4.0 * self.alpha))
        return float(out) if out.ndim == 0 else out


class ZeroMassProfile(RadialProfile):
    def __init__(self, alpha: float, n: int):
        if alpha <= 0.0:
            raise ValueError("alpha must be positive")
        if n < 1:
            raise ValueError("dimension must be at least 1")
        self.alpha = float(alpha)
        self.n = int(n)
        self.mass = 0.0
        self.sign = 1.0
        self.name = f"zero_mass:alpha={alpha:g}"
        rstar = min(1.0, math.sqrt(2.0 * alpha))
        self.lip_const = rstar * math.exp(-rstar * rstar / (4.0 * alpha))
        self.l11_norm = self._l11()

    def value(self, r):
        r = np.asarray(r, dtype=float)
        out = r * r * np.exp(-r * r / (4.0 * self.alpha))
        return float(out) if out.ndim == 0 else out

    def log_value_from_lam(self, lam):
        return self._log_from_lam(lam, 0.0)

    def log_flat_from_lam(self, lam):
        return self._log_from_lam(lam, 0.25 * self.n)

    def _log_from_lam(self, lam, lam_coeff):
        lam = np.asarray(lam, dtype=float)
        with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
            rsq = np.expm1(lam)
            out = np.where(
                rsq <= 0.0,
                -np.inf,
                np.log(np.maximum(rsq, 1e-300)) + lam_coeff * lam - rsq / (4.0 * self.alpha),
            )
            out = np.where(np.isinf(rsq), -np.inf, out)
        return out

    def deviation(self, r):
        return self.value(r)

    def _l11(self) -> float:
        # Physical profile (a/pi)^{n/2} (2 n a - 4 a^2 rho^2) e^{-a rho^2};
        # integrate (1 + rho)|.| radially, splitting at the sign change.
        a = self.alpha
        n = self.n
        coef = (a / math.pi) ** (n / 2.0) * surface_area(n)
        kink = math.sqrt(n / (2.0 * a))

        def f(rho):
            g = np.abs(2.0 * n * a - 4.0 * a * a * rho * rho)
            return coef * (1.0 + rho) * g * np.exp(-a * rho * rho) * rho ** (n - 1)

        spec = QuadSpec(n=1, tol=1e-12)
        total = 0.0
        prev = math.inf
        lo = 0.0
        hi = max(2.0 * kink, 2.0)
        for _ in range(60):
            seg, _, _ = _adaptive(
                f,
                _build_bounds(lo, hi, breakpoints=(kink,)),
                spec.tol,
                spec.max_panels,
                spec.chunk,
            )
            total += seg
            if seg <= prev and seg <= spec.tol * abs(total) + 1e-300:
                return total
            prev = seg
            lo, hi = hi, 2.0 * hi
        raise RuntimeError("weighted-L1 tail did not converge")


class LogTailProfile(RadialProfile):
    def __init__(self, m: float, beta: float, n: int):
        if m < 0.0:
            raise ValueError("regularity index must be nonnegative")
        if not (0.0 < beta <= 1.0):
            raise ValueError("sharpness margin must lie in (0, 1]")
        if n < 1:
            raise ValueError("dimension must be at least 1")
        self.m = float(m)
        self.beta = float(beta)
        self.n = int(n)
        self.q = m + 1.0 + beta  # tail weight exponent: (1+L)^{-q/2}
        self.core_peak = math.pi ** (n / 2.0)
        self.mass = self.core_peak
        self.sign = 1.0
        self.name = f"log_tail:m={m:g},beta={beta:g}"
        # continuity at r_unit (log-weight 1): core value = c e^{-n/4} 2^{-q/2}
        core_at_unit = math.log(self.core_peak) - (math.e - 1.0) / 4.0
        self.log_c = core_at_unit + n / 4.0 + 0.5 * self.q * math.log(2.0)
        rstar = min(1.0, math.sqrt(2.0))
        self.lip_const = self.core_peak * rstar / 2.0 * math.exp(-rstar * rstar / 4.0)
        self.l11_norm = None  # no closed form; rate checks are slope-based

    def value(self, r):
        r = np.asarray(r, dtype=float)
        lam = np.log1p(r * r)
        core = self.core_peak * np.exp(-r * r / 4.0)
        tail = np.exp(self.log_c - 0.25 * self.n * lam - 0.5 * self.q * np.log1p(lam))
        out = np.where(lam < 1.0, core, tail)
        return float(out) if out.ndim == 0 else out

    def log_value_from_lam(self, lam):
        lam = np.asarray(lam, dtype=float)
        with np.errstate(over="ignore"):
            core = math.log(self.core_peak) - np.expm1(lam) / 4.0
        tail = self.log_c - 0.25 * self.n * lam - 0.5 * self.q * np.log1p(lam)
        return np.where(lam < 1.0, core, tail)

    def log_flat_from_lam(self, lam):
        # the (1+r^2)^{-n/4} tail factor cancels the flattening exactly;
        # this exactness is the whole reason the family carries that factor
        lam = np.asarray(lam, dtype=float)
        with np.errstate(over="ignore"):
            core = math.log(self.core_peak) + 0.25 * self.n * lam - np.expm1(lam) / 4.0
        tail = self.log_c - 0.5 * self.q * np.log1p(lam)
        return np.where(lam < 1.0, core, tail)

    def deviation(self, r):
        # the core covers r <= 1 < r_unit, so the Gaussian form applies
        r = np.asarray(r, dtype=float)
        out = self.core_peak * np.expm1(-r * r / 4.0)
        return float(out) if out.ndim == 0 else out

    def y_norm_finite(self, s: float) -> bool:
        return s < self.m + self.beta


def gaussian(alpha: float, amplitude: float = 1.0, n: int = 1) -> GaussianProfile:
    return GaussianProfile(alpha, amplitude, n)


def zero_mass(alpha: float, n: int = 1) -> ZeroMassProfile:
    return ZeroMassProfile(alpha, n)


def log_tail(m: float, beta: float, n: int = 1) -> LogTailProfile:
    return LogTailProfile(m, beta, n)


_FAMILIES = {
    "gaussian": (gaussian, {"alpha": None, "amplitude": 1.0}),
    "zero_mass": (zero_mass, {"alpha": None}),
    "log_tail": (log_tail, {"m": None, "beta": None}),
}


def parse_profile(selector: str, n: int) -> RadialProfile:
    """Build a profile from a selector like "gaussian:alpha=1".

    Grammar: family:key=value[,key=value...].  Unknown families and unknown
    or missing keys are rejected.
    """
    family, _, args = selector.partition(":")
    family = family.strip()
    if family not in _FAMILIES:
        raise ValueError(f"unknown data family {family!r}")
    ctor, defaults = _FAMILIES[family]
    kwargs = dict(defaults)
    if args.strip():
        for item in args.split(","):
            key, sep, val = item.partition("=")
            key = key.strip()
            if not sep or key not in defaults:
                raise ValueError(f"unknown key {key!r} for data family {family!r}")
            try:
                kwargs[key] = float(val)
            except ValueError as exc:
                raise ValueError(f"bad value for {key!r}: {val!r}") from exc
    missing = [k for k, v in kwargs.items() if v is None]
    if missing:
        raise ValueError(f"data family {family!r} requires {missing}")
    return ctor(n=n, **kwargs)


@dataclass(frozen=True)
class RadialSpectrum:
    """An initial-data pair given by two radial Fourier profiles."""

    u0: RadialProfile
    u1: RadialProfile

    def __post_init__(self) -> None:
        if self.u0.n != self.u1.n:
            raise ValueError("data pair must share one dimension")

    @property
    def n(self) -> int:
        return self.u0.n

    @property
    def mass_sum(self) -> float:
        return self.u0.mass + self.u1.mass


def parse_pair(sel0: str, sel1: str, n: int) -> RadialSpectrum:
    return RadialSpectrum(parse_profile(sel0, n), parse_profile(sel1, n))


@dataclass(frozen=True)
class LowFreqParts:
    """Decomposition u(r) = a_part - i b_part + p_part.

    Profiles here are real and radial, so b_part is identically zero and
    a_part is the deviation from the mass.
    """

    a_part: float
    b_part: float
    p_part: float


def low_freq_parts(d: RadialProfile, r: float) -> LowFreqParts:
    dev = float(d.deviation(r))
    if 0.0 <= r <= 1.0 and abs(dev) > d.lip_const * r * (1.0 + 1e-9):
        raise AssertionError(
            f"Lipschitz surrogate violated for {d.name} at r={r!r}: "
            f"|deviation|={abs(dev):.3e} > K r={d.lip_const * r:.3e}"
        )
    return LowFreqParts(dev, 0.0, d.mass)


@dataclass(frozen=True)
class YNormResult:
    """Log-weighted squared norm; `diverged` is a flag, not an error."""

    value: float
    err_est: float
    diverged: bool


def y_norm(
    d: RadialProfile, s: float, n: int | None = None, spec: QuadSpec | None = None
) -> YNormResult:
    """w_n int_0^inf (1 + L)^s |u(r)|^2 r^{n-1} dr, with divergence flagged.

    The head [0, r_unit] is integrated in r; the tail in y = sqrt(L) with
    the measure folded in log space, doubling the extent of 1 + L until the
    increment is negligible.  If the doubling budget runs out while the
    increments still move the total, the norm is flagged divergent.
    """
    if s < 0.0:
        raise ValueError("regularity order must be nonnegative")
    n = n if n is not None else d.n
    if n != d.n:
        raise ValueError("profile dimension does not match the request")
    spec = spec or QuadSpec(n=n, tol=1e-8)
    area = surface_area(n)

    def f_head(r):
        v = d.value(r)
        return (1.0 + np.log1p(r * r)) ** s * v * v * area * r ** (n - 1)

    head, head_err, _ = _adaptive(
        f_head,
        _build_bounds(0.0, R_UNIT, ladder=16),
        spec.tol,
        spec.max_panels,
        spec.chunk,
    )

    def f_tail(y):
        lam = y * y
        logv = d.log_flat_from_lam(lam)
        return np.exp(s * np.log1p(lam) + 2.0 * logv + _log_flat_measure(y, n))

    total = head
    err = head_err
    prev = math.inf
    s_lo = 2.0
    for _ in range(spec.max_segments):
        s_hi = 2.0 * s_lo
        y_lo = math.sqrt(s_lo - 1.0)
        y_hi = math.sqrt(s_hi - 1.0)
        seg, segerr, _ = _adaptive(
            f_tail, _build_bounds(y_lo, y_hi), spec.tol, spec.max_panels, spec.chunk
        )
        total += seg
        err += segerr
        if seg <= prev and seg <= spec.tol * abs(total) + 1e-300:
            return YNormResult(total, err, False)
        prev = seg
        s_lo = s_hi
    return YNormResult(total, err, True)
