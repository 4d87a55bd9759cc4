"""Chebyshev-basis polynomials and the window-polynomial construction.

Provides Clenshaw evaluation, a constructive Jackson approximation of the
soft step, the Bernoulli-tail amplifying polynomial, their composition into
a certified window polynomial, and kernel-polynomial reconstruction from
Chebyshev moments.

Certification is done on a dense grid; constructors raise
CertificationError rather than return a polynomial that misses its
guarantees.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.fft
from numpy.polynomial.chebyshev import chebval
from scipy.special import betainc

from .errors import (
    BadIntervalError,
    CertificationError,
    GridOutOfRangeError,
    OutOfRangeError,
    RangeViolationError,
)

CERT_UNIFORM_POINTS = 100_000
# Refusing very small eta keeps the composed degree near or below ~2e5.
MIN_ETA_REL = 0.02
AMPLIFIER_INNER_SCALE = 0.8


@dataclass(frozen=True)
class ChebyshevPoly:
    """Coefficients c_0..c_d in the T_k basis, with an optional certified
    bound on sup |p(x)| over [-1, 1]."""

    coeffs: np.ndarray
    sup_norm_bound: float | None = None

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=float)
        if c.ndim != 1 or c.size == 0:
            raise ValueError("coefficients must be a nonempty 1-d array")
        if not np.all(np.isfinite(c)):
            raise ValueError("coefficients must be finite")
        c = c.copy()
        c.flags.writeable = False
        object.__setattr__(self, "coeffs", c)

    @property
    def degree(self) -> int:
        return self.coeffs.size - 1

    def __call__(self, x):
        return chebval(x, self.coeffs)


def chebyshev_t(n: int) -> ChebyshevPoly:
    """The basis polynomial T_n."""
    if n < 0:
        raise OutOfRangeError("n must be nonnegative")
    c = np.zeros(n + 1)
    c[n] = 1.0
    return ChebyshevPoly(c, sup_norm_bound=1.0)


def cheb_eval(p: ChebyshevPoly, x):
    """Clenshaw evaluation of p at scalar or array x."""
    return chebval(x, p.coeffs)


def cheb_values_at_nodes(coeffs: np.ndarray, m: int) -> np.ndarray:
    """Values of a Chebyshev series at the m first-kind nodes cos(pi(i+1/2)/m).

    Exact (up to roundoff) whenever m >= len(coeffs); computed with a DCT-III
    in O(m log m).
    """
    coeffs = np.asarray(coeffs, dtype=float)
    if coeffs.size > m:
        raise ValueError("need at least as many nodes as coefficients")
    work = np.zeros(m)
    work[0] = coeffs[0]
    work[1 : coeffs.size] = coeffs[1:] / 2.0
    return scipy.fft.dct(work, type=3)


def cheb_fit_at_nodes(values: np.ndarray) -> np.ndarray:
    """Chebyshev coefficients interpolating values at the first-kind nodes.

    Inverse of cheb_values_at_nodes; exact for polynomials of degree
    < len(values).
    """
    values = np.asarray(values, dtype=float)
    m = values.size
    c = scipy.fft.dct(values, type=2) / m
    c[0] /= 2.0
    return c


def first_kind_nodes(m: int) -> np.ndarray:
    return np.cos(np.pi * (np.arange(m) + 0.5) / m)


def jackson_damping(n: int) -> np.ndarray:
    """Jackson smoothing coefficients g_0..g_n for a degree-n truncation."""
    if n < 0:
        raise OutOfRangeError("n must be nonnegative")
    m = np.arange(n + 1)
    big = n + 1
    return ((big - m) * np.cos(np.pi * m / big) + np.sin(np.pi * m / big) / np.tan(np.pi / big)) / big


def _certification_grid(extrema_degree: int) -> np.ndarray:
    """Dense grid: uniform points plus the extrema of T_{2 extrema_degree}."""
    uniform = np.linspace(-1.0, 1.0, CERT_UNIFORM_POINTS)
    extrema = np.cos(np.pi * np.arange(2 * extrema_degree + 1) / (2 * extrema_degree))
    return np.concatenate([uniform, extrema])


def soft_step(x, a_bar: float, b_bar: float, kappa: float):
    """The piecewise-linear target: 1 on [a_bar, b_bar], -1 outside the
    kappa-strips, linear in between."""
    x = np.asarray(x, dtype=float)
    ramp_left = 2.0 * (x - (a_bar - kappa)) / kappa - 1.0
    ramp_right = 2.0 * ((b_bar + kappa) - x) / kappa - 1.0
    return np.clip(np.minimum(ramp_left, ramp_right), -1.0, 1.0)


def _validate_window_interval(a_bar, b_bar, kappa):
    if kappa <= 0:
        raise BadIntervalError(f"kappa must be positive, got {kappa}")
    if not a_bar < b_bar:
        raise BadIntervalError(f"need a_bar < b_bar, got [{a_bar}, {b_bar}]")
    if not (-1.0 < a_bar - kappa and b_bar + kappa < 1.0):
        raise BadIntervalError(
            f"window [{a_bar}, {b_bar}] with margin {kappa} does not fit inside (-1, 1)"
        )


def _jackson_certified(a_bar, b_bar, kappa, n):
    """Build the damped Chebyshev approximant of the soft step and
    grid-certify the sup-norm bound 1/4; returns (poly, grid, values)."""
    _validate_window_interval(a_bar, b_bar, kappa)
    n = int(n)
    if n < 24.0 / kappa - 1e-9:
        raise OutOfRangeError(f"degree n={n} below 24/kappa={24.0 / kappa:.6g}")
    nodes = first_kind_nodes(4 * n)
    raw = cheb_fit_at_nodes(soft_step(nodes, a_bar, b_bar, kappa))
    coeffs = raw[: n + 1] * jackson_damping(n)

    grid = _certification_grid(n)
    jvals = chebval(grid, coeffs)
    gap = float(np.max(np.abs(jvals - soft_step(grid, a_bar, b_bar, kappa))))
    if gap > 0.25 + 1e-12:
        raise CertificationError(
            f"step approximation misses the 1/4 bound on the grid (max gap {gap:.6g})"
        )
    bound = float(np.max(np.abs(jvals)))
    poly = ChebyshevPoly(coeffs, sup_norm_bound=bound)
    return poly, grid, jvals


def jackson_approx(a_bar: float, b_bar: float, kappa: float, n: int) -> ChebyshevPoly:
    """Degree-n polynomial within 1/4 of the soft step, grid-certified.

    The certified sup-norm bound (at most 5/4) is recorded on the result.
    """
    poly, _, _ = _jackson_certified(a_bar, b_bar, kappa, n)
    return poly


def amplifier_value(k: int, y):
    """The order-k amplifying polynomial evaluated through the regularized
    incomplete beta function: the probability that a Binomial(k, (1+y)/2)
    variable reaches k/2."""
    m = (k + 1) // 2
    p = np.clip((1.0 + np.asarray(y, dtype=float)) / 2.0, 0.0, 1.0)
    return betainc(m, k - m + 1, p)


def amplifying_poly(k: int) -> ChebyshevPoly:
    """Bernoulli-tail polynomial of degree k: maps [3/5, 1] to within
    e^{-k/6} of 1 and [-1, -3/5] to within e^{-k/6} of 0, monotonically."""
    if k < 1:
        raise OutOfRangeError("amplifier order must be at least 1")
    nodes = first_kind_nodes(k + 1)
    coeffs = cheb_fit_at_nodes(amplifier_value(k, nodes))
    # Values are probabilities, so sup |A_k| = 1 on [-1, 1] by construction.
    ends = chebval(np.array([-1.0, 1.0]), coeffs)
    if abs(ends[0]) > 1e-9 or abs(ends[1] - 1.0) > 1e-9:
        raise CertificationError(f"amplifier endpoints off: A({-1})={ends[0]}, A(1)={ends[1]}")
    return ChebyshevPoly(coeffs, sup_norm_bound=1.0)


def compose(outer: ChebyshevPoly, inner: ChebyshevPoly, scale_inner: float) -> ChebyshevPoly:
    """Coefficients of outer(scale_inner * inner(x)).

    The scaled inner values must stay within [-1, 1] (outer's certified
    domain); recovered by interpolation at deg(outer)*deg(inner) + 1
    Chebyshev nodes, which is exact for the composed polynomial.
    """
    if inner.sup_norm_bound is not None:
        reach = abs(scale_inner) * inner.sup_norm_bound
    else:
        grid = _certification_grid(inner.degree if inner.degree > 0 else 1)
        reach = abs(scale_inner) * float(np.max(np.abs(chebval(grid, inner.coeffs))))
    if reach > 1.0 + 1e-9:
        raise RangeViolationError(
            f"scaled inner polynomial reaches {reach:.6g} > 1 on [-1, 1]"
        )
    if outer.degree == 0:
        return ChebyshevPoly(outer.coeffs.copy(), sup_norm_bound=abs(float(outer.coeffs[0])))
    d = outer.degree * inner.degree
    inner_vals = cheb_values_at_nodes(inner.coeffs, d + 1) * scale_inner
    outer_vals = chebval(inner_vals, outer.coeffs)
    coeffs = cheb_fit_at_nodes(outer_vals)
    return ChebyshevPoly(coeffs, sup_norm_bound=outer.sup_norm_bound)


@dataclass(frozen=True)
class WindowPoly:
    """A certified polynomial approximation of the indicator of
    [a_bar, b_bar]: within tau of 1 inside, within tau of 0 outside the
    kappa-strips, and bounded by 1 everywhere on [-1, 1]."""

    poly: ChebyshevPoly
    a_bar: float
    b_bar: float
    kappa: float
    tau: float
    jackson_degree: int
    amplifier_order: int
    jackson_poly: ChebyshevPoly
    cert_max_violation: float

    @property
    def degree(self) -> int:
        return self.poly.degree

    def eval(self, x):
        """Fast evaluation through the factored form A_k(0.8 J(x))."""
        inner = AMPLIFIER_INNER_SCALE * chebval(np.asarray(x, dtype=float), self.jackson_poly.coeffs)
        return amplifier_value(self.amplifier_order, inner)


def window_parameters(eta_rel: float) -> tuple[float, int, int, float]:
    """The (kappa, n, k, tau) parameter chain for a relative budget eta_rel."""
    if not 0.0 < eta_rel < 1.0:
        raise OutOfRangeError(f"eta must be in (0, 1), got {eta_rel}")
    kappa = eta_rel / 4.0
    n = math.ceil(24.0 / kappa - 1e-9)
    k = math.ceil(6.0 * math.log(4.0 / eta_rel) - 1e-9)
    tau = math.exp(-k / 6.0)
    return kappa, n, k, tau


def window_poly(
    a_bar: float,
    b_bar: float,
    eta_rel: float,
    allow_large_degree: bool = False,
) -> WindowPoly:
    """Construct and grid-certify the window polynomial for [a_bar, b_bar].

    eta_rel is the error budget relative to the bound on the integrand:
    the windowed integral of any measure bounded (in the running-integral
    sense) by f_max deviates from the sharp integral by at most
    eta_rel * f_max. Degree is n*k with n = ceil(24/kappa),
    k = ceil(6 ln(4/eta_rel)), kappa = eta_rel/4.

    Raises:
        OutOfRangeError: for eta_rel below 0.02 unless allow_large_degree
            is set (the composed degree grows like (1/eta) ln(1/eta)).
        BadIntervalError: if the window plus margin does not fit in (-1, 1).
        CertificationError: if any grid check fails.
    """
    kappa, n, k, tau = window_parameters(eta_rel)
    if eta_rel < MIN_ETA_REL and not allow_large_degree:
        raise OutOfRangeError(
            f"eta={eta_rel:.4g} gives degree ~{n * k}; pass allow_large_degree=True to proceed"
        )
    if tau > eta_rel / 4.0 + 1e-15:
        raise CertificationError(f"tau={tau} exceeds eta/4={eta_rel / 4.0}")

    jackson, grid, jvals = _jackson_certified(a_bar, b_bar, kappa, n)
    amplifier = amplifying_poly(k)
    composed = compose(amplifier, jackson, AMPLIFIER_INNER_SCALE)
    if composed.degree != n * k:
        raise CertificationError(f"composed degree {composed.degree} != n*k = {n * k}")

    # Region certification on the same grid, evaluated through the factored
    # form: the amplifier is monotone, so window extrema sit at extrema of
    # the (degree n) step approximant, which the grid already resolves.
    wvals = amplifier_value(k, AMPLIFIER_INNER_SCALE * jvals)
    inside = (grid >= a_bar) & (grid <= b_bar)
    outside = (grid < a_bar - kappa) | (grid > b_bar + kappa)
    violation = max(
        float(np.max(np.abs(wvals) - 1.0, initial=-np.inf)),
        float(np.max((1.0 - tau) - wvals[inside], initial=-np.inf)),
        float(np.max(wvals[outside] - tau, initial=-np.inf)),
        float(np.max(-wvals, initial=-np.inf)),
    )
    if violation > 1e-12:
        raise CertificationError(f"window region check failed by {violation:.3g}")

    return WindowPoly(
        poly=ChebyshevPoly(composed.coeffs, sup_norm_bound=1.0),
        a_bar=a_bar,
        b_bar=b_bar,
        kappa=kappa,
        tau=tau,
        jackson_degree=n,
        amplifier_order=k,
        jackson_poly=jackson,
        cert_max_violation=max(violation, 0.0),
    )


def kpm_reconstruct(moments, grid) -> np.ndarray:
    """Kernel-polynomial reconstruction from Chebyshev moments mu_0..mu_N.

    Evaluates (g_0 mu_0 + 2 sum_{n>=1} g_n mu_n T_n(x)) / (pi sqrt(1-x^2))
    with Jackson damping g_n at each grid point in (-1, 1).
    """
    moments = np.asarray(moments, dtype=float)
    if moments.ndim != 1 or moments.size == 0:
        raise ValueError("moments must be a nonempty 1-d sequence")
    grid = np.asarray(grid, dtype=float)
    if np.any(np.abs(grid) >= 1.0):
        raise GridOutOfRangeError("grid points must lie strictly inside (-1, 1)")
    damped = moments * jackson_damping(moments.size - 1)
    damped[1:] *= 2.0
    return chebval(grid, damped) / (np.pi * np.sqrt(1.0 - grid**2))
