"""Graded polar quadrature on the unit disc with tail-based divergence detection.

The integrands of interest are nonnegative with power-type singularities at
finitely many boundary points (and possibly along the whole boundary in the
radial direction).  The disc is covered by an inner disc of radius 1/2 plus
geometrically shrinking annuli whose boundary gap decreases by
``annulus_ratio`` per step down to ``eps_min``.  Each annulus carries a
tensor rule: Gauss-Legendre in the radius and a composite Gauss-Legendre
angular rule whose panels shrink geometrically toward every declared
singular angle until they match the annulus gap, so a spike of angular
width comparable to the gap is always resolved.

Convergence versus divergence is decided from the per-annulus
contributions: a power-law fit of the last few increments against
``log(1/eps)`` gives a slope, negative slopes mean geometrically shrinking
increments (convergent tail, which is then extrapolated and added to the
value), non-shrinking increments mean the integral grows at least
logarithmically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

__all__ = [
    "Classification",
    "GradingSpec",
    "IntegralEstimate",
    "InvalidGradingError",
    "NonFiniteIntegrandError",
    "QuadratureError",
    "classify_tail",
    "integrate_disc",
    "integrate_truncated",
]

TWO_PI = 2.0 * math.pi

#: |slope| band separating geometrically shrinking increments from the rest
SLOPE_TOL = 0.05
#: number of trailing annulus increments entering the tail fit
FIT_WINDOW = 5
#: rms log-residual above which the power-law fit is distrusted
FIT_RESIDUAL_TOL = 0.15
#: outermost boundary gap: the inner disc has radius 1 - EPS_START
EPS_START = 0.5


class QuadratureError(Exception):
    """Base class for quadrature failures."""


class NonFiniteIntegrandError(QuadratureError):
    """The integrand returned a non-finite value at a quadrature node."""


class InvalidGradingError(QuadratureError, ValueError):
    """A GradingSpec field is out of range."""


class Classification(str, Enum):
    CONVERGED = "converged"
    DIVERGING = "diverging"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class GradingSpec:
    """Resolution knobs of the graded disc rule.

    eps_min
        Innermost boundary gap; the outermost integrated radius is
        ``1 - eps_min``.
    annulus_ratio
        Geometric factor by which the gap shrinks per annulus.
    radial_order
        Gauss-Legendre points per annulus in the radial direction.
    angular_base
        Approximate number of angular nodes far from singular angles; also
        caps the width of the graded panels.
    angular_boost
        Gauss-Legendre points on each graded angular panel near a declared
        singular angle.
    """

    eps_min: float = 1e-8
    annulus_ratio: float = 0.5
    radial_order: int = 16
    angular_base: int = 64
    angular_boost: int = 8

    def validate(self) -> None:
        if not 0.0 < self.eps_min <= EPS_START:
            raise InvalidGradingError(f"eps_min must lie in (0, {EPS_START}], got {self.eps_min}")
        if not 0.0 < self.annulus_ratio < 1.0:
            raise InvalidGradingError(f"annulus_ratio must lie in (0, 1), got {self.annulus_ratio}")
        if self.radial_order < 2:
            raise InvalidGradingError("radial_order must be at least 2")
        if self.angular_base < 8:
            raise InvalidGradingError("angular_base must be at least 8")
        if self.angular_boost < 2:
            raise InvalidGradingError("angular_boost must be at least 2")


DEFAULT_SPEC = GradingSpec()


@dataclass(frozen=True)
class IntegralEstimate:
    """Disc integral with truncation bookkeeping.

    ``value`` includes the extrapolated boundary tail when the tail fit
    classifies the integral as converged; ``tail_estimate`` is then the
    residual uncertainty of that extrapolation (not the extrapolated mass,
    which is already inside ``value``).  For a diverging integral ``value``
    is the bare truncated sum, the error is unbounded and
    ``abs_error_estimate`` is ``inf``.  ``fitted_slope`` is the exponent of
    the increment power law: increments behave like ``eps**(-slope)``, so
    negative slopes shrink; it is ``nan`` when no fit was possible.
    """

    value: float
    abs_error_estimate: float
    truncation_eps: float
    tail_estimate: float
    classification: Classification
    fitted_slope: float


@lru_cache(maxsize=None)
def _gauss(n: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(n)
    return x, w


def _panel(a: float, b: float, n: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = _gauss(n)
    half = 0.5 * (b - a)
    return a + half * (x + 1.0), half * w


def _uniform_panels(a: float, b: float, width_cap: float) -> list[tuple[float, float]]:
    m = max(1, int(math.ceil((b - a) / width_cap)))
    edges = np.linspace(a, b, m + 1)
    return [(edges[i], edges[i + 1]) for i in range(m)]


def _graded_side(start: float, stop: float, scale: float, width_cap: float,
                 outward: bool) -> list[tuple[float, float]]:
    """Panels on [start, stop] shrinking geometrically toward ``start``.

    Panel widths grow by factors of two away from ``start`` beginning at
    ``scale``; panels wider than ``width_cap`` are split uniformly.  With
    ``outward`` False the roles of the ends are swapped.
    """
    length = stop - start
    if length <= 0.0:
        return []
    if length <= scale:
        return [(start, stop)]
    edges = [0.0]
    d = scale
    while d < length:
        edges.append(d)
        d *= 2.0
    edges.append(length)
    panels: list[tuple[float, float]] = []
    for a, b in zip(edges[:-1], edges[1:]):
        for pa, pb in _uniform_panels(a, b, width_cap):
            panels.append((start + pa, start + pb) if outward
                          else (stop - pb, stop - pa))
    return panels


def _angular_rule(singular_angles: Sequence[float], scale: float,
                  spec: GradingSpec) -> tuple[np.ndarray, np.ndarray]:
    """Composite angular rule on [0, 2pi) graded toward the singular angles."""
    width_cap = TWO_PI / max(8, spec.angular_base // spec.angular_boost)
    panels: list[tuple[float, float]] = []
    if not singular_angles:
        panels = _uniform_panels(0.0, TWO_PI, width_cap)
    else:
        angles = sorted(a % TWO_PI for a in singular_angles)
        for i, a in enumerate(angles):
            b = angles[(i + 1) % len(angles)] if len(angles) > 1 else a + TWO_PI
            if b <= a:
                b += TWO_PI
            mid = 0.5 * (a + b)
            panels.extend(_graded_side(a, mid, scale, width_cap, outward=True))
            panels.extend(_graded_side(mid, b, scale, width_cap, outward=False))
    nodes = []
    weights = []
    for a, b in panels:
        x, w = _panel(a, b, spec.angular_boost)
        nodes.append(x)
        weights.append(w)
    return np.concatenate(nodes), np.concatenate(weights)


def _ring_sum(g: Callable[[np.ndarray], np.ndarray], r_lo: float, r_hi: float,
              theta: np.ndarray, wtheta: np.ndarray, radial_order: int) -> float:
    """Tensor Gauss-Legendre integral of g over the annulus r_lo <= |w| <= r_hi."""
    r, wr = _panel(r_lo, r_hi, radial_order)
    w = r[:, None] * np.exp(1j * theta)[None, :]
    vals = np.asarray(g(w), dtype=float)
    if not np.all(np.isfinite(vals)):
        bad = np.argwhere(~np.isfinite(vals))[0]
        raise NonFiniteIntegrandError(
            f"integrand non-finite at node w={w[tuple(bad)]!r}"
        )
    # polar Jacobian r folded into the radial weights; fixed reduction order
    return float((wr * r) @ vals @ wtheta)


def _gap_ladder(spec: GradingSpec, eps_stop: float) -> list[float]:
    """Boundary gaps from EPS_START down to exactly eps_stop.

    The requested annulus_ratio is adjusted to the nearest value that
    lands on eps_stop after an integer number of steps, keeping the gaps
    an exact geometric lattice (the tail fit relies on that).
    """
    if eps_stop >= EPS_START:
        return [EPS_START]
    span = math.log(eps_stop / EPS_START)
    n = max(1, round(span / math.log(spec.annulus_ratio)))
    ratio = math.exp(span / n)
    gaps = [EPS_START * ratio ** k for k in range(n)]
    gaps.append(eps_stop)
    return gaps


def _graded_sums(g, singular_angles, spec: GradingSpec, eps_stop: float):
    """Inner-disc value plus per-annulus contributions down to eps_stop."""
    angles = tuple(a % TWO_PI for a in singular_angles)
    core_theta, core_wtheta = _angular_rule(angles, EPS_START, spec)
    core = _ring_sum(g, 0.0, 1.0 - EPS_START, core_theta, core_wtheta, spec.radial_order)
    gaps = _gap_ladder(spec, eps_stop)
    increments: list[float] = []
    gap_after: list[float] = []
    for outer_gap, inner_gap in zip(gaps[:-1], gaps[1:]):
        theta, wtheta = _angular_rule(angles, inner_gap, spec)
        inc = _ring_sum(g, 1.0 - outer_gap, 1.0 - inner_gap, theta, wtheta,
                        spec.radial_order)
        increments.append(inc)
        gap_after.append(inner_gap)
    return core, increments, gap_after


def _fit_loglog(eps: np.ndarray, inc: np.ndarray) -> tuple[float, float]:
    """Least-squares slope of log(inc) against log(1/eps), with rms residual."""
    x = np.log(1.0 / eps)
    y = np.log(inc)
    coeffs = np.polyfit(x, y, 1)
    resid = y - np.polyval(coeffs, x)
    return float(coeffs[0]), float(math.sqrt(np.mean(resid ** 2)))


def _classify_increments(increments: Sequence[float], eps: Sequence[float],
                         floor: float) -> tuple[Classification, float, float]:
    """Classify a tail from its increments; returns (verdict, slope, rms residual).

    Increments at or below ``floor`` count as numerically dead.  A fit
    needs at least three live increments; fewer live points or a bad fit
    give INCONCLUSIVE.
    """
    inc = np.asarray(increments, dtype=float)
    eps_arr = np.asarray(eps, dtype=float)
    tail_dead = inc[-min(3, len(inc)):] <= floor
    if np.all(inc <= floor) or np.all(tail_dead):
        return Classification.CONVERGED, 0.0, 0.0
    if np.any(inc <= 0.0):
        return Classification.INCONCLUSIVE, math.nan, math.nan
    window = min(FIT_WINDOW, len(inc))
    if window < 3:
        return Classification.INCONCLUSIVE, math.nan, math.nan
    slope, sigma = _fit_loglog(eps_arr[-window:], inc[-window:])
    if sigma > FIT_RESIDUAL_TOL:
        return Classification.INCONCLUSIVE, slope, sigma
    if slope <= -SLOPE_TOL:
        return Classification.CONVERGED, slope, sigma
    return Classification.DIVERGING, slope, sigma


def integrate_disc(g: Callable[[np.ndarray], np.ndarray],
                   singular_angles: Sequence[float] = (),
                   spec: GradingSpec = DEFAULT_SPEC) -> IntegralEstimate:
    """Integrate a nonnegative integrand over the unit disc.

    ``g`` must accept a complex ndarray of interior points (all with
    ``|w| < 1``) and return finite nonnegative values of the same shape.
    ``singular_angles`` lists the polar angles of boundary points where
    ``g`` blows up or vanishes fast; the angular rule is graded toward
    them.  Purely radial boundary behaviour needs no declaration.
    """
    spec.validate()
    core, increments, gap_after = _graded_sums(g, singular_angles, spec, spec.eps_min)
    truncated = core + math.fsum(increments)
    floor = 1e-15 * (abs(truncated) + 1e-30)
    if len(increments) < 4:
        inc_tail = np.asarray(increments[-3:] or [0.0])
        if np.all(inc_tail <= floor):
            verdict, slope, sigma = Classification.CONVERGED, 0.0, 0.0
        else:
            verdict, slope, sigma = Classification.INCONCLUSIVE, math.nan, math.nan
    else:
        verdict, slope, sigma = _classify_increments(increments, gap_after, floor)

    value = truncated
    if verdict is Classification.CONVERGED:
        ratio_eff = (gap_after[-1] / gap_after[-2]) if len(gap_after) >= 2 \
            else spec.annulus_ratio
        tail_extrap, tail_err = _extrapolate_tail(increments, slope, sigma,
                                                  ratio_eff, floor)
        value = truncated + tail_extrap
        tail_estimate = tail_err + 1e-15 * abs(value)
        abs_err = tail_estimate + 1e-13 * abs(value)
    elif verdict is Classification.DIVERGING:
        tail_estimate = increments[-1]
        abs_err = math.inf
    else:
        tail_estimate = increments[-1] if increments else 0.0
        abs_err = math.inf
    return IntegralEstimate(
        value=value,
        abs_error_estimate=abs_err,
        truncation_eps=spec.eps_min,
        tail_estimate=tail_estimate,
        classification=verdict,
        fitted_slope=slope,
    )


def _extrapolate_tail(increments: Sequence[float], slope: float, sigma: float,
                      ratio: float, floor: float) -> tuple[float, float]:
    """Geometric extrapolation of the remaining tail, with an uncertainty.

    Increments follow ``eps**(-slope)``, so successive annuli shrink by
    ``q = ratio**(-slope)``; the mass beyond the last annulus is the
    geometric series ``last * q/(1 - q)``.  The uncertainty combines the
    fit residual with the difference against a two-point extrapolation.
    """
    last = increments[-1]
    if last <= floor or slope >= 0.0:
        return 0.0, 0.0
    q = ratio ** (-slope)
    if not 0.0 < q < 1.0:
        return 0.0, 0.0
    tail = last * q / (1.0 - q)
    tail_alt = tail
    if len(increments) >= 2 and increments[-2] > floor:
        q2 = increments[-1] / increments[-2]
        if 0.0 < q2 < 1.0:
            tail_alt = last * q2 / (1.0 - q2)
    err = abs(tail - tail_alt) + tail * math.expm1(2.0 * max(sigma, 0.0))
    return tail, err


def integrate_truncated(g: Callable[[np.ndarray], np.ndarray], eps: float,
                        singular_angles: Sequence[float] = (),
                        spec: GradingSpec = DEFAULT_SPEC) -> float:
    """Integral of g over the truncated disc ``|w| <= 1 - eps`` (no extrapolation)."""
    spec.validate()
    if not 0.0 < eps <= EPS_START:
        raise InvalidGradingError(f"truncation eps must lie in (0, {EPS_START}], got {eps}")
    if eps == EPS_START:
        core, _, _ = _graded_sums(g, singular_angles, spec, EPS_START)
        return core
    core, increments, _ = _graded_sums(g, singular_angles, spec, eps)
    return core + math.fsum(increments)


def classify_tail(samples: Sequence[tuple[float, float]]) -> tuple[Classification, float]:
    """Classify a sequence of truncated values ``(eps, value)`` with eps decreasing.

    The increments between successive values are fitted exactly like the
    per-annulus contributions of :func:`integrate_disc`: geometrically
    shrinking increments mean the limit exists, non-shrinking increments
    mean at least logarithmic growth.  Returns the verdict and the fitted
    slope of the increments against ``log(1/eps)`` (0 for a dead tail).
    """
    if len(samples) < 4:
        raise ValueError(f"need at least 4 samples, got {len(samples)}")
    eps = np.asarray([s[0] for s in samples], dtype=float)
    values = np.asarray([s[1] for s in samples], dtype=float)
    if not np.all(np.diff(eps) < 0.0):
        raise ValueError("eps values must be strictly decreasing")
    increments = np.diff(values)
    scale = max(float(np.max(np.abs(values))), 1e-30)
    floor = 1e-15 * scale
    if np.any(increments < -floor):
        return Classification.INCONCLUSIVE, math.nan
    increments = np.clip(increments, 0.0, None)
    verdict, slope, _ = _classify_increments(increments, eps[1:], floor)
    return verdict, slope
