"""Numerical verification of composition-operator bounds on Sobolev seminorms.

Closed-form test functions on the disc provide seminorm ratios that must
respect the K_{p,q} bound, an exact p = 2 isometry, the dual-exponent
integral identity, and the one-integral equivalence across (p, q(p,s))
pairs.  The isometry check deliberately avoids the pullback shortcut: the
domain-side energy is integrated over the forward image of a disc patch,
with every quadrature node mapped back through Newton inversion and the
measure supplied by transfinite charts built from the mapped patch edges,
so nothing cancels by construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .catalog import ConformalPair, MapDescriptor, NewtonConvergenceError
from .exponents import ExponentDomainError, dual_exponent, dual_pair, q_from_ps, s_from_pq
from .functionals import FunctionalResult, RegimeError, kpq_functional
from .quadrature import (
    Classification,
    DEFAULT_SPEC,
    GradingSpec,
    IntegralEstimate,
    integrate_disc,
)

__all__ = [
    "DualityResult",
    "EquivalenceRow",
    "EquivalenceTable",
    "InadmissibleFunctionError",
    "NormRatioReport",
    "RatioSample",
    "SeminormBoundError",
    "TestFunction",
    "boundary_power",
    "duality_check",
    "equivalence_table",
    "harmonic_poly",
    "isometry_check",
    "isometry_family",
    "norm_ratio_report",
    "parse_test_function",
    "pullback_seminorm",
    "seminorm",
    "shifted_log",
    "standard_family",
]

#: multiplicative slack on ratio assertions (two stacked quadratures)
RATIO_SLACK = 1e-4


class InadmissibleFunctionError(ValueError):
    """The test function does not lie in the requested Sobolev space."""


class SeminormBoundError(AssertionError):
    """A sampled seminorm ratio exceeded the theoretical bound."""


@dataclass(frozen=True)
class TestFunction:
    """A closed-form disc function with hand-derived gradient modulus.

    ``p_cap`` is the supremum of exponents p for which the gradient lies
    in L^p of the disc (inf when there is no restriction).
    """

    name: str
    value: Callable[[np.ndarray], np.ndarray]
    grad_abs: Callable[[np.ndarray], np.ndarray]
    p_cap: float = math.inf

    def admissible_for(self, p: float) -> bool:
        # the cap itself is marginal (logarithmically divergent), so exclude it
        return p < self.p_cap * (1.0 - 1e-12)


def harmonic_poly(k: int) -> TestFunction:
    """f = Re w^k; the gradient modulus is k |w|^(k-1)."""
    if k < 1:
        raise ValueError("harmonic_poly needs k >= 1")

    def value(w):
        return np.real(np.asarray(w, dtype=complex) ** k)

    def grad_abs(w):
        return float(k) * np.abs(w) ** (k - 1)

    return TestFunction(f"harmonic_poly:{k}", value, grad_abs)


def boundary_power(gamma: float) -> TestFunction:
    """f = (1 - |w|^2)^gamma; in L^1_p exactly for gamma > 1 - 1/p."""
    if gamma <= 0.0:
        raise ValueError("boundary_power needs gamma > 0")

    def value(w):
        return (1.0 - np.abs(w) ** 2) ** gamma

    def grad_abs(w):
        r = np.abs(w)
        return 2.0 * gamma * r * (1.0 - r ** 2) ** (gamma - 1.0)

    cap = math.inf if gamma >= 1.0 else 1.0 / (1.0 - gamma)
    return TestFunction(f"boundary_power:{gamma:g}", value, grad_abs, p_cap=cap)


def shifted_log() -> TestFunction:
    """f = log|w - 2|; smooth on the closed disc, gradient modulus 1/|w - 2|."""

    def value(w):
        return np.log(np.abs(np.asarray(w, dtype=complex) - 2.0))

    def grad_abs(w):
        return 1.0 / np.abs(np.asarray(w, dtype=complex) - 2.0)

    return TestFunction("shifted_log", value, grad_abs)


def standard_family() -> tuple[TestFunction, ...]:
    """The fixed eight-function family used in every ratio report."""
    return (
        harmonic_poly(1), harmonic_poly(2), harmonic_poly(3), harmonic_poly(4),
        boundary_power(0.9), boundary_power(1.5), boundary_power(3.0),
        shifted_log(),
    )


def isometry_family() -> tuple[TestFunction, ...]:
    """Three representatives (one non-harmonic) for the isometry check."""
    return (harmonic_poly(1), boundary_power(1.5), shifted_log())


def parse_test_function(text: str) -> TestFunction:
    name, _, arg = text.strip().partition(":")
    if name == "harmonic_poly":
        return harmonic_poly(int(arg))
    if name == "boundary_power":
        return boundary_power(float(arg))
    if name == "shifted_log":
        return shifted_log()
    raise ValueError(
        f"unknown test function {text!r}; use harmonic_poly:k, "
        "boundary_power:gamma or shifted_log"
    )


def seminorm(f: TestFunction, p: float, spec: GradingSpec = DEFAULT_SPEC) -> float:
    """Homogeneous Sobolev seminorm (integral of |grad f|^p over the disc)^(1/p)."""
    if not 1.0 <= p < math.inf:
        raise ExponentDomainError(f"seminorm needs 1 <= p < inf, got p={p}")
    if not f.admissible_for(p):
        raise InadmissibleFunctionError(
            f"{f.name} is not in the p={p} Sobolev space (admissible for p < {f.p_cap:g})"
        )
    est = integrate_disc(lambda w: f.grad_abs(w) ** p, (), spec)
    if est.classification is not Classification.CONVERGED:
        raise InadmissibleFunctionError(
            f"gradient integral of {f.name} at p={p} classified "
            f"{est.classification.value}"
        )
    return est.value ** (1.0 / p)


def _pullback_estimate(pair: ConformalPair, f: TestFunction, q: float,
                       spec: GradingSpec) -> IntegralEstimate:
    def g(w):
        return f.grad_abs(w) ** q * np.abs(pair.dpsi(w)) ** (2.0 - q)

    return integrate_disc(g, pair.singular_angles, spec)


def pullback_seminorm(pair: ConformalPair, f: TestFunction, q: float,
                      spec: GradingSpec = DEFAULT_SPEC) -> float:
    """Seminorm of the pulled-back function f(phi(.)) on Omega.

    By the conformal chain rule the domain-side integral equals
    ``integral over D of |grad f|^q |psi'|^(2-q)``; a diverging integral is
    reported as ``inf``.
    """
    if not 1.0 <= q < math.inf:
        raise ExponentDomainError(f"pullback seminorm needs 1 <= q < inf, got q={q}")
    est = _pullback_estimate(pair, f, q, spec)
    if est.classification is not Classification.CONVERGED:
        return math.inf
    return est.value ** (1.0 / q)


@dataclass(frozen=True)
class RatioSample:
    function: str
    seminorm_p: float
    pullback_seminorm_q: float
    ratio: float


@dataclass(frozen=True)
class NormRatioReport:
    descriptor: MapDescriptor
    p: float
    q: float
    bound_kpq: float
    samples: tuple[RatioSample, ...]
    max_ratio: float
    bound_satisfied: bool


def norm_ratio_report(pair: ConformalPair, p: float, q: float,
                      family: Sequence[TestFunction] | None = None,
                      spec: GradingSpec = DEFAULT_SPEC,
                      check: bool = True) -> NormRatioReport:
    """Sampled seminorm ratios against the K_{p,q} bound.

    Functions not admissible for p are skipped.  When the bound is finite
    every ratio must stay below ``bound*(1 + RATIO_SLACK)``; with ``check``
    a violation raises, otherwise it is recorded in ``bound_satisfied``.
    An infinite bound makes the report purely informational.
    """
    if p == math.inf:
        raise RegimeError("ratio reports need finite p; use kpq_functional for p = inf")
    if not 1.0 <= q < p:
        raise RegimeError(f"ratio report requires 1 <= q < p, got p={p}, q={q}")
    members = [f for f in (family if family is not None else standard_family())
               if f.admissible_for(p)]
    if not members:
        raise InadmissibleFunctionError(f"no admissible test functions for p={p}")
    bound = kpq_functional(pair, p, q, spec).kpq_value
    samples = []
    for f in members:
        sp = seminorm(f, p, spec)
        sq = pullback_seminorm(pair, f, q, spec)
        samples.append(RatioSample(f.name, sp, sq, sq / sp))
    max_ratio = max(s.ratio for s in samples)
    ok = (max_ratio <= bound * (1.0 + RATIO_SLACK)) if math.isfinite(bound) else True
    report = NormRatioReport(pair.descriptor, p, q, bound, tuple(samples), max_ratio, ok)
    if check and not ok:
        raise SeminormBoundError(
            f"max ratio {max_ratio} exceeds K_(p,q) = {bound} for "
            f"{pair.descriptor.label()}, p={p}, q={q}"
        )
    return report


# ---------------------------------------------------------------------------
# forward-patch isometry check
# ---------------------------------------------------------------------------

#: maximal |psi'| variation tolerated inside one patch cell before splitting
DISTORTION_CAP = 1.8
_MAX_SPLIT_DEPTH = 18


def _split_cell(cell, pair):
    ra, rb, ta, tb = cell
    rm = 0.5 * (ra + rb)
    tm = 0.5 * (ta + tb)
    # split whichever side is metrically longer
    if (rb - ra) >= 0.5 * (ra + rb) * (tb - ta):
        return [(ra, rm, ta, tb), (rm, rb, ta, tb)]
    return [(ra, rb, ta, tm), (ra, rb, tm, tb)]


def _cell_distortion(cell, pair) -> float:
    ra, rb, ta, tb = cell
    r = np.linspace(ra, rb, 3)
    t = np.linspace(ta, tb, 3)
    w = r[:, None] * np.exp(1j * t)[None, :]
    mags = np.abs(pair.dpsi(np.where(np.abs(w) > 0, w, 0.0)))
    lo = float(np.min(mags))
    return math.inf if lo == 0.0 else float(np.max(mags)) / lo


def _patch_cells(pair: ConformalPair, r0: float, r1: float):
    """Polar cells covering the patch, refined until |psi'| is nearly constant."""
    seeds = []
    quadrants = [(k * math.pi / 2.0, (k + 1) * math.pi / 2.0) for k in range(4)]
    if r0 == 0.0:
        rc = 0.5 * r1
        seeds += [(0.0, rc, ta, tb) for ta, tb in quadrants]
        seeds += [(rc, r1, ta, tb) for ta, tb in quadrants]
    else:
        seeds += [(r0, r1, ta, tb) for ta, tb in quadrants]
    out = []
    stack = [(c, 0) for c in seeds]
    while stack:
        cell, depth = stack.pop()
        if depth < _MAX_SPLIT_DEPTH and _cell_distortion(cell, pair) > DISTORTION_CAP:
            stack.extend((c, depth + 1) for c in _split_cell(cell, pair))
        else:
            out.append(cell)
    return out


def _coons_grid(pair: ConformalPair, cell, n: int):
    """Tensor GL nodes, weights and polar seeds for the image of one cell.

    The cell image is charted by transfinite interpolation of its four
    mapped edges; the chart Jacobian supplies the area measure, so the
    interior measure never uses |psi'| pointwise.
    """
    ra, rb, ta, tb = cell
    x, gw = np.polynomial.legendre.leggauss(n)
    u = 0.5 * (x + 1.0)
    wu = 0.5 * gw
    dr = rb - ra
    dt = tb - ta

    def radius(s):
        return ra + dr * s

    def angle(s):
        return ta + dt * s

    w_bottom = radius(u) * np.exp(1j * ta)
    w_top = radius(u) * np.exp(1j * tb)
    w_left = ra * np.exp(1j * angle(u))
    w_right = rb * np.exp(1j * angle(u))

    B, Tt = pair.psi(w_bottom), pair.psi(w_top)
    L, R = pair.psi(w_left), pair.psi(w_right)
    dB = pair.dpsi(w_bottom) * dr * np.exp(1j * ta)
    dTt = pair.dpsi(w_top) * dr * np.exp(1j * tb)
    dL = pair.dpsi(w_left) * 1j * dt * w_left
    dR = pair.dpsi(w_right) * 1j * dt * w_right

    p00 = complex(pair.psi(ra * np.exp(1j * ta)))
    p10 = complex(pair.psi(rb * np.exp(1j * ta)))
    p01 = complex(pair.psi(ra * np.exp(1j * tb)))
    p11 = complex(pair.psi(rb * np.exp(1j * tb)))

    U = u[:, None]
    V = u[None, :]
    z = ((1.0 - V) * B[:, None] + V * Tt[:, None]
         + (1.0 - U) * L[None, :] + U * R[None, :]
         - ((1.0 - U) * (1.0 - V) * p00 + U * (1.0 - V) * p10
            + (1.0 - U) * V * p01 + U * V * p11))
    z_u = ((1.0 - V) * dB[:, None] + V * dTt[:, None]
           + (R[None, :] - L[None, :])
           - (-(1.0 - V) * p00 + (1.0 - V) * p10 - V * p01 + V * p11))
    z_v = ((Tt[:, None] - B[:, None])
           + (1.0 - U) * dL[None, :] + U * dR[None, :]
           - (-(1.0 - U) * p00 - U * p10 + (1.0 - U) * p01 + U * p11))
    jac = np.imag(np.conj(z_u) * z_v)
    weights = wu[:, None] * wu[None, :] * jac
    seeds = radius(U) * np.exp(1j * angle(V))
    return z, weights, seeds, float(np.min(jac))


def _forward_patch_integral(pair: ConformalPair, integrand_w, r0: float,
                            r1: float, order: int) -> float:
    """Integral over psi(patch) of a quantity evaluated at w = phi(z).

    Every chart node z is inverted by Newton iteration; the chart Jacobian
    carries the measure.  Cells whose chart folds are split further.
    """
    total = 0.0
    stack = [(c, 0) for c in _patch_cells(pair, r0, r1)]
    while stack:
        cell, depth = stack.pop()
        z, weights, seeds, jac_min = _coons_grid(pair, cell, order)
        if jac_min <= 0.0:
            if depth >= _MAX_SPLIT_DEPTH:
                raise RuntimeError(f"degenerate forward chart on cell {cell}")
            stack.extend((c, depth + 1) for c in _split_cell(cell, pair))
            continue
        w, ok = pair.invert_many(z, seeds)
        if not np.all(ok):
            bad = z[~ok].ravel()[0]
            raise NewtonConvergenceError(
                f"forward-patch inversion failed at z={bad!r} "
                f"(map {pair.descriptor.label()}, cell {cell})"
            )
        total += float(np.sum(weights * integrand_w(w)))
    return total


def _disc_patch_integral(f: TestFunction, r0: float, r1: float,
                         n_rad: int = 48, n_ang: int = 256) -> float:
    x, gw = np.polynomial.legendre.leggauss(n_rad)
    r = r0 + (r1 - r0) * 0.5 * (x + 1.0)
    wr = 0.5 * (r1 - r0) * gw * r
    panels = 32
    xa, wa = np.polynomial.legendre.leggauss(max(4, n_ang // panels))
    theta = np.concatenate([
        (2.0 * math.pi * (k + 0.5 * (xa + 1.0)) / panels) for k in range(panels)
    ])
    wtheta = np.concatenate([0.5 * (2.0 * math.pi / panels) * wa] * panels)
    w = r[:, None] * np.exp(1j * theta)[None, :]
    vals = f.grad_abs(w) ** 2
    return float((wr @ vals) @ wtheta)


def isometry_check(pair: ConformalPair, f: TestFunction,
                   patch: tuple[float, float] = (0.0, 0.8),
                   order: int = 16) -> float:
    """Ratio of the forward-patch Dirichlet energy to the disc-side energy.

    The domain side integrates ``|grad f|^2(phi(z)) * |phi'(z)|^2`` over
    the image of the patch with its own measure (chart Jacobians plus
    Newton inversion at every node); the disc side integrates
    ``|grad f|^2`` over the patch directly.  The two agree exactly when
    ``|phi'|^2`` is the Jacobian, so the returned ratio should be 1.
    """
    r0, r1 = patch
    if not 0.0 <= r0 < r1 < 1.0:
        raise ValueError(f"patch must satisfy 0 <= r0 < r1 < 1, got {patch}")

    def integrand(w):
        return f.grad_abs(w) ** 2 / np.abs(pair.dpsi(w)) ** 2

    omega_side = _forward_patch_integral(pair, integrand, r0, r1, order)
    disc_side = _disc_patch_integral(f, r0, r1)
    return omega_side / disc_side


# ---------------------------------------------------------------------------
# duality and equivalence
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DualityResult:
    """Both routes to the shared dual integral, with agreement diagnostics.

    ``rhs`` integrates |psi'| to the exponent built from (p, q), ``lhs``
    to the exponent built from the conjugate pair (q', p'); the exponents
    agree algebraically, the integrals must agree numerically, and the
    divergence verdicts must match.
    """

    p: float
    q: float
    q_conj: float
    p_conj: float
    exponent_direct: float
    exponent_dual: float
    lhs: float
    rhs: float
    lhs_classification: Classification
    rhs_classification: Classification
    rel_diff: float
    agree: bool


def duality_check(pair: ConformalPair, p: float, q: float,
                  spec: GradingSpec = DEFAULT_SPEC) -> DualityResult:
    """Verify the change-of-variables identity behind the inverse operator.

    Requires ``1 < q < p < inf``.  ``rel_diff`` is NaN unless both sides
    converge; ``agree`` is True when both converge to equal values (within
    1e-3 relative) or both diverge.
    """
    if not (1.0 < q < p < math.inf):
        raise RegimeError(f"duality check requires 1 < q < p < inf, got p={p}, q={q}")
    q_conj, p_conj = dual_pair(p, q)
    expo_direct = dual_exponent(p, q)
    expo_dual = (q_conj - 2.0) * p_conj / (q_conj - p_conj)

    def integral(expo):
        return integrate_disc(lambda w: np.abs(pair.dpsi(w)) ** expo,
                              pair.singular_angles, spec)

    rhs_est = integral(expo_direct)
    lhs_est = integral(expo_dual)
    lhs_conv = lhs_est.classification is Classification.CONVERGED
    rhs_conv = rhs_est.classification is Classification.CONVERGED
    if lhs_conv and rhs_conv:
        rel = abs(lhs_est.value - rhs_est.value) / max(abs(rhs_est.value), 1e-300)
        agree = rel <= 1e-3
    else:
        rel = math.nan
        agree = lhs_est.classification == rhs_est.classification
    return DualityResult(
        p=p, q=q, q_conj=q_conj, p_conj=p_conj,
        exponent_direct=expo_direct, exponent_dual=expo_dual,
        lhs=lhs_est.value if lhs_conv else math.inf,
        rhs=rhs_est.value if rhs_conv else math.inf,
        lhs_classification=lhs_est.classification,
        rhs_classification=rhs_est.classification,
        rel_diff=rel, agree=agree,
    )


@dataclass(frozen=True)
class EquivalenceRow:
    p: float
    q: float
    s_roundtrip: float
    integral_value: float
    classification: Classification
    kpq_value: float


@dataclass(frozen=True)
class EquivalenceTable:
    """One map and Brennan exponent swept across a grid of p values.

    When the Brennan integral converges, every row must be backed by the
    same underlying integral value: the (p-dependent) pair (p, q(p,s))
    always integrates |psi'| to the same power 2 - s.
    """

    descriptor: MapDescriptor
    s: float
    rows: tuple[EquivalenceRow, ...]
    integral_spread: float
    all_converged: bool
    all_diverged: bool

    @property
    def consistent(self) -> bool:
        if self.all_converged:
            return self.integral_spread <= 1e-10
        return self.all_diverged


def equivalence_table(pair: ConformalPair, s: float, p_grid: Sequence[float],
                      spec: GradingSpec = DEFAULT_SPEC) -> EquivalenceTable:
    """Evaluate K_{p, q(p,s)} for every p in the grid at fixed s.

    Each row recomputes the integrand exponent through its own (p, q)
    round trip; ``q(p, s) < p`` holds on every row by construction.
    """
    if not p_grid:
        raise ExponentDomainError("p grid must be nonempty")
    rows = []
    for p in p_grid:
        q = q_from_ps(p, s)
        s_rt = s_from_pq(p, q)
        res = kpq_functional(pair, p, q, spec)
        rows.append(EquivalenceRow(
            p=p, q=q, s_roundtrip=s_rt,
            integral_value=res.integral.value,
            classification=res.integral.classification,
            kpq_value=res.kpq_value,
        ))
    converged = [r for r in rows if r.classification is Classification.CONVERGED]
    all_conv = len(converged) == len(rows)
    all_div = all(r.classification is Classification.DIVERGING for r in rows)
    if all_conv:
        values = np.asarray([r.integral_value for r in rows])
        spread = float((values.max() - values.min()) / max(abs(values.mean()), 1e-300))
    else:
        spread = math.nan
    return EquivalenceTable(pair.descriptor, s, tuple(rows), spread, all_conv, all_div)
