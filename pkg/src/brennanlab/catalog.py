"""Closed-form Riemann maps psi: D -> Omega with derivatives and Newton inversion.

The catalog stores the disc-to-domain direction in closed form together
with hand-derived boundary singularity data (points on the unit circle
where ``|psi'|`` vanishes or blows up like a power of the distance).  The
domain-to-disc direction is recovered pointwise by damped Newton
iteration, so no multivalued inverse branches ever need handling.

Families
--------
identity
    psi(w) = w, Omega = D.
moebius:a_re,a_im,theta
    Disc automorphism ``e^{i theta} (w - a)/(1 - conj(a) w)``, Omega = D.
koebe
    psi(w) = w/(1-w)^2, Omega = plane minus the ray (-inf, -1/4].
sector:beta
    psi(w) = ((1-w)/(1+w))^beta with beta in (0, 2], Omega = sector of
    opening beta*pi; beta = 2 gives the slit plane again.
cardioid
    psi(w) = w - w^2/2, Omega = interior of a cardioid.

Any family accepts the suffix ``*moebius:a_re,a_im,theta`` for
precomposition with a disc automorphism.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, replace
from typing import Callable

import numpy as np

__all__ = [
    "ConformalPair",
    "DescriptorError",
    "MapDescriptor",
    "MapDomainError",
    "NewtonConvergenceError",
    "SingularPoint",
    "cardioid_map",
    "catalog_families",
    "identity_map",
    "koebe_map",
    "make_pair",
    "moebius_map",
    "parse_descriptor",
    "sector_map",
]

TWO_PI = 2.0 * math.pi

NEWTON_TOL = 1e-12
NEWTON_MAX_ITER = 80


class MapDomainError(ValueError):
    """A point lies outside the domain of the requested evaluation."""


class NewtonConvergenceError(RuntimeError):
    """Newton inversion failed to converge from all seeds."""


class DescriptorError(ValueError):
    """A map descriptor string or parameter is malformed."""


@dataclass(frozen=True)
class SingularPoint:
    """Boundary point w0 with |psi'(w)| ~ |w - w0|**exponent near w0."""

    location: complex
    exponent: float

    @property
    def angle(self) -> float:
        return cmath.phase(self.location) % TWO_PI


@dataclass(frozen=True)
class MapDescriptor:
    """Addressable identity of a catalog map, including an optional twist.

    ``twist_a``/``twist_theta`` record precomposition with the disc
    automorphism ``m(w) = e^{i twist_theta} (w - twist_a)/(1 - conj(twist_a) w)``.
    """

    family: str
    beta: float | None = None
    a: complex = 0j
    theta: float = 0.0
    twist_a: complex | None = None
    twist_theta: float = 0.0

    def label(self) -> str:
        if self.family == "sector":
            head = f"sector:{_fmt_num(self.beta)}"
        elif self.family == "moebius":
            head = (f"moebius:{_fmt_num(self.a.real)},{_fmt_num(self.a.imag)},"
                    f"{_fmt_num(self.theta)}")
        else:
            head = self.family
        if self.twist_a is None:
            return head
        return (f"{head}*moebius:{_fmt_num(self.twist_a.real)},"
                f"{_fmt_num(self.twist_a.imag)},{_fmt_num(self.twist_theta)}")


def _fmt_num(x: float) -> str:
    return f"{x:g}"


@dataclass(frozen=True)
class ConformalPair:
    """A Riemann map psi: D -> Omega with derivative and numeric inverse.

    ``psi`` and ``dpsi`` are vectorized over complex ndarrays and are the
    raw closed forms (no domain checks); ``eval_psi``/``eval_dpsi`` add the
    ``|w| < 1`` validation.  ``domain_contains`` decides membership in
    Omega.  Immutable; safe to share between threads.
    """

    descriptor: MapDescriptor
    psi: Callable[[np.ndarray], np.ndarray]
    dpsi: Callable[[np.ndarray], np.ndarray]
    domain_contains: Callable[[complex], bool]
    singular_points: tuple[SingularPoint, ...]

    @property
    def singular_angles(self) -> tuple[float, ...]:
        return tuple(sp.angle for sp in self.singular_points)

    def eval_psi(self, w):
        _require_in_disc(w)
        return self.psi(w)

    def eval_dpsi(self, w):
        _require_in_disc(w)
        return self.dpsi(w)

    def invert(self, z: complex, seed: complex | None = None,
               tol: float = NEWTON_TOL, max_iter: int = NEWTON_MAX_ITER) -> complex:
        """Solve psi(w) = z for w in the open disc by damped Newton iteration.

        Steps that would leave the disc or increase the residual are
        halved.  The default seed is 0, with retries from eight points at
        radius 1/2.  Raises MapDomainError for z outside Omega and
        NewtonConvergenceError when every seed fails.
        """
        if not self.domain_contains(z):
            raise MapDomainError(f"point {z!r} is outside the image domain")
        if seed is not None:
            seeds = [complex(seed)]
        else:
            seeds = [0j] + [0.5 * cmath.exp(2j * math.pi * k / 8.0) for k in range(8)]
        target = tol * (1.0 + abs(z))
        for w0 in seeds:
            w = self._newton_from(w0, z, target, max_iter)
            if w is not None:
                return w
        raise NewtonConvergenceError(
            f"inversion of {self.descriptor.label()} at z={z!r} failed from "
            f"{len(seeds)} seed(s); the point may be too close to the boundary"
        )

    def _newton_from(self, w: complex, z: complex, target: float,
                     max_iter: int) -> complex | None:
        resid = abs(complex(self.psi(w)) - z)
        for _ in range(max_iter):
            if resid <= target:
                return w
            step = (complex(self.psi(w)) - z) / complex(self.dpsi(w))
            for _ in range(60):
                w_try = w - step
                if abs(w_try) < 1.0:
                    r_try = abs(complex(self.psi(w_try)) - z)
                    if r_try <= resid or r_try <= target:
                        break
                step *= 0.5
            else:
                return None
            w, resid = w_try, r_try
        return w if resid <= target else None

    def invert_many(self, z: np.ndarray, seeds: np.ndarray,
                    tol: float = NEWTON_TOL,
                    max_iter: int = NEWTON_MAX_ITER) -> tuple[np.ndarray, np.ndarray]:
        """Vectorized Newton inversion; returns (w, converged mask)."""
        z = np.asarray(z, dtype=complex)
        w = np.array(np.broadcast_to(np.asarray(seeds, dtype=complex), z.shape))
        target = tol * (1.0 + np.abs(z))
        resid = np.abs(self.psi(w) - z)
        active = resid > target
        for _ in range(max_iter):
            if not active.any():
                break
            step = np.zeros_like(w)
            step[active] = (self.psi(w[active]) - z[active]) / self.dpsi(w[active])
            w_try = w - step
            for _ in range(60):
                bad = active & ((np.abs(w_try) >= 1.0)
                                | (np.abs(self.psi(w_try) - z) > resid * (1.0 + 1e-12)))
                if not bad.any():
                    break
                step = np.where(bad, 0.5 * step, step)
                w_try = w - step
            w = np.where(active, w_try, w)
            resid = np.where(active, np.abs(self.psi(w) - z), resid)
            active = resid > target
        return w, (resid <= target) & (np.abs(w) < 1.0)

    def compose_with_moebius(self, a: complex, theta: float) -> "ConformalPair":
        """Precompose with the disc automorphism m, returning the pair for psi o m.

        Singular boundary points are transported through the inverse
        automorphism; their local exponents are unchanged because m is
        smooth with nonvanishing derivative on the closed disc.
        """
        a = complex(a)
        if abs(a) >= 1.0:
            raise MapDomainError(f"automorphism parameter must satisfy |a| < 1, got {a!r}")
        rot = cmath.exp(1j * theta)
        base_psi, base_dpsi = self.psi, self.dpsi

        def m(w):
            return rot * (w - a) / (1.0 - np.conj(a) * w)

        def dm(w):
            return rot * (1.0 - abs(a) ** 2) / (1.0 - np.conj(a) * w) ** 2

        def m_inv(v: complex) -> complex:
            u = v / rot
            return (u + a) / (1.0 + np.conj(a) * u)

        def psi(w):
            return base_psi(m(w))

        def dpsi(w):
            return base_dpsi(m(w)) * dm(w)

        moved = tuple(
            SingularPoint(_to_circle(m_inv(sp.location)), sp.exponent)
            for sp in self.singular_points
        )
        descriptor = replace(self.descriptor, twist_a=a, twist_theta=theta)
        return ConformalPair(descriptor, psi, dpsi, self.domain_contains, moved)


def _to_circle(v: complex) -> complex:
    return complex(v) / abs(complex(v))


def _require_in_disc(w) -> None:
    if np.any(np.abs(np.asarray(w)) >= 1.0):
        raise MapDomainError("evaluation point must lie in the open unit disc")


def identity_map() -> ConformalPair:
    return ConformalPair(
        MapDescriptor("identity"),
        psi=lambda w: np.asarray(w, dtype=complex) + 0j,
        dpsi=lambda w: np.ones_like(np.asarray(w, dtype=complex)),
        domain_contains=lambda z: bool(abs(z) < 1.0),
        singular_points=(),
    )


def moebius_map(a: complex, theta: float = 0.0) -> ConformalPair:
    a = complex(a)
    if abs(a) >= 1.0:
        raise DescriptorError(f"moebius parameter must satisfy |a| < 1, got {a!r}")
    rot = cmath.exp(1j * theta)

    def psi(w):
        w = np.asarray(w, dtype=complex)
        return rot * (w - a) / (1.0 - np.conj(a) * w)

    def dpsi(w):
        w = np.asarray(w, dtype=complex)
        return rot * (1.0 - abs(a) ** 2) / (1.0 - np.conj(a) * w) ** 2

    return ConformalPair(
        MapDescriptor("moebius", a=a, theta=theta),
        psi=psi,
        dpsi=dpsi,
        domain_contains=lambda z: bool(abs(z) < 1.0),
        singular_points=(),
    )


def koebe_map() -> ConformalPair:
    """The slit-plane extremal: psi(w) = w/(1-w)^2.

    |psi'| blows up like |w-1|^-3 at w = 1 (the far end of the slit) and
    vanishes like |w+1| at w = -1 (the slit tip psi(-1) = -1/4); these two
    exponents pin the integrability thresholds 4/3 and 4.
    """

    def psi(w):
        w = np.asarray(w, dtype=complex)
        return w / (1.0 - w) ** 2

    def dpsi(w):
        w = np.asarray(w, dtype=complex)
        return (1.0 + w) / (1.0 - w) ** 3

    def contains(z: complex) -> bool:
        z = complex(z)
        return not (z.imag == 0.0 and z.real <= -0.25)

    return ConformalPair(
        MapDescriptor("koebe"),
        psi=psi,
        dpsi=dpsi,
        domain_contains=contains,
        singular_points=(SingularPoint(1.0 + 0j, -3.0), SingularPoint(-1.0 + 0j, 1.0)),
    )


def sector_map(beta: float) -> ConformalPair:
    """psi(w) = ((1-w)/(1+w))^beta onto the sector of opening beta*pi.

    (1-w)/(1+w) sends the disc onto the right half-plane, where the
    principal power is holomorphic, so no branch cut is crossed.
    """
    if not 0.0 < beta <= 2.0:
        raise DescriptorError(f"sector opening parameter must lie in (0, 2], got {beta}")

    def psi(w):
        w = np.asarray(w, dtype=complex)
        return np.exp(beta * (np.log(1.0 - w) - np.log(1.0 + w)))

    def dpsi(w):
        w = np.asarray(w, dtype=complex)
        return -2.0 * beta * np.exp((beta - 1.0) * np.log(1.0 - w)
                                    - (beta + 1.0) * np.log(1.0 + w))

    half = 0.5 * beta * math.pi

    def contains(z: complex) -> bool:
        z = complex(z)
        if z == 0.0:
            return False
        return abs(cmath.phase(z)) < half

    return ConformalPair(
        MapDescriptor("sector", beta=beta),
        psi=psi,
        dpsi=dpsi,
        domain_contains=contains,
        singular_points=(SingularPoint(1.0 + 0j, beta - 1.0),
                         SingularPoint(-1.0 + 0j, -(beta + 1.0))),
    )


def cardioid_map() -> ConformalPair:
    """psi(w) = w - w^2/2; the derivative vanishes to first order at w = 1."""

    def psi(w):
        w = np.asarray(w, dtype=complex)
        return w - 0.5 * w ** 2

    def dpsi(w):
        return 1.0 - np.asarray(w, dtype=complex)

    def contains(z: complex) -> bool:
        # w = 1 - sqrt(1 - 2z) is the principal inverse; membership is |w| < 1
        return bool(abs(1.0 - np.sqrt(complex(1.0 - 2.0 * z))) < 1.0)

    return ConformalPair(
        MapDescriptor("cardioid"),
        psi=psi,
        dpsi=dpsi,
        domain_contains=contains,
        singular_points=(SingularPoint(1.0 + 0j, 1.0),),
    )


_BUILDERS = {
    "identity": lambda d: identity_map(),
    "moebius": lambda d: moebius_map(d.a, d.theta),
    "koebe": lambda d: koebe_map(),
    "sector": lambda d: sector_map(d.beta),
    "cardioid": lambda d: cardioid_map(),
}


def catalog_families() -> tuple[str, ...]:
    return tuple(_BUILDERS)


def parse_descriptor(text: str) -> MapDescriptor:
    """Parse the CLI mini-language, e.g. ``sector:1.5`` or ``koebe*moebius:0.3,0,1.2``."""
    head, _, twist = text.strip().partition("*")
    descriptor = _parse_single(head)
    if twist:
        t = _parse_single(twist)
        if t.family != "moebius":
            raise DescriptorError(f"only a moebius suffix may be composed, got {twist!r}")
        descriptor = replace(descriptor, twist_a=t.a, twist_theta=t.theta)
    return descriptor


def _parse_single(text: str) -> MapDescriptor:
    name, _, args = text.partition(":")
    name = name.strip()
    if name not in _BUILDERS:
        raise DescriptorError(
            f"unknown map family {name!r}; known: {', '.join(catalog_families())}"
        )
    if name == "sector":
        if not args:
            raise DescriptorError("sector needs an opening parameter, e.g. sector:1.5")
        beta = _parse_float(args)
        if not 0.0 < beta <= 2.0:
            raise DescriptorError(f"sector opening parameter must lie in (0, 2], got {beta}")
        return MapDescriptor("sector", beta=beta)
    if name == "moebius":
        parts = [p for p in args.split(",") if p.strip()]
        if len(parts) != 3:
            raise DescriptorError("moebius needs three numbers: a_re,a_im,theta")
        a_re, a_im, theta = (_parse_float(p) for p in parts)
        a = complex(a_re, a_im)
        if abs(a) >= 1.0:
            raise DescriptorError(f"moebius parameter must satisfy |a| < 1, got {a!r}")
        return MapDescriptor("moebius", a=a, theta=theta)
    if args:
        raise DescriptorError(f"family {name!r} takes no parameters, got {args!r}")
    return MapDescriptor(name)


def _parse_float(text: str) -> float:
    try:
        return float(text)
    except ValueError as exc:
        raise DescriptorError(f"expected a number, got {text!r}") from exc


def make_pair(descriptor: MapDescriptor | str) -> ConformalPair:
    """Build the ConformalPair for a descriptor or descriptor string."""
    if isinstance(descriptor, str):
        descriptor = parse_descriptor(descriptor)
    if descriptor.family == "sector" and descriptor.beta is None:
        raise DescriptorError("sector descriptor is missing its opening parameter")
    pair = _BUILDERS[descriptor.family](descriptor)
    if descriptor.twist_a is not None:
        pair = pair.compose_with_moebius(descriptor.twist_a, descriptor.twist_theta)
    return pair
