"""Exact attainable region of n-th order Bargmann invariants.

The set of values tr(psi_1 ... psi_n) over all pure tuples (any dimension) is
a convex region bounded by the polar curve

    r_n(theta) = cos^n(pi/n) * sec^n((theta - pi)/n),  theta in [0, 2*pi].

Its n-th root pre-image is the regular n-gon spanned by the n-th roots of
unity, and the boundary is attained by a single-parameter family of qubit
tuples (the OBG states).  For n = 3 and n = 4 the boundary is also the
envelope of an explicit family of curves, which this module cross-checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import StateTuple
from .errors import NumericalError, ValidationError
from .invariants import bargmann


def _check_order(n: int, minimum: int = 3) -> None:
    if n < minimum:
        raise ValidationError(f"order must be at least {minimum}, got {n}")


def _reduce_angle(theta: float) -> float:
    """Map an angle into [0, 2*pi], keeping endpoint values as given."""
    if 0.0 <= theta <= 2.0 * math.pi:
        return float(theta)
    return float(np.mod(theta, 2.0 * math.pi))


def boundary_radius(n: int, theta: float) -> float:
    """Boundary modulus r_n(theta) = cos^n(pi/n) sec^n((theta - pi)/n).

    Examples
    --------
    >>> boundary_radius(3, math.pi)
    0.12500000000000008
    >>> round(boundary_radius(4, 0.0), 12)
    1.0
    """
    _check_order(n)
    th = _reduce_angle(theta)
    return float((math.cos(math.pi / n) / math.cos((th - math.pi) / n)) ** n)


def region_contains(n: int, z: complex, tol: float = 1e-9) -> bool:
    """Membership of z in the attainable region of order n.

    The origin is attainable (orthogonal states), so z = 0 is always inside.
    Otherwise the test is |z| <= r_n(arg z) + tol with the argument mapped to
    [0, 2*pi).
    """
    _check_order(n)
    z = complex(z)
    if z == 0:
        return True
    theta = float(np.mod(np.angle(z), 2.0 * math.pi))
    return abs(z) <= boundary_radius(n, theta) + tol


@dataclass(frozen=True)
class RegionBounds:
    min_real: float
    tau: float


def region_bounds(n: int) -> RegionBounds:
    """Extremes of the region: leftmost real value and peak imaginary part.

    min_real = -cos^n(pi/n) and tau = cos^n(pi/n) sec^(n-1)(pi/(2(n-1))).
    The closed form for tau is cross-checked against r_n(theta) sin(theta)
    at its stationary angle theta = (n-2)/(n-1) * pi/2.
    """
    _check_order(n)
    c = math.cos(math.pi / n) ** n
    tau = c / math.cos(math.pi / (2 * (n - 1))) ** (n - 1)
    theta_star = (n - 2) / (n - 1) * math.pi / 2.0
    tau_check = boundary_radius(n, theta_star) * math.sin(theta_star)
    if abs(tau - tau_check) > 1e-10:
        raise NumericalError(
            f"closed-form tau {tau!r} disagrees with stationary value {tau_check!r}"
        )
    return RegionBounds(min_real=-c, tau=tau)


def theta_to_t(n: int, theta: float) -> float:
    """Boundary parameter t(theta) = (1 - cot(pi/n) tan((theta - pi)/n)) / 2.

    Monotone decreasing bijection from [0, 2*pi] onto [1, 0]; the returned
    value is clamped into [0, 1] against roundoff at the endpoints.
    """
    _check_order(n)
    th = _reduce_angle(theta)
    t = 0.5 * (1.0 - math.tan((th - math.pi) / n) / math.tan(math.pi / n))
    return float(min(1.0, max(0.0, t)))


def obg_states(n: int, t: float) -> StateTuple:
    """Single-parameter qubit tuple attaining the region boundary.

    Members are sin(g)|0> + w^k cos(g)|1> for k = 0..n-1 with sin^2(g) = t
    and w = exp(2 pi i / n).
    """
    _check_order(n)
    if not 0.0 <= t <= 1.0:
        raise ValidationError(f"parameter t must lie in [0, 1], got {t}")
    s = math.sqrt(t)
    c = math.sqrt(1.0 - t)
    omega = np.exp(2j * np.pi / n)
    vectors = [np.array([s, omega ** k * c]) for k in range(n)]
    return StateTuple.from_vectors(vectors)


def obg_invariant(n: int, t: float) -> complex:
    """Invariant (t + (1 - t) w)^n of the boundary family at parameter t.

    The closed form is verified against the dense invariant of the explicit
    qubit tuple to 1e-10.
    """
    _check_order(n)
    if not 0.0 <= t <= 1.0:
        raise ValidationError(f"parameter t must lie in [0, 1], got {t}")
    omega = np.exp(2j * np.pi / n)
    value = complex((t + (1.0 - t) * omega) ** n)
    dense = bargmann(obg_states(n, t))
    if abs(value - dense) > 1e-10:
        raise NumericalError(
            f"closed form {value!r} disagrees with dense invariant {dense!r}"
        )
    return value


def ngon_contains(n: int, w: complex, tol: float = 1e-9) -> bool:
    """Membership of w in the regular n-gon with vertices at roots of unity.

    The polygon is the intersection of n half-planes
    Re(conj(w_n^k u) w) <= cos(pi/n) with u = exp(i pi/n).
    """
    _check_order(n)
    w = complex(w)
    bound = math.cos(math.pi / n) + tol
    for k in range(n):
        normal = np.exp(1j * (math.pi / n + 2.0 * math.pi * k / n))
        if (np.conj(normal) * w).real > bound:
            return False
    return True


def envelope_residual(n: int, theta: float, r: float, t: float) -> tuple[float, float]:
    """Family value F and derivative dF/dt for the boundary envelope.

    n = 3: F = r (1 - t cos(theta)) - t (1 - t^2) / 2.
    n = 4: F = r (1 - t cos(theta/2))^2 - (1 - t^2)^2 / 4 with theta running
    over the double cover [0, 4*pi].
    """
    if n == 3:
        f = r * (1.0 - t * math.cos(theta)) - t * (1.0 - t * t) / 2.0
        df = -r * math.cos(theta) - (1.0 - 3.0 * t * t) / 2.0
        return f, df
    if n == 4:
        c = math.cos(theta / 2.0)
        f = r * (1.0 - t * c) ** 2 - (1.0 - t * t) ** 2 / 4.0
        df = -2.0 * r * c * (1.0 - t * c) + t * (1.0 - t * t)
        return f, df
    raise ValidationError(f"envelope families exist only for n in {{3, 4}}, got {n}")


def boundary_cubic_residual(theta: float, r: float) -> float:
    """Residual of the eliminated order-3 envelope cubic at (r, theta)."""
    c = math.cos(theta)
    return (8.0 * c ** 3) * r ** 3 + (12.0 * c * c - 27.0) * r * r + 6.0 * c * r + 1.0


def _bisect(fun, lo: float, hi: float, iterations: int = 80) -> float:
    flo = fun(lo)
    if flo == 0.0:
        return lo
    fhi = fun(hi)
    if fhi == 0.0:
        return hi
    if flo * fhi > 0.0:
        raise NumericalError("stationarity bracket has no sign change on [0, 1]")
    for _ in range(iterations):
        mid = 0.5 * (lo + hi)
        fmid = fun(mid)
        if fmid == 0.0:
            return mid
        if flo * fmid < 0.0:
            hi = mid
        else:
            lo, flo = mid, fmid
    return 0.5 * (lo + hi)


@dataclass(frozen=True)
class EnvelopePoint:
    theta: float
    r: float
    t: float
    residual: float
    derivative: float


def envelope_touch(n: int, theta: float) -> EnvelopePoint:
    """Locate the family parameter t* where the envelope touches the boundary.

    Evaluates the boundary radius at ``theta`` and root-searches the family's
    stationarity condition over t in [0, 1] by bisection.  For n = 4 the
    family is stationary only on the double cover, so angles above pi are
    lifted by 2*pi, and the bisection runs on the stationarity of the
    equivalent square-root form (t - sqrt(r) cos(theta/2)), whose sign change
    on [0, 1] is unconditional; dF/dt of the quartic form vanishes at the
    same point.
    """
    _check_order(n)
    theta = _reduce_angle(theta)
    r = boundary_radius(n, theta)
    if n == 3:
        t_star = _bisect(lambda t: envelope_residual(3, theta, r, t)[1], 0.0, 1.0)
        theta_eff = theta
    elif n == 4:
        theta_eff = theta if theta <= math.pi else theta + 2.0 * math.pi
        sqrt_r = math.sqrt(r)
        c = math.cos(theta_eff / 2.0)
        t_star = _bisect(lambda t: t - sqrt_r * c, 0.0, 1.0)
    else:
        raise ValidationError(f"envelope families exist only for n in {{3, 4}}, got {n}")
    f, df = envelope_residual(n, theta_eff, r, t_star)
    return EnvelopePoint(theta=theta, r=r, t=t_star, residual=f, derivative=df)
