"""Doubly warped cusp metrics and numerical curvature certification.

Metrics of the shape F1(t)^2 dx^2 + F2(t)^2 dy^2 + dt^2 model cusp ends:
the pure exponential profile gives curvature -1, a bump-interpolated profile
deforms the cross-section conformal type, and a capped profile flattens the
end into a Euclidean cylinder.  The coordinate-plane sectional curvatures of
such a metric are

    K13 = -F1''/F1,   K23 = -F2''/F2,   K12 = -(F1' F2')/(F1 F2),

which this module validates against a finite-difference curvature tensor
built from the metric coefficients alone.  Nonpositive curvature follows
whenever both profiles are nonincreasing and convex.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np


@dataclass(frozen=True, eq=False)
class WarpProfile:
    """A warping factor with analytic first and second derivatives."""

    name: str
    f: Callable[[float], float]
    df: Callable[[float], float]
    d2f: Callable[[float], float]
    t_min: float
    t_max: float
    details: tuple[tuple[str, float], ...] = ()


def exponential_profile() -> WarpProfile:
    """F(t) = exp(-t); the pure cusp profile with curvature -1."""
    return WarpProfile(
        "exponential",
        lambda t: math.exp(-t),
        lambda t: -math.exp(-t),
        lambda t: math.exp(-t),
        -math.inf,
        math.inf,
    )


def constant_profile(level: float = 1.0) -> WarpProfile:
    """F(t) = level; a flat factor."""
    if level <= 0:
        raise ValueError("level must be positive")
    return WarpProfile(
        "constant",
        lambda t: level,
        lambda t: 0.0,
        lambda t: 0.0,
        -math.inf,
        math.inf,
        (("level", level),),
    )


def _bump(v: float) -> tuple[float, float, float]:
    """Smooth step S with S=0 for v<=0 and S=1 for v>=1, all derivatives
    vanishing at the ends; returns (S, S', S'')."""
    if v <= 0.0:
        return 0.0, 0.0, 0.0
    if v >= 1.0:
        return 1.0, 0.0, 0.0

    def psi(u: float) -> tuple[float, float, float]:
        e = math.exp(-1.0 / u)
        if e == 0.0:
            return 0.0, 0.0, 0.0
        return e, e / (u * u), e * (1.0 - 2.0 * u) / (u**4)

    n, dn, d2n = psi(v)
    m, dm, d2m = psi(1.0 - v)
    d = n + m
    dd = dn - dm
    d2d = d2n + d2m
    s = n / d
    ds = (dn * d - n * dd) / (d * d)
    d2s = (d2n * d * d - 2.0 * dn * dd * d - n * d2d * d + 2.0 * n * dd * dd) / (d**3)
    return s, ds, d2s


def interpolation_profile(
    target: float, phi_scale: float, transition_start: float = 1.0
) -> WarpProfile:
    """F(t) = exp(-t) * [phi(t) + (1 - phi(t)) * target].

    phi is a smooth sigmoid bump equal to 1 up to ``transition_start`` and 0
    from ``transition_start + phi_scale`` on, so F matches exp(-t) near the
    start and target*exp(-t) in the tail.  Large ``phi_scale`` stretches the
    transition, keeping the bump derivatives small enough for nonpositive
    curvature; a tiny scale deliberately breaks it.
    """
    if target <= 0:
        raise ValueError("target must be positive")
    if phi_scale <= 0:
        raise ValueError("phi_scale must be positive")

    def pieces(t: float) -> tuple[float, float, float]:
        s, ds, d2s = _bump((t - transition_start) / phi_scale)
        phi = 1.0 - s
        return phi, -ds / phi_scale, -d2s / (phi_scale * phi_scale)

    def g(t: float) -> tuple[float, float, float]:
        phi, dphi, d2phi = pieces(t)
        return (
            phi + (1.0 - phi) * target,
            dphi * (1.0 - target),
            d2phi * (1.0 - target),
        )

    def f(t: float) -> float:
        return math.exp(-t) * g(t)[0]

    def df(t: float) -> float:
        v, dv, _ = g(t)
        return math.exp(-t) * (dv - v)

    def d2f(t: float) -> float:
        v, dv, d2v = g(t)
        return math.exp(-t) * (v - 2.0 * dv + d2v)

    return WarpProfile(
        "interpolated",
        f,
        df,
        d2f,
        0.0,
        math.inf,
        (
            ("target", float(target)),
            ("phi_scale", float(phi_scale)),
            ("transition_start", float(transition_start)),
        ),
    )


def _quintic(v: float) -> tuple[float, float]:
    """Quintic step Q and Q' with Q(0)=0, Q(1)=1 and C^2 clamping."""
    q = v * v * v * (10.0 + v * (-15.0 + 6.0 * v))
    dq = 30.0 * v * v * (v - 1.0) * (v - 1.0)
    return q, dq


def cap_profile(t_cap: float, flat_level: float) -> WarpProfile:
    """Length-scale profile equal to exp(-t) near ``t_cap``, convex and
    nonincreasing throughout, and exactly constant (= flat_level) in the
    tail, so the end becomes a Euclidean cylinder.

    Built in the variable u = exp(-t): F = eta(u) with eta' a quintic step
    supported on [u2, u3], u2 + u3 = 2*flat_level; this makes the junction
    exactly C^2 and gives F'' = u*s + u^2*s' >= 0 termwise.
    """
    xi = math.exp(-t_cap)
    if not 0.0 < flat_level < xi:
        raise ValueError("flat_level must lie strictly between 0 and exp(-t_cap)")
    u3 = 0.5 * (flat_level + min(2.0 * flat_level, xi))
    u2 = 2.0 * flat_level - u3
    span = u3 - u2

    def f(t: float) -> float:
        u = math.exp(-t)
        if u >= u3:
            return u
        if u <= u2:
            return flat_level
        v = (u - u2) / span
        # integral of the quintic step: P(v) = v^6 - 3 v^5 + 2.5 v^4
        p = v**4 * (2.5 + v * (-3.0 + v))
        return flat_level + span * p

    def df(t: float) -> float:
        u = math.exp(-t)
        if u >= u3:
            return -u
        if u <= u2:
            return 0.0
        return -u * _quintic((u - u2) / span)[0]

    def d2f(t: float) -> float:
        u = math.exp(-t)
        if u >= u3:
            return u
        if u <= u2:
            return 0.0
        s, ds = _quintic((u - u2) / span)
        return u * s + u * u * ds / span

    return WarpProfile(
        "capped",
        f,
        df,
        d2f,
        t_cap,
        math.inf,
        (
            ("t_cap", float(t_cap)),
            ("flat_level", float(flat_level)),
            ("u2", u2),
            ("u3", u3),
            ("flat_from_t", -math.log(u2)),
        ),
    )


@dataclass(frozen=True, eq=False)
class DoublyWarpedMetric:
    """Metric F1(t)^2 dx^2 + F2(t)^2 dy^2 + dt^2 on a finite t-window."""

    f1: WarpProfile
    f2: WarpProfile
    t_lo: float
    t_hi: float

    def __post_init__(self) -> None:
        if not self.t_lo < self.t_hi:
            raise ValueError("empty domain")
        for prof in (self.f1, self.f2):
            if self.t_lo < prof.t_min or self.t_hi > prof.t_max:
                raise ValueError(f"domain exceeds profile '{prof.name}' support")

    def _check(self, t: float) -> None:
        if not self.t_lo <= t <= self.t_hi:
            raise ValueError(f"t = {t} outside domain [{self.t_lo}, {self.t_hi}]")


def sectional_curvatures(m: DoublyWarpedMetric, t: float) -> tuple[float, float, float]:
    """Coordinate-plane sectional curvatures (K13, K23, K12) at t."""
    m._check(t)
    f1, f2 = m.f1.f(t), m.f2.f(t)
    return (
        -m.f1.d2f(t) / f1,
        -m.f2.d2f(t) / f2,
        -(m.f1.df(t) * m.f2.df(t)) / (f1 * f2),
    )


def _christoffel(m: DoublyWarpedMetric, t: float, h: float) -> np.ndarray:
    """Christoffel symbols at t from central differences of the metric."""

    def metric(tt: float) -> np.ndarray:
        return np.diag([m.f1.f(tt) ** 2, m.f2.f(tt) ** 2, 1.0])

    g = metric(t)
    ginv = np.diag(1.0 / np.diag(g))
    dg = np.zeros((3, 3, 3))  # dg[l][i][j] = d_l g_ij; only l = 2 (= t) is nonzero
    dg[2] = (metric(t + h) - metric(t - h)) / (2.0 * h)
    gamma = np.zeros((3, 3, 3))
    for k in range(3):
        for i in range(3):
            for j in range(3):
                acc = 0.0
                for l in range(3):
                    acc += ginv[k, l] * (dg[i, j, l] + dg[j, i, l] - dg[l, i, j])
                gamma[k, i, j] = 0.5 * acc
    return gamma


def fd_sectional_curvatures(
    m: DoublyWarpedMetric, t: float, h: float = 1e-3
) -> tuple[float, float, float]:
    """Finite-difference curvature oracle, built from the metric alone.

    Uses central differences for the Christoffel symbols and again for their
    t-derivative (needing t +- 2h inside the domain), then assembles the full
    curvature tensor; agrees with the closed forms to O(h^2).
    """
    if h <= 0:
        raise ValueError("step must be positive")
    if t - 2.0 * h < m.t_lo or t + 2.0 * h > m.t_hi:
        raise ValueError("step too large: t +- 2h leaves the domain")
    g = np.diag([m.f1.f(t) ** 2, m.f2.f(t) ** 2, 1.0])
    gamma = _christoffel(m, t, h)
    dgamma = np.zeros((3, 3, 3, 3))  # dgamma[mu] = d_mu Gamma; only mu = 2
    dgamma[2] = (_christoffel(m, t + h, h) - _christoffel(m, t - h, h)) / (2.0 * h)

    def riemann_up(rho: int, sig: int, mu: int, nu: int) -> float:
        val = dgamma[mu][rho, nu, sig] - dgamma[nu][rho, mu, sig]
        for lam in range(3):
            val += gamma[rho, mu, lam] * gamma[lam, nu, sig]
            val -= gamma[rho, nu, lam] * gamma[lam, mu, sig]
        return val

    def sectional(i: int, j: int) -> float:
        r = sum(g[i, l] * riemann_up(l, j, i, j) for l in range(3))
        return r / (g[i, i] * g[j, j])

    return (sectional(0, 2), sectional(1, 2), sectional(0, 1))


@dataclass(frozen=True)
class CurvatureReport:
    """Grid certification summary for a doubly warped metric."""

    max_k13: float
    max_k23: float
    max_k12: float
    max_curvature: float
    monotone: tuple[bool, bool]
    convex: tuple[bool, bool]
    certified: bool
    grid: int
    t_lo: float
    t_hi: float


def verify_nonpositive(m: DoublyWarpedMetric, grid: int = 1000) -> CurvatureReport:
    """Scan the domain grid: maxima of the three curvatures plus certificates
    that each profile is nonincreasing and convex.

    When both certificates hold, all three curvatures are nonpositive up to
    roundoff; ``certified`` reports whether they do."""
    if grid < 2:
        raise ValueError("grid needs at least 2 points")
    ts = np.linspace(m.t_lo, m.t_hi, grid)
    k13 = np.empty(grid)
    k23 = np.empty(grid)
    k12 = np.empty(grid)
    mono = [True, True]
    conv = [True, True]
    for idx, t in enumerate(ts):
        tv = float(t)
        for side, prof in enumerate((m.f1, m.f2)):
            if prof.f(tv) <= 0:
                raise ValueError(f"profile '{prof.name}' not positive at t={tv}")
            if prof.df(tv) > 0:
                mono[side] = False
            if prof.d2f(tv) < 0:
                conv[side] = False
        k13[idx], k23[idx], k12[idx] = sectional_curvatures(m, tv)
    certified = all(mono) and all(conv)
    return CurvatureReport(
        float(k13.max()),
        float(k23.max()),
        float(k12.max()),
        float(max(k13.max(), k23.max(), k12.max())),
        (mono[0], mono[1]),
        (conv[0], conv[1]),
        certified,
        grid,
        m.t_lo,
        m.t_hi,
    )
