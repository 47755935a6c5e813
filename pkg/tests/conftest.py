"""Shared generators and oracles for the test suite."""

from __future__ import annotations

import math
import random
from fractions import Fraction
from math import gcd
from pathlib import Path

import numpy as np
import pytest

from npcchain import (
    GluingData,
    LatticeVector,
    ProjectivePoint,
    QuadraticForm,
    normalize_primitive,
    validate_instance,
)

FIXTURES = Path(__file__).parent / "fixtures"
GOLDEN = Path(__file__).parent / "golden"


# ---------------------------------------------------------------------------
# random instances


def _egcd(a: int, b: int) -> tuple[int, int, int]:
    if b == 0:
        return a, 1, 0
    g, x, y = _egcd(b, a % b)
    return g, y, x - (a // b) * y


def random_primitive(rng: random.Random, bound: int) -> LatticeVector:
    while True:
        p = rng.randint(-bound, bound)
        q = rng.randint(-bound, bound)
        if (p, q) != (0, 0) and gcd(abs(p), abs(q)) == 1:
            return normalize_primitive(p, q)


def random_basis_partner(
    rng: random.Random, v: LatticeVector, bound: int
) -> LatticeVector:
    """A vector u with det(v, u) = +-1 and entries within the bound."""
    p, q = v.p, v.q
    g, x, y = _egcd(p, q)
    assert g * (x * p + y * q) > 0  # g = +-1 times unit
    x, y = x * g, y * g  # now p*x + q*y = 1
    d = rng.choice((1, -1))
    # u = (-y*d + k*p, x*d + k*q) gives det(v, u) = d for every k
    ks = [
        k
        for k in range(-3 * bound, 3 * bound + 1)
        if abs(-y * d + k * p) <= bound and abs(x * d + k * q) <= bound
    ]
    k = rng.choice(ks)
    return normalize_primitive(-y * d + k * p, x * d + k * q)


def random_instance(
    rng: random.Random, n: int | None = None, bound: int = 20
) -> GluingData:
    if n is None:
        n = rng.randint(0, 4)
    fibers: list[LatticeVector] = []
    for _ in range(n + 2):
        while True:
            f = random_primitive(rng, bound)
            if not fibers or ProjectivePoint(f) != ProjectivePoint(fibers[-1]):
                fibers.append(f)
                break
    b0 = random_basis_partner(rng, fibers[0], bound)
    b_last = random_basis_partner(rng, fibers[-1], bound)
    return validate_instance(b0.pair, [f.pair for f in fibers], b_last.pair)


def random_positive_form(rng: random.Random, bound: int = 9) -> QuadraticForm:
    while True:
        a11 = Fraction(rng.randint(1, bound), rng.randint(1, 4))
        a12 = Fraction(rng.randint(-bound, bound), rng.randint(1, 4))
        a22 = Fraction(rng.randint(1, bound), rng.randint(1, 4))
        form = QuadraticForm(a11, a12, a22)
        if form.positive_definite:
            return form


# ---------------------------------------------------------------------------
# unimodular transforms


Matrix = tuple[tuple[int, int], tuple[int, int]]


def random_unimodular(rng: random.Random, steps: int = 5) -> Matrix:
    m = [[1, 0], [0, 1]]
    for _ in range(steps):
        kind = rng.randrange(3)
        k = rng.choice((-2, -1, 1, 2))
        if kind == 0:  # shear right
            m = [[m[0][0], m[0][1] + k * m[0][0]], [m[1][0], m[1][1] + k * m[1][0]]]
        elif kind == 1:  # shear down
            m = [[m[0][0] + k * m[0][1], m[0][1]], [m[1][0] + k * m[1][1], m[1][1]]]
        else:  # quarter turn
            m = [[-m[0][1], m[0][0]], [-m[1][1], m[1][0]]]
        if max(abs(e) for row in m for e in row) > 40:
            return random_unimodular(rng, steps=3)
    return ((m[0][0], m[0][1]), (m[1][0], m[1][1]))


def matrix_det(t: Matrix) -> int:
    return t[0][0] * t[1][1] - t[0][1] * t[1][0]


def apply_matrix(t: Matrix, v: LatticeVector) -> tuple[int, int]:
    return (t[0][0] * v.p + t[0][1] * v.q, t[1][0] * v.p + t[1][1] * v.q)


def transform_instance(t: Matrix, data: GluingData) -> GluingData:
    return validate_instance(
        apply_matrix(t, data.b_first),
        [apply_matrix(t, f) for f in data.fibers],
        apply_matrix(t, data.b_last),
    )


def matrix_inverse(t: Matrix) -> Matrix:
    d = matrix_det(t)
    assert d in (1, -1)
    return ((d * t[1][1], -d * t[0][1]), (-d * t[1][0], d * t[0][0]))


def transform_form(t: Matrix, sigma: QuadraticForm) -> QuadraticForm:
    """Congruence by the inverse: the transformed form evaluates on
    transformed vectors exactly as sigma did on the originals."""
    s = matrix_inverse(t)
    a, b = s[0]
    c, d = s[1]
    m11, m12, m22 = sigma.a11, sigma.a12, sigma.a22
    return QuadraticForm(
        m11 * a * a + 2 * m12 * a * c + m22 * c * c,
        m11 * a * b + m12 * (a * d + b * c) + m22 * c * d,
        m11 * b * b + 2 * m12 * b * d + m22 * d * d,
    )


# ---------------------------------------------------------------------------
# float oracles on the boundary circle


def line_angle(point: ProjectivePoint) -> float:
    """Angle of the direction in [0, pi)."""
    p, q = point.pair
    return math.atan2(q, p) % math.pi


def orient_by_angles(a: ProjectivePoint, b: ProjectivePoint, c: ProjectivePoint) -> int:
    """+1 when walking the circle in increasing-angle direction from a meets
    b before c; 0 on coincidence.  Independent reference for cyclic_orient."""
    aa, ab, ac = line_angle(a), line_angle(b), line_angle(c)
    if min(abs(aa - ab), abs(ab - ac), abs(ac - aa)) < 1e-12:
        if a == b or b == c or c == a:
            return 0
    db = (ab - aa) % math.pi
    dc = (ac - aa) % math.pi
    return 1 if db < dc else -1


def disk_angle(point: ProjectivePoint) -> float:
    from npcchain import direction_to_disk

    x, y = direction_to_disk(point)
    return math.atan2(float(y), float(x))


def disk_xy(point: ProjectivePoint) -> np.ndarray:
    from npcchain import direction_to_disk

    x, y = direction_to_disk(point)
    return np.array([float(x), float(y)])


def segments_cross_numeric(
    a1: np.ndarray, a2: np.ndarray, b1: np.ndarray, b2: np.ndarray, tol: float = 1e-9
) -> np.ndarray:
    """Vectorized proper-crossing test; b1/b2 may be arrays of endpoints."""

    def orient(p, q, r):
        return (q[0] - p[0]) * (r[..., 1] - p[1]) - (q[1] - p[1]) * (r[..., 0] - p[0])

    d1 = orient(a1, a2, b1)
    d2 = orient(a1, a2, b2)

    def orient2(p, q, r):
        return (q[..., 0] - p[..., 0]) * (r[1] - p[..., 1]) - (
            q[..., 1] - p[..., 1]
        ) * (r[0] - p[..., 0])

    d3 = orient2(b1, b2, a1)
    d4 = orient2(b1, b2, a2)
    return (d1 * d2 < -tol) & (d3 * d4 < -tol)


def arc_interior_samples(arc, k: int, margin: float = 1e-3) -> np.ndarray:
    """k disk points strictly inside a proper arc (regular in angle)."""
    assert not arc.full and not arc.is_point
    t1 = disk_angle(arc.lo)
    t2 = disk_angle(arc.hi)
    tm = disk_angle(arc.witness)
    ccw = (t2 - t1) % (2.0 * math.pi)
    through = (tm - t1) % (2.0 * math.pi)
    if through >= ccw:  # arc runs the other way around
        ccw = ccw - 2.0 * math.pi
    ts = t1 + ccw * np.linspace(margin, 1.0 - margin, k)
    return np.stack([np.cos(ts), np.sin(ts)], axis=-1)


@pytest.fixture
def rng():
    return random.Random(20240817)
