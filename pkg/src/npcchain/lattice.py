"""Exact primitives for rank-2 integer lattices and projectivized quadratic forms.

The projective line of lattice directions plays the role of a boundary
circle; positive-definite binary forms, taken up to positive scale, fill the
open disk bounded by it.  A geodesic of that disk is encoded by the pair of
directions it orthogonalizes, so every geometric question needed elsewhere
(crossing, betweenness, arc membership) reduces to integer sign computations.

No floating point is used in this module; coordinates handed to renderers
are exact rationals.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd


class ZeroVectorError(ValueError):
    """The zero pair does not determine a lattice direction."""


class DegenerateGeodesicError(ValueError):
    """A geodesic needs two distinct endpoint directions."""


def normalize_primitive(p: int, q: int) -> "LatticeVector":
    """Divide a raw integer pair by its gcd and fix the sign of the leading
    nonzero coordinate to be positive.

    Idempotent; raises :class:`ZeroVectorError` on (0, 0).
    """
    if p == 0 and q == 0:
        raise ZeroVectorError("the zero vector has no direction")
    g = gcd(abs(p), abs(q))
    p //= g
    q //= g
    if p < 0 or (p == 0 and q < 0):
        p, q = -p, -q
    return LatticeVector(p, q)


@dataclass(frozen=True)
class LatticeVector:
    """A primitive nonzero integer pair (a homology class on a torus)."""

    p: int
    q: int

    def __post_init__(self) -> None:
        if self.p == 0 and self.q == 0:
            raise ZeroVectorError("the zero vector has no direction")
        if gcd(abs(self.p), abs(self.q)) != 1:
            raise ValueError(f"({self.p},{self.q}) is not primitive")

    @property
    def pair(self) -> tuple[int, int]:
        return (self.p, self.q)

    def __neg__(self) -> "LatticeVector":
        return LatticeVector(-self.p, -self.q)

    def __str__(self) -> str:
        return f"({self.p},{self.q})"


def det(u: LatticeVector, v: LatticeVector) -> int:
    """Determinant of the 2x2 matrix with columns u, v."""
    return u.p * v.q - u.q * v.p


@dataclass(frozen=True)
class ProjectivePoint:
    """A lattice direction up to sign: a rational point of the boundary circle.

    The representative is canonical (q > 0, or q = 0 and p > 0), so equality
    and hashing of projective points is plain field equality.
    """

    rep: LatticeVector

    def __post_init__(self) -> None:
        v = self.rep
        if v.q < 0 or (v.q == 0 and v.p < 0):
            object.__setattr__(self, "rep", -v)

    @classmethod
    def of(cls, p: int, q: int) -> "ProjectivePoint":
        return cls(normalize_primitive(p, q))

    @property
    def pair(self) -> tuple[int, int]:
        return self.rep.pair

    def __str__(self) -> str:
        return str(self.rep)


def cyclic_orient(a: ProjectivePoint, b: ProjectivePoint, c: ProjectivePoint) -> int:
    """Cyclic orientation of three boundary points: sign of
    det(a,b) * det(b,c) * det(c,a).

    Zero exactly when two arguments coincide.  Well defined on projective
    classes (a sign flip of one argument flips two factors) and equivariant
    under unimodular maps up to their determinant.
    """
    s = det(a.rep, b.rep) * det(b.rep, c.rep) * det(c.rep, a.rep)
    return (s > 0) - (s < 0)


def chords_cross(
    a: ProjectivePoint, b: ProjectivePoint, c: ProjectivePoint, d: ProjectivePoint
) -> bool:
    """True iff the chords {a,b} and {c,d} strictly separate each other.

    Chords sharing an endpoint do not cross: the corresponding geodesics are
    asymptotic and disjoint inside the disk.
    """
    if a == b or c == d or a == c or a == d or b == c or b == d:
        return False
    o1 = cyclic_orient(a, c, b)
    o2 = cyclic_orient(a, d, b)
    return o1 != 0 and o1 == -o2


@dataclass(frozen=True)
class QuadraticForm:
    """Symmetric rational binary form  a11*x^2 + 2*a12*x*y + a22*y^2.

    Intended use is positive-definite forms (interior points of the disk of
    projectivized forms); definiteness is exposed as a property rather than
    enforced, so that checkers can classify arbitrary input honestly.
    """

    a11: Fraction
    a12: Fraction
    a22: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "a11", Fraction(self.a11))
        object.__setattr__(self, "a12", Fraction(self.a12))
        object.__setattr__(self, "a22", Fraction(self.a22))

    @classmethod
    def diagonal(cls, a: int | Fraction, b: int | Fraction) -> "QuadraticForm":
        return cls(Fraction(a), Fraction(0), Fraction(b))

    @property
    def determinant(self) -> Fraction:
        return self.a11 * self.a22 - self.a12 * self.a12

    @property
    def positive_definite(self) -> bool:
        return self.a11 > 0 and self.determinant > 0

    def evaluate(self, u: LatticeVector, v: LatticeVector | None = None) -> Fraction:
        """Value sigma(u, v); sigma(u, u) when v is omitted."""
        if v is None:
            v = u
        return (
            self.a11 * u.p * v.p
            + self.a12 * (u.p * v.q + u.q * v.p)
            + self.a22 * u.q * v.q
        )

    def functional(self, f: LatticeVector) -> tuple[Fraction, Fraction]:
        """Coefficients of the linear functional sigma(f, .)."""
        return (
            self.a11 * f.p + self.a12 * f.q,
            self.a12 * f.p + self.a22 * f.q,
        )

    def scaled(self, k: Fraction) -> "QuadraticForm":
        k = Fraction(k)
        return QuadraticForm(self.a11 * k, self.a12 * k, self.a22 * k)

    def __str__(self) -> str:
        return f"[{self.a11} {self.a12} {self.a22}]"


def geodesic_form(
    u: ProjectivePoint,
    v: ProjectivePoint,
    lam: int | Fraction = 1,
    mu: int | Fraction = 1,
) -> QuadraticForm:
    """Point of the geodesic with ideal endpoints [u], [v].

    Returns lam * q_u + mu * q_v where q_w(x) = det(w, x)^2 is the rank-one
    form vanishing on the direction w.  The result is positive definite,
    satisfies sigma(u, v) = 0 exactly, and ranging over (lam : mu) > 0 sweeps
    the whole geodesic.
    """
    if u == v:
        raise DegenerateGeodesicError("geodesic endpoints must be distinct")
    lam = Fraction(lam)
    mu = Fraction(mu)
    if lam <= 0 or mu <= 0:
        raise ValueError("geodesic parameters must be positive")
    a, b = u.rep, v.rep
    return QuadraticForm(
        lam * a.q * a.q + mu * b.q * b.q,
        -(lam * a.p * a.q + mu * b.p * b.q),
        lam * a.p * a.p + mu * b.p * b.p,
    )


def orthogonal_direction(sigma: QuadraticForm, f: ProjectivePoint) -> ProjectivePoint:
    """The direction orthogonal to f with respect to sigma.

    This is the second ideal endpoint of the unique geodesic through [sigma]
    asymptotic to [f]; sigma(f, w) = 0 holds exactly for the result.
    """
    if not sigma.positive_definite:
        raise ValueError("form must be positive definite")
    c1, c2 = sigma.functional(f.rep)
    # kernel direction of the functional (c1, c2), cleared to integers
    scale = c1.denominator * c2.denominator
    return ProjectivePoint.of(int(-c2 * scale), int(c1 * scale))


@dataclass(frozen=True)
class IdealArc:
    """An arc of the boundary circle with per-endpoint openness flags.

    Three flavors: the full circle, a single closed point (lo == hi), and a
    proper arc.  A proper arc stores an interior witness point fixing which
    of the two arcs between lo and hi is meant; endpoints are normalized so
    that cyclic_orient(lo, witness, hi) == +1.
    """

    full: bool
    lo: ProjectivePoint | None
    hi: ProjectivePoint | None
    lo_open: bool
    hi_open: bool
    witness: ProjectivePoint | None

    def __post_init__(self) -> None:
        if self.full:
            return
        if self.lo is None or self.hi is None or self.witness is None:
            raise ValueError("non-full arc needs endpoints and a witness")
        if self.lo == self.hi:
            if self.witness != self.lo or self.lo_open or self.hi_open:
                raise ValueError("degenerate arc must be a single closed point")
            return
        if self.witness in (self.lo, self.hi):
            raise ValueError("witness must be interior to the arc")
        if cyclic_orient(self.lo, self.witness, self.hi) != 1:
            raise ValueError("arc endpoints not in positive order around witness")

    @classmethod
    def full_circle(cls) -> "IdealArc":
        return cls(True, None, None, False, False, None)

    @classmethod
    def single_point(cls, x: ProjectivePoint) -> "IdealArc":
        return cls(False, x, x, False, False, x)

    @classmethod
    def span(
        cls,
        e1: ProjectivePoint,
        e2: ProjectivePoint,
        witness: ProjectivePoint,
        e1_open: bool,
        e2_open: bool,
    ) -> "IdealArc":
        """Proper arc between e1 and e2 on the side containing witness."""
        if e1 == e2:
            raise ValueError("proper arc needs distinct endpoints")
        if cyclic_orient(e1, witness, e2) == 1:
            return cls(False, e1, e2, e1_open, e2_open, witness)
        return cls(False, e2, e1, e2_open, e1_open, witness)

    @property
    def is_point(self) -> bool:
        return not self.full and self.lo == self.hi

    def contains(self, x: ProjectivePoint) -> bool:
        if self.full:
            return True
        if self.is_point:
            return x == self.lo
        if x == self.lo:
            return not self.lo_open
        if x == self.hi:
            return not self.hi_open
        return cyclic_orient(self.lo, x, self.hi) == 1

    def __str__(self) -> str:
        if self.full:
            return "full"
        if self.is_point:
            return f"point {self.lo}"
        l = "(" if self.lo_open else "["
        r = ")" if self.hi_open else "]"
        return f"{l}{self.lo} .. {self.hi}{r} via {self.witness}"


def arc_contains(arc: IdealArc, x: ProjectivePoint) -> bool:
    """Exact arc membership honoring the openness flags."""
    return arc.contains(x)


def form_to_disk(sigma: QuadraticForm) -> tuple[Fraction, Fraction]:
    """Trace-normalized disk coordinates of a projectivized form.

    ((a11 - a22)/tr, 2*a12/tr) with tr = a11 + a22 lands in the open unit
    disk for definite forms; rescaled forms map to the same point, and
    geodesics map to straight chords.
    """
    if not sigma.positive_definite:
        raise ValueError("form must be positive definite")
    tr = sigma.a11 + sigma.a22
    return ((sigma.a11 - sigma.a22) / tr, 2 * sigma.a12 / tr)


def direction_to_disk(x: ProjectivePoint) -> tuple[Fraction, Fraction]:
    """Boundary-circle coordinates of a direction, compatible with
    :func:`form_to_disk`: the limit of disk points along any geodesic ending
    at [x].  Always a rational point of the unit circle."""
    p, q = x.pair
    n = p * p + q * q
    return (Fraction(q * q - p * p, n), Fraction(-2 * p * q, n))
