"""Feasibility decision and rational witness construction for linear chains.

A chain instance records, in a common rank-2 lattice, the fiber classes
f_0..f_{n+1} of the blocks of a linear gluing chain together with the two
horizontal classes b_0, b_{n+1} of the end blocks.  Compatible flat metrics
on the splitting tori exist iff a nested family of convex regions in the
disk of projectivized forms reaches the geodesic spanned by the final pair.

Each region is a fan: all geodesics from one ideal apex towards an arc of
admissible second endpoints (the "shadow").  Propagating a fan to the next
apex is a finite exact case analysis on cyclic positions, so the decision
procedure is pure integer arithmetic.  Witnesses are produced by walking the
fans backwards and picking rational chord parameters located by sign
predicates.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

from .lattice import (
    IdealArc,
    LatticeVector,
    ProjectivePoint,
    QuadraticForm,
    arc_contains,
    cyclic_orient,
    det,
    geodesic_form,
    normalize_primitive,
    orthogonal_direction,
)


class InvalidInstanceError(ValueError):
    """Gluing data violating a structural invariant; `code` names which."""

    def __init__(self, code: str, message: str) -> None:
        super().__init__(message)
        self.code = code


class InfeasibleInstanceError(RuntimeError):
    """Witness requested for an instance the decider rejects."""


class IncompatibleClassesError(ValueError):
    """Conformal classes whose fiber functionals are not proportional."""


RawVector = LatticeVector | tuple[int, int] | Sequence[int]


@dataclass(frozen=True)
class GluingData:
    """Validated chain gluing data.

    Construct through :func:`validate_instance`; direct construction trusts
    its inputs.  `fibers` holds f_0 .. f_{n+1}.
    """

    b_first: LatticeVector
    fibers: tuple[LatticeVector, ...]
    b_last: LatticeVector

    @property
    def n(self) -> int:
        return len(self.fibers) - 2

    @property
    def det_first(self) -> int:
        return det(self.b_first, self.fibers[0])

    @property
    def det_last(self) -> int:
        return det(self.fibers[-1], self.b_last)

    @cached_property
    def fiber_classes(self) -> tuple[ProjectivePoint, ...]:
        return tuple(ProjectivePoint(f) for f in self.fibers)

    @cached_property
    def b_first_class(self) -> ProjectivePoint:
        return ProjectivePoint(self.b_first)

    @cached_property
    def b_last_class(self) -> ProjectivePoint:
        return ProjectivePoint(self.b_last)

    def labeled_vectors(self) -> list[tuple[str, LatticeVector]]:
        rows: list[tuple[str, LatticeVector]] = [("b0", self.b_first)]
        rows += [(f"f{i}", f) for i, f in enumerate(self.fibers)]
        rows.append((f"b{self.n + 1}", self.b_last))
        return rows


def validate_instance(
    b_first: RawVector, fibers: Iterable[RawVector], b_last: RawVector
) -> GluingData:
    """Normalize raw vectors and enforce every chain invariant.

    Distinct diagnostics: zero vectors, non-unimodular end pairs, adjacent
    fibers with equal classes, and too-short fiber lists.
    """
    def raw_pair(raw: RawVector) -> tuple[int, int]:
        if isinstance(raw, LatticeVector):
            return raw.pair
        p, q = raw
        return int(p), int(q)

    raw_b0 = raw_pair(b_first)
    raw_fs = [raw_pair(f) for f in fibers]
    raw_bl = raw_pair(b_last)
    for pair in (raw_b0, *raw_fs, raw_bl):
        if pair == (0, 0):
            raise InvalidInstanceError("zero-vector", "zero vector in gluing data")
    if len(raw_fs) < 2:
        raise InvalidInstanceError(
            "fiber-count", f"need at least f0 and f1, got {len(raw_fs)} fiber(s)"
        )
    # the basis property is a property of the raw vectors, checked before
    # the gcd normalization (a basis pair is automatically primitive)
    d0 = raw_b0[0] * raw_fs[0][1] - raw_b0[1] * raw_fs[0][0]
    if d0 not in (1, -1):
        raise InvalidInstanceError(
            "non-unimodular-first",
            f"det(b0, f0) = {d0}; the first pair must be a lattice basis",
        )
    dl = raw_fs[-1][0] * raw_bl[1] - raw_fs[-1][1] * raw_bl[0]
    if dl not in (1, -1):
        raise InvalidInstanceError(
            "non-unimodular-last",
            f"det(f{len(raw_fs) - 1}, b{len(raw_fs) - 1}) = {dl}; "
            "the last pair must be a lattice basis",
        )
    b0 = normalize_primitive(*raw_b0)
    fs = tuple(normalize_primitive(*f) for f in raw_fs)
    bl = normalize_primitive(*raw_bl)
    for i in range(len(fs) - 1):
        if ProjectivePoint(fs[i]) == ProjectivePoint(fs[i + 1]):
            raise InvalidInstanceError(
                "adjacent-fibers-equal",
                f"fiber classes f{i} and f{i + 1} coincide; "
                "a minimal chain never identifies adjacent fibers",
            )
    return GluingData(b0, fs, bl)


@dataclass(frozen=True)
class ConvexStage:
    """Stage region: fan of geodesics from `apex` towards the `shadow` arc."""

    index: int
    apex: ProjectivePoint
    shadow: IdealArc


@dataclass(frozen=True)
class Verdict:
    feasible: bool
    stages: tuple[ConvexStage, ...]
    final_arc: IdealArc
    boundary_contact: bool
    short_circuit: bool
    reason: str


@dataclass(frozen=True)
class WitnessConfiguration:
    """Flat metrics sigma_0 .. sigma_n on the splitting tori."""

    forms: tuple[QuadraticForm, ...]


def initial_stage(data: GluingData) -> ConvexStage:
    """Stage 0: exactly the geodesic joining [b0] and [f0]."""
    return ConvexStage(0, data.fiber_classes[0], IdealArc.single_point(data.b_first_class))


def _side_point(
    x: ProjectivePoint, z: ProjectivePoint, opposite: ProjectivePoint
) -> ProjectivePoint:
    """A rational point strictly inside the arc between x and z on the side
    not containing `opposite`.  [x+z] and [x-z] sit one in each side."""
    u, v = x.rep, z.rep
    cand = ProjectivePoint.of(u.p + v.p, u.q + v.q)
    if cyclic_orient(x, cand, z) == -cyclic_orient(x, opposite, z):
        return cand
    return ProjectivePoint.of(u.p - v.p, u.q - v.q)


def propagate_shadow(stage: ConvexStage, next_apex: ProjectivePoint) -> ConvexStage:
    """Region swept by all geodesics from `next_apex` that meet the stage.

    Exact case analysis on the cyclic position of next_apex relative to the
    apex and the shadow-arc endpoints.  Touching only at ideal points never
    counts as meeting, which fixes every openness flag below.
    """
    a, shadow = stage.apex, stage.shadow
    j = stage.index + 1
    if next_apex == a:
        raise ValueError("next apex must differ from the stage apex")
    if shadow.full:
        return ConvexStage(j, next_apex, IdealArc.full_circle())
    if shadow.is_point:
        w0 = shadow.lo
        assert w0 is not None
        if next_apex == w0:
            # every other geodesic from here shares an ideal endpoint with
            # the single chord, so only the chord itself survives
            return ConvexStage(j, next_apex, IdealArc.single_point(a))
        wit = _side_point(a, w0, opposite=next_apex)
        return ConvexStage(j, next_apex, IdealArc.span(a, w0, wit, True, True))
    lo, hi, m = shadow.lo, shadow.hi, shadow.witness
    assert lo is not None and hi is not None and m is not None
    if next_apex in (lo, hi):
        # the fan seen from one of its own arc endpoints: everything between
        # that endpoint and the apex (through the arc) is admissible, and the
        # apex direction itself survives iff the old chord to it was included
        closed_at_apex = shadow.contains(next_apex)
        return ConvexStage(
            j, next_apex, IdealArc.span(next_apex, a, m, True, not closed_at_apex)
        )
    if cyclic_orient(lo, next_apex, hi) == cyclic_orient(lo, m, hi):
        # apex inside the shadow span: every geodesic from it meets the fan
        return ConvexStage(j, next_apex, IdealArc.full_circle())
    # next_apex sits in one of the two gaps between the apex and the arc;
    # the new shadow is the whole arc from the apex to the near endpoint of
    # the old arc, taken on the far side, with both extremes excluded
    if lo != a and cyclic_orient(a, next_apex, lo) == -cyclic_orient(a, m, lo):
        near = lo
    elif hi != a and cyclic_orient(a, next_apex, hi) == -cyclic_orient(a, m, hi):
        near = hi
    else:  # pragma: no cover - the position analysis above is exhaustive
        raise AssertionError("unclassified apex position")
    return ConvexStage(j, next_apex, IdealArc.span(a, near, m, True, True))


def _build_stages(data: GluingData) -> tuple[list[ConvexStage], bool]:
    """Stages 0..n, stopping early once a stage covers the whole plane."""
    stages = [initial_stage(data)]
    for i in range(1, data.n + 1):
        nxt = propagate_shadow(stages[-1], data.fiber_classes[i])
        stages.append(nxt)
        if nxt.shadow.full:
            return stages, True
    return stages, False


def decide(data: GluingData) -> Verdict:
    """Exact feasibility of the chain instance.

    Propagates the stage regions and tests whether the geodesic joining the
    final fiber class to the final horizontal class meets the last region at
    an interior point of the disk.
    """
    stages, short = _build_stages(data)
    last = stages[-1]
    target = data.b_last_class
    final_apex = data.fiber_classes[data.n + 1]
    if last.shadow.full:
        final_arc = IdealArc.full_circle()
    else:
        final_arc = propagate_shadow(last, final_apex).shadow
    feasible = arc_contains(final_arc, target)
    contact = (
        not final_arc.full
        and (target == final_arc.lo or target == final_arc.hi)
    )
    if final_arc.full:
        reason = (
            f"stage {last.index} covers the whole plane, so the closing "
            f"geodesic {final_apex}--{target} meets it"
        )
    else:
        inside = "inside" if feasible else "outside"
        reason = (
            f"closing geodesic {final_apex}--{target}: endpoint {target} is "
            f"{inside} the admissible arc {final_arc}"
        )
        if contact:
            reason += " (contact exactly at an arc endpoint)"
    return Verdict(feasible, tuple(stages), final_arc, contact, short, reason)


def ladder_family_instance(n: int) -> GluingData:
    """Shear-ladder chain with n middle blocks: b0 = (1,0), f0 = (0,1),
    f_i = f0 + i*b0 and b_{n+1} = f0 + (n+2)*b0.

    The boundary classes of this family sit in a single cyclic order, and no
    instance of it is feasible."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    fibers = [(0, 1)] + [(i, 1) for i in range(1, n + 2)]
    return validate_instance((1, 0), fibers, (n + 2, 1))


def _stage_at(data: GluingData, i: int) -> ConvexStage:
    stages, _ = _build_stages(data)
    if i < len(stages):
        return stages[i]
    # short-circuited: every later stage is the whole plane
    return ConvexStage(i, data.fiber_classes[i], IdealArc.full_circle())


def membership(sigma: QuadraticForm, i: int, data: GluingData) -> bool:
    """True iff the class of sigma lies in stage region i.

    The point [sigma] lies on a unique geodesic asymptotic to the stage
    apex; membership holds iff its second endpoint falls in the shadow arc.
    """
    if i < 0 or i > data.n:
        raise IndexError(f"stage index {i} out of range 0..{data.n}")
    if not sigma.positive_definite:
        raise ValueError("form must be positive definite")
    stage = _stage_at(data, i)
    w = orthogonal_direction(sigma, stage.apex)
    return arc_contains(stage.shadow, w)


def _chord_form_in_region(
    p: ProjectivePoint, q: ProjectivePoint, stage: ConvexStage
) -> QuadraticForm:
    """A rational form on the geodesic (p, q) lying in the stage region.

    For sigma = t*q_p + q_q the second endpoint of the geodesic through
    [sigma] asymptotic to the stage apex is [t*A*p + B*q] with A = det(p, a)
    and B = det(q, a), so shadow membership switches only at rational roots
    of quantities linear in t.  Candidates are these breakpoints and the
    midpoints of the intervals between them.
    """
    a, shadow = stage.apex, stage.shadow
    if shadow.full:
        return geodesic_form(p, q, 1, 1)
    A = det(p.rep, a.rep)
    B = det(q.rep, a.rep)
    assert A != 0, "chord endpoint p must differ from the stage apex"

    def endpoint_at(t: Fraction) -> ProjectivePoint:
        s = t.denominator
        return ProjectivePoint.of(
            t.numerator * A * p.rep.p + s * B * q.rep.p,
            t.numerator * A * p.rep.q + s * B * q.rep.q,
        )

    if B == 0:
        # the chord ends at the apex direction; the opposite endpoint is [p]
        # for every parameter, so any interior point works when admissible
        if not shadow.contains(p):
            raise AssertionError("chord through the apex misses the region")
        return geodesic_form(p, q, 1, 1)

    ends = [shadow.lo] if shadow.is_point else [shadow.lo, shadow.hi]
    roots: set[Fraction] = set()
    for e in ends:
        assert e is not None
        c1 = A * det(p.rep, e.rep)
        c0 = B * det(q.rep, e.rep)
        if c1 != 0:
            t = Fraction(-c0, c1)
            if t > 0:
                roots.add(t)
    ordered = sorted(roots)
    candidates: list[Fraction] = []
    if not ordered:
        candidates.append(Fraction(1))
    else:
        candidates.append(ordered[0] / 2)
        for t1, t2 in zip(ordered, ordered[1:]):
            candidates.append((t1 + t2) / 2)
        candidates.append(ordered[-1] * 2)
        candidates.extend(ordered)
    for t in candidates:
        if shadow.contains(endpoint_at(t)):
            return geodesic_form(p, q, t, 1)
    raise AssertionError("feasible chord has no admissible rational parameter")


def construct_witness(data: GluingData) -> WitnessConfiguration:
    """Rational witness forms for a feasible instance.

    Walks the stages backwards: pick sigma_n on the closing geodesic inside
    stage n, then repeatedly drop to the previous stage along the geodesic
    through the current form asymptotic to the joint fiber.  The conformal
    classes are then rescaled to honestly flat data.
    """
    verdict = decide(data)
    if not verdict.feasible:
        raise InfeasibleInstanceError(
            "no witness exists: " + verdict.reason
        )
    n = data.n
    sigma = _chord_form_in_region(
        data.fiber_classes[n + 1], data.b_last_class, _stage_at(data, n)
    )
    classes = [sigma]
    for i in range(n, 0, -1):
        w = orthogonal_direction(sigma, data.fiber_classes[i])
        sigma = _chord_form_in_region(data.fiber_classes[i], w, _stage_at(data, i - 1))
        classes.append(sigma)
    classes.reverse()
    return promote_conformal_to_flat(data, classes)


def promote_conformal_to_flat(
    data: GluingData, classes: Sequence[QuadraticForm]
) -> WitnessConfiguration:
    """Rescale conformal classes to matching flat metrics.

    Requires consecutive classes to lie on a common geodesic asymptotic to
    the joint fiber class, i.e. proportional fiber functionals with positive
    ratio; each class after the first is rescaled by the unique positive
    rational making the functionals equal."""
    if len(classes) != data.n + 1:
        raise ValueError(f"expected {data.n + 1} forms, got {len(classes)}")
    out = [classes[0]]
    for i in range(1, data.n + 1):
        f = data.fibers[i]
        prev1, prev2 = out[-1].functional(f)
        cur1, cur2 = classes[i].functional(f)
        if prev1 * cur2 != prev2 * cur1:
            raise IncompatibleClassesError(
                f"fiber functionals at joint {i} are not proportional"
            )
        ratio = out[-1].evaluate(f) / classes[i].evaluate(f)
        if ratio <= 0:
            raise IncompatibleClassesError(
                f"fiber functionals at joint {i} have nonpositive ratio"
            )
        out.append(classes[i].scaled(ratio))
    return WitnessConfiguration(tuple(out))


@dataclass(frozen=True)
class WitnessCheck:
    """Outcome of an exact witness verification; truthy iff it passed."""

    ok: bool
    reason: str

    def __bool__(self) -> bool:
        return self.ok


def check_witness(data: GluingData, witness: WitnessConfiguration) -> WitnessCheck:
    """Exact verification, independent of the decision procedure.

    Checks positive definiteness of every form, orthogonality of the two end
    pairs, and equality of the fiber functionals of consecutive forms (which
    forces equal fiber lengths on both sides of each joint)."""
    forms = witness.forms
    if len(forms) != data.n + 1:
        return WitnessCheck(False, f"expected {data.n + 1} forms, got {len(forms)}")
    for i, s in enumerate(forms):
        if not s.positive_definite:
            return WitnessCheck(False, f"form {i} is not positive definite")
    if forms[0].evaluate(data.fibers[0], data.b_first) != 0:
        return WitnessCheck(False, "sigma0 does not orthogonalize (f0, b0)")
    if forms[-1].evaluate(data.fibers[-1], data.b_last) != 0:
        return WitnessCheck(
            False, f"sigma{data.n} does not orthogonalize (f{data.n + 1}, b{data.n + 1})"
        )
    for i in range(1, data.n + 1):
        f = data.fibers[i]
        if forms[i - 1].functional(f) != forms[i].functional(f):
            return WitnessCheck(False, f"fiber functionals differ at joint {i}")
    return WitnessCheck(True, "all compatibility conditions hold exactly")


def n0_basis_criterion(data: GluingData) -> bool:
    """Two-block chains are feasible iff the gluing matches the canonical
    bases as unordered projective pairs."""
    if data.n != 0:
        raise ValueError("criterion applies only to two-block chains (n = 0)")
    first = {data.b_first_class, data.fiber_classes[0]}
    last = {data.fiber_classes[1], data.b_last_class}
    return first == last


@dataclass(frozen=True)
class SeifertBoundaryData:
    """Boundary data of one block: common fiber class, one horizontal basis
    class and one flat metric per boundary torus, plus the rational constant
    entering the orientable compatibility relation."""

    fiber: LatticeVector
    bases: tuple[LatticeVector, ...]
    forms: tuple[QuadraticForm, ...]
    c: Fraction
    orientable: bool


def seifert_boundary_constraint(d: SeifertBoundaryData) -> bool:
    """Check the boundary compatibility constraints of a single block.

    All squared fiber lengths must agree exactly; for orientable blocks the
    sum of the mixed products sigma_i(f, b_i) must equal c times the common
    squared fiber length."""
    if len(d.bases) == 0 or len(d.forms) == 0:
        raise InvalidInstanceError("empty-boundary", "need at least one boundary torus")
    if len(d.bases) != len(d.forms):
        raise InvalidInstanceError(
            "boundary-mismatch", "need exactly one form per boundary torus"
        )
    for i, b in enumerate(d.bases):
        if det(d.fiber, b) not in (1, -1):
            raise InvalidInstanceError(
                "non-unimodular-boundary",
                f"(fiber, b{i}) is not a basis of the torus homology",
            )
    lengths = [s.evaluate(d.fiber) for s in d.forms]
    if any(l != lengths[0] for l in lengths[1:]):
        return False
    if d.orientable:
        total = sum(s.evaluate(d.fiber, b) for s, b in zip(d.forms, d.bases))
        return total == Fraction(d.c) * lengths[0]
    return True
