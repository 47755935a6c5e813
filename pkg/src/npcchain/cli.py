"""Command-line front end: instance files, subcommands, SVG rendering.

Instance files are line-oriented UTF-8:

    npc-instance v1
    n 1
    b0 1 0
    f0 0 1
    f1 1 1
    f2 0 1
    b2 1 0
    c 0        # optional rational constant for boundary-constraint checks

Witness files hold one line per form, ``sigma<i> <a11> <a12> <a22>`` with
exact rationals (``num/den``).  Exit codes: decide 0 feasible / 1 infeasible
/ 2 invalid input; check 0 pass / 1 fail; oracle 1 on CONFLICT; usage errors
always exit 2.  ``NPC_SEED`` provides the default --seed.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .decider import (
    GluingData,
    InfeasibleInstanceError,
    InvalidInstanceError,
    Verdict,
    WitnessConfiguration,
    check_witness,
    construct_witness,
    decide,
    validate_instance,
)
from .cusp import (
    DoublyWarpedMetric,
    cap_profile,
    exponential_profile,
    interpolation_profile,
    verify_nonpositive,
)
from .lattice import (
    ProjectivePoint,
    QuadraticForm,
    direction_to_disk,
    form_to_disk,
)
from .oracle import CONFLICT, cross_check


class ParseError(ValueError):
    def __init__(self, message: str, line: int) -> None:
        super().__init__(f"line {line}: {message}")
        self.line = line


@dataclass(frozen=True)
class InstanceFile:
    data: GluingData
    c: Fraction | None


def _content_lines(text: str) -> list[tuple[int, str]]:
    rows = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].strip()
        if body:
            rows.append((lineno, body))
    return rows


def parse_instance(text: str) -> InstanceFile:
    """Parse an instance file; every diagnostic carries its line number."""
    rows = _content_lines(text)
    if not rows or rows[0][1] != "npc-instance v1":
        line = rows[0][0] if rows else 1
        raise ParseError("expected header 'npc-instance v1'", line)
    entries: dict[str, tuple[int, list[str]]] = {}
    for lineno, body in rows[1:]:
        parts = body.split()
        key, args = parts[0], parts[1:]
        if key in entries:
            raise ParseError(f"duplicate key '{key}'", lineno)
        entries[key] = (lineno, args)

    def take_int_pair(key: str) -> tuple[int, int]:
        if key not in entries:
            raise ParseError(f"missing key '{key}'", rows[-1][0])
        lineno, args = entries.pop(key)
        if len(args) != 2:
            raise ParseError(f"key '{key}' needs two integers", lineno)
        try:
            return int(args[0]), int(args[1])
        except ValueError:
            raise ParseError(f"malformed integer for '{key}'", lineno) from None

    if "n" not in entries:
        raise ParseError("missing key 'n'", rows[-1][0])
    n_line, n_args = entries.pop("n")
    if len(n_args) != 1:
        raise ParseError("key 'n' needs one integer", n_line)
    try:
        n = int(n_args[0])
    except ValueError:
        raise ParseError("malformed integer for 'n'", n_line) from None
    if n < 0:
        raise ParseError("'n' must be nonnegative", n_line)

    b0 = take_int_pair("b0")
    fibers = [take_int_pair(f"f{i}") for i in range(n + 2)]
    b_last = take_int_pair(f"b{n + 1}")

    c: Fraction | None = None
    if "c" in entries:
        c_line, c_args = entries.pop("c")
        if len(c_args) != 1:
            raise ParseError("key 'c' needs one rational", c_line)
        try:
            c = Fraction(c_args[0])
        except (ValueError, ZeroDivisionError):
            raise ParseError("malformed rational for 'c'", c_line) from None
    if entries:
        key = sorted(entries)[0]
        raise ParseError(f"unknown key '{key}'", entries[key][0])
    try:
        data = validate_instance(b0, fibers, b_last)
    except (InvalidInstanceError, ValueError) as exc:
        raise ParseError(str(exc), rows[0][0]) from exc
    return InstanceFile(data, c)


def serialize_instance(inst: InstanceFile) -> str:
    lines = ["npc-instance v1", f"n {inst.data.n}"]
    for label, vec in inst.data.labeled_vectors():
        lines.append(f"{label} {vec.p} {vec.q}")
    if inst.c is not None:
        lines.append(f"c {inst.c}")
    return "\n".join(lines) + "\n"


def serialize_witness(witness: WitnessConfiguration) -> str:
    lines = []
    for i, form in enumerate(witness.forms):
        lines.append(f"sigma{i} {form.a11} {form.a12} {form.a22}")
    return "\n".join(lines) + "\n"


def parse_witness(text: str) -> WitnessConfiguration:
    forms: dict[int, QuadraticForm] = {}
    for lineno, body in _content_lines(text):
        parts = body.split()
        if len(parts) != 4 or not parts[0].startswith("sigma"):
            raise ParseError("expected 'sigma<i> <a11> <a12> <a22>'", lineno)
        try:
            idx = int(parts[0][5:])
            vals = [Fraction(p) for p in parts[1:]]
        except (ValueError, ZeroDivisionError):
            raise ParseError("malformed witness entry", lineno) from None
        if idx in forms:
            raise ParseError(f"duplicate form sigma{idx}", lineno)
        forms[idx] = QuadraticForm(*vals)
    if not forms or sorted(forms) != list(range(len(forms))):
        raise ParseError("witness forms must be sigma0..sigmaN without gaps", 1)
    return WitnessConfiguration(tuple(forms[i] for i in range(len(forms))))


# ---------------------------------------------------------------------------
# SVG rendering


@dataclass(frozen=True)
class RenderScene:
    """Everything drawn for one instance, in deterministic order."""

    labels: tuple[tuple[str, ProjectivePoint], ...]
    verdict: Verdict
    final_pair: tuple[ProjectivePoint, ProjectivePoint]
    witness: WitnessConfiguration | None


_STAGE_FILLS = ("#9ecae1", "#a1d99b", "#fdae6b", "#bcbddc", "#fc9272", "#c7e9c0")


def _fmt(x: float) -> str:
    v = x + 0.0  # normalize -0.0
    return f"{v:.6f}"


def _disk_xy(point: ProjectivePoint) -> tuple[float, float]:
    a, b = direction_to_disk(point)
    return float(a), -float(b)  # flip for SVG's downward y-axis


def _angle(point: ProjectivePoint) -> float:
    x, y = _disk_xy(point)
    return math.atan2(y, x)


def _arc_path(start: ProjectivePoint, end: ProjectivePoint, via: ProjectivePoint) -> str:
    """SVG elliptical-arc segment from start to end passing through via."""
    x1, y1 = _disk_xy(start)
    x2, y2 = _disk_xy(end)
    a1, a2, am = _angle(start), _angle(end), _angle(via)
    ccw = (a2 - a1) % (2.0 * math.pi)
    through = (am - a1) % (2.0 * math.pi)
    sweep = 1 if through < ccw else 0
    span = ccw if sweep == 1 else (2.0 * math.pi - ccw)
    large = 1 if span > math.pi else 0
    return f"A 1 1 0 {large} {sweep} {_fmt(x2)} {_fmt(y2)}"


def render_svg(scene: RenderScene) -> str:
    """Standalone deterministic SVG of the configuration in the disk model."""
    out: list[str] = []
    out.append(
        '<svg xmlns="http://www.w3.org/2000/svg" width="640" height="640" '
        'viewBox="-1.25 -1.25 2.5 2.5">'
    )
    out.append('<rect x="-1.25" y="-1.25" width="2.5" height="2.5" fill="#ffffff"/>')
    out.append(
        '<circle cx="0" cy="0" r="1" fill="none" stroke="#333333" stroke-width="0.012"/>'
    )
    for stage in scene.verdict.stages:
        fill = _STAGE_FILLS[stage.index % len(_STAGE_FILLS)]
        arc = stage.shadow
        ax, ay = _disk_xy(stage.apex)
        if arc.full:
            out.append(
                f'<circle cx="0" cy="0" r="1" fill="{fill}" fill-opacity="0.35" stroke="none"/>'
            )
        elif arc.is_point:
            assert arc.lo is not None
            wx, wy = _disk_xy(arc.lo)
            out.append(
                f'<path d="M {_fmt(ax)} {_fmt(ay)} L {_fmt(wx)} {_fmt(wy)}" '
                f'fill="none" stroke="{fill}" stroke-width="0.022"/>'
            )
        else:
            assert arc.lo is not None and arc.hi is not None and arc.witness is not None
            lx, ly = _disk_xy(arc.lo)
            seg = _arc_path(arc.lo, arc.hi, arc.witness)
            out.append(
                f'<path d="M {_fmt(ax)} {_fmt(ay)} L {_fmt(lx)} {_fmt(ly)} {seg} Z" '
                f'fill="{fill}" fill-opacity="0.35" stroke="{fill}" stroke-width="0.008"/>'
            )
    fx, fy = _disk_xy(scene.final_pair[0])
    bx, by = _disk_xy(scene.final_pair[1])
    out.append(
        f'<path d="M {_fmt(fx)} {_fmt(fy)} L {_fmt(bx)} {_fmt(by)}" fill="none" '
        'stroke="#d62728" stroke-width="0.02"/>'
    )
    if scene.witness is not None:
        for form in scene.witness.forms:
            dx, dy = form_to_disk(form)
            out.append(
                f'<circle cx="{_fmt(float(dx))}" cy="{_fmt(-float(dy))}" r="0.025" '
                'fill="#1a55a5" stroke="#ffffff" stroke-width="0.006"/>'
            )
    # labels last; directions mapping to the same boundary point stack up
    grouped: dict[tuple[int, int], list[str]] = {}
    for label, point in scene.labels:
        grouped.setdefault(point.pair, []).append(label)
    for pair in sorted(grouped):
        point = ProjectivePoint.of(*pair)
        x, y = _disk_xy(point)
        out.append(
            f'<path d="M {_fmt(0.97 * x)} {_fmt(0.97 * y)} L {_fmt(1.03 * x)} {_fmt(1.03 * y)}" '
            'stroke="#333333" stroke-width="0.01"/>'
        )
        text = ",".join(grouped[pair])
        out.append(
            f'<text x="{_fmt(1.12 * x)}" y="{_fmt(1.12 * y)}" font-size="0.07" '
            f'font-family="monospace" text-anchor="middle" '
            f'dominant-baseline="middle" fill="#111111">{text}</text>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"


def scene_for(inst: InstanceFile, witness: WitnessConfiguration | None) -> RenderScene:
    data = inst.data
    labels = tuple(
        (label, ProjectivePoint(vec)) for label, vec in data.labeled_vectors()
    )
    verdict = decide(data)
    return RenderScene(
        labels,
        verdict,
        (data.fiber_classes[data.n + 1], data.b_last_class),
        witness,
    )


# ---------------------------------------------------------------------------
# subcommands


def _read(path: str) -> str:
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _load_instance(path: str) -> InstanceFile:
    return parse_instance(_read(path))


def _verdict_lines(verdict: Verdict, data: GluingData) -> list[str]:
    lines = ["FEASIBLE" if verdict.feasible else "INFEASIBLE", f"n {data.n}"]
    for stage in verdict.stages:
        lines.append(f"stage {stage.index} apex {stage.apex} shadow {stage.shadow}")
    if verdict.short_circuit:
        lines.append("note remaining stages cover the whole plane")
    lines.append(f"final {verdict.reason}")
    return lines


def _cmd_decide(args: argparse.Namespace) -> int:
    inst = _load_instance(args.file)
    verdict = decide(inst.data)
    sys.stdout.write("\n".join(_verdict_lines(verdict, inst.data)) + "\n")
    return 0 if verdict.feasible else 1


def _cmd_witness(args: argparse.Namespace) -> int:
    inst = _load_instance(args.file)
    try:
        witness = construct_witness(inst.data)
    except InfeasibleInstanceError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1
    sys.stdout.write(serialize_witness(witness))
    return 0


def _cmd_check(args: argparse.Namespace) -> int:
    inst = _load_instance(args.file)
    witness = parse_witness(_read(args.witness_file))
    result = check_witness(inst.data, witness)
    sys.stdout.write(("PASS" if result.ok else "FAIL") + f" {result.reason}\n")
    return 0 if result.ok else 1


def _cmd_oracle(args: argparse.Namespace) -> int:
    inst = _load_instance(args.file)
    report = cross_check(inst.data, budget=args.budget, seed=args.seed)
    lines = [
        f"decider {'FEASIBLE' if report.decider_feasible else 'INFEASIBLE'}",
        f"oracle {'found' if report.oracle_found else 'none'}"
        + (f" residual {report.best_residual:.3e}" if report.best_residual is not None else ""),
        f"status {report.status}",
        f"note {report.note}",
    ]
    sys.stdout.write("\n".join(lines) + "\n")
    return 1 if report.status == CONFLICT else 0


def _cmd_cusp(args: argparse.Namespace) -> int:
    if args.profile == "hyperbolic":
        prof = exponential_profile()
        t_lo, t_hi = 0.0, 10.0
    elif args.profile == "interp":
        target = 2.0 if args.target is None else args.target
        prof = interpolation_profile(target, args.phi_scale)
        t_lo, t_hi = 0.0, 1.0 + args.phi_scale + 4.0
    else:
        flat = 0.25 if args.target is None else args.target
        prof = cap_profile(0.0, flat)
        t_lo, t_hi = 0.0, dict(prof.details)["flat_from_t"] + 4.0
    metric = DoublyWarpedMetric(prof, prof, t_lo, t_hi)
    report = verify_nonpositive(metric, args.grid)
    lines = [
        f"profile {args.profile} grid {report.grid} domain [{report.t_lo:.6f}, {report.t_hi:.6f}]",
        f"max_k13 {report.max_k13:.12e}",
        f"max_k23 {report.max_k23:.12e}",
        f"max_k12 {report.max_k12:.12e}",
        f"max_curvature {report.max_curvature:.12e}",
        f"monotone {str(report.monotone[0]).lower()} {str(report.monotone[1]).lower()}",
        f"convex {str(report.convex[0]).lower()} {str(report.convex[1]).lower()}",
        f"certified {str(report.certified).lower()}",
    ]
    sys.stdout.write("\n".join(lines) + "\n")
    return 0


def _cmd_render(args: argparse.Namespace) -> int:
    inst = _load_instance(args.file)
    witness = None
    if args.witness is not None:
        witness = parse_witness(_read(args.witness))
    svg = render_svg(scene_for(inst, witness))
    with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(svg)
    return 0


def build_parser() -> argparse.ArgumentParser:
    default_seed = int(os.environ.get("NPC_SEED", "0"))
    parser = argparse.ArgumentParser(
        prog="npcchain",
        description="exact feasibility decisions for chained graph-manifold gluings",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("decide", help="decide feasibility of an instance file")
    p.add_argument("file")
    p.set_defaults(func=_cmd_decide)

    p = sub.add_parser("witness", help="print rational witness forms")
    p.add_argument("file")
    p.set_defaults(func=_cmd_witness)

    p = sub.add_parser("check", help="verify a witness file exactly")
    p.add_argument("file")
    p.add_argument("witness_file")
    p.set_defaults(func=_cmd_check)

    p = sub.add_parser("oracle", help="numeric concordance report")
    p.add_argument("file")
    p.add_argument("--budget", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=default_seed)
    p.set_defaults(func=_cmd_oracle)

    p = sub.add_parser("cusp", help="curvature report for a cusp profile")
    p.add_argument("--profile", choices=("hyperbolic", "interp", "cap"), required=True)
    p.add_argument("--target", type=float, default=None,
                   help="interp: tail conformal factor (default 2); cap: flat level (default 0.25)")
    p.add_argument("--phi-scale", type=float, default=8.0, dest="phi_scale")
    p.add_argument("--grid", type=int, default=1000)
    p.set_defaults(func=_cmd_cusp)

    p = sub.add_parser("render", help="write a deterministic SVG of an instance")
    p.add_argument("file")
    p.add_argument("--out", required=True)
    p.add_argument("--witness", default=None, help="optional witness file to draw")
    p.set_defaults(func=_cmd_render)

    return parser


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code
        return int(code) if code is not None else 0
    try:
        return args.func(args)
    except (ParseError, InvalidInstanceError, ValueError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


def main() -> None:
    raise SystemExit(run())
