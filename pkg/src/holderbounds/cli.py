"""Command-line front end.

Subcommands map one-to-one onto the library pipeline:

* ``analyze``   -- Newton polyhedra, convenience, summed polytope, faces
  at infinity with their summand decompositions.
* ``certify``   -- non-degeneracy search over every face (exit 1 when a
  degenerate face is found).
* ``exponent``  -- the exact error-bound exponent report.
* ``verify``    -- exponent + certification, then empirical bound
  verification over a sampling plan (exit 1 on degeneracy or ratio
  violations).
* ``slope``     -- nonsmooth slope of max_i f_i at a point.
* ``quadratic`` -- square-root bound data for one quadratic component.

JSON output is canonical (sorted keys); identical configuration and seed
give byte-identical bytes.  Text output rounds to 6 significant digits
but renders the same numbers.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .bounds import holder_exponent, quadratic_bound
from .newton import FaceEnumerationError, ZeroPolynomialError, analyze_system, face_to_json
from .nondegen import CertifyConfig, certify_system
from .polysys import ParseError, PolynomialError, PolySystem, parse_system
from .verify import (
    DistanceConfig,
    FeasibleSetEmptyError,
    SamplePlan,
    slope,
    verify_bound,
)

EXIT_OK = 0
EXIT_FINDING = 1
EXIT_USAGE = 2

DEFAULT_TAU_AXIS_SCHEDULE = (1e-1, 1e-2, 1e-3)


@dataclass(frozen=True)
class RunConfig:
    command: str
    input_path: str
    seed: int = 42
    samples: int | None = None
    box: tuple[tuple[float, float], ...] | None = None
    rings: tuple[float, ...] | None = None
    point: tuple[float, ...] | None = None
    tau_zero: float = 1e-12
    tau_axis: float | None = None
    output_format: str = "text"
    out_path: str | None = None
    workers: int = 1


def _g6(value) -> str:
    return f"{float(value):.6g}"


def _axis_schedule(tau_axis: float | None) -> tuple[float, ...]:
    if tau_axis is None:
        return DEFAULT_TAU_AXIS_SCHEDULE
    kept = tuple(t for t in DEFAULT_TAU_AXIS_SCHEDULE if t > tau_axis)
    return kept + (tau_axis,)


def _certify_config(cfg: RunConfig) -> CertifyConfig:
    return CertifyConfig(
        samples=cfg.samples or 4096,
        tau_zero=cfg.tau_zero,
        tau_axis_schedule=_axis_schedule(cfg.tau_axis),
        seed=cfg.seed,
        face_workers=cfg.workers,
    )


def _load_system(cfg: RunConfig) -> PolySystem:
    with open(cfg.input_path, "r", encoding="utf-8") as handle:
        return parse_system(handle.read())


# -- per-command payload builders ---------------------------------------------------


def _run_analyze(cfg: RunConfig):
    system = _load_system(cfg)
    geometry = analyze_system(system)
    payload = {
        "n": system.n,
        "p": system.p,
        "d": system.d,
        "varnames": list(system.varnames),
        "components": [
            {
                "name": name,
                "vertices": [list(v) for v in polytope.vertices],
                "dim": polytope.dim,
                "convenient": report.convenient,
                "missing_axes": [system.varnames[j] for j in report.missing_axes],
            }
            for name, polytope, report in zip(
                system.names, geometry.polytopes, geometry.convenience
            )
        ],
        "sum_polytope": {
            "vertices": [list(v) for v in geometry.sum_polytope.vertices],
            "dim": geometry.sum_polytope.dim,
        },
        "convenient": geometry.convenient,
        "faces_at_infinity": [face_to_json(face) for face in geometry.faces],
    }

    lines = [
        f"system: p={system.p} components, n={system.n} variables, degree d={system.d}",
        f"convenient: {'yes' if geometry.convenient else 'no'}",
    ]
    for entry in payload["components"]:
        miss = (
            ""
            if entry["convenient"]
            else f"  (missing axes: {', '.join(entry['missing_axes'])})"
        )
        lines.append(
            f"  {entry['name']}: vertices {entry['vertices']}"
            f" convenient={'yes' if entry['convenient'] else 'no'}{miss}"
        )
    lines.append(f"summed polytope vertices: {payload['sum_polytope']['vertices']}")
    lines.append(f"faces at infinity: {len(geometry.faces)}")
    for index, face in enumerate(geometry.faces):
        parts = " + ".join(str([list(p) for p in part]) for part in face.decomposition)
        lines.append(
            f"  face {index}: dim {face.dim}, support {[list(p) for p in face.support_points]},"
            f" normal {list(face.witness_normal)}, value {face.value} = {parts}"
        )
    return EXIT_OK, payload, "\n".join(lines)


def _run_certify(cfg: RunConfig):
    system = _load_system(cfg)
    verdict = certify_system(system, _certify_config(cfg))
    payload = verdict.to_json()
    lines = [
        f"verdict: {verdict.status}",
        f"convenient: {'yes' if verdict.convenient else 'no'}",
    ]
    for face in verdict.faces:
        entry = (
            f"  face {face.face_index}: {face.status},"
            f" objective_min {_g6(face.objective_min)}, samples {face.samples}"
        )
        if face.witness is not None:
            entry += f", witness {[_g6(v) for v in face.witness]}"
        if face.witness_exact is not None:
            entry += f", exact witness ({', '.join(face.witness_exact)})"
        lines.append(entry)
    code = EXIT_FINDING if verdict.status == "degenerate" else EXIT_OK
    return code, payload, "\n".join(lines)


def _run_exponent(cfg: RunConfig):
    system = _load_system(cfg)
    report = holder_exponent(max(system.d, 1), system.n, system.p)
    payload = report.to_json()
    lines = [
        f"d={report.d} n={report.n} p={report.p}",
        f"H(2d, n, p) = {report.H}",
        f"alpha = {payload['alpha']}  (beta = 1)",
    ]
    lines.extend(f"note: {note}" for note in report.notes)
    return EXIT_OK, payload, "\n".join(lines)


def _run_verify(cfg: RunConfig):
    system = _load_system(cfg)
    report = holder_exponent(max(system.d, 1), system.n, system.p)
    verdict = certify_system(system, _certify_config(cfg))
    hypothesis = verdict.convenient and verdict.status == "nondegenerate_probable"
    from dataclasses import replace as _replace

    report = _replace(
        report,
        convenient=verdict.convenient,
        nondegenerate_probable=verdict.status == "nondegenerate_probable",
    )

    box = cfg.box or tuple((-3.0, 3.0) for _ in range(system.n))
    plan = SamplePlan(
        box=box,
        count=cfg.samples or 2000,
        rings=cfg.rings,
        seed=cfg.seed,
    )
    verification = verify_bound(
        system,
        report,
        plan,
        dist_cfg=DistanceConfig(seed=cfg.seed, search_box=box),
    )
    payload = {
        "exponent": report.to_json(),
        "certification": verdict.to_json(),
        "hypothesis_established": hypothesis,
        "verification": verification.to_json(),
    }
    lines = []
    if hypothesis:
        lines.append("hypothesis established: convenient and non-degenerate at infinity")
    else:
        lines.append(
            "WARNING: error-bound hypotheses not established"
            f" (certification: {verdict.status}, convenient:"
            f" {'yes' if verdict.convenient else 'no'}); empirical results only"
        )
    lines.append(f"alpha = {payload['exponent']['alpha']}, beta = 1")
    lines.append(
        f"samples {len(verification.records)}, fitted_c ="
        f" {_g6(verification.fitted_c) if verification.fitted_c is not None else 'n/a'},"
        f" violations {verification.violations}"
    )
    if verification.goodness is not None:
        for ring in verification.goodness.rings:
            floor = "n/a" if ring.floor is None else _g6(ring.floor)
            lines.append(f"  ring R={_g6(ring.radius)}: slope floor {floor}")
        lines.append(f"  slope-floor trend: {verification.goodness.trend}")
    bad = verdict.status == "degenerate" or verification.violations > 0
    return (EXIT_FINDING if bad else EXIT_OK), payload, "\n".join(lines)


def _run_slope(cfg: RunConfig):
    system = _load_system(cfg)
    if cfg.point is None:
        raise UsageError("slope requires --point")
    if len(cfg.point) != system.n:
        raise UsageError(
            f"--point needs {system.n} coordinates, got {len(cfg.point)}"
        )
    out = slope(system, cfg.point)
    payload = {
        "point": list(cfg.point),
        "slope": out.value,
        "multipliers": list(out.multipliers),
        "active": [system.names[i] for i in out.active],
    }
    text = (
        f"slope at {list(cfg.point)}: {_g6(out.value)}\n"
        f"active components: {', '.join(payload['active'])}\n"
        f"multipliers: {[_g6(v) for v in out.multipliers]}"
    )
    return EXIT_OK, payload, text


def _quadratic_data(system: PolySystem):
    if system.p != 1:
        raise UsageError("quadratic expects a single component")
    f = system.polys[0]
    if f.degree() > 2:
        raise UsageError("quadratic expects degree at most 2")
    n = f.nvars
    A = np.zeros((n, n))
    b = np.zeros(n)
    c0 = 0.0
    for kappa, coeff in f.terms.items():
        idx = [j for j, k in enumerate(kappa) if k]
        degree = sum(kappa)
        if degree == 0:
            c0 = float(coeff)
        elif degree == 1:
            b[idx[0]] = float(coeff)
        elif len(idx) == 1:
            A[idx[0], idx[0]] = 2.0 * float(coeff)
        else:
            A[idx[0], idx[1]] = A[idx[1], idx[0]] = float(coeff)
    return A, b, c0


def _run_quadratic(cfg: RunConfig):
    system = _load_system(cfg)
    A, b, c0 = _quadratic_data(system)
    try:
        qb = quadratic_bound(A, b, c0)
    except ValueError as err:
        raise UsageError(str(err)) from err
    payload = qb.to_json()
    text = (
        f"lambda(A) = {_g6(qb.lambda_min_nonzero)}\n"
        f"constant sqrt(2 lambda)/2 = {_g6(qb.constant)}\n"
        f"critical point = {[_g6(v) for v in qb.critical_point]}\n"
        f"critical value = {_g6(payload['critical_value'])}"
    )
    return EXIT_OK, payload, text


class UsageError(ValueError):
    pass


_RUNNERS = {
    "analyze": _run_analyze,
    "certify": _run_certify,
    "exponent": _run_exponent,
    "verify": _run_verify,
    "slope": _run_slope,
    "quadratic": _run_quadratic,
}


def run(cfg: RunConfig) -> tuple[int, str]:
    """Execute one command; returns (exit code, rendered output)."""
    code, payload, text = _RUNNERS[cfg.command](cfg)
    if cfg.output_format == "json":
        rendered = json.dumps(payload, indent=2, sort_keys=True)
    else:
        rendered = text
    return code, rendered


# -- argument handling --------------------------------------------------------------


def _parse_box(text: str):
    intervals = []
    for chunk in text.split(","):
        lo, _, hi = chunk.partition(":")
        intervals.append((float(lo), float(hi)))
    return tuple(intervals)


def _parse_floats(text: str):
    return tuple(float(v) for v in text.split(","))


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="holderbounds",
        description=(
            "Newton-polyhedron certification and explicit Hölder error-bound "
            "exponents for polynomial inequality systems"
        ),
    )
    # Values like "-3:3,-3:3" or "-2,0" must parse as option values, not flags.
    negative_value = re.compile(r"^-\d")
    parser._negative_number_matcher = negative_value
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _RUNNERS:
        p = sub.add_parser(name)
        p._negative_number_matcher = negative_value
        p.add_argument("input", help="polynomial system file")
        p.add_argument("--seed", type=int, default=42)
        p.add_argument("--samples", type=int, default=None)
        p.add_argument("--box", type=_parse_box, default=None, help="lo:hi,lo:hi,...")
        p.add_argument("--rings", type=_parse_floats, default=None, help="r1,r2,...")
        p.add_argument("--point", type=_parse_floats, default=None, help="v1,v2,...")
        p.add_argument("--tau-zero", type=float, default=1e-12)
        p.add_argument("--tau-axis", type=float, default=None)
        p.add_argument("--format", choices=("text", "json"), default="text")
        p.add_argument("--out", default=None)
        p.add_argument("--workers", type=int, default=1)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as err:
        return EXIT_USAGE if err.code else EXIT_OK
    cfg = RunConfig(
        command=args.command,
        input_path=args.input,
        seed=args.seed,
        samples=args.samples,
        box=args.box,
        rings=args.rings,
        point=args.point,
        tau_zero=args.tau_zero,
        tau_axis=args.tau_axis,
        output_format=args.format,
        out_path=args.out,
        workers=args.workers,
    )
    try:
        code, rendered = run(cfg)
    except ParseError as err:
        print(f"parse error: {err}", file=sys.stderr)
        return EXIT_USAGE
    except (UsageError, PolynomialError, ZeroPolynomialError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_USAGE
    except (FaceEnumerationError, FeasibleSetEmptyError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_USAGE
    if cfg.out_path:
        with open(cfg.out_path, "w", encoding="utf-8") as handle:
            handle.write(rendered + "\n")
    else:
        print(rendered)
    return code


if __name__ == "__main__":
    sys.exit(main())
