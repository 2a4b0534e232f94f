"""Command-line front end.

Subcommands wire the library into reproducible file-based workflows:

    pullback  build a separable Chebyshev pullback of a field and verify it
    example   run the built-in one-cycle cubic seed end to end (lift + plots)
    bounds    lower-bound tables, single-degree queries, quadratic ceiling
    branches  full-branch structure of a polynomial

Exit codes are stable: 0 ok, 2 parse error, 3 invalid parameters,
4 dynamics/verification failure, 5 no admissible witness.  All numeric
output is printed with 9 significant digits and no timestamps, so
identical inputs reproduce identical bytes.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from . import bounds as bounds_mod
from .branches import branch_set_to_json, cheb_branches, cheb_nodes, full_branch_intervals
from .dynamics import (
    DEFAULT_CONFIG,
    DynamicsConfig,
    LiftError,
    DynamicsError,
    Section,
    find_cycle,
    integrate,
    lift_cycles,
    radial_cubic_field,
    records_to_csv,
    implicit_lift_curve,
)
from .polynomials import (
    UniPoly,
    VectorField2,
    chebyshev,
    field_from_json,
    unipoly_from_json,
)
from .pullback import build_pullback, check_exact_degree, pullback_result_to_json, verify_conjugacy
from .svgplot import branch_grid_svg, phase_portrait_svg, poly_graph_svg

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_PARAMS = 3
EXIT_DYNAMICS = 4
EXIT_NO_WITNESS = 5


class ParseFailure(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    """Tolerances and output choices shared by the workflow commands."""

    dynamics: DynamicsConfig = DEFAULT_CONFIG
    rho: Fraction = Fraction(1, 2)
    out_dir: Path = Path(".")
    fmt: str = "csv"

    def __post_init__(self) -> None:
        d = self.dynamics
        if min(d.tol, d.eps_fix, d.eps_transverse, d.eps_hyp, d.margin) <= 0:
            raise ValueError("all tolerances must be positive")
        if not 0 < self.rho < 1:
            raise ValueError(f"rho must lie in (0, 1), got {self.rho}")
        if self.fmt not in ("csv", "json", "svg"):
            raise ValueError(f"unknown output format {self.fmt!r}")


def _fmt9(v: float) -> str:
    return format(v, ".9g")


def _round9(obj):
    """Clamp every float in a JSON-ready structure to 9 significant digits."""
    if isinstance(obj, float):
        return float(_fmt9(obj))
    if isinstance(obj, dict):
        return {k: _round9(v) for k, v in obj.items()}
    if isinstance(obj, list):
        return [_round9(v) for v in obj]
    return obj


def _dump_json(obj) -> str:
    return json.dumps(_round9(obj), indent=2) + "\n"


def _load_json_file(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as err:
        raise ParseFailure(f"cannot read {path}: {err}") from err


def _load_field(path: str) -> VectorField2:
    obj = _load_json_file(path)
    try:
        return field_from_json(obj)
    except (KeyError, TypeError, ValueError) as err:
        raise ParseFailure(f"bad vector field file {path}: {err}") from err


def _load_unipoly(path: str) -> UniPoly:
    obj = _load_json_file(path)
    try:
        return unipoly_from_json(obj)
    except (KeyError, TypeError, ValueError) as err:
        raise ParseFailure(f"bad polynomial file {path}: {err}") from err


def _parse_rho(text: str) -> Fraction:
    try:
        rho = Fraction(text)
    except (ValueError, ZeroDivisionError) as err:
        raise ParseFailure(f"bad rho {text!r}: {err}") from err
    if not 0 < rho < 1:
        raise ValueError(f"rho must lie in (0, 1), got {rho}")
    return rho


def cmd_pullback(args) -> int:
    field = _load_field(args.field)
    if args.m < 2:
        raise ValueError(f"cover degree must be >= 2, got {args.m}")
    result = build_pullback(field, chebyshev(args.m))
    ok_conj = verify_conjugacy(result, field)
    ok_deg = check_exact_degree(result, field)
    payload = pullback_result_to_json(result)
    payload["conjugacy_identity"] = ok_conj
    payload["exact_degree"] = ok_deg
    text = _dump_json(payload)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    if not (ok_conj and ok_deg):
        print("pullback verification failed", file=sys.stderr)
        return EXIT_DYNAMICS
    print(f"deg_Y={payload['deg_Y']} conjugacy=ok exact_degree=ok", file=sys.stderr)
    return EXIT_OK


def _cycle_curve(field, record, n_points: int, tol: float):
    traj = integrate(field, record.anchor, record.period, tol)
    return [tuple(p) for p in traj.sample(n_points)]


def cmd_example(args) -> int:
    m = args.m
    if m < 2:
        raise ValueError(f"cover degree must be >= 2, got {m}")
    run = RunConfig(
        dynamics=DynamicsConfig(tol=args.tol),
        rho=_parse_rho(args.rho),
        out_dir=Path(args.out_dir),
    )
    rho, cfg = run.rho, run.dynamics

    out_dir = run.out_dir
    out_dir.mkdir(parents=True, exist_ok=True)

    field = radial_cubic_field(rho)
    pb = build_pullback(field, chebyshev(m))
    if not verify_conjugacy(pb, field) or not check_exact_degree(pb, field):
        print("pullback verification failed", file=sys.stderr)
        return EXIT_DYNAMICS

    section = Section(base=(0.0, 0.0), direction=(1.0, 0.0), s_max=1.0)
    base = find_cycle(field, section, float(rho), cfg)
    try:
        records = lift_cycles(pb, base, m, cfg)
    except LiftError as err:
        for i, j, why in err.failures:
            print(f"rectangle ({i},{j}) failed: {why}", file=sys.stderr)
        return EXIT_DYNAMICS

    (out_dir / "cycles.csv").write_text(records_to_csv(records), encoding="utf-8")

    curve_poly = implicit_lift_curve(m, rho)
    lines = ["i,j,residual"]
    for r in records:
        resid = curve_poly.evaluate_float(r.anchor[0], r.anchor[1])
        lines.append(f"{r.rect.i},{r.rect.j},{_fmt9(resid)}")
    (out_dir / "residuals.csv").write_text("\n".join(lines) + "\n", encoding="utf-8")

    plot_tol = 1e-8
    cycle_curve = _cycle_curve(field, base, 400, plot_tol)
    spirals = []
    for start in ((0.9, 0.0), (0.12 * float(rho) / 0.5, 0.0)):
        traj = integrate(field, start, 30.0, plot_tol)
        spirals.append([tuple(p) for p in traj.sample(1200)])
    (out_dir / "phase_portrait.svg").write_text(
        phase_portrait_svg(cycle_curve, spirals), encoding="utf-8"
    )

    lifted_curves = [_cycle_curve(pb.field, r, 300, plot_tol) for r in records]
    (out_dir / "branch_rectangles.svg").write_text(
        branch_grid_svg(cheb_nodes(m), lifted_curves, [r.anchor for r in records]),
        encoding="utf-8",
    )

    print(f"deg_Y={int(pb.field.degree())}")
    print(f"base: anchor=({_fmt9(base.anchor[0])},{_fmt9(base.anchor[1])}) "
          f"period={_fmt9(base.period)} multiplier={_fmt9(base.multiplier)}")
    print(f"lifted cycles: {len(records)} (expected {m * m})")
    print(f"outputs in {out_dir}")
    return EXIT_OK


def cmd_bounds(args) -> int:
    seeds = bounds_mod.default_seed_table()
    if args.bounds_cmd == "table1":
        text = bounds_mod.table1_csv(bounds_mod.table_pub_vs_cheb(seeds))
    elif args.bounds_cmd == "table2":
        text = bounds_mod.table2_csv(bounds_mod.table_derivation(seeds))
    elif args.bounds_cmd == "query":
        entry = bounds_mod.best_cheb_bound(args.N, seeds)
        n, m = entry.witness
        print(f"N={entry.target_degree} L_Ch={entry.value} witness=({n},{m}) source={entry.source}")
        print(bounds_mod.inequality_chain(entry, seeds))
        return EXIT_OK
    elif args.bounds_cmd == "ceiling":
        value = bounds_mod.quadratic_ceiling(args.k0, args.n0, args.N)
        if value.denominator == 1:
            print(value.numerator)
        else:
            print(f"{value.numerator}/{value.denominator}")
        return EXIT_OK
    else:  # pragma: no cover - argparse enforces choices
        raise ValueError(f"unknown bounds subcommand {args.bounds_cmd}")

    if args.fmt == "json":
        rows = [r.split(",") for r in text.strip().splitlines()]
        text = _dump_json({"header": rows[0], "rows": rows[1:]})
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_branches(args) -> int:
    if (args.poly is None) == (args.cheb is None):
        raise ValueError("give exactly one of POLY.json or --cheb M")
    if args.cheb is not None:
        if args.cheb < 2:
            raise ValueError(f"need m >= 2, got {args.cheb}")
        bset = cheb_branches(args.cheb)
    else:
        poly = _load_unipoly(args.poly)
        bset = full_branch_intervals(poly, args.tol)
    if bset.degenerate:
        print("warning: degenerate critical structure; classification may be unreliable",
              file=sys.stderr)
    sys.stdout.write(_dump_json(branch_set_to_json(bset)))
    if args.svg:
        span = 1.05
        n = 400
        pts = []
        for k in range(n + 1):
            x = -span + 2 * span * k / n
            y = bset.poly.evaluate_float(x)
            pts.append((x, max(-1.1, min(1.1, y))))
        Path(args.svg).write_text(poly_graph_svg(pts, bset.intervals), encoding="utf-8")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="cyclerep", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    p_pb = sub.add_parser("pullback", help="separable Chebyshev pullback of a field file")
    p_pb.add_argument("field", help="vector field JSON file")
    p_pb.add_argument("--m", type=int, required=True, help="cover degree (>= 2)")
    p_pb.add_argument("--out", help="output JSON path (default: stdout)")

    p_ex = sub.add_parser("example", help="one-cycle cubic seed: pullback, lift, plots")
    p_ex.add_argument("--m", type=int, default=3, help="cover degree (default 3)")
    p_ex.add_argument("--rho", default="1/2", help="cycle radius in (0,1), e.g. 1/2")
    p_ex.add_argument("--tol", type=float, default=DEFAULT_CONFIG.tol, help="integration tolerance")
    p_ex.add_argument("--out-dir", default="example_out", help="output directory")

    p_b = sub.add_parser("bounds", help="lower-bound tables and queries")
    bsub = p_b.add_subparsers(dest="bounds_cmd", required=True)
    for name in ("table1", "table2"):
        p_t = bsub.add_parser(name)
        p_t.add_argument("--out", help="output CSV path (default: stdout)")
        p_t.add_argument("--format", dest="fmt", choices=("csv", "json"), default="csv")
    p_q = bsub.add_parser("query")
    p_q.add_argument("N", type=int)
    p_c = bsub.add_parser("ceiling")
    p_c.add_argument("k0", type=int)
    p_c.add_argument("n0", type=int)
    p_c.add_argument("N", type=int)

    p_br = sub.add_parser("branches", help="full-branch structure of a polynomial")
    p_br.add_argument("poly", nargs="?", help="univariate polynomial JSON file")
    p_br.add_argument("--cheb", type=int, help="use the Chebyshev polynomial of this degree")
    p_br.add_argument("--tol", type=float, default=1e-12)
    p_br.add_argument("--svg", help="write a graph SVG with branch intervals shaded")

    return ap


_HANDLERS = {
    "pullback": cmd_pullback,
    "example": cmd_example,
    "bounds": cmd_bounds,
    "branches": cmd_branches,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _HANDLERS[args.command](args)
    except ParseFailure as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_PARSE
    except ValueError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_PARAMS
    except bounds_mod.MissingSeedError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_NO_WITNESS
    except bounds_mod.NoWitnessError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_NO_WITNESS
    except DynamicsError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_DYNAMICS


def entrypoint() -> None:  # console_scripts target
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
