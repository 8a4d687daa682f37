"""
Command-line front end.

Exit codes: 0 success, 2 invalid input, 3 numerical failure, 4 I/O error.
"""

import argparse
import json
import sys

import numpy as np

from . import __version__
from .errors import ErrorMeasure, cost_caps, err_cal, err_ent, err_max
from .numerics import NumericalError, ValidationError
from .observables import fourier_pair, spin1_triple
from .plot import region_svg
from .problemfile import fmt, load_problem, parse_observable, sample_to_json, write_csv
from .region import ProblemInstance, offset, sample_weights, trace_boundary
from .transport import (
    CostFunction,
    as_distribution,
    manhattan_bound,
    scheme_family,
    solve_transport,
)

EXIT_OK, EXIT_INPUT, EXIT_NUMERICAL, EXIT_IO = 0, 2, 3, 4


def _cost_from_args(args, size=None):
    kind = args.cost
    if kind == "discrete":
        d = args.d if args.d is not None else size
        if d is None:
            raise ValidationError("--d is required for the discrete cost")
        return CostFunction.discrete(d)
    if kind == "quadratic":
        if args.values is None:
            if size is None and args.d is None:
                raise ValidationError("--values or --d is required for the quadratic cost")
            return CostFunction.quadratic(np.arange(size if size is not None else args.d))
        return CostFunction.quadratic(args.values)
    if kind == "power":
        if args.values is None:
            raise ValidationError("--values is required for the power cost")
        return CostFunction.power(args.values, args.alpha)
    if args.matrix is None:
        raise ValidationError("--matrix is required for a matrix cost")
    try:
        rows = json.loads(args.matrix)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"--matrix: invalid JSON ({exc.msg})") from None
    return CostFunction.from_matrix(rows, args.values)


def _add_cost_args(p):
    p.add_argument("--cost", choices=["discrete", "quadratic", "power", "matrix"], default="discrete")
    p.add_argument("--values", type=float, nargs="+", help="outcome values (quadratic/power cost)")
    p.add_argument("--alpha", type=float, default=2.0, help="exponent of the power cost |x-y|^alpha")
    p.add_argument("--matrix", help="cost matrix as JSON rows")
    p.add_argument("--d", type=int, help="number of outcomes")


def cmd_transport(args, out):
    p = as_distribution(args.p, name="p")
    q = as_distribution(args.q, name="q")
    c = _cost_from_args(args, size=len(p) if len(p) == len(q) else None)
    if c.shape != (len(p), len(q)):
        raise ValidationError(f"cost shape {c.shape} does not match distributions ({len(p)}, {len(q)})")
    fam = scheme_family(c)
    sol = solve_transport(c.matrix, p, q)
    dual = max(s.value(p, q) for s in fam)
    print(f"primal {fmt(sol.cost)}", file=out)
    print(f"dual   {fmt(dual)}", file=out)
    print(f"gap    {fmt(abs(sol.cost - dual))}", file=out)
    print("plan", file=out)
    for row in sol.plan:
        print("  " + " ".join(fmt(v) for v in row), file=out)
    return EXIT_OK


def cmd_mccm(args, out):
    c = _cost_from_args(args)
    fam = scheme_family(c)
    for k, s in enumerate(fam):
        print(f"scheme {k}", file=out)
        print("  phi " + " ".join(fmt(v) for v in s.phi), file=out)
        print("  psi " + " ".join(fmt(v) for v in s.psi), file=out)
        print("  equality " + " ".join(f"({x},{y})" for x, y in sorted(s.edges)), file=out)
    print(f"count {len(fam)}", file=out)
    if c.ordered_convex:
        print(f"bound {manhattan_bound(*c.shape)}", file=out)
    return EXIT_OK


def cmd_error(args, out):
    prob = load_problem(args.problem)
    inst = prob.instance
    i = args.index
    if not 0 <= i < inst.n:
        raise ValidationError(f"--index must be in [0, {inst.n})")
    with open(args.approx) as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"{args.approx}: invalid JSON at line {exc.lineno}: {exc.msg}") from None
    Ap = parse_observable(doc, inst.dim, "approx")
    A, c = inst.observables[i], inst.costs[i]
    print(f"eps_M {fmt(err_max(Ap, A, c, inst.families()[i]))}", file=out)
    print(f"eps_C {fmt(err_cal(Ap, A, c))}", file=out)
    print(f"eps_E {fmt(err_ent(Ap, A, c))}", file=out)
    cs, cbs = cost_caps(c, inst.dim)
    print(f"caps  {fmt(cs)} {fmt(cbs)}", file=out)
    return EXIT_OK


def _print_point(bp, out):
    print(f"measure {bp.measure}", file=out)
    print("w " + " ".join(fmt(v) for v in bp.w), file=out)
    print(f"b {fmt(bp.b)}", file=out)
    print("eps " + " ".join(fmt(v) for v in bp.epsilon), file=out)
    print(f"gap {fmt(bp.gap)}", file=out)
    print(f"status {bp.status}", file=out)


def cmd_offset(args, out):
    prob = load_problem(args.problem, measure=args.measure)
    W = np.asarray(args.weights, dtype=float) if args.weights else prob.weights[0]
    bp = offset(prob.instance, prob.measure, W, tol=args.tol)
    _print_point(bp, out)
    return EXIT_OK if bp.status == "optimal" else EXIT_NUMERICAL


def _run_region(instance, measure, weights, args, out, names=None):
    sample = trace_boundary(instance, measure, weights=weights, threads=args.threads, tol=args.tol)
    if args.out:
        write_csv(args.out, sample)
    else:
        write_csv(out, sample)
    if getattr(args, "json", None):
        with open(args.json, "w") as fh:
            json.dump(sample_to_json(sample), fh, indent=1)
    if args.svg:
        with open(args.svg, "w") as fh:
            fh.write(region_svg(sample, names))
    if all(p.status != "optimal" for p in sample.points):
        print("error: every boundary point failed", file=sys.stderr)
        return EXIT_NUMERICAL
    return EXIT_OK


def cmd_region(args, out):
    prob = load_problem(args.problem, samples=args.samples, measure=args.measure)
    names = [o.name or f"eps_{k + 1}" for k, o in enumerate(prob.instance.observables)]
    return _run_region(prob.instance, prob.measure, prob.weights, args, out, names)


def cmd_demo(args, out):
    measure = ErrorMeasure.parse(args.measure).value
    if args.which == "spin1":
        q = CostFunction.quadratic([-1, 0, 1])
        inst = ProblemInstance(list(spin1_triple()), [q, q, q])
        names = ["L1", "L2", "L3"]
    else:
        if args.d is None or args.d < 2:
            raise ValidationError("demo fourier needs --d >= 2")
        c = CostFunction.discrete(args.d)
        inst = ProblemInstance(list(fourier_pair(args.d)), [c, c])
        names = ["position", "momentum"]
    count = args.samples if args.samples is not None else (41 if inst.n == 2 else 200)
    return _run_region(inst, measure, sample_weights(inst.n, count), args, out, names)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="mursdp",
        description="Measurement uncertainty relations: transport costs, error measures and SDP region boundaries.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("transport", help="transport cost between two distributions (primal and dual)")
    _add_cost_args(p)
    p.add_argument("--p", type=float, nargs="+", required=True)
    p.add_argument("--q", type=float, nargs="+", required=True)
    p.set_defaults(func=cmd_transport)

    p = sub.add_parser("mccm", help="list the optimal pricing schemes of a cost function")
    _add_cost_args(p)
    p.set_defaults(func=cmd_mccm)

    p = sub.add_parser("error", help="error measures of an approximating observable")
    p.add_argument("problem", help="problem file (JSON)")
    p.add_argument("--approx", required=True, help="approximating observable (JSON)")
    p.add_argument("--index", type=int, default=0, help="reference observable index")
    p.set_defaults(func=cmd_error)

    def region_flags(p, samples=True):
        p.add_argument("--measure", choices=["M", "C", "E"])
        if samples:
            p.add_argument("--samples", type=int)
        p.add_argument("--tol", type=float, default=1e-8)
        p.add_argument("--out", help="CSV output path (default: stdout)")
        p.add_argument("--json", help="JSON output path")
        p.add_argument("--svg", help="SVG plot output path")
        p.add_argument("--threads", type=int, default=1)

    p = sub.add_parser("offset", help="offset b_L(w) for one weight vector")
    p.add_argument("problem")
    p.add_argument("--measure", choices=["M", "C", "E"])
    p.add_argument("--weights", type=float, nargs="+")
    p.add_argument("--tol", type=float, default=1e-8)
    p.set_defaults(func=cmd_offset)

    p = sub.add_parser("region", help="trace an uncertainty region boundary")
    p.add_argument("problem")
    region_flags(p)
    p.set_defaults(func=cmd_region)

    p = sub.add_parser("demo", help="builtin examples")
    p.add_argument("which", choices=["spin1", "fourier"])
    p.add_argument("--d", type=int, default=2)
    region_flags(p)
    p.set_defaults(func=cmd_demo, measure="M")
    return parser


def main(argv=None, out=None):
    out = sys.stdout if out is None else out
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "threads", 1) is not None and getattr(args, "threads", 1) < 1:
        parser.error("--threads must be at least 1")
    if getattr(args, "samples", None) is not None and args.samples < 1:
        parser.error("--samples must be at least 1")
    try:
        return args.func(args, out)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except NumericalError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
