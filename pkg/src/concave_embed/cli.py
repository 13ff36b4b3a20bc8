"""Command-line interface.

Exit codes: 0 success, 1 validation failure or non-convergence,
2 unreadable input or bad arguments.
"""

import argparse
import csv
import sys

import numpy as np

from .diagonal import FAMILIES, embed_via_c, extract_convergent_subset
from .equilateral import equilateral_set, verify_equilateral
from .exceptions import (
    ConcaveEmbedError,
    ExtractionShortfallError,
    IdentityViolationError,
    InadmissibleNormError,
    KInvarianceError,
    NotStronglyConcaveError,
    StructuralError,
)
from .fixed_point import SolverConfig, embed
from .io import dumps, load_norm, load_space
from .metric_core import (
    concavity_report,
    make_discrete,
    make_equilateral,
    make_random_strongly_concave,
    validate,
)
from .norms import (
    NormSpec,
    certify_distortion,
    delta_admissible,
    sup_plus_l1_for_delta,
    weighted_sup_for_delta,
)

OK, FAILED, USAGE = 0, 1, 2

SWEEP_COLUMNS = [
    "delta", "admissible", "iterations", "final_residual", "max_residual", "converged", "status",
]


def _emit(payload, output=None):
    text = dumps(payload)
    if output:
        with open(output, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _solver_config(args, **overrides):
    kwargs = dict(
        max_iterations=args.max_iterations,
        tolerance=args.tolerance,
        damping=args.damping,
        eta=args.eta_override,
        allow_uncertified_norm=args.allow_uncertified_norm,
    )
    kwargs.update(overrides)
    return SolverConfig(**kwargs)


def _add_solver_flags(p):
    g = p.add_argument_group("solver")
    g.add_argument("--max-iterations", type=int, default=10_000)
    g.add_argument("--tolerance", type=float, default=None,
                   help="stopping residual (default 1e-12 * (diameter + eta))")
    g.add_argument("--damping", type=float, default=1.0)
    g.add_argument("--eta-override", type=float, default=None,
                   help="cube edge; must not exceed the concavity gap")
    g.add_argument("--allow-uncertified-norm", action="store_true")


def cmd_validate(args):
    space = load_space(args.input)
    result = validate(space, args.tol)
    _emit({
        "ok": result.ok,
        "violations": [
            {"kind": v.kind, "indices": list(v.indices), "amount": v.amount}
            for v in result.violations
        ],
    })
    return OK if result.ok else FAILED


def cmd_report(args):
    space = load_space(args.input)
    report = concavity_report(space)
    _emit({
        "gap": report.gap,
        "witness_triple": report.witness_triple,
        "separation": report.separation,
        "diameter": report.diameter,
    })
    return OK


def cmd_embed(args):
    space = load_space(args.input)
    result = validate(space)
    if not result.ok:
        print(f"input is not a metric: {len(result.violations)} violations, "
              f"first {result.violations[0]}", file=sys.stderr)
        return FAILED
    norm = load_norm(args.norm_spec, dimension=space.size) if args.norm_spec else NormSpec.sup(space.size)
    emb = embed(space, norm, _solver_config(args))
    _emit(emb.to_dict(), args.output)
    return OK if emb.converged else FAILED


def cmd_equilateral(args):
    norm = load_norm(args.norm_spec, dimension=args.n) if args.norm_spec else NormSpec.sup(args.n)
    emb = equilateral_set(args.n, norm, _solver_config(args), lam=args.lam)
    verdict = verify_equilateral(emb.points, norm, args.lam, args.verify_tol * args.lam)
    payload = emb.to_dict()
    payload["equilateral"] = {"ok": verdict.ok, "max_deviation": verdict.max_deviation}
    _emit(payload, args.output)
    return OK if emb.converged and verdict.ok else FAILED


def _family(args):
    if args.family == "equilateral":
        return FAMILIES["equilateral"](args.lam)
    if args.family == "two-cluster":
        return FAMILIES["two-cluster"](args.within, args.cross)
    return FAMILIES[args.family]()


def cmd_extract(args):
    metric = _family(args)
    if args.norm_spec:
        norm = load_norm(args.norm_spec, dimension=args.count)
        try:
            emb = embed_via_c(metric, args.count, norm, args.tol, args.horizon, _solver_config(args))
        except ExtractionShortfallError as exc:
            _emit(exc.result.to_dict(), args.output)
            print(f"error: {exc}", file=sys.stderr)
            return FAILED
        _emit(emb.to_dict(), args.output)
        return OK if emb.converged else FAILED
    result = extract_convergent_subset(metric, args.count, args.tol, args.horizon)
    _emit(result.to_dict(), args.output)
    return FAILED if result.shortfall else OK


def _parse_deltas(args):
    if args.deltas:
        return [float(x) for x in args.deltas.split(",") if x.strip()]
    start, stop, step = (float(x) for x in args.delta_grid.split(":"))
    count = int(round((stop - start) / step)) + 1
    return [round(start + i * step, 12) for i in range(count)]


def _sweep_space(args):
    if args.family == "discrete":
        return make_discrete(args.n)
    if args.family == "equilateral":
        return make_equilateral(args.n, args.lam)
    if args.seed is None:
        raise ValueError("--seed is required for the random family")
    return make_random_strongly_concave(args.n, args.c, seed=args.seed)


def run_sweep(space, deltas, norm_kind="weighted_sup", config=None):
    """One row per delta: solve with the matching norm and record the outcome.

    Inadmissible deltas are still attempted (admissibility is sufficient,
    not necessary); a K-invariance failure is recorded as the row status.
    """
    config = config or SolverConfig()
    report = concavity_report(space)
    eta = config.eta if config.eta is not None else report.gap
    make_norm = weighted_sup_for_delta if norm_kind == "weighted_sup" else sup_plus_l1_for_delta
    rows = []
    for delta in deltas:
        norm = make_norm(space.size, delta)
        cert = certify_distortion(norm)
        admissible = (
            not np.isfinite(eta) or space.diameter == 0
            or delta_admissible(cert.delta, eta, space.diameter)
        )
        row = {"delta": delta, "admissible": admissible}
        try:
            emb = embed(space, norm, SolverConfig(**{**config.__dict__, "enforce_admissibility": False}))
            diag = emb.diagnostics
            row.update(iterations=diag.iterations, final_residual=diag.final_residual,
                       max_residual=emb.max_residual, converged=diag.converged,
                       status="converged" if diag.converged else "max_iterations")
        except KInvarianceError:
            row.update(iterations="", final_residual="", max_residual="", converged=False,
                       status="k_invariance_error")
        rows.append(row)
    return rows


def cmd_sweep(args):
    space = _sweep_space(args)
    rows = run_sweep(space, _parse_deltas(args), args.norm_kind, _solver_config(args))
    with open(args.output, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=SWEEP_COLUMNS)
        writer.writeheader()
        for row in rows:
            writer.writerow({k: (repr(v) if isinstance(v, float) else v) for k, v in row.items()})
    failed = [r["delta"] for r in rows if r["admissible"] and not r["converged"]]
    print(f"wrote {len(rows)} rows to {args.output}; "
          f"{len(failed)} admissible rows did not converge", file=sys.stderr)
    return FAILED if failed else OK


def build_parser():
    parser = argparse.ArgumentParser(
        prog="concave-embed",
        description="Isometric embeddings of strongly concave metric spaces into near-sup norms.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check the metric axioms of a distance matrix")
    p.add_argument("input")
    p.add_argument("--tol", type=float, default=None)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("report", help="concavity gap, separation and diameter")
    p.add_argument("input")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("embed", help="embed a distance matrix isometrically into a norm")
    p.add_argument("input")
    p.add_argument("--norm-spec", help="NormSpec JSON file or inline object (default: sup)")
    p.add_argument("--output", "-o")
    _add_solver_flags(p)
    p.set_defaults(func=cmd_embed)

    p = sub.add_parser("equilateral", help="n-point equilateral set in a norm")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--norm-spec")
    p.add_argument("--lambda", dest="lam", type=float, default=1.0)
    p.add_argument("--verify-tol", type=float, default=1e-9)
    p.add_argument("--output", "-o")
    _add_solver_flags(p)
    p.set_defaults(func=cmd_equilateral)

    p = sub.add_parser("extract", help="diagonal extraction from a builtin countable family")
    p.add_argument("--family", choices=sorted(FAMILIES), required=True)
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--tol", type=float, default=1e-3)
    p.add_argument("--horizon", type=int, default=10_000)
    p.add_argument("--lambda", dest="lam", type=float, default=1.0)
    p.add_argument("--within", type=float, default=1.0)
    p.add_argument("--cross", type=float, default=1.5)
    p.add_argument("--norm-spec", help="also embed the extracted points into this norm")
    p.add_argument("--output", "-o")
    _add_solver_flags(p)
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("sweep", help="solver outcome over a grid of distortions")
    p.add_argument("--family", choices=["discrete", "equilateral", "random"], default="discrete")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--lambda", dest="lam", type=float, default=1.0)
    p.add_argument("--c", type=float, default=0.5)
    p.add_argument("--seed", type=int)
    grid = p.add_mutually_exclusive_group(required=True)
    grid.add_argument("--deltas", help="comma-separated list")
    grid.add_argument("--delta-grid", help="start:stop:step, inclusive")
    p.add_argument("--norm-kind", choices=["weighted_sup", "sup_plus_l1"], default="weighted_sup")
    p.add_argument("--output", "-o", required=True)
    _add_solver_flags(p)
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except StructuralError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE
    except (NotStronglyConcaveError, KInvarianceError, IdentityViolationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return FAILED
    except (InadmissibleNormError, ConcaveEmbedError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
