"""Command-line entry point.

Exit status: 0 success, 2 unparsable or invalid input, 3 distance budget
exceeded, 4 a certificate, proof-chain step or property suite failed.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import io as cio
from .bound import check_continuity_bound, gamma, max_eps
from .cq import (
    DensityMatrix,
    check_cq_bound,
    cond_entropy_cq,
    cond_renyi_cq,
    renyi_entropy_state,
    von_neumann_entropy,
)
from .entropy import arce, check_alpha, cond_shannon, renyi_entropy, shannon_entropy
from .errors import BudgetExceeded, ChainViolation, CondRenyiError, DomainError, ParseError
from .pipeline import verify_proof_chain
from .prob_core import JointDistribution, marginal_x
from .suites import run_all
from .tightness import search_sup_ratio

EXIT_OK, EXIT_PARSE, EXIT_BUDGET, EXIT_CHAIN = 0, 2, 3, 4


@dataclass
class RunConfig:
    subcommand: str
    inputs: list = field(default_factory=list)
    alphas: list = field(default_factory=list)
    eps: float | None = None
    seed: int = 0
    out: str | None = None
    fmt: str = "json"

    @classmethod
    def from_args(cls, args) -> "RunConfig":
        inputs = [v for v in (getattr(args, "in1", None), getattr(args, "in2", None)) if v]
        return cls(args.subcommand, inputs, list(args.alpha or []), getattr(args, "eps", None), args.seed, args.out, args.fmt)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ParseError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="condrenyi", description="Conditional Renyi entropy continuity tools")
    sub = parser.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)

    def common(p, inputs=0):
        if inputs >= 1:
            p.add_argument("--in", dest="in1", required=True, help="JSON or CSV input")
        if inputs >= 2:
            p.add_argument("--in2", required=True, help="second input of the same kind")
        p.add_argument("--alpha", type=float, action="append", help="Renyi order (repeatable)")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out", help="output path (default stdout)")
        p.add_argument("--format", dest="fmt", choices=("json", "csv"), default="json")

    common(sub.add_parser("compute", help="entropies of one input over the alpha grid"), 1)
    p = sub.add_parser("certify", help="continuity certificate per alpha")
    common(p, 2)
    p.add_argument("--eps", type=float, required=True)
    p = sub.add_parser("pipeline", help="constructive proof trace for a classical pair")
    common(p, 2)
    p.add_argument("--eps", type=float)
    p = sub.add_parser("tightness", help="search for the supremum ratio")
    common(p)
    p.add_argument("--nx", type=int, required=True)
    p.add_argument("--ny", type=int, required=True)
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--budget", type=int, default=10_000)
    p.add_argument("--restarts", type=int, default=4)
    p.add_argument("--no-extremal", action="store_true", help="cold-start every restart")
    p = sub.add_parser("lemmas", help="run the majorization and monotonicity property suites")
    common(p)
    p.add_argument("--n", type=int, default=10_000, help="random instances per suite")
    p = sub.add_parser("curve", help="gamma versus eps as plot data")
    common(p)
    p.add_argument("--nx", type=int, required=True)
    p.add_argument("--points", type=int, default=51)
    return parser


def _alphas(args, default=(0.5,)):
    return list(args.alpha) if args.alpha else list(default)


def _single_alpha(args):
    grid = _alphas(args)
    if len(grid) != 1:
        raise ParseError("this subcommand takes exactly one --alpha")
    return grid[0]


def _pair(args):
    a, b = cio.load_input(args.in1), cio.load_input(args.in2)
    if type(a) is not type(b):
        raise ParseError("--in and --in2 must both be joints or both be c-q states")
    return a, b


def cmd_compute(args):
    obj = cio.load_input(args.in1)
    rows = []
    if isinstance(obj, JointDistribution):
        px = marginal_x(obj).entries
        base = {"H_X": shannon_entropy(px), "H_X_given_Y": cond_shannon(obj)}
        for a in _alphas(args):
            a = check_alpha(a)
            rows.append({"alpha": a, **base, "H_alpha_X": renyi_entropy(px, a), "arce": arce(obj, a)})
    else:
        rho_a = DensityMatrix(obj.reduced_a())
        base = {"H_A": von_neumann_entropy(rho_a), "H_A_given_Y": cond_entropy_cq(obj)}
        for a in _alphas(args):
            a = check_alpha(a)
            rows.append(
                {"alpha": a, **base, "H_alpha_A": renyi_entropy_state(rho_a, a), "cond_renyi": cond_renyi_cq(obj, a)}
            )
    return rows, {"kind": "joint" if isinstance(obj, JointDistribution) else "cq", "rows": rows}, EXIT_OK


def cmd_certify(args):
    a, b = _pair(args)
    check = check_continuity_bound if isinstance(a, JointDistribution) else check_cq_bound
    certs = [check(a, b, alpha, args.eps) for alpha in _alphas(args)]
    good = all(c.holds and all(c.checks.values()) for c in certs)
    rows = [{k: v for k, v in c.to_dict().items() if k != "checks"} for c in certs]
    return rows, {"certificates": [c.to_dict() for c in certs], "all_hold": good}, EXIT_OK if good else EXIT_CHAIN


def cmd_pipeline(args):
    p, q = _pair(args)
    if not isinstance(p, JointDistribution):
        raise ParseError("pipeline needs classical joint distributions")
    trace = verify_proof_chain(p, q, _single_alpha(args), args.eps)
    rows = [{"step": i, "label": s.label, "delta_h": s.delta_h, "tv": s.tv} for i, s in enumerate(trace.steps)]
    return rows, trace.to_dict(), EXIT_OK if trace.ok else EXIT_CHAIN


def cmd_tightness(args):
    res = search_sup_ratio(
        args.nx,
        args.ny,
        _single_alpha(args),
        args.eps,
        args.budget,
        seed=args.seed,
        restarts=args.restarts,
        seed_extremal=not args.no_extremal,
    )
    return res.restarts, res.to_dict(), EXIT_OK


def cmd_lemmas(args):
    reports = run_all(args.n, args.seed)
    rows = [{"suite": r.name, "passed": r.passed, "failed": r.failed} for r in reports]
    ok = all(r.ok for r in reports)
    return rows, {"suites": [r.to_dict() for r in reports], "all_pass": ok}, EXIT_OK if ok else EXIT_CHAIN


def cmd_curve(args):
    d = args.nx
    eps_grid = np.linspace(0.0, max_eps(d), args.points)
    rows = [{"alpha": a, "eps": float(e), "gamma": gamma(a, e, d)} for a in _alphas(args) for e in eps_grid]
    return rows, {"nx": d, "series": rows}, EXIT_OK


COMMANDS = {
    "compute": cmd_compute,
    "certify": cmd_certify,
    "pipeline": cmd_pipeline,
    "tightness": cmd_tightness,
    "lemmas": cmd_lemmas,
    "curve": cmd_curve,
}


def _emit(text, out):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        rows, payload, status = COMMANDS[args.subcommand](args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except ChainViolation as exc:
        print(f"chain violation: {exc}", file=sys.stderr)
        return EXIT_CHAIN
    except DomainError as exc:
        print(f"invalid input: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except CondRenyiError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_CHAIN
    payload = {"config": asdict(RunConfig.from_args(args)), **payload}
    text = cio.dump_csv(rows) if args.fmt == "csv" else cio.dump_json(payload)
    _emit(text, args.out)
    return status


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
