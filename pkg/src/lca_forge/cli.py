"""Command-line front end.

Exit codes: 0 realizable / ok, 1 not realizable / violations, 2 usage,
parse or graph-format error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .closure import cl_f
from .dag import DagError, is_phylogenetic
from .decide import Decision, Mode, decide
from .formats import (
    ParseError,
    dag_from_dot,
    dag_from_json,
    dag_to_json,
    emit_dot,
    format_constraint,
    parse_problem,
)
from .relations import Relation, Universe
from .verify import Flavor, Verdict, random_dag_sampler, verify_rf

EXIT_OK, EXIT_NO, EXIT_USAGE = 0, 1, 2
SEED_ENV = "LCA_FORGE_SEED"


class UsageError(Exception):
    pass


def _read(path: str) -> str:
    try:
        return sys.stdin.read() if path == "-" else Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror or exc}") from exc


def load_problem(path: str) -> tuple[Universe, Relation, Relation]:
    try:
        return parse_problem(_read(path)).relations()
    except ParseError as exc:
        raise UsageError(f"{path}: {exc}") from exc


def load_dag(path: str, universe: Universe):
    text = _read(path)
    try:
        if text.lstrip().startswith("digraph"):
            return dag_from_dot(text, universe)
        return dag_from_json(json.loads(text), universe)
    except (ValueError, DagError) as exc:
        raise UsageError(f"{path}: malformed DAG: {exc}") from exc


def decision_json(d: Decision, with_closure: bool) -> dict:
    out: dict = {"mode": d.mode.value, "realizable": d.realizable}
    if d.certificate is not None:
        out["certificate"] = {
            "condition": d.certificate.failed_condition,
            "constraint": format_constraint(d.certificate.witness_constraint),
            "detail": d.certificate.detail,
        }
    if d.witness_dag is not None:
        out["witness_dag"] = dag_to_json(d.witness_dag)
        out["witness_network"] = dag_to_json(d.witness_network)
    if with_closure and d.closure is not None:
        out["closure"] = [format_constraint(c) for c in d.closure]
    return out


def verdict_json(v: Verdict) -> dict:
    return {
        "ok": v.ok,
        "violations": [
            {"axiom": x.tag, "constraint": format_constraint(x.constraint), "explanation": x.explanation}
            for x in v.violations
        ],
    }


def cmd_decide(args: argparse.Namespace) -> int:
    _, r, f = load_problem(args.problem)
    d = decide(r, f, args.mode)
    if args.dot and d.realizable:
        Path(f"{args.dot}.dag.dot").write_text(emit_dot(d.witness_dag), encoding="utf-8")
        Path(f"{args.dot}.net.dot").write_text(emit_dot(d.witness_network, "N"), encoding="utf-8")
    print(json.dumps(decision_json(d, args.closure), indent=2))
    return EXIT_OK if d.realizable else EXIT_NO


def cmd_closure(args: argparse.Namespace) -> int:
    _, r, f = load_problem(args.problem)
    res = cl_f(r, f)
    tags = {(i, j): tag for tag, i, j in res.raw_trace}
    for (i, j), c in zip(res.closure.index_pairs(), res.closure):
        line = format_constraint(c)
        if args.trace:
            line += f"  [{tags.get((i, j), 'R')}]"
        print(line)
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    u, r, f = load_problem(args.problem)
    flavor = Flavor(args.flavor)
    if args.fuzz is not None:
        return _fuzz(args, u, r, f, flavor)
    if args.dag is None:
        raise UsageError("verify needs a DAG file unless --fuzz is given")
    g = load_dag(args.dag, u)
    v = verify_rf(g, r, f, flavor, strict=args.strict)
    print(json.dumps(verdict_json(v), indent=2))
    return EXIT_OK if v.ok else EXIT_NO


def _fuzz(args, u, r, f, flavor) -> int:
    env = os.environ.get(SEED_ENV)
    try:
        seed = int(env) if env is not None else args.seed
    except ValueError as exc:
        raise UsageError(f"{SEED_ENV} must be an integer, got {env!r}") from exc
    hits = []
    for k in range(args.fuzz):
        g = random_dag_sampler(u, args.budget, seed + k)
        if verify_rf(g, r, f, flavor, strict=args.strict).ok:
            hits.append(seed + k)
    out: dict = {"samples": args.fuzz, "seed": seed, "verifying_seeds": hits}
    if hits:
        g = random_dag_sampler(u, args.budget, hits[0])
        out["first_witness"] = dag_to_json(g)
        out["first_witness_phylogenetic"] = is_phylogenetic(g)
    print(json.dumps(out, indent=2))
    return EXIT_OK if hits else EXIT_NO


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="lca-forge", description="Realizability of required/forbidden LCA constraints.")
    sub = p.add_subparsers(dest="command", required=True)

    d = sub.add_parser("decide", help="decide realizability and emit witnesses or a certificate")
    d.add_argument("problem", help="problem file, or - for stdin")
    d.add_argument("--mode", choices=[m.value for m in Mode], default="rf")
    d.add_argument("--dot", metavar="PREFIX", help="write PREFIX.dag.dot and PREFIX.net.dot")
    d.add_argument("--closure", action="store_true", help="embed cl_F(R) in the output")
    d.set_defaults(func=cmd_decide)

    c = sub.add_parser("closure", help="print cl_F(R), one constraint per line")
    c.add_argument("problem")
    c.add_argument("--trace", action="store_true", help="append the rule that added each constraint")
    c.set_defaults(func=cmd_closure)

    v = sub.add_parser("verify", help="check a DAG (JSON or emitted DOT) against a problem")
    v.add_argument("problem")
    v.add_argument("dag", nargs="?")
    v.add_argument("--flavor", choices=[x.value for x in Flavor], default="F")
    v.add_argument("--strict", action="store_true", help="check strict realization of R")
    v.add_argument("--fuzz", type=int, metavar="N", help="instead search N sampled DAGs for one that verifies")
    v.add_argument("--budget", type=int, default=6, help="internal vertex budget per sampled DAG")
    v.add_argument("--seed", type=int, default=0, help=f"sampler seed ({SEED_ENV} overrides)")
    v.set_defaults(func=cmd_verify)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"lca-forge: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
