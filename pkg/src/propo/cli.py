"""``propo`` command-line entry point.

Reports go to stdout as JSON; a one-line human summary goes to stderr.
Exit codes: 0 success / HAS_O, 1 FAILS_O (or a failed check), 2 usage or
input error, 3 INDETERMINATE.
"""

from __future__ import annotations

import argparse
import datetime as _dt
import hashlib
import json
import os
import sys
import time
from dataclasses import dataclass, field

from . import __version__
from .core import (
    InputError,
    Status,
    WitnessCertificate,
    load_hypergraph,
    serialize_hypergraph,
    verify_witness,
)

EXIT_OK, EXIT_FAILS, EXIT_USAGE, EXIT_INDETERMINATE = 0, 1, 2, 3

# flags that do not change what is computed
_NON_SEMANTIC = {"jobs", "out", "layout", "checkpoint", "command", "func", "resume", "budget_seconds"}


@dataclass
class RunConfig:
    subcommand: str
    options: dict
    seed: int | None = None
    jobs: int = 1
    outputs: dict = field(default_factory=dict)

    @property
    def config_hash(self) -> str:
        semantic = {k: v for k, v in self.options.items() if k not in _NON_SEMANTIC}
        payload = json.dumps({"subcommand": self.subcommand, "options": semantic}, sort_keys=True, default=str)
        return hashlib.sha256(payload.encode()).hexdigest()[:16]

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "RunConfig":
        options = {k: v for k, v in vars(args).items() if k not in ("func",)}
        return cls(
            subcommand=args.command,
            options=options,
            seed=options.get("seed"),
            jobs=options.get("jobs") or 1,
            outputs={k: options[k] for k in ("out", "layout", "checkpoint") if options.get(k)},
        )


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"propo: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _emit(cfg: RunConfig, result: dict, started: float, summary: str) -> None:
    timing = {"timestamp": _dt.datetime.now(_dt.timezone.utc).isoformat(), "wall_time": round(time.perf_counter() - started, 3)}
    if "wall_time" in result:
        timing["worker_time"] = round(result.pop("wall_time"), 3)
    report = dict(result)
    report["tool"] = {"name": "propo", "version": __version__, "config_hash": cfg.config_hash, "seed": cfg.seed}
    report["timing"] = timing
    json.dump(report, sys.stdout, indent=2, sort_keys=False, default=str)
    sys.stdout.write("\n")
    print(summary, file=sys.stderr)


def _default_jobs() -> int:
    try:
        return max(1, int(os.environ.get("PROPO_JOBS", "1")))
    except ValueError:
        return 1


# --- subcommands ------------------------------------------------------------------


def cmd_check(args, cfg, started) -> int:
    from .decide import SearchBudget, decide

    h = load_hypergraph(args.file)
    budget = SearchBudget(max_seconds=args.max_seconds)
    if args.method == "dfs" and h.n > 10 and args.max_seconds is None:
        raise InputError(f"n={h.n} > 10 needs --max-seconds")
    cert = decide(h, args.method, budget)
    _emit(cfg, cert.to_json(), started, f"{args.file}: {cert.status.value}")
    return {Status.HAS_O: EXIT_OK, Status.FAILS_O: EXIT_FAILS, Status.INDETERMINATE: EXIT_INDETERMINATE}[cert.status]


def cmd_construct(args, cfg, started) -> int:
    from .construct import build_gk, gk_edge_count, gk_vertex_count, iter_gk_edge_blocks

    k = args.k
    if args.stream:
        if args.layout:
            raise InputError("--layout needs an eager build; drop --stream")
        with open(args.out, "w") as fh:
            fh.write(f"{k} {gk_vertex_count(k)} {gk_edge_count(k)}\n")
            for _, block in iter_gk_edge_blocks(k):
                fh.write("\n".join(" ".join(map(str, row)) for row in block.tolist()) + "\n")
        result = {"k": k, "n": gk_vertex_count(k), "m": gk_edge_count(k), "out": args.out, "streamed": True}
    else:
        h, layout = build_gk(k)
        with open(args.out, "wb") as fh:
            fh.write(serialize_hypergraph(h))
        if args.layout:
            with open(args.layout, "w") as fh:
                json.dump(layout.to_json(), fh)
        result = {"k": k, "n": h.n, "m": h.m, "tag_counts": layout.tag_counts(), "out": args.out, "streamed": False}
    _emit(cfg, result, started, f"G_{k}: {result['n']} vertices, {result['m']} edges -> {args.out}")
    return EXIT_OK


def cmd_census(args, cfg, started) -> int:
    from .enumeration import parse_partition, tournament_census

    partition = parse_partition(args.partition) if args.partition else None
    rep = tournament_census(
        args.n, args.k, partition, args.canonical, jobs=args.jobs or _default_jobs(), checkpoint=args.checkpoint
    )
    _emit(cfg, rep.to_json(), started, f"census n={args.n} k={args.k}: {rep.property_o_count}/{rep.total_enumerated} with Property O")
    return EXIT_OK


def cmd_minedges(args, cfg, started) -> int:
    from .enumeration import min_edges_search

    resume = None
    if args.resume:
        with open(args.resume) as fh:
            saved = json.load(fh)
        if saved.get("config_hash") != cfg.config_hash:
            raise InputError(f"checkpoint {args.resume} belongs to a different configuration")
        resume = saved["checkpoint"]
    res = min_edges_search(args.n, args.k, args.max_edges, args.budget_seconds, resume)
    if res.status == "INDETERMINATE" and args.checkpoint:
        with open(args.checkpoint, "w") as fh:
            json.dump({"config_hash": cfg.config_hash, "checkpoint": res.checkpoint}, fh)
    _emit(cfg, res.to_json(), started, f"minedges n={args.n} k={args.k}: {res.status} {res.minimum or ''}".rstrip())
    return EXIT_INDETERMINATE if res.status == "INDETERMINATE" else EXIT_OK


def cmd_tight(args, cfg, started) -> int:
    from .enumeration import tight_family_search

    res = tight_family_search(args.n, args.k)
    _emit(cfg, res.to_json(), started, f"tight n={args.n} k={args.k}: {res.status}")
    return EXIT_OK


def cmd_sample(args, cfg, started) -> int:
    import math

    from .stochastic import SampleConfig, estimate_property_o_probability, mean_consistent_count, thm2_experiment

    sc = SampleConfig(args.n, args.k, args.trials, args.seed)
    est = estimate_property_o_probability(sc, exact=args.exact, jobs=args.jobs or _default_jobs())
    result = est.to_json()
    mean, se = mean_consistent_count(sc)
    result["mean_consistent"] = mean
    result["mean_consistent_stderr"] = se
    result["expected_consistent"] = math.comb(args.n, args.k) / math.factorial(args.k)
    if args.thm2:
        result["thm2"] = thm2_experiment(sc).to_json()
    _emit(cfg, result, started, f"sample n={args.n} k={args.k}: fraction {est.fraction:.6f} +- {est.ci95:.6f}")
    return EXIT_OK


def cmd_bounds(args, cfg, started) -> int:
    from .bounds import bounds_report

    if args.alpha is not None and not 0 < args.alpha < 1:
        raise InputError("--alpha must lie in (0, 1)")
    rep = bounds_report(args.k, args.alpha, args.n, args.precision)
    _emit(cfg, rep, started, f"bounds k={args.k}: k! = {rep['factorial_lower']['value']}")
    return EXIT_OK


def cmd_reproduce(args, cfg, started) -> int:
    from .reproduce import RECIPES, reproduce

    if args.claim not in RECIPES:
        raise InputError(f"unknown claim {args.claim!r}; choose from {', '.join(RECIPES)}")
    res = reproduce(args.claim)
    verdict = "PASS" if res["passed"] else "FAIL"
    res["verdict"] = verdict
    _emit(cfg, res, started, f"{args.claim}: {verdict}")
    return EXIT_OK if res["passed"] else EXIT_FAILS


def cmd_verify(args, cfg, started) -> int:
    from .decide import naive_witness

    h = load_hypergraph(args.hypergraph)
    try:
        with open(args.certificate) as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise InputError(f"certificate is not JSON: {exc}") from None
    cert = WitnessCertificate.from_json(data)
    if cert.status is Status.FAILS_O:
        ok = verify_witness(h, cert.witness_order)
        how = "witness re-checked with the consistency predicate"
    elif cert.status is Status.HAS_O:
        if h.n > 10:
            _emit(cfg, {"valid": None, "reason": "HAS_O on n > 10 cannot be re-checked"}, started, "unverifiable")
            return EXIT_INDETERMINATE
        ok = naive_witness(h).status is Status.HAS_O
        how = "all orders enumerated independently"
    else:
        raise InputError("INDETERMINATE certificates carry nothing to verify")
    _emit(cfg, {"valid": ok, "status": cert.status.value, "method": how}, started, "certificate " + ("valid" if ok else "REJECTED"))
    return EXIT_OK if ok else EXIT_FAILS


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="propo", description="Property O toolkit for oriented k-uniform hypergraphs")
    p.add_argument("--version", action="version", version=f"propo {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("check", help="decide Property O for a hypergraph file")
    s.add_argument("file")
    s.add_argument("--method", choices=("dfs", "naive"), default="dfs")
    s.add_argument("--max-seconds", type=float)
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("construct", help="write the recursive construction G_k")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--out", required=True)
    s.add_argument("--layout")
    s.add_argument("--stream", action="store_true", help="stream edges (required above k=5)")
    s.set_defaults(func=cmd_construct)

    s = sub.add_parser("census", help="count k-tournaments on n vertices with Property O")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--jobs", type=int)
    s.add_argument("--canonical", action="store_true")
    s.add_argument("--partition")
    s.add_argument("--checkpoint")
    s.set_defaults(func=cmd_census)

    s = sub.add_parser("minedges", help="least edge count with Property O on n vertices")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--max-edges", type=int, required=True)
    s.add_argument("--budget-seconds", type=float)
    s.add_argument("--checkpoint")
    s.add_argument("--resume")
    s.set_defaults(func=cmd_minedges)

    s = sub.add_parser("tight", help="search Property O families with exactly k! edges")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--k", type=int, required=True)
    s.set_defaults(func=cmd_tight)

    s = sub.add_parser("sample", help="Monte Carlo over uniform random tournaments")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--trials", type=int, required=True)
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("--thm2", action="store_true")
    s.add_argument("--exact", action="store_true")
    s.add_argument("--jobs", type=int)
    s.set_defaults(func=cmd_sample)

    s = sub.add_parser("bounds", help="evaluate the closed-form bounds")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--alpha", type=float)
    s.add_argument("--n", type=int)
    s.add_argument("--precision", type=int, default=50)
    s.set_defaults(func=cmd_bounds)

    s = sub.add_parser("reproduce", help="re-run a bundled claim")
    s.add_argument("claim")
    s.set_defaults(func=cmd_reproduce)

    s = sub.add_parser("verify-certificate", help="re-check a certificate against its hypergraph")
    s.add_argument("certificate")
    s.add_argument("hypergraph")
    s.set_defaults(func=cmd_verify)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    cfg = RunConfig.from_args(args)
    started = time.perf_counter()
    try:
        return args.func(args, cfg, started)
    except (InputError, OSError) as exc:
        print(f"propo: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    raise SystemExit(main())
