"""Command-line entry point.

Subcommands: generate, simulate, estimate, oracle, bench, replay.
JSON results go to stdout, diagnostics to stderr.  Exit codes: 0 success,
2 usage error, 3 bad input topology, 4 resource cap exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import bench as bench_mod
from .centrality import (
    bfs_rumor_centrality,
    distance_centrality,
    epidemic_centrality,
    jordan_centrality,
)
from .estimators import algo1_kappa, sct
from .exact import ENUMERATION_CAP, OracleCapError, oracle_profile
from .generators import generate, parse_generator_spec
from .graph import Graph, GraphError, format_edge_list, parse_edge_list
from .spread import InfectionSnapshot, simulate

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_TOPOLOGY = 3
EXIT_CAP = 4

ESTIMATOR_CHOICES = ("sct", "algo1", "bfs-rc", "distance", "jordan", "epidemic", "all")


def _read_graph(path: str) -> Graph:
    with open(path, encoding="utf-8") as fh:
        return parse_edge_list(fh.read())


def _resolve_seed(args) -> int:
    if args.seed is not None:
        return args.seed
    import secrets

    seed = secrets.randbits(48)
    print(f"generated seed: {seed}", file=sys.stderr)
    return seed


def _emit(obj, fmt: str = "json"):
    if fmt == "json":
        print(json.dumps(obj, sort_keys=True))
    else:
        raise GraphError(f"unsupported format {fmt!r} here")


def cmd_generate(args) -> int:
    try:
        spec = parse_generator_spec(args.spec)
    except GraphError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    seed = _resolve_seed(args)
    g = generate(spec, seed=seed)
    text = format_edge_list(g)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
        print(f"wrote {g.n} vertices / {g.m} edges to {args.out}", file=sys.stderr)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_simulate(args) -> int:
    if (args.graph is None) == (args.gen is None):
        print("error: give exactly one of --graph / --gen", file=sys.stderr)
        return EXIT_USAGE
    seed = _resolve_seed(args)
    if args.gen:
        try:
            g = generate(parse_generator_spec(args.gen), seed=seed)
        except GraphError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_USAGE
    else:
        g = _read_graph(args.graph)
    if args.source is not None:
        source = g.index_of(args.source)
    else:
        from .generators import rng_from

        source = int(rng_from(seed, 9).integers(g.n))
    snap = simulate(g, source, args.n, cap_k=args.cap_k, seed=seed)
    print(snap.to_json())
    if snap.exhausted:
        print("warning: component exhausted before reaching n", file=sys.stderr)
    return EXIT_OK


def _estimate_one(g: Graph, name: str, labels):
    if name == "sct":
        return sct(g).to_jsonable(labels)
    if name == "algo1":
        irregular = {v for v in range(g.n) if g.degree(v) == 1}
        return algo1_kappa(g, irregular).to_jsonable(labels)
    if name == "bfs-rc":
        sc = bfs_rumor_centrality(g)
        return {"estimator": "bfs-rc", "candidates": [labels[v] for v in sc.argbest],
                "scores": {labels[v]: str(sc.scores[v]) for v in sc.argbest}}
    if name in ("distance", "jordan", "epidemic"):
        sc = {"distance": distance_centrality, "jordan": jordan_centrality,
              "epidemic": epidemic_centrality}[name](g)
        return {"estimator": name, "candidates": [labels[v] for v in sc.argbest],
                "scores": {labels[v]: str(sc.scores[v]) for v in sc.argbest}}
    raise GraphError(f"unknown estimator {name!r}")


def cmd_estimate(args) -> int:
    g = _read_graph(args.graph)
    if args.snapshot:
        with open(args.snapshot, encoding="utf-8") as fh:
            snap = InfectionSnapshot.from_json(fh.read(), g)
        g, _ = snap.infected_subgraph()
    comps = g.components()
    labels = [g.label_of(v) for v in range(g.n)]
    if len(comps) > 1 and not args.per_component:
        print(
            f"error: input has {len(comps)} components "
            f"(sizes {[len(c) for c in comps]}); pass --per-component to proceed",
            file=sys.stderr,
        )
        return EXIT_TOPOLOGY
    names = list(ESTIMATOR_CHOICES[:-1]) if args.est == "all" else [args.est]
    targets = [g] if len(comps) == 1 else [g.induced(c)[0] for c in comps]
    for name in names:
        for sub in targets:
            sub_labels = [sub.label_of(v) for v in range(sub.n)]
            try:
                obj = _estimate_one(sub, name, sub_labels)
            except GraphError as exc:
                obj = {"estimator": name, "skipped": str(exc)}
            print(json.dumps(obj, sort_keys=True))
    return EXIT_OK


def cmd_oracle(args) -> int:
    g = _read_graph(args.graph)
    infected = (
        list(range(g.n))
        if args.infected is None
        else [g.index_of(x) for x in args.infected.split(",")]
    )
    marker = g.index_of(args.marker) if args.marker else None
    try:
        profile = oracle_profile(g, infected, marker=marker, cap=args.max_n)
    except OracleCapError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    labels = [g.label_of(v) for v in range(g.n)]
    ranked = sorted(profile.probs.items(), key=lambda kv: (-kv[1], kv[0]))
    if args.format == "csv":
        print("vertex,decimal,numerator,denominator")
        for v, p in ranked:
            print(f"{labels[v]},{float(p):.17g},{p.numerator},{p.denominator}")
    else:
        obj = profile.to_jsonable(labels)
        obj["ranking"] = [labels[v] for v, _ in ranked]
        print(json.dumps(obj, sort_keys=True))
    return EXIT_OK


def cmd_bench(args) -> int:
    overrides = {
        "generator": args.gen,
        "n": args.n,
        "trials": args.trials,
        "estimators": args.estimators,
        "seed": args.seed,
        "cap_k": args.cap_k,
        "threads": args.threads,
        "timing": args.timing or None,
    }
    if args.config:
        with open(args.config, encoding="utf-8") as fh:
            cfg = bench_mod.ExperimentConfig.from_text(fh.read(), **overrides)
    else:
        missing = [k for k in ("generator", "n", "trials") if overrides.get(k) is None]
        if missing:
            print(f"error: missing required bench options: {missing}", file=sys.stderr)
            return EXIT_USAGE
        cfg = bench_mod.ExperimentConfig(
            generator=args.gen,
            n_infected=args.n,
            trials=args.trials,
            estimators=tuple((args.estimators or "sct").split(",")),
            seed=args.seed if args.seed is not None else _resolve_seed(args),
            cap_k=args.cap_k or 0,
            threads=args.threads or 1,
            timing=args.timing,
        )
    records = bench_mod.run_experiment(cfg, progress=args.progress)
    csv_text = bench_mod.records_to_csv(records)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(csv_text)
        print(f"wrote {len(records)} trials to {args.out}", file=sys.stderr)
    else:
        sys.stdout.write(csv_text)
    summary = {"config": vars(cfg) | {"estimators": list(cfg.estimators)},
               "estimators": bench_mod.summarize(records)}
    text = json.dumps(summary, sort_keys=True, indent=2)
    if args.summary:
        with open(args.summary, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return EXIT_OK


def cmd_replay(args) -> int:
    g = _read_graph(args.graph)
    names = list(ESTIMATOR_CHOICES[:-1]) if args.est == "all" else args.est.split(",")
    out = bench_mod.replay(g, args.source, names)
    print(json.dumps(out, sort_keys=True))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="episource",
        description="Epidemic source detection: generation, simulation, "
        "estimation, exact likelihood tables, benchmarks.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="write a synthetic graph as an edge list")
    g.add_argument("spec", help="generator spec, e.g. grid:100x100 or circulant:6:set=1")
    g.add_argument("--seed", type=int)
    g.add_argument("--out")
    g.set_defaults(fn=cmd_generate)

    s = sub.add_parser("simulate", help="simulate SI spreading to a snapshot JSON")
    s.add_argument("--graph")
    s.add_argument("--gen")
    s.add_argument("--source")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--cap-k", type=int, default=0)
    s.add_argument("--seed", type=int)
    s.set_defaults(fn=cmd_simulate)

    e = sub.add_parser("estimate", help="run estimators on an observed graph")
    e.add_argument("--graph", required=True)
    e.add_argument("--snapshot", help="snapshot JSON to replay on --graph")
    e.add_argument("--est", choices=ESTIMATOR_CHOICES, default="sct")
    e.add_argument("--per-component", action="store_true")
    e.set_defaults(fn=cmd_estimate)

    o = sub.add_parser("oracle", help="exact likelihood table by enumeration")
    o.add_argument("--graph", required=True)
    o.add_argument("--infected", help="comma-separated labels (default: all)")
    o.add_argument("--marker", help="vertex whose position indexes the decomposition")
    o.add_argument("--max-n", type=int, default=ENUMERATION_CAP)
    o.add_argument("--format", choices=("json", "csv"), default="json")
    o.set_defaults(fn=cmd_oracle)

    b = sub.add_parser("bench", help="seeded Monte-Carlo estimator comparison")
    b.add_argument("--config", help="key=value config file")
    b.add_argument("--gen")
    b.add_argument("--n", type=int)
    b.add_argument("--trials", type=int)
    b.add_argument("--estimators", help="comma-separated, e.g. sct,bfs-rc")
    b.add_argument("--seed", type=int)
    b.add_argument("--cap-k", type=int)
    b.add_argument("--threads", type=int)
    b.add_argument("--timing", action="store_true",
                   help="record per-estimator wall time (breaks byte determinism)")
    b.add_argument("--progress", type=int, help="print progress every N trials")
    b.add_argument("--out", help="CSV output path (default stdout)")
    b.add_argument("--summary", help="JSON summary path (default stdout)")
    b.set_defaults(fn=cmd_bench)

    r = sub.add_parser("replay", help="estimators + hop error on one real graph")
    r.add_argument("--graph", required=True)
    r.add_argument("--source", required=True, help="true-source label")
    r.add_argument("--est", default="sct")
    r.set_defaults(fn=cmd_replay)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except OracleCapError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except GraphError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_TOPOLOGY
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
