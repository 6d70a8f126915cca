"""Monte-Carlo benchmark runner: seeded trials of spread + estimation with
persisted, reproducible results.

Each trial derives its own Philox streams from (root seed, trial index), so
a config replays byte-identically regardless of worker count.  Randomized
generator kinds are regenerated per trial; deterministic kinds are built
once and shared.
"""

from __future__ import annotations

import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, asdict

import numpy as np

from .centrality import (
    bfs_rc_rank_keys,
    distance_centrality,
    epidemic_centrality,
    jordan_centrality,
)
from .estimators import EstimatorResult, algo1_kappa, hop_error, sct, topk_wrapper
from .generators import GeneratorSpec, generate, parse_generator_spec, rng_from
from .graph import Graph, GraphError, bfs_levels
from .spread import simulate

KNOWN_ESTIMATORS = ("sct", "bfs-rc", "algo1", "distance", "jordan", "epidemic")


@dataclass(frozen=True)
class ExperimentConfig:
    generator: str
    n_infected: int
    trials: int
    estimators: tuple[str, ...]
    seed: int
    cap_k: int = 0
    threads: int = 1
    timing: bool = False

    def __post_init__(self):
        if self.trials < 1:
            raise GraphError("need at least one trial")
        if not self.estimators:
            raise GraphError("estimator list is empty")
        for e in self.estimators:
            if e not in KNOWN_ESTIMATORS:
                raise GraphError(f"unknown estimator {e!r} (known: {KNOWN_ESTIMATORS})")
        parse_generator_spec(self.generator)  # validate early

    @classmethod
    def from_text(cls, text: str, **overrides) -> "ExperimentConfig":
        """Parse a key=value config file (estimators comma-separated)."""
        kv = {}
        for raw in text.splitlines():
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            k, v = line.split("=", 1)
            kv[k.strip()] = v.strip()
        kv.update({k: v for k, v in overrides.items() if v is not None})
        return cls(
            generator=kv["generator"],
            n_infected=int(kv.get("n", kv.get("n_infected", 0))),
            trials=int(kv.get("trials", 1)),
            estimators=tuple(str(kv.get("estimators", "sct")).split(",")),
            seed=int(kv.get("seed", 0)),
            cap_k=int(kv.get("cap_k", 0)),
            threads=int(kv.get("threads", 1)),
            timing=bool(int(kv.get("timing", 0))) if not isinstance(kv.get("timing"), bool)
            else kv["timing"],
        )


@dataclass(frozen=True)
class EstimatorOutcome:
    candidates: tuple[str, ...]
    error: int | None           # None = skipped (estimator inapplicable)
    micros: int | None = None


@dataclass(frozen=True)
class TrialRecord:
    index: int
    seed: int
    source: str
    outcomes: dict[str, EstimatorOutcome] = field(default_factory=dict)


def _trial_seed(root: int, trial: int) -> int:
    return int(np.random.SeedSequence((root, trial)).generate_state(1)[0])


_GRAPH_CACHE: dict[str, Graph] = {}


def _graph_for_trial(cfg: ExperimentConfig, spec: GeneratorSpec, trial: int) -> Graph:
    if spec.is_random:
        return generate(spec, seed=_trial_seed(cfg.seed, trial))
    key = cfg.generator
    g = _GRAPH_CACHE.get(key)
    if g is None:
        g = generate(spec, seed=cfg.seed)
        _GRAPH_CACHE[key] = g
    return g


def _rank_group(keys: list[tuple]) -> tuple[int, ...]:
    best = keys[0][0]
    return tuple(v for k, v in keys if k == best)


def run_trial(cfg: ExperimentConfig, trial: int) -> TrialRecord:
    spec = parse_generator_spec(cfg.generator)
    g = _graph_for_trial(cfg, spec, trial)
    src_rng = rng_from(cfg.seed, trial, 1)
    source = int(src_rng.integers(g.n))
    snap = simulate(g, source, cfg.n_infected, cap_k=cfg.cap_k, seed=(cfg.seed, trial, 2))
    gn, old = snap.infected_subgraph()
    local = {v: i for i, v in enumerate(old)}
    src_local = local[source]
    levels = None  # lazy BFS from the true source inside the snapshot

    def err_of(candidates) -> int:
        nonlocal levels
        if src_local in candidates:
            return 0
        if levels is None:
            levels = bfs_levels(gn, src_local)
        return min(levels[c] for c in candidates)

    outcomes: dict[str, EstimatorOutcome] = {}
    results: dict[str, tuple[int, ...] | None] = {}
    timings: dict[str, int] = {}

    def timed(name, fn):
        t0 = time.perf_counter()
        try:
            out = fn()
        except GraphError:
            out = None
        timings[name] = int((time.perf_counter() - t0) * 1e6)
        results[name] = out

    kappa_size = None
    if "algo1" in cfg.estimators:
        irregular = {local[v] for v in old if g.degree(v) == 1}

        def run_algo1():
            res = algo1_kappa(gn, irregular)
            return res.candidates

        timed("algo1", run_algo1)
        if results["algo1"] is not None:
            kappa_size = len(results["algo1"])

    for name in cfg.estimators:
        if name == "algo1":
            continue
        if name == "sct":
            def fn():
                res = sct(gn)
                if kappa_size is None:
                    return res.candidates
                ranked = sorted((res.scores[v], v) for v in res.scores)
                return tuple(sorted(v for _, v in ranked[:kappa_size]))
        elif name == "bfs-rc":
            def fn():
                keys = bfs_rc_rank_keys(gn)
                if kappa_size is None:
                    return tuple(sorted(_rank_group(keys)))
                return tuple(sorted(v for _, v in keys[:kappa_size]))
        elif name == "distance":
            def fn():
                sc = distance_centrality(gn)
                if kappa_size is None:
                    return sc.argbest
                return tuple(sorted(topk_wrapper(sc, kappa_size).candidates))
        elif name == "jordan":
            def fn():
                sc = jordan_centrality(gn)
                if kappa_size is None:
                    return sc.argbest
                return tuple(sorted(topk_wrapper(sc, kappa_size).candidates))
        elif name == "epidemic":
            def fn():
                sc = epidemic_centrality(gn)
                if kappa_size is None:
                    return sc.argbest
                return tuple(sorted(topk_wrapper(sc, kappa_size).candidates))
        timed(name, fn)

    for name in cfg.estimators:
        cand = results.get(name)
        if cand is None:
            outcomes[name] = EstimatorOutcome((), None,
                                              timings.get(name) if cfg.timing else None)
        else:
            outcomes[name] = EstimatorOutcome(
                tuple(gn.label_of(c) for c in cand),
                err_of(cand),
                timings.get(name) if cfg.timing else None,
            )
    return TrialRecord(trial, _trial_seed(cfg.seed, trial), g.label_of(source), outcomes)


def _worker(args):
    cfg_dict, trial = args
    cfg = ExperimentConfig(**cfg_dict)
    return run_trial(cfg, trial)


def run_experiment(cfg: ExperimentConfig, progress=None) -> list[TrialRecord]:
    """All trial records, in trial order (independent of worker count)."""
    if cfg.threads > 1:
        items = [(asdict(cfg), t) for t in range(cfg.trials)]
        with ProcessPoolExecutor(max_workers=cfg.threads) as pool:
            records = list(pool.map(_worker, items, chunksize=16))
    else:
        records = []
        for t in range(cfg.trials):
            records.append(run_trial(cfg, t))
            if progress and (t + 1) % progress == 0:
                print(f"  trial {t + 1}/{cfg.trials}", flush=True)
    records.sort(key=lambda r: r.index)
    return records


def summarize(records: list[TrialRecord]) -> dict:
    """Per-estimator mean hop error, mean candidate-set size, zero-error
    fraction, and an error histogram over the completed trials."""
    if not records:
        raise GraphError("no trial records to summarize")
    names: list[str] = []
    for r in records:
        for name in r.outcomes:
            if name not in names:
                names.append(name)
    out = {}
    for name in names:
        errs = []
        sizes = []
        skipped = 0
        for r in records:
            o = r.outcomes.get(name)
            if o is None or o.error is None:
                skipped += 1
                continue
            errs.append(o.error)
            sizes.append(len(o.candidates))
        hist: dict[str, int] = {}
        for e in errs:
            hist[str(e)] = hist.get(str(e), 0) + 1
        out[name] = {
            "trials": len(errs),
            "skipped": skipped,
            "mean_error": sum(errs) / len(errs) if errs else None,
            "mean_candidates": sum(sizes) / len(sizes) if sizes else None,
            "zero_error_rate": (sum(1 for e in errs if e == 0) / len(errs)) if errs else None,
            "histogram": dict(sorted(hist.items(), key=lambda kv: int(kv[0]))),
        }
    return out


def records_to_csv(records: list[TrialRecord]) -> str:
    lines = ["trial,seed,source,estimator,k,error,micros"]
    for r in records:
        for name, o in r.outcomes.items():
            if o.error is None:
                lines.append(f"{r.index},{r.seed},{r.source},{name},,,")
            else:
                micros = "" if o.micros is None else str(o.micros)
                lines.append(
                    f"{r.index},{r.seed},{r.source},{name},{len(o.candidates)},{o.error},{micros}"
                )
    return "\n".join(lines) + "\n"


def per_trial_errors(records: list[TrialRecord], name: str) -> list[int | None]:
    return [r.outcomes[name].error if name in r.outcomes else None for r in records]


# ---------------------------------------------------------------------------
# single-graph replay (the real-data workflow)


def replay(g: Graph, source_label: str, estimators=("sct",)) -> dict:
    """Run estimators on one observed graph with a designated true source;
    reports candidates and hop error per estimator."""
    source = g.index_of(source_label)
    out = {"source": source_label, "estimators": {}}
    levels = bfs_levels(g, source)
    for name in estimators:
        try:
            if name == "sct":
                res = sct(g)
            elif name == "bfs-rc":
                keys = bfs_rc_rank_keys(g)
                res = EstimatorResult("bfs-rc", tuple(sorted(_rank_group(keys))))
            elif name == "algo1":
                irregular = {v for v in range(g.n) if g.degree(v) == 1}
                res = algo1_kappa(g, irregular)
            elif name == "distance":
                res = topk_wrapper(distance_centrality(g), 1)
            elif name == "jordan":
                res = topk_wrapper(jordan_centrality(g), 1)
            elif name == "epidemic":
                sc = epidemic_centrality(g)
                res = EstimatorResult("epidemic", sc.argbest)
            else:
                raise GraphError(f"unknown estimator {name!r}")
        except GraphError as exc:
            out["estimators"][name] = {"skipped": str(exc)}
            continue
        reachable = [v for v in res.candidates if levels[v] >= 0]
        err = 0 if source in res.candidates else (
            min(levels[v] for v in reachable) if reachable else None
        )
        out["estimators"][name] = {
            "candidates": [g.label_of(v) for v in res.candidates],
            "hop_error": err,
        }
    return out
