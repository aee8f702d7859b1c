"""Command-line surface: generate, decompose, verify, experiment, probe.

Exit codes: 0 success, 1 semantic failure (invalid decomposition), 2 bad
usage or unreadable input.  All randomized behavior is keyed by --seed, with
the CYCLESHRED_SEED environment variable as the fallback default.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
import time
from dataclasses import dataclass, field
from multiprocessing import Pool

from .gen import derive_seed, gnp
from .graph import Decomposition, Graph, odd_vertices, read_edge_list, write_edge_list
from .pipeline import PipelineConfig, decompose
from .verify import ProbeStats, lower_bound, probe_properties, verify_decomposition

SEED_ENV = "CYCLESHRED_SEED"

EXPERIMENT_CSV_FIELDS = (
    "n",
    "p",
    "trial",
    "seed",
    "odd",
    "m",
    "lower_bound",
    "pieces",
    "ratio",
    "cycles_long",
    "cycles_peel",
    "cycles_hamilton",
    "cycles_closure",
    "edges_repair",
    "edges_leftover",
    "time_s",
    "error",
)


@dataclass
class ExperimentSpec:
    cells: list  # of (n, p, trials)
    seed: int = 0
    jobs: int = 1
    config: dict = field(default_factory=dict)

    def __post_init__(self):
        for n, p, trials in self.cells:
            if n < 1 or not 0.0 <= p <= 1.0 or trials < 0:
                raise ValueError(f"invalid experiment cell ({n}, {p}, {trials})")


def _default_seed(value) -> int:
    if value is not None:
        return int(value)
    return int(os.environ.get(SEED_ENV, "0"))


def _load_config(path, seed: int) -> PipelineConfig:
    overrides = {}
    if path:
        with open(path, "r", encoding="utf-8") as fh:
            overrides = json.load(fh)
    overrides.setdefault("seed", seed)
    return PipelineConfig.from_dict({**PipelineConfig().to_dict(), **overrides})


def cmd_generate(args) -> int:
    seed = _default_seed(args.seed)
    g = gnp(args.n, args.p, seed)
    write_edge_list(g, args.out)
    print(f"wrote {args.out}: n={g.n} m={g.m} odd={len(odd_vertices(g))}")
    return 0


def cmd_decompose(args) -> int:
    seed = _default_seed(args.seed)
    try:
        g = read_edge_list(args.infile)
    except (OSError, ValueError) as exc:
        print(f"error: cannot read graph: {exc}", file=sys.stderr)
        return 2
    cfg = _load_config(args.config, seed)
    decomp, report = decompose(g, p_hint=args.p_hint, cfg=cfg)
    with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(decomp.to_json_dict(), fh, sort_keys=True, separators=(",", ":"))
        fh.write("\n")
    if args.report:
        with open(args.report, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(report.to_json())
            fh.write("\n")
    check = verify_decomposition(g, decomp)
    print(
        f"regime={report.regime} pieces={decomp.piece_count} "
        f"lower_bound={report.lower_bound} valid={check.valid}"
    )
    return 0 if check.valid else 1


def cmd_verify(args) -> int:
    try:
        g = read_edge_list(args.graph)
        with open(args.decomposition, "r", encoding="utf-8") as fh:
            decomp = Decomposition.from_json_dict(json.load(fh))
    except (OSError, ValueError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    report = verify_decomposition(g, decomp)
    text = json.dumps(report.to_json_dict(), sort_keys=True, indent=2)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text + "\n")
    print(text)
    return 0 if report.valid else 1


def _run_trial(task) -> dict:
    n, p, trial, seed, config = task
    row = {k: "" for k in EXPERIMENT_CSV_FIELDS}
    row.update(n=n, p=p, trial=trial, seed=seed)
    try:
        g = gnp(n, p, seed)
        cfg = PipelineConfig.from_dict({**PipelineConfig().to_dict(), **config, "seed": seed})
        t0 = time.perf_counter()
        decomp, report = decompose(g, cfg=cfg)
        elapsed = time.perf_counter() - t0
        check = verify_decomposition(g, decomp)
        if not check.valid:
            row["error"] = "verification failed"
            return row
        stages = decomp.stage_counts()
        lb = report.lower_bound
        row.update(
            odd=report.odd_count,
            m=g.m,
            lower_bound=lb,
            pieces=decomp.piece_count,
            ratio=f"{decomp.piece_count / lb:.6f}" if lb else "",
            cycles_long=stages["long-cycle"],
            cycles_peel=stages["peel"],
            cycles_hamilton=stages["hamilton"],
            cycles_closure=stages["matching-closure"],
            edges_repair=stages["euler-repair"],
            edges_leftover=stages["leftover-edge"],
            time_s=f"{elapsed:.3f}",
        )
    except Exception as exc:  # a broken trial is a row, not a crash
        row["error"] = f"{type(exc).__name__}: {exc}"
    return row


def run_experiment(spec: ExperimentSpec, out_csv, out_json=None) -> list[dict]:
    tasks = []
    for n, p, trials in spec.cells:
        for t in range(trials):
            tasks.append((n, p, t, derive_seed(spec.seed, n, int(p * 10**9), t), spec.config))
    if spec.jobs > 1 and len(tasks) > 1:
        with Pool(spec.jobs) as pool:
            rows = pool.map(_run_trial, tasks)
    else:
        rows = [_run_trial(t) for t in tasks]

    with open(out_csv, "w", encoding="utf-8", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=EXPERIMENT_CSV_FIELDS, lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow(row)

    if out_json:
        summary = {}
        for n, p, _trials in spec.cells:
            ratios = [
                float(r["ratio"])
                for r in rows
                if r["n"] == n and r["p"] == p and r["ratio"] != ""
            ]
            key = f"n={n},p={p}"
            summary[key] = {
                "trials": sum(1 for r in rows if r["n"] == n and r["p"] == p),
                "failures": sum(
                    1 for r in rows if r["n"] == n and r["p"] == p and r["error"] != ""
                ),
                "mean_ratio": sum(ratios) / len(ratios) if ratios else None,
            }
        with open(out_json, "w", encoding="utf-8", newline="\n") as fh:
            json.dump(summary, fh, sort_keys=True, indent=2)
            fh.write("\n")
    return rows


def cmd_experiment(args) -> int:
    seed = _default_seed(args.seed)
    config = {}
    if args.config:
        with open(args.config, "r", encoding="utf-8") as fh:
            config = json.load(fh)
    if args.spec:
        with open(args.spec, "r", encoding="utf-8") as fh:
            data = json.load(fh)
        cells = [(int(c["n"]), float(c["p"]), int(c["trials"])) for c in data]
    else:
        if args.n is None or args.p is None:
            print("error: provide --spec or both --n and --p", file=sys.stderr)
            return 2
        cells = [(args.n, args.p, args.trials)]
    spec = ExperimentSpec(cells=cells, seed=seed, jobs=args.jobs, config=config)
    rows = run_experiment(spec, args.out_csv, args.out_json)
    failures = sum(1 for r in rows if r["error"])
    print(f"ran {len(rows)} trials, {failures} failures, csv={args.out_csv}")
    return 0


def cmd_probe(args) -> int:
    seed = _default_seed(args.seed)
    stats = probe_properties(args.n, args.p, args.trials, seed, detail=args.detail)
    if args.out_csv:
        with open(args.out_csv, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(stats.to_csv())
    if args.out_json:
        with open(args.out_json, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(stats.to_json() + "\n")
    summary = stats.summary()
    print(json.dumps(summary, sort_keys=True))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cycleshred",
        description="split graphs into edge-disjoint simple cycles and single edges",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_gen = sub.add_parser("generate", help="sample a seeded G(n,p) edge list")
    p_gen.add_argument("--n", type=int, required=True)
    p_gen.add_argument("--p", type=float, required=True)
    p_gen.add_argument("--seed", type=int, default=None)
    p_gen.add_argument("--out", required=True)
    p_gen.set_defaults(func=cmd_generate)

    p_dec = sub.add_parser("decompose", help="decompose an edge-list file")
    p_dec.add_argument("--in", dest="infile", required=True)
    p_dec.add_argument("--out", required=True, help="decomposition JSON path")
    p_dec.add_argument("--report", default=None, help="run report JSON path")
    p_dec.add_argument("--config", default=None, help="JSON config overrides")
    p_dec.add_argument("--p-hint", type=float, default=None)
    p_dec.add_argument("--seed", type=int, default=None)
    p_dec.set_defaults(func=cmd_decompose)

    p_ver = sub.add_parser("verify", help="check a decomposition against a graph")
    p_ver.add_argument("--graph", required=True)
    p_ver.add_argument("--decomposition", required=True)
    p_ver.add_argument("--out", default=None)
    p_ver.set_defaults(func=cmd_verify)

    p_exp = sub.add_parser("experiment", help="run decomposition trials, emit CSV")
    p_exp.add_argument("--spec", default=None, help="JSON list of {n,p,trials} cells")
    p_exp.add_argument("--n", type=int, default=None)
    p_exp.add_argument("--p", type=float, default=None)
    p_exp.add_argument("--trials", type=int, default=1)
    p_exp.add_argument("--jobs", type=int, default=1)
    p_exp.add_argument("--seed", type=int, default=None)
    p_exp.add_argument("--config", default=None)
    p_exp.add_argument("--out-csv", required=True)
    p_exp.add_argument("--out-json", default=None)
    p_exp.set_defaults(func=cmd_experiment)

    p_prb = sub.add_parser("probe", help="Monte-Carlo structure probes of G(n,p)")
    p_prb.add_argument("--n", type=int, required=True)
    p_prb.add_argument("--p", type=float, required=True)
    p_prb.add_argument("--trials", type=int, default=10)
    p_prb.add_argument("--seed", type=int, default=None)
    p_prb.add_argument("--detail", action="store_true")
    p_prb.add_argument("--out-csv", default=None)
    p_prb.add_argument("--out-json", default=None)
    p_prb.set_defaults(func=cmd_probe)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
