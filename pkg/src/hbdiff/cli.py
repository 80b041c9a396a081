"""Command-line interface.

Exit codes: 0 success, 2 usage error, 3 I/O error, 4 domain error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from typing import List, Optional

from . import diffusion, evaluate, formats, genrand, rwalk
from .errors import HbGraphError

EXIT_USAGE = 2
EXIT_IO = 3
EXIT_DOMAIN = 4


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def _beta(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if not 0.0 < value <= 1.0:
        raise argparse.ArgumentTypeError(f"beta must lie in (0, 1], got {value}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hbdiff",
        description="Exchange-based diffusion on hb-graphs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="generate a random hb-graph")
    p.add_argument("--config", help="JSON generator config (defaults to the full-scale setting)")
    p.add_argument("--seed", type=int, help="overrides the config seed")
    p.add_argument("--out", required=True, help="graph document to write")

    p = sub.add_parser("diffuse", help="run the exchange-based diffusion")
    p.add_argument("--graph", required=True)
    p.add_argument("--steps", type=_positive_int, default=diffusion.DEFAULT_STEPS)
    p.add_argument("--trace", required=True, help="trace CSV to write")

    p = sub.add_parser("walk", help="random walks until full exploration")
    p.add_argument("--graph", required=True)
    p.add_argument("--beta", type=_beta, default=rwalk.DEFAULT_BETA)
    p.add_argument("--walks", type=_positive_int, default=rwalk.DEFAULT_WALKS)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="walk CSV to write")

    p = sub.add_parser("eval", help="eccentricity sweeps and score tables")
    p.add_argument("--graph", required=True)
    p.add_argument("--trace", required=True)
    p.add_argument("--sweep-steps", type=_positive_int, default=evaluate.DEFAULT_SWEEP_STEPS)
    p.add_argument("--walk", help="walk CSV to merge into the vertex table")
    p.add_argument("--out", required=True, help="sweep CSV to write")
    p.add_argument("--vertices", help="vertex score CSV to write")
    p.add_argument("--hbedges", help="hb-edge score CSV to write")

    p = sub.add_parser("export", help="Graphviz DOT of the extra-vertex graph")
    p.add_argument("--graph", required=True)
    p.add_argument("--trace", required=True)
    p.add_argument("--dot", required=True)

    p = sub.add_parser("pipeline", help="generate, diffuse, walk, eval and export in one go")
    p.add_argument("--config")
    p.add_argument("--seed", type=int)
    p.add_argument("--walk-seed", type=int, help="defaults to the generator seed")
    p.add_argument("--steps", type=_positive_int, default=diffusion.DEFAULT_STEPS)
    p.add_argument("--beta", type=_beta, default=rwalk.DEFAULT_BETA)
    p.add_argument("--walks", type=_positive_int, default=rwalk.DEFAULT_WALKS)
    p.add_argument("--sweep-steps", type=_positive_int, default=evaluate.DEFAULT_SWEEP_STEPS)
    p.add_argument("--out-dir", required=True)
    return parser


def _read(path) -> str:
    with open(path) as fh:
        return fh.read()


def _load_config(path: Optional[str], seed: Optional[int]) -> genrand.GeneratorConfig:
    cfg = genrand.load_config(path) if path else genrand.GeneratorConfig()
    return cfg.with_seed(seed) if seed is not None else cfg


def _provenance(cfg: genrand.GeneratorConfig) -> dict:
    return {"generator": cfg.to_dict(), "seed": cfg.seed}


def cmd_generate(args) -> None:
    cfg = _load_config(args.config, args.seed)
    g, labels = genrand.generate_labeled(cfg)
    formats.write_text(args.out, formats.serialize_graph(g, labels, _provenance(cfg)))
    print(f"generated n={g.n} p={g.p} seed={cfg.seed} -> {args.out}")


def cmd_diffuse(args) -> None:
    g = formats.read_graph(args.graph).graph
    t0 = time.perf_counter()
    trace = diffusion.run(g, args.steps)
    elapsed = time.perf_counter() - t0
    formats.write_text(args.trace, formats.trace_csv(trace))
    print(f"diffused {args.steps} steps on n={g.n} p={g.p} in {elapsed * 1e3:.3f} ms -> {args.trace}")


def cmd_walk(args) -> None:
    g = formats.read_graph(args.graph).graph
    cfg = rwalk.WalkConfig(beta=args.beta, n_walks=args.walks, seed=args.seed)
    t0 = time.perf_counter()
    res = rwalk.run_n_walks(g, cfg)
    elapsed = time.perf_counter() - t0
    formats.write_text(args.out, formats.walk_csv(g, res.counts.vertex_passages, res.counts.hbedge_passages))
    print(
        f"{args.walks} walks (beta={args.beta}, seed={args.seed}) took {elapsed:.3f} s, "
        f"{res.counts.total_steps} steps -> {args.out}"
    )


def _evaluate(g, trace, sweep_steps):
    report = evaluate.score_report(g, trace.alpha_final, trace.epsilon_final)
    sweeps = [
        evaluate.sweep_vertices(g, trace.alpha_final, sweep_steps),
        evaluate.sweep_hbedges(g, trace.epsilon_final, sweep_steps),
    ]
    return report, sweeps


def cmd_eval(args) -> None:
    g = formats.read_graph(args.graph).graph
    trace = formats.parse_trace_csv(_read(args.trace), g)
    report, sweeps = _evaluate(g, trace, args.sweep_steps)
    walk_counts = None
    if args.walk:
        walk_counts = formats.parse_walk_csv(_read(args.walk), g)[0]
    formats.write_text(args.out, formats.sweep_csv(sweeps))
    if args.vertices:
        formats.write_text(args.vertices, formats.vertices_csv(g, trace, report, walk_counts))
    if args.hbedges:
        formats.write_text(args.hbedges, formats.hbedges_csv(g, trace, report))
    stats = _correlations(g, trace, walk_counts)
    for key, value in stats.items():
        print(f"{key}: {value:.4f}")
    print(f"alpha_ref: {report.alpha_ref!r} -> {args.out}")


def cmd_export(args) -> None:
    g = formats.read_graph(args.graph).graph
    trace = formats.parse_trace_csv(_read(args.trace), g)
    ratios = evaluate.hbedge_color_ratio(g, trace.epsilon_final)
    formats.write_text(args.dot, formats.export_dot(g, trace.alpha_final, ratios))
    print(f"wrote {args.dot}")


def _correlations(g, trace, walk_counts=None) -> dict:
    out = {
        "spearman_alpha_mdegree": evaluate.spearman(trace.alpha_final, g.m_degrees()),
        "spearman_alpha_degree": evaluate.spearman(trace.alpha_final, g.degrees()),
        "spearman_epsilon_mcardinality": evaluate.spearman(trace.epsilon_final, g.m_cardinalities()),
        "spearman_epsilon_cardinality": evaluate.spearman(trace.epsilon_final, g.support_cardinalities()),
    }
    if walk_counts is not None:
        out["spearman_alpha_walk"] = evaluate.spearman(trace.alpha_final, walk_counts)
        out["spearman_walk_mdegree"] = evaluate.spearman(walk_counts, g.m_degrees())
    return out


def cmd_pipeline(args) -> None:
    cfg = _load_config(args.config, args.seed)
    walk_seed = cfg.seed if args.walk_seed is None else args.walk_seed
    os.makedirs(args.out_dir, exist_ok=True)

    def out(name):
        return os.path.join(args.out_dir, name)

    g, labels = genrand.generate_labeled(cfg)
    formats.write_text(out("graph.json"), formats.serialize_graph(g, labels, _provenance(cfg)))

    t0 = time.perf_counter()
    trace = diffusion.run(g, args.steps)
    t_diffuse = time.perf_counter() - t0
    formats.write_text(out("trace.csv"), formats.trace_csv(trace))

    wcfg = rwalk.WalkConfig(beta=args.beta, n_walks=args.walks, seed=walk_seed)
    t0 = time.perf_counter()
    walks = rwalk.run_n_walks(g, wcfg)
    t_walk = time.perf_counter() - t0
    vcount, ecount = walks.counts.vertex_passages, walks.counts.hbedge_passages
    formats.write_text(out("walk.csv"), formats.walk_csv(g, vcount, ecount))

    report, sweeps = _evaluate(g, trace, args.sweep_steps)
    formats.write_text(out("sweep.csv"), formats.sweep_csv(sweeps))
    formats.write_text(out("vertices.csv"), formats.vertices_csv(g, trace, report, vcount))
    formats.write_text(out("hbedges.csv"), formats.hbedges_csv(g, trace, report))
    formats.write_text(out("graph.dot"), formats.export_dot(g, trace.alpha_final, report.color_ratio))

    stats = _correlations(g, trace, vcount)
    summary = {
        "seed": cfg.seed,
        "walk_seed": walk_seed,
        "n": g.n,
        "p": g.p,
        "steps": args.steps,
        "walks": args.walks,
        "beta": args.beta,
        "walk_total_steps": walks.counts.total_steps,
        "alpha_ref": report.alpha_ref,
        **stats,
    }
    formats.write_text(out("summary.json"), json.dumps(summary, indent=1) + "\n")

    for key, value in summary.items():
        print(f"{key}: {value}")
    print(f"diffusion time: {t_diffuse * 1e3:.3f} ms")
    print(f"walk time: {t_walk:.3f} s")
    ratio = t_walk / t_diffuse if t_diffuse > 0 else float("inf")
    print(f"walk/diffusion time ratio: {ratio:.1f}")


COMMANDS = {
    "generate": cmd_generate,
    "diffuse": cmd_diffuse,
    "walk": cmd_walk,
    "eval": cmd_eval,
    "export": cmd_export,
    "pipeline": cmd_pipeline,
}


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        COMMANDS[args.command](args)
    except HbGraphError as exc:
        print(f"error[domain]: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except OSError as exc:
        print(f"error[io]: {exc}", file=sys.stderr)
        return EXIT_IO
    return 0


if __name__ == "__main__":
    sys.exit(main())
