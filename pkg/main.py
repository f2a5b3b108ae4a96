#!/usr/bin/env python3
"""
PCD Main Entry Point
====================

Command-line interface for generating benchmark instances, solving them with
PCD or PCD_CrossOver, running experiments and checking results.

Exit codes: 0 on success, 1 on errors, 2 when an invariant check fails.
"""

import argparse
import json
import logging
import sys
from pathlib import Path

import yaml

# Add the project directory to the Python path
sys.path.insert(0, str(Path(__file__).parent))

from cdcop.instance_file import load_instance  # noqa: E402
from errors import PcdError  # noqa: E402
from experiments.runner import (  # noqa: E402
    ExperimentConfig,
    emit_anytime_table,
    run_experiment,
    run_particle_sweep,
)
from runtime.pseudo_tree import build_bfs, format_tree_edges  # noqa: E402
from runtime.simulator import MessageLog, message_stats  # noqa: E402
from settings import (  # noqa: E402
    DEFAULT_CONFIG,
    configure_logging,
    load_benchmarks,
    load_settings,
    load_variants,
)
from solvers.config import SwarmConfig, variant_config  # noqa: E402
from solvers.pcd import PcdSolver  # noqa: E402
from solvers.trace import write_trace_csv  # noqa: E402
from tools.benchmark_generator import FAMILIES, BenchmarkGeneratorTool, BenchSpec  # noqa: E402
from tools.oracle import OracleTool, check_anytime  # noqa: E402
from tools.trace_analyzer import TraceAnalyzerTool  # noqa: E402

logger = logging.getLogger("pcd")

EXIT_OK, EXIT_ERROR, EXIT_INVARIANT = 0, 1, 2


def _add_family_args(parser):
    parser.add_argument("--n", type=int, help="Number of agents")
    parser.add_argument("--p", type=float, help="Edge probability (erdos_renyi)")
    parser.add_argument("--m", type=int, help="Attachments per new agent (barabasi_albert)")
    parser.add_argument("--rows", type=int, help="Grid rows (sensor_grid)")
    parser.add_argument("--cols", type=int, help="Grid columns (sensor_grid)")
    parser.add_argument("--domain", type=float, nargs=2, metavar=("LB", "UB"))
    parser.add_argument("--coeff-range", type=float, nargs=2, metavar=("LO", "HI"))


def _add_solver_args(parser, sweep=False):
    if sweep:
        parser.add_argument(
            "--particles", type=int, nargs="+", help="Particles per agent (K); several values run a K sweep"
        )
    else:
        parser.add_argument("--particles", type=int, help="Particles per agent (K)")
    parser.add_argument("--cycles", type=int, help="Cycle budget (t_max)")
    parser.add_argument("--inertia", choices=["fixed", "adaptive", "constriction"])
    parser.add_argument("--c1", type=float, help="Cognitive constant")
    parser.add_argument("--c2", type=float, help="Social constant (constriction needs c1 + c2 > 4)")
    parser.add_argument("--root", type=int, help="Pseudo-tree root agent")


def _bench_spec(args, seed=None):
    return BenchSpec.from_preset(
        args.family,
        n=args.n,
        p=args.p,
        m=args.m,
        rows=args.rows,
        cols=args.cols,
        domain=args.domain,
        coeff_range=args.coeff_range,
        seed=seed,
    )


def _solver_config(settings, args) -> SwarmConfig:
    particles = args.particles
    if isinstance(particles, list):
        particles = particles[0]
    overrides = {
        "num_particles": particles,
        "t_max": args.cycles,
        "inertia": args.inertia,
        "c1": args.c1,
        "c2": args.c2,
    }
    if getattr(args, "seed", None) is not None:
        overrides["seed"] = args.seed
    base = SwarmConfig.from_mapping(settings.get("solver", {}))
    return base.with_overrides(**{k: v for k, v in overrides.items() if v is not None})


def _root(settings, args) -> int:
    if args.root is not None:
        return args.root
    return settings.get("default_settings", {}).get("root", 0)


def cmd_gen(settings, args) -> int:
    spec = _bench_spec(args, seed=args.seed)
    output = args.out or str(
        Path(settings["default_settings"]["output_dir"]) / f"{args.family}_{spec.seed}.json"
    )
    result = BenchmarkGeneratorTool().run(spec=spec, output_path=output)
    print(json.dumps(result, indent=2))
    return EXIT_OK


def cmd_solve(settings, args) -> int:
    inst = load_instance(args.instance)
    tree = build_bfs(inst, _root(settings, args))
    config = variant_config(_solver_config(settings, args), args.variant)
    log = MessageLog() if args.message_log else None

    solver = PcdSolver(inst, tree, config, log)
    trace = solver.run()
    if args.trace:
        write_trace_csv(trace, args.trace, wall_clock=args.wall_clock)
    if log is not None:
        log.write_csv(args.message_log)

    print(f"variant:    {args.variant}")
    print(f"objective:  {inst.objective.value}")
    print(f"cycles:     {len(trace.records)}")
    print(f"best cost:  {trace.final_cost!r}")
    print(f"assignment: {list(trace.best_assignment)}")

    stats = message_stats(solver.runtime.history, tree, config.num_particles)
    cycle = check_anytime(trace)
    if cycle is not None:
        print(f"Invariant failed: g_best worsened at cycle {cycle}", file=sys.stderr)
        return EXIT_INVARIANT
    if not stats.ok:
        print(f"Invariant failed: {stats.violations[0]['description']}", file=sys.stderr)
        return EXIT_INVARIANT
    return EXIT_OK


def cmd_experiment(settings, args) -> int:
    overrides = {
        "name": args.name,
        "variants": args.variants,
        "num_instances": args.num_instances,
        "repeats": args.repeats,
        "master_seed": args.master_seed,
        "output_dir": args.out,
        "root": args.root,
        "solver": _solver_config(settings, args),
    }
    if args.wall_clock:
        overrides["record_wall_clock"] = True
    if args.message_log:
        overrides["message_log"] = True
    if args.instances:
        overrides["instance_files"] = args.instances
    else:
        overrides["bench"] = _bench_spec(args)
    cfg = ExperimentConfig.from_settings(settings, **overrides)

    if args.particles and len(args.particles) > 1:
        summaries = run_particle_sweep(cfg, args.particles)
    else:
        summaries = [run_experiment(cfg)]
    print(emit_anytime_table(summaries))
    violations = 0
    for summary in summaries:
        for label, rate in summary.win_rate.items():
            print(f"{summary.setting}: {label}: at least as good on {rate:.0%} of instances")
        print(f"{summary.trace_files} traces written to {summary.output_dir}")
        violations += len(summary.violations)
    if violations:
        print(f"Invariant failed: {violations} violations", file=sys.stderr)
        return EXIT_INVARIANT
    return EXIT_OK


def cmd_oracle(settings, args) -> int:
    grid = dict(settings.get("grid_search", {}))
    if args.points is not None:
        grid["points_per_dim"] = args.points
    result = OracleTool().run(instance_path=args.instance, grid=grid)
    print(json.dumps(result, indent=2))
    return EXIT_OK


def cmd_check(settings, args) -> int:
    result = TraceAnalyzerTool().run(trace_paths=args.traces, maximize=args.maximize)
    print(json.dumps(result, indent=2))
    return EXIT_INVARIANT if result["issues_found"] else EXIT_OK


def cmd_tree(settings, args) -> int:
    inst = load_instance(args.instance)
    tree = build_bfs(inst, _root(settings, args))
    print(f"root {tree.root}, height {tree.height}")
    print(format_tree_edges(tree))
    return EXIT_OK


def cmd_defaults(settings, args) -> int:
    print(yaml.safe_dump(
        {"settings": settings, "benchmarks": load_benchmarks(), "variants": load_variants()},
        sort_keys=False,
    ))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description="PCD C-DCOP solver toolkit")
    parser.add_argument("--config", default=str(DEFAULT_CONFIG), help="Path to the configuration file")
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument("--verbose", "-v", action="store_true", help="Log at DEBUG level")
    verbosity.add_argument("--quiet", "-q", action="store_true", help="Log warnings only")
    commands = parser.add_subparsers(dest="command", required=True)

    gen = commands.add_parser("gen", help="Generate a benchmark instance file")
    gen.add_argument("family", choices=FAMILIES)
    _add_family_args(gen)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--out", help="Instance file to write")
    gen.set_defaults(handler=cmd_gen)

    solve = commands.add_parser("solve", help="Solve one instance file")
    solve.add_argument("instance")
    solve.add_argument("--variant", default="PCD")
    _add_solver_args(solve)
    solve.add_argument("--seed", type=int)
    solve.add_argument("--trace", help="Write the anytime trace CSV here")
    solve.add_argument("--message-log", help="Write every message as CSV here")
    solve.add_argument("--wall-clock", action="store_true", help="Record real timings in the trace")
    solve.set_defaults(handler=cmd_solve)

    experiment = commands.add_parser("experiment", help="Run variants over an instance ensemble")
    source = experiment.add_mutually_exclusive_group(required=True)
    source.add_argument("--family", choices=FAMILIES)
    source.add_argument("--instances", nargs="+", help="Instance files")
    _add_family_args(experiment)
    _add_solver_args(experiment, sweep=True)
    experiment.add_argument("--name", help="Setting label for the table")
    experiment.add_argument("--variants", nargs="+")
    experiment.add_argument("--num-instances", type=int)
    experiment.add_argument("--repeats", type=int)
    experiment.add_argument("--master-seed", type=int)
    experiment.add_argument("--out", help="Output directory")
    experiment.add_argument("--wall-clock", action="store_true")
    experiment.add_argument("--message-log", action="store_true")
    experiment.set_defaults(handler=cmd_experiment)

    oracle = commands.add_parser("oracle", help="Grid-search optimum of a small instance")
    oracle.add_argument("instance")
    oracle.add_argument("--points", type=int, help="Lattice points per dimension")
    oracle.set_defaults(handler=cmd_oracle)

    check = commands.add_parser("check", help="Check trace files for invariant violations")
    check.add_argument("traces", nargs="+", help="Trace CSV files or directories")
    check.add_argument("--maximize", action="store_true")
    check.set_defaults(handler=cmd_check)

    tree = commands.add_parser("tree", help="Print the BFS pseudo-tree of an instance")
    tree.add_argument("instance")
    tree.add_argument("--root", type=int)
    tree.set_defaults(handler=cmd_tree)

    defaults = commands.add_parser("defaults", help="Print every default setting")
    defaults.set_defaults(handler=cmd_defaults)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        settings = load_settings(args.config)
        level = "DEBUG" if args.verbose else "WARNING" if args.quiet else None
        configure_logging(settings, level)
        return args.handler(settings, args)
    except (PcdError, OSError) as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == '__main__':
    sys.exit(main())
