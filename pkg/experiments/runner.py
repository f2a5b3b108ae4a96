"""
Experiment Runner
=================

Runs every configured variant over an ensemble of instances and seeds and
writes:

    <output_dir>/instances/instance_XXX.json
    <output_dir>/traces/<variant>/instance_XXX_run_YYY.csv
    <output_dir>/mean_curve.csv
    <output_dir>/summary.json

Run seeds depend only on (master_seed, instance, repeat, variant), so adding
or removing a variant leaves the other variants' runs unchanged.
"""
import hashlib
import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional

import pandas as pd
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from cdcop.instance_file import dump_instance, load_instance
from errors import ConfigError, UnknownVariant
from runtime.pseudo_tree import build_bfs
from runtime.simulator import MessageLog, expected_counts, message_stats
from solvers.config import SwarmConfig, variant_config
from solvers.pcd import PcdSolver
from solvers.trace import write_trace_csv
from tools.benchmark_generator import BenchSpec, generate
from tools.oracle import check_anytime
from tools.system_monitor import resource_snapshot

logger = logging.getLogger(__name__)


def derive_seed(master_seed: int, *labels) -> int:
    """64-bit seed from a BLAKE2b hash of the master seed and the labels."""
    text = "|".join(str(part) for part in (master_seed, *labels))
    digest = hashlib.blake2b(text.encode("utf-8"), digest_size=8).digest()
    return int.from_bytes(digest, "big")


class ExperimentConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    name: Optional[str] = Field(None, description="Setting label used in tables")
    instance_files: List[str] = Field(default_factory=list)
    bench: Optional[BenchSpec] = None
    solver: SwarmConfig = SwarmConfig()
    variants: List[str] = Field(default_factory=lambda: ["PCD", "PCD_CrossOver"], min_length=1)
    num_instances: int = Field(25, ge=1)
    repeats: int = Field(20, ge=1)
    master_seed: int = Field(0, ge=0)
    root: int = Field(0, ge=0)
    output_dir: str = "results"
    record_wall_clock: bool = False
    message_log: bool = False

    @model_validator(mode="after")
    def _check_source(self):
        if bool(self.instance_files) == (self.bench is not None):
            raise ValueError("give either instance_files or a bench spec, not both or neither")
        return self

    @classmethod
    def from_settings(cls, settings: dict, **overrides) -> "ExperimentConfig":
        """Defaults from the `experiment`, `solver` and `default_settings` sections."""
        values = dict(settings.get("experiment", {}))
        defaults = settings.get("default_settings", {})
        values.setdefault("output_dir", defaults.get("output_dir", "results"))
        values.setdefault("root", defaults.get("root", 0))
        values["solver"] = SwarmConfig.from_mapping(settings.get("solver", {}))
        values.update({k: v for k, v in overrides.items() if v is not None})
        try:
            return cls(**values)
        except ValidationError as e:
            raise ConfigError(f"invalid experiment config: {e}") from e

    @property
    def setting(self) -> str:
        if self.name:
            return self.name
        if self.bench is None:
            return f"{len(self.instance_files)} files"
        spec = self.bench
        params = {"n": spec.n, "p": spec.p, "m": spec.m, "rows": spec.rows, "cols": spec.cols}
        described = " ".join(f"{k}={v}" for k, v in params.items() if v is not None)
        return f"{spec.family} {described}"


@dataclass
class ExperimentSummary:
    setting: str
    variants: List[str]
    maximize: bool
    # variant -> per-instance mean final cost, in the instances' own sign
    final_means: Dict[str, List[float]]
    mean_curve: pd.DataFrame
    win_rate: Dict[str, float]
    trace_files: int
    output_dir: Path
    violations: list = field(default_factory=list)
    resources: Optional[dict] = None

    @property
    def ok(self) -> bool:
        return not self.violations

    def mean_final(self, variant: str) -> float:
        if variant not in self.final_means:
            raise UnknownVariant(f"unknown variant {variant!r}")
        values = self.final_means[variant]
        return sum(values) / len(values)

    def to_dict(self) -> dict:
        return {
            "setting": self.setting,
            "variants": self.variants,
            "maximize": self.maximize,
            "mean_final_cost": {v: self.mean_final(v) for v in self.variants},
            "per_instance_mean_final_cost": self.final_means,
            "win_rate": self.win_rate,
            "trace_files": self.trace_files,
            "violations": self.violations,
            "resources": self.resources,
        }


def _load_instances(cfg: ExperimentConfig, out: Path):
    if cfg.instance_files:
        sources = [load_instance(path) for path in cfg.instance_files]
    else:
        sources = [
            generate(cfg.bench.model_copy(update={"seed": derive_seed(cfg.master_seed, "instance", idx)}))
            for idx in range(cfg.num_instances)
        ]
    objectives = {inst.objective.value for inst in sources}
    if len(objectives) > 1:
        raise ConfigError(f"instances mix objectives {sorted(objectives)}; run min and max separately")
    for idx, inst in enumerate(sources):
        dump_instance(inst, out / "instances" / f"instance_{idx:03d}.json")
    return sources


def _improves(candidate: float, base: float, maximize: bool) -> bool:
    return candidate >= base if maximize else candidate <= base


def run_experiment(cfg: ExperimentConfig) -> ExperimentSummary:
    out = Path(cfg.output_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as e:
        raise OSError(f"cannot create output directory {out}: {e}") from e

    variant_configs = {v: variant_config(cfg.solver, v) for v in cfg.variants}
    instances = _load_instances(cfg, out)
    maximize = instances[0].maximize
    logger.info(
        "Experiment %r: %d instances x %d repeats x %d variants",
        cfg.setting, len(instances), cfg.repeats, len(cfg.variants),
    )

    curves = {v: [] for v in cfg.variants}
    final_means = {v: [] for v in cfg.variants}
    violations = []
    trace_files = 0

    for idx, inst in enumerate(instances):
        tree = build_bfs(inst, cfg.root)
        counts = expected_counts(tree)
        for variant, base_config in variant_configs.items():
            finals = []
            for repeat in range(cfg.repeats):
                config = base_config.with_overrides(
                    seed=derive_seed(cfg.master_seed, idx, repeat, variant)
                )
                log = MessageLog() if cfg.message_log else None
                solver = PcdSolver(inst, tree, config, log)
                trace = solver.run()

                run_dir = out / "traces" / variant
                stem = f"instance_{idx:03d}_run_{repeat:03d}"
                write_trace_csv(trace, run_dir / f"{stem}.csv", wall_clock=cfg.record_wall_clock)
                if log is not None:
                    log.write_csv(run_dir / f"{stem}_messages.csv")
                trace_files += 1

                run = f"{variant}/{stem}"
                cycle = check_anytime(trace)
                if cycle is not None:
                    violations.append({"type": "anytime", "run": run, "description": f"g_best worsened at cycle {cycle}"})
                stats = message_stats(solver.runtime.history, tree, config.num_particles)
                for v in stats.violations:
                    violations.append({**v, "run": run})

                curves[variant].append([r.g_best_cost for r in trace.records])
                finals.append(trace.final_cost)
            final_means[variant].append(sum(finals) / len(finals))
        logger.info("Instance %d/%d done (%d edges, %s)", idx + 1, len(instances), inst.num_edges, counts)

    mean_curve = pd.DataFrame({v: pd.DataFrame(runs).mean(axis=0) for v, runs in curves.items()})
    mean_curve.insert(0, "cycle", range(1, len(mean_curve) + 1))
    mean_curve.to_csv(out / "mean_curve.csv", index=False)

    base = cfg.variants[0]
    win_rate = {}
    for variant in cfg.variants[1:]:
        wins = sum(
            _improves(c, b, maximize) for c, b in zip(final_means[variant], final_means[base])
        )
        win_rate[f"{variant} vs {base}"] = wins / len(instances)

    resources = resource_snapshot()
    logger.info("Resources after experiment: %s", resources)
    summary = ExperimentSummary(
        setting=cfg.setting,
        variants=list(cfg.variants),
        maximize=maximize,
        final_means=final_means,
        mean_curve=mean_curve,
        win_rate=win_rate,
        trace_files=trace_files,
        output_dir=out,
        violations=violations,
        resources=resources if cfg.record_wall_clock else None,
    )
    with open(out / "summary.json", "w", encoding="utf-8") as f:
        json.dump(summary.to_dict(), f, indent=2, sort_keys=True)
        f.write("\n")
    if violations:
        logger.warning("%d invariant violations in %r", len(violations), cfg.setting)
    return summary


def run_particle_sweep(cfg: ExperimentConfig, particle_counts) -> List[ExperimentSummary]:
    """One experiment per K on the same instances and seeds, under <output_dir>/K_<k>."""
    summaries = []
    for k in particle_counts:
        swept = cfg.model_copy(update={
            "name": f"{cfg.setting} K={k}",
            "solver": cfg.solver.with_overrides(num_particles=k),
            "output_dir": str(Path(cfg.output_dir) / f"K_{k}"),
        })
        summaries.append(run_experiment(swept))
    return summaries


def emit_anytime_table(summaries, variants=None) -> str:
    """Mean final cost per setting and variant, plus improvement over the first variant.

    Improvement is (base - improved) / |base| in minimisation terms, as a percentage.
    """
    if isinstance(summaries, ExperimentSummary):
        summaries = [summaries]
    variants = list(variants or summaries[0].variants)
    base = variants[0]

    rows = {}
    for summary in summaries:
        row = {v: summary.mean_final(v) for v in variants}
        sign = -1.0 if summary.maximize else 1.0
        for v in variants[1:]:
            base_cost = sign * row[base]
            improved = sign * row[v]
            row[f"{v} vs {base} (%)"] = (
                100.0 * (base_cost - improved) / abs(base_cost) if base_cost != 0 else float("nan")
            )
        rows[summary.setting] = row

    table = pd.DataFrame.from_dict(rows, orient="index")
    table.index.name = "setting"
    return table.to_string(float_format=lambda x: f"{x:.2f}")
