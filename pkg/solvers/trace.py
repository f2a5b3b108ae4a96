"""
Run Traces
==========

The anytime curve of a run: one record per cycle with the global best cost
(in the instance's own sign), its assignment and the cycle's message counts.
"""
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Tuple

import pandas as pd

from errors import ConfigError
from runtime.messages import CycleStats

TRACE_COLUMNS = [
    "cycle",
    "elapsed_ms",
    "hops",
    "g_best_cost",
    "messages_value",
    "messages_cost",
    "messages_best",
]


@dataclass
class CycleRecord:
    cycle: int
    g_best_internal: float
    g_best_cost: float
    assignment: Tuple[float, ...]
    stats: CycleStats
    hops: int
    elapsed_ms: float


@dataclass
class RunTrace:
    maximize: bool
    records: List[CycleRecord] = field(default_factory=list)

    @property
    def best_assignment(self) -> Tuple[float, ...]:
        return self.records[-1].assignment if self.records else ()

    @property
    def final_cost(self) -> float:
        return self.records[-1].g_best_cost

    @property
    def internal_costs(self) -> List[float]:
        return [r.g_best_internal for r in self.records]

    def to_frame(self, wall_clock: bool = True) -> pd.DataFrame:
        rows = [
            (
                r.cycle,
                r.elapsed_ms if wall_clock else 0.0,
                r.hops,
                r.g_best_cost,
                r.stats.value_messages,
                r.stats.cost_messages,
                r.stats.best_messages,
            )
            for r in self.records
        ]
        return pd.DataFrame(rows, columns=TRACE_COLUMNS)


def write_trace_csv(trace: RunTrace, path, wall_clock: bool = False) -> Path:
    """Write the trace; without wall_clock the file depends only on config and seed."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    trace.to_frame(wall_clock=wall_clock).to_csv(path, index=False)
    return path


def read_trace_csv(path) -> pd.DataFrame:
    try:
        frame = pd.read_csv(path, float_precision="round_trip")
    except (pd.errors.EmptyDataError, pd.errors.ParserError) as e:
        raise ConfigError(f"cannot read trace {path}: {e}") from e
    missing = [c for c in TRACE_COLUMNS if c not in frame.columns]
    if missing:
        raise ConfigError(f"{path} is missing trace columns {missing}")
    return frame[TRACE_COLUMNS]
