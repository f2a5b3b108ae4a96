"""
Trace Analyzer Tool
===================

Re-reads trace CSV files and reports runs whose g_best got worse or whose
message counts per cycle differ from the expected ones.
"""
from pathlib import Path
from typing import List, Optional

from pydantic import BaseModel, Field

from solvers.trace import read_trace_csv
from tools.base import SchemaTool
from tools.oracle import check_anytime

MAX_REPORTED_ISSUES = 50


class ExpectedCounts(BaseModel):
    value: int = Field(..., ge=0)
    cost: int = Field(..., ge=0)
    best: int = Field(..., ge=0)


class TraceAnalyzerToolSchema(BaseModel):
    """Input for TraceAnalyzerTool."""

    trace_paths: List[str] = Field(..., description="Trace CSV files or directories holding them")
    maximize: bool = Field(False, description="Whether g_best_cost improves upwards")
    expected: Optional[ExpectedCounts] = Field(
        None, description="Messages per cycle; defaults to the first cycle of each trace"
    )


def collect_traces(paths) -> List[Path]:
    files = []
    for path in map(Path, paths):
        if path.is_dir():
            files.extend(sorted(path.rglob("*.csv")))
        else:
            files.append(path)
    return files


def analyze_trace(path, maximize=False, expected=None) -> list:
    frame = read_trace_csv(path)
    issues = []
    if frame.empty:
        return [{"type": "empty trace", "file": str(path), "description": "no cycles recorded"}]

    cycle = check_anytime(frame["g_best_cost"].tolist(), maximize=maximize)
    if cycle is not None:
        issues.append({
            "type": "anytime",
            "file": str(path),
            "description": f"g_best worsened at cycle {int(frame['cycle'].iloc[cycle])}",
        })

    counts = frame[["messages_value", "messages_cost", "messages_best"]]
    target = (
        (expected.value, expected.cost, expected.best)
        if expected is not None
        else tuple(int(c) for c in counts.iloc[0])
    )
    wrong = counts.ne(list(target)).any(axis=1)
    for row in frame[wrong].itertuples(index=False):
        issues.append({
            "type": "message count",
            "file": str(path),
            "description": (
                f"cycle {row.cycle}: {row.messages_value}/{row.messages_cost}/{row.messages_best}"
                f" messages, expected {target[0]}/{target[1]}/{target[2]}"
            ),
        })
    return issues


class TraceAnalyzerTool(SchemaTool):
    name = "Trace Analyzer Tool"
    description = "Checks trace files for anytime and message-count violations."
    args_schema = TraceAnalyzerToolSchema

    def _run(self, args):
        files = collect_traces(args.trace_paths)
        issues = []
        for path in files:
            issues.extend(analyze_trace(path, args.maximize, args.expected))
        return {
            "files_checked": len(files),
            "issues_found": len(issues),
            "issue_details": issues[:MAX_REPORTED_ISSUES],
        }
