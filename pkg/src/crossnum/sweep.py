"""Resumable conjecture sweep over all abelian groups up to a given order.

Output is JSON Lines, one group per line, keys sorted.  Each line holds
``group``, ``report`` and ``meta``; only ``meta`` (timestamp, node count)
may differ between runs, so stability comparisons drop it.
"""

from __future__ import annotations

import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Callable

from .groups import GroupSpec, abelian_groups_up_to
from .invariants import InvariantReport, conjecture_verdict
from .search import SearchLimits


@dataclass
class SweepState:
    max_order: int
    path: Path
    completed: list[str] = field(default_factory=list)

    @classmethod
    def load(cls, max_order: int, path: str | os.PathLike) -> SweepState:
        """Read finished groups from ``path``, dropping a truncated trailing line."""
        path = Path(path)
        state = cls(max_order, path)
        if not path.exists():
            return state
        raw = path.read_bytes()
        good_end = 0
        pos = 0
        for line in raw.splitlines(keepends=True):
            pos += len(line)
            if not line.endswith(b"\n"):
                break
            try:
                state.completed.append(json.loads(line)["group"])
            except (ValueError, KeyError):
                break
            good_end = pos
        if good_end != len(raw):
            with open(path, "r+b") as fh:
                fh.truncate(good_end)
        return state


@dataclass
class SweepSummary:
    path: Path
    groups: int = 0
    written: int = 0
    skipped: int = 0
    violations: list[str] = field(default_factory=list)
    partial: list[str] = field(default_factory=list)

    @property
    def exit_code(self) -> int:
        if self.violations:
            return 1
        if self.partial:
            return 3
        return 0

    def to_dict(self) -> dict:
        return {"path": str(self.path), "groups": self.groups, "written": self.written,
                "skipped": self.skipped, "violations": self.violations, "partial": self.partial}


def sweep_line(report: InvariantReport) -> str:
    record = {
        "group": report.group.text(),
        "report": report.to_dict(),
        "meta": {"timestamp": datetime.now(timezone.utc).isoformat(timespec="seconds"),
                 "nodes": report.nodes},
    }
    return json.dumps(record, sort_keys=True) + "\n"


def stable_lines(path: str | os.PathLike) -> list[str]:
    """Lines of a sweep file with ``meta`` removed, re-serialised canonically."""
    out = []
    for line in Path(path).read_text().splitlines():
        record = json.loads(line)
        record.pop("meta", None)
        out.append(json.dumps(record, sort_keys=True))
    return out


def run_sweep(max_order: int, out: str | os.PathLike, *, resume: bool = False,
              limits: SearchLimits | None = None, workers: int = 1, min_order: int = 2,
              progress: Callable[[InvariantReport], None] | None = None) -> SweepSummary:
    """Compute a report for every group of order ``min_order..max_order`` in sweep order.

    Without ``resume`` an existing output file is replaced.  Root branches of
    each search are spread over ``workers`` processes; lines are written by
    this process only, in group order.
    """
    path = Path(out)
    groups = abelian_groups_up_to(max_order, min_order)
    if resume:
        done = set(SweepState.load(max_order, path).completed)
    else:
        done = set()
        path.write_text("")
    summary = SweepSummary(path, groups=len(groups))
    pool = ProcessPoolExecutor(max_workers=workers) if workers > 1 else None
    try:
        with open(path, "a") as fh:
            for G in groups:
                if G.text() in done:
                    summary.skipped += 1
                    continue
                report = conjecture_verdict(G, limits, witnesses="first", workers=workers,
                                            executor=pool)
                fh.write(sweep_line(report))
                fh.flush()
                summary.written += 1
                if report.partial:
                    summary.partial.append(G.text())
                elif report.violation:
                    summary.violations.append(G.text())
                if progress is not None:
                    progress(report)
    finally:
        if pool is not None:
            pool.shutdown()
    if resume:
        _collect_previous(path, summary, done)
    return summary


def _collect_previous(path: Path, summary: SweepSummary, done: set[str]) -> None:
    """Fold verdicts of lines written by an earlier run into the summary."""
    for line in path.read_text().splitlines():
        record = json.loads(line)
        if record["group"] not in done:
            continue
        rep = record["report"]
        if rep.get("partial"):
            summary.partial.append(record["group"])
        elif not all(rep["verdicts"].values()):
            summary.violations.append(record["group"])


def groups_for_sweep(max_order: int, min_order: int = 2) -> list[GroupSpec]:
    return abelian_groups_up_to(max_order, min_order)
