from __future__ import annotations

import json

from crossnum.search import SearchLimits
from crossnum.sweep import SweepState, run_sweep, stable_lines


def test_sweep_to_order_two(tmp_path):
    out = tmp_path / "s.jsonl"
    summary = run_sweep(2, out)
    lines = out.read_text().splitlines()
    assert summary.exit_code == 0 and len(lines) == 1
    rec = json.loads(lines[0])
    assert rec["group"] == "C2"
    assert rec["report"]["k"] == {"num": 1, "den": 2} and rec["report"]["K"] == {"num": 1, "den": 1}
    assert set(rec["meta"]) == {"timestamp", "nodes"}


def test_sweep_to_sixteen_covers_every_group(tmp_path):
    out = tmp_path / "s.jsonl"
    summary = run_sweep(16, out)
    assert summary.groups == summary.written == 24
    assert summary.violations == [] and summary.partial == [] and summary.exit_code == 0
    lines = out.read_text().splitlines()
    assert all(line == json.dumps(json.loads(line), sort_keys=True) for line in lines)


def test_resume_after_truncation_matches_full_run(tmp_path):
    full = tmp_path / "full.jsonl"
    run_sweep(20, full)
    cut = tmp_path / "cut.jsonl"
    raw = full.read_bytes()
    cut.write_bytes(raw[: len(raw) // 2 + 7])      # ends mid-line
    state = SweepState.load(20, cut)
    assert 0 < len(state.completed) < 20
    summary = run_sweep(20, cut, resume=True)
    assert summary.skipped == len(state.completed)
    assert stable_lines(cut) == stable_lines(full)


def test_resume_of_complete_file_writes_nothing(tmp_path):
    out = tmp_path / "s.jsonl"
    run_sweep(10, out)
    before = out.read_bytes()
    summary = run_sweep(10, out, resume=True)
    assert summary.written == 0 and out.read_bytes() == before


def test_limit_marks_lines_partial_and_exit_three(tmp_path):
    out = tmp_path / "s.jsonl"
    summary = run_sweep(16, out, limits=SearchLimits(max_nodes=3))
    assert summary.partial and summary.exit_code == 3
    recs = [json.loads(line) for line in out.read_text().splitlines()]
    assert any(r["report"]["partial"] for r in recs)
    again = run_sweep(16, out, resume=True)
    assert again.exit_code == 3 and again.written == 0


def test_worker_count_does_not_change_output(tmp_path):
    a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
    run_sweep(24, a, workers=1)
    run_sweep(24, b, workers=3)
    assert stable_lines(a) == stable_lines(b)
