"""Acceptance criteria, one test each, with one PASS/FAIL line per criterion.

Run under pytest (lines are repeated in the terminal summary) or directly:
``python tests/test_acceptance.py``.
"""

from __future__ import annotations

import json
import random
import sys
import tempfile
import time
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from pathlib import Path

import pytest

from crossnum.extremal import classify_structure, extremal_minimal_zero_sum
from crossnum.groups import abelian_groups_up_to, divisors, parse_group
from crossnum.invariants import (K_star, big_cross_number, eta, girard_bruteforce_D,
                                 girard_bruteforce_eta, girard_formula, girard_pairs,
                                 is_two_small, is_wide, little_cross_number, s_egz)
from crossnum.search import iter_zero_sum_free
from crossnum.sequences import Sequence
from crossnum.sumsets import is_minimal_zero_sum, is_zero_sum_free
from crossnum.sweep import run_sweep, stable_lines
from crossnum.transforms import (HypothesisError, _cyclic_cross, check_1_replacement,
                                 check_2_amalgamation_bound, check_2_replacement,
                                 check_amalgamation_bound, dense_sequences, floor_condition1,
                                 floor_condition2, floor_sum_bound1, floor_sum_bound2,
                                 floor_sum_partials, projection_merge_pq, projection_merge_pqr)

F = Fraction
LINES: list[str] = []


@dataclass
class Verdict:
    number: int
    title: str
    ok: bool
    detail: str
    seconds: float
    budget: float | None

    @property
    def passed(self) -> bool:
        return self.ok and (self.budget is None or self.seconds <= self.budget)

    def line(self) -> str:
        limit = f" / budget {self.budget:.0f}s" if self.budget is not None else ""
        timing = f"[{self.seconds:.1f}s{limit}]"
        over = "" if self.budget is None or self.seconds <= self.budget else " OVER TIME BUDGET;"
        return f"{'PASS' if self.passed else 'FAIL'} criterion {self.number} ({self.title}):{over} {self.detail} {timing}"


def _timed(number, title, budget, fn) -> Verdict:
    t0 = time.perf_counter()
    ok, detail = fn()
    v = Verdict(number, title, ok, detail, time.perf_counter() - t0, budget)
    LINES.append(v.line())
    print(v.line(), flush=True)
    return v


# -- 1: exact invariants of small groups ------------------------------------------

def criterion_1():
    checks = []
    for p, a in ((2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (5, 1)):
        G = parse_group(str(p**a))
        checks.append((f"k(C{p**a})", little_cross_number(G)[0], 1 - F(1, p**a)))
    for p in (2, 3, 5, 7):
        checks.append((f"K(C{p})", big_cross_number(parse_group(str(p)))[0], F(1)))
    V = parse_group("2,2")
    checks += [("k(C2+C2)", little_cross_number(V)[0], F(1)),
               ("K(C2+C2)", big_cross_number(V)[0], F(3, 2))]
    C6 = parse_group("6")
    checks += [("k(C6)", little_cross_number(C6)[0], F(7, 6)),
               ("K(C6)", big_cross_number(C6)[0], F(4, 3))]
    bad = [f"{name}={got}!={want}" for name, got, want in checks if got != want]
    return not bad, f"{len(checks) - len(bad)}/{len(checks)} exact values match" + (f"; {bad}" if bad else "")


# -- 2: eta and s against the rank-two closed forms -------------------------------

def criterion_2():
    rows = []
    for n1, n2 in ((2, 2), (3, 3)):
        G = parse_group(f"{n1},{n2}")
        rows.append((f"eta(C{n1}+C{n2})", eta(G), 2 * n1 + n2 - 2))
        rows.append((f"s(C{n1}+C{n2})", s_egz(G), 2 * n1 + 2 * n2 - 3))
    bad = [r for r in rows if r[1] != r[2]]
    shown = ", ".join(f"{name}={got}" for name, got, _ in rows)
    return not bad, shown + (f"; mismatches {bad}" if bad else "")


# -- 3: Girard constants ----------------------------------------------------------

def criterion_3():
    total = agree = 0
    bad, eta_rows = [], []
    for text in ("4", "6", "8", "9", "2,2", "2,4"):
        G = parse_group(text)
        for dp, d in girard_pairs(G):
            value, _ = girard_formula(G, dp, d)
            brute = girard_bruteforce_D(G, dp, d)
            total += 1
            if brute == value:
                agree += 1
            else:
                bad.append(f"{G.text()}({dp},{d}): formula {value} brute {brute}")
            eta_rows.append((G.text(), dp, d, value, girard_bruteforce_eta(G, dp, d)))
    eta_same = sum(1 for *_, v, e in eta_rows if v == e)
    differ = [f"{g}({dp},{d}) eta={e} vs {v}" for g, dp, d, v, e in eta_rows if v != e]
    detail = (f"D formula = brute force on {agree}/{total} pairs; informative: eta brute force "
              f"equals the formula on {eta_same}/{len(eta_rows)} pairs, differs on {differ[:4]}"
              + (" ..." if len(differ) > 4 else ""))
    return not bad, detail + (f"; mismatches {bad}" if bad else "")


# -- 4: cross number of the structured groups --------------------------------------

def criterion_4():
    expected = {"2,2,3": F(11, 6), "2,9": F(13, 9), "4,3": F(3, 2), "30": F(2)}
    parts, ok = [], True
    for text, want in expected.items():
        G = parse_group(text)
        K, _ = big_cross_number(G, witnesses="none")
        extremals = extremal_minimal_zero_sum(G)
        failing = [U for U in extremals if not classify_structure(U, "minimal").decomposes]
        good = K == want == K_star(G) and not failing
        ok &= good
        parts.append(f"K({G.text()})={K} (K*={K_star(G)}), {len(extremals)} extremal, {len(failing)} fail structure")
    return ok, "; ".join(parts)


# -- 5: sweep to order 36 ---------------------------------------------------------

def criterion_5(out: Path):
    summary = run_sweep(36, out, workers=1)
    lines = stable_lines(out)
    reports = [json.loads(line)["report"] for line in lines]
    k_equal = sum(r["verdicts"]["conjecture_K"] for r in reports)
    ok = (summary.exit_code == 0 and len(reports) == summary.groups
          and k_equal == len(reports))
    detail = (f"{len(reports)}/{summary.groups} groups, K=K* on {k_equal}, "
              f"violations {summary.violations}, partial {summary.partial}, exit {summary.exit_code}")
    return ok, detail


# -- 6: floor-sum inequalities ----------------------------------------------------

def _floor_instance(rng: random.Random, integral_last: bool):
    p = rng.randint(2, 7)
    b = rng.randint(1, 30)
    n = rng.randint(1, 6)
    t = [F(rng.randint(0, 4 * b), b) for _ in range(n)]
    if integral_last:
        s_prev = floor_sum_partials(t[:-1])[-1] if n > 1 else F(0)
        frac_prev = s_prev - (s_prev.numerator // s_prev.denominator)
        # choose t_n = k - {s_(n-1)} in [0, 4]
        k = rng.randint(1 if frac_prev else 0, 4)
        t[-1] = k - frac_prev
    return t, p, b


def criterion_6():
    rng = random.Random(20240601)
    bad1 = bad2 = tight1 = tight2 = 0
    for _ in range(1000):
        t, p, b = _floor_instance(rng, False)
        r = floor_sum_bound1(t, p, b)
        bad1 += not (r.holds and r.is_tight == floor_condition1(t, b))
        tight1 += r.is_tight
        t, p, b = _floor_instance(rng, True)
        r = floor_sum_bound2(t, p, b)
        bad2 += not (r.holds and r.is_tight == floor_condition2(t, b))
        tight2 += r.is_tight
    detail = (f"first bound: 1000 instances, {bad1} violations, {tight1} tight; "
              f"second bound: 1000 instances, {bad2} violations, {tight2} tight")
    return bad1 == bad2 == 0, detail


# -- 7: dense-sequence counting bounds --------------------------------------------

def _bound_instances(G):
    """Yield (name, check) for every hypothesis-satisfying parameter choice."""
    e = G.exponent
    for p in G.primes:
        a1, a2, a3 = G.a(p, 1), G.a(p, 2), G.a(p, 3)
        if a1 > a2:
            for l in divisors(e):
                if l % p ** (a2 + 1) == 0:
                    yield "at most p-1", lambda S, p=p, l=l: check_amalgamation_bound(G, S, p, l)
        if a2 > a3:
            for l in divisors(e):
                if l % p ** (a3 + 1) == 0:
                    yield "at most 3p-3", lambda S, p=p, l=l: check_2_amalgamation_bound(G, S, p, l)
    p = G.primes[0]
    cof = G.exponent // p ** G.a(p, 1)
    a1, a2, a3 = G.a(p, 1), G.a(p, 2), G.a(p, 3)
    if len(G.primes) > 1 and a1 > a2 and is_wide(p, cof):
        for a in range(a2 + 1, a1 + 1):
            yield "at least p-1", lambda S, a=a: check_1_replacement(G, S, a)
    if len(G.primes) > 1 and a2 > a3 and is_two_small(p, cof):
        for a in range(a3 + 1, a2 + 1):
            yield "at least 2p-2", lambda S, a=a: check_2_replacement(G, S, a)


def criterion_7():
    counts: dict[str, list[int]] = {}
    failures = []
    groups = 0
    for G in abelian_groups_up_to(48):
        instances = list(_bound_instances(G))
        if not instances:
            continue
        groups += 1
        dense = dense_sequences(G)
        for name, check in instances:
            tally = counts.setdefault(name, [0, 0])
            for S in dense:
                try:
                    good = check(S)
                except HypothesisError as exc:
                    failures.append(f"{G.text()} {name}: hypothesis error {exc}")
                    continue
                tally[0] += 1
                if not good:
                    tally[1] += 1
                    failures.append(f"{G.text()} {name}: {S}")
    summary = "; ".join(f"{name}: {c} checks, {f} fail" for name, (c, f) in sorted(counts.items()))
    return not failures, f"{groups} groups; {summary}" + (f"; first failures {failures[:3]}" if failures else "")


# -- 8: merge pipelines -----------------------------------------------------------

def _merge_inputs(G, max_len=8):
    zsf = list(iter_zero_sum_free(G, max_length=max_len, include_empty=False))
    neg = G.tables.neg
    minimal = {}
    for S in iter_zero_sum_free(G, max_length=max_len - 1):
        U = Sequence.from_indices(G, S.indices() + [neg[S.sum_index()]])
        if is_minimal_zero_sum(U):
            minimal[U.key] = U
    return zsf, sorted(minimal.values(), key=lambda U: U.key)


def _exact_blocks_possible(values, n, need):
    """Whether ``need`` disjoint zero-sum sub-multisets of cross number exactly 1 exist."""
    if need == 0:
        return True
    idx = range(len(values))
    for r in range(1, len(values) + 1):
        for comb in combinations(idx, r):
            sub = [values[i] for i in comb]
            if sum(sub) % n == 0 and _cyclic_cross(sub, n) == 1:
                rest = [values[i] for i in idx if i not in comb]
                if _exact_blocks_possible(rest, n, need - 1):
                    return True
    return False


def criterion_8():
    runs = [("2,3", projection_merge_pq), ("2,9", projection_merge_pq),
            ("2,2,3", projection_merge_pq), ("2,3,5", projection_merge_pqr)]
    inputs = preserved = sound = count_ok = conservation_ok = 0
    lower_ok = frac_ok = stages = 0
    supplement_bad = reassembly_bad = 0
    first_frac_failure = None
    per_group = []
    for text, pipeline in runs:
        G = parse_group(text)
        zsf, minimal = _merge_inputs(G)
        g_frac_bad = 0
        for S in zsf + minimal:
            led = pipeline(S)
            inputs += 1
            preserved += led.output_preserved
            sound += led.sound
            supplement_bad += not led.supplement_holds
            reassembly_bad += not led.reassembly_ok
            for st in led.stages:
                stages += 1
                count_ok += st.count_ok
                conservation_ok += st.conservation_ok
                lower_ok += st.fractional_lower_ok
                frac_ok += st.fractional_ok
                if not st.fractional_ok:
                    g_frac_bad += 1
                    if first_frac_failure is None:
                        first_frac_failure = (S, st)
        per_group.append(f"{G.text()}: {len(zsf)} zsf + {len(minimal)} minimal, "
                         f"{g_frac_bad} stages off the fractional identity")
    ok = preserved == sound == inputs and count_ok == conservation_ok == frac_ok == stages
    detail = (f"{inputs} inputs, type preserved {preserved}/{inputs}, sound {sound}/{inputs}; "
              f"stages {stages}: |Q_i|=floor {count_ok}, conservation {conservation_ok}, "
              f"k(tau R_i) >= frac {lower_ok}, k(tau R_i) = frac {frac_ok}; " + "; ".join(per_group)
              + f"; informative: supplement inequality fails on {supplement_bad} inputs, "
              f"reassembly identity on {reassembly_bad}")
    if first_frac_failure is not None:
        S, st = first_frac_failure
        G = S.group
        comp = G.components_of(st.prime)[0]
        vals = [G.tables.coords[i][comp] for B in st.blocks for i in B.indices()]
        vals += [G.tables.coords[i][comp] for i in st.leftover]
        possible = _exact_blocks_possible(vals, G.moduli[comp], len(st.replaced))
        detail += (f"; first counterexample {S} stage {st.index}: projected residues {sorted(vals)}, "
                   f"total {st.total}, leftover {st.leftover_cross}; a choice of blocks meeting the "
                   f"identity {'exists' if possible else 'does not exist'}")
    return ok, detail


# -- 9: determinism across worker counts ------------------------------------------

def criterion_9(reference: Path, workdir: Path):
    base = stable_lines(reference)
    same = {}
    for w in (2, 8):
        out = workdir / f"sweep_w{w}.jsonl"
        run_sweep(36, out, workers=w)
        same[w] = stable_lines(out) == base
    return all(same.values()), f"{len(base)} lines; identical to 1 worker: " + ", ".join(
        f"{w} workers {'yes' if s else 'NO'}" for w, s in same.items())


# -- pytest wrappers --------------------------------------------------------------

@pytest.fixture(scope="module")
def sweep_dir():
    with tempfile.TemporaryDirectory() as d:
        yield Path(d)


@pytest.fixture(scope="module")
def sweep_one_worker(sweep_dir):
    out = sweep_dir / "sweep_w1.jsonl"
    verdict = _timed(5, "sweep to order 36", None, lambda: criterion_5(out))
    return out, verdict


def _assert(v: Verdict):
    assert v.passed, v.line()


def test_criterion_1_exact_small_invariants():
    _assert(_timed(1, "exact small invariants", 10, criterion_1))


def test_criterion_2_eta_and_s():
    _assert(_timed(2, "eta and s closed forms", 60, criterion_2))


def test_criterion_3_girard():
    _assert(_timed(3, "Girard formula vs brute force", 60, criterion_3))


def test_criterion_4_structured_groups():
    _assert(_timed(4, "K = K* and structure on four groups", 1800, criterion_4))


def test_criterion_5_sweep(sweep_one_worker):
    _assert(sweep_one_worker[1])


def test_criterion_6_floor_sums():
    _assert(_timed(6, "floor-sum inequalities", 10, criterion_6))


def test_criterion_7_dense_sequence_bounds():
    _assert(_timed(7, "dense-sequence counting bounds", 600, criterion_7))


def test_criterion_8_merge_pipelines():
    _assert(_timed(8, "merge pipelines", 300, criterion_8))


def test_criterion_9_determinism(sweep_one_worker, sweep_dir):
    ref, _ = sweep_one_worker
    _assert(_timed(9, "sweep determinism across workers", None, lambda: criterion_9(ref, sweep_dir)))


def main() -> int:
    with tempfile.TemporaryDirectory() as d:
        d = Path(d)
        verdicts = [
            _timed(1, "exact small invariants", 10, criterion_1),
            _timed(2, "eta and s closed forms", 60, criterion_2),
            _timed(3, "Girard formula vs brute force", 60, criterion_3),
            _timed(4, "K = K* and structure on four groups", 1800, criterion_4),
            _timed(5, "sweep to order 36", None, lambda: criterion_5(d / "sweep_w1.jsonl")),
            _timed(6, "floor-sum inequalities", 10, criterion_6),
            _timed(7, "dense-sequence counting bounds", 600, criterion_7),
            _timed(8, "merge pipelines", 300, criterion_8),
            _timed(9, "sweep determinism across workers", None,
                   lambda: criterion_9(d / "sweep_w1.jsonl", d)),
        ]
    return 0 if all(v.passed for v in verdicts) else 1


if __name__ == "__main__":
    sys.exit(main())
