"""Depth-first branch-and-bound over zero-sum free sequences.

Sequences are enumerated as multisets, nondecreasing in a fixed candidate
ranking (order ascending, then dense index), so that terms with large
``1/ord(g)`` are tried first.  Three objectives share the tree:

``k``
    cross number of the zero-sum free sequence ``S`` itself;
``K``
    cross number of the minimal zero-sum sequence ``S * (-sigma(S))``;
``length``
    ``|S|`` (gives the Davenport constant).

Cross numbers are handled as integer numerators over ``exp(G)``.  A subtree is
cut when ``k(S) + r * w <= best`` where ``r = |G| - 1 - |Sigma(S)|`` bounds the
number of further terms (each one adds a new nonzero subsum) and ``w`` is the
largest ``1/ord`` still available at this rank.  For ``K`` the closing term adds
at most ``1/P^-(exp G)``.

Root branches (choice of the first term) may be farmed out to worker
processes; the merge is order-canonical so results do not depend on ``workers``.
"""

from __future__ import annotations

import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterator

from .groups import GroupSpec, _tables, smallest_prime_divisor
from .sequences import Sequence

OBJECTIVES = ("k", "K", "length")
WITNESS_MODES = ("none", "first", "all")


@dataclass(frozen=True)
class SearchLimits:
    max_nodes: int | None = None
    max_seconds: float | None = None
    max_length: int | None = None

    @classmethod
    def from_env(cls, environ=None) -> SearchLimits:
        """Defaults from ``CROSSNUM_MAX_NODES``, ``CROSSNUM_MAX_SECONDS``, ``CROSSNUM_MAX_LENGTH``."""
        env = os.environ if environ is None else environ

        def get(name, conv):
            raw = env.get(name)
            return conv(raw) if raw not in (None, "") else None

        return cls(get("CROSSNUM_MAX_NODES", int), get("CROSSNUM_MAX_SECONDS", float),
                   get("CROSSNUM_MAX_LENGTH", int))

    def to_dict(self) -> dict:
        return {"max_nodes": self.max_nodes, "max_seconds": self.max_seconds,
                "max_length": self.max_length}

    @classmethod
    def from_dict(cls, data: dict) -> SearchLimits:
        return cls(data.get("max_nodes"), data.get("max_seconds"), data.get("max_length"))


class SearchLimitExceeded(RuntimeError):
    """A search stopped on a resource limit; ``outcome`` holds the partial result."""

    def __init__(self, reason: str, outcome: SearchOutcome | None = None):
        super().__init__(f"search limit exceeded: {reason}")
        self.reason = reason
        self.outcome = outcome


@dataclass
class SearchOutcome:
    group: GroupSpec
    scale: int
    best: dict[str, int]
    witnesses: dict[str, list[Sequence]]
    nodes: int = 0
    partial: bool = False
    reason: str | None = None
    anomalies: int = 0
    stats: dict = field(default_factory=dict)

    def value(self, objective: str) -> Fraction | int:
        if objective == "length":
            return self.best["length"]
        return Fraction(self.best[objective], self.scale)

    def raise_if_partial(self) -> SearchOutcome:
        if self.partial:
            raise SearchLimitExceeded(self.reason or "unknown", self)
        return self


@lru_cache(maxsize=64)
def candidate_ranking(moduli: tuple[int, ...]) -> tuple[int, ...]:
    """Nonzero element indices sorted by (order, index)."""
    orders = _tables(moduli).orders
    return tuple(sorted(range(1, len(orders)), key=lambda i: (orders[i], i)))


def _closing_bound(tab) -> int:
    e = tab.exponent
    return e // smallest_prime_divisor(e) if e > 1 else e


def _dfs(moduli, roots, want, mode, root_best, max_nodes, deadline, max_length):
    """Search the subtrees rooted at the given rank positions, in ascending order.

    Returns ``(best, witnesses, nodes, partial, reason, anomalies)`` where
    ``witnesses[obj]`` holds index paths.
    """
    tab = _tables(moduli)
    n = tab.n
    e = tab.exponent
    w = [e // o for o in tab.orders]
    rank = candidate_ranking(moduli)
    R = len(rank)
    ops = tab.shift_ops
    neg = tab.neg
    negbit = [1 << neg[x] for x in range(n)]
    want_k, want_K, want_len = ("k" in want), ("K" in want), ("length" in want)
    add = tab.add if want_K else None
    wP = _closing_bound(tab)
    full = n - 1
    tie = mode == "all"
    record = mode != "none"

    best_k, best_K, best_len = root_best["k"], root_best["K"], root_best["length"]
    wit_k: list = []
    wit_K: list = []
    wit_len: list = []
    nodes = 0
    partial = False
    reason = None
    anomalies = 0
    path = [0] * (n + 2)

    for r in roots:
        x = rank[r]
        A = 1 | (1 << x)
        stack = [(0, r, A, 0, w[x], x, full * w[x], full)]
        while stack:
            depth, j, A, P, kv, sg, kb, lb = stack.pop()
            if not ((want_k and (kb > best_k or (tie and kb == best_k)))
                    or (want_K and (kb + wP > best_K or (tie and kb + wP == best_K)))
                    or (want_len and (lb > best_len or (tie and lb == best_len)))):
                continue
            nodes += 1
            if max_nodes is not None and nodes > max_nodes:
                return (dict(k=best_k, K=best_K, length=best_len),
                        dict(k=wit_k, K=wit_K, length=wit_len), nodes, True, "max_nodes", anomalies)
            if deadline is not None and not nodes & 1023 and time.time() > deadline:
                return (dict(k=best_k, K=best_K, length=best_len),
                        dict(k=wit_k, K=wit_K, length=wit_len), nodes, True, "max_seconds", anomalies)
            path[depth] = rank[j]
            ln = depth + 1

            if want_k:
                if kv > best_k:
                    best_k = kv
                    wit_k = [path[:ln]] if record else []
                elif tie and kv == best_k:
                    wit_k.append(path[:ln])
            if want_K:
                if (P >> sg) & 1:
                    anomalies += 1
                else:
                    val = kv + w[sg]
                    if val > best_K:
                        best_K = val
                        wit_K = [path[:ln] + [neg[sg]]] if record else []
                    elif tie and val == best_K:
                        wit_K.append(path[:ln] + [neg[sg]])
            if want_len:
                if ln > best_len:
                    best_len = ln
                    wit_len = [path[:ln]] if record else []
                elif tie and ln == best_len:
                    wit_len.append(path[:ln])

            rem = full - (A.bit_count() - 1)
            len_ok = want_len and (ln + rem > best_len or (tie and ln + rem == best_len))
            children = []
            for jj in range(j, R):
                y = rank[jj]
                ckb = kv + rem * w[y]
                if not (len_ok
                        or (want_k and (ckb > best_k or (tie and ckb == best_k)))
                        or (want_K and (ckb + wP > best_K or (tie and ckb + wP == best_K)))):
                    break
                if A & negbit[y]:
                    continue
                B = A
                for s, rr, hi, lo in ops[y]:
                    B = ((B << s) & hi) | ((B >> rr) & lo)
                B |= A
                if want_K:
                    Q = P
                    for s, rr, hi, lo in ops[y]:
                        Q = ((Q << s) & hi) | ((Q >> rr) & lo)
                    Q |= (A & ~1) | (1 << y)
                    children.append((ln, jj, B, Q, kv + w[y], add[sg][y], ckb, ln + rem))
                else:
                    children.append((ln, jj, B, 0, kv + w[y], sg, ckb, ln + rem))
            if children:
                if max_length is not None and ln >= max_length:
                    partial = True
                    reason = "max_length"
                    continue
                stack.extend(reversed(children))

    return (dict(k=best_k, K=best_K, length=best_len),
            dict(k=wit_k, K=wit_K, length=wit_len), nodes, partial, reason, anomalies)


def _root_values(tab) -> dict[str, int]:
    # empty S: k = 0, length 0; closing gives the one-term sequence (0) with k = 1
    return {"k": 0, "K": tab.exponent, "length": 0}


def search(G: GroupSpec, objectives=("k",), *, witnesses: str = "first",
           limits: SearchLimits | None = None, workers: int = 1,
           executor: ProcessPoolExecutor | None = None) -> SearchOutcome:
    """Exact maxima of the requested objectives over zero-sum free sequences of ``G``.

    ``witnesses`` is ``"none"``, ``"first"`` (the first optimum in search order)
    or ``"all"`` (every optimum, sorted by canonical key).  A resource limit
    never truncates silently: the outcome carries ``partial=True``.
    With ``workers > 1`` root branches run in ``executor`` (or a fresh pool).
    """
    objectives = tuple(objectives)
    for o in objectives:
        if o not in OBJECTIVES:
            raise ValueError(f"unknown objective {o!r}")
    if witnesses not in WITNESS_MODES:
        raise ValueError(f"unknown witness mode {witnesses!r}")
    G.check_size()
    limits = limits or SearchLimits()
    tab = G.tables
    moduli = G.moduli
    R = len(candidate_ranking(moduli))
    root_best = _root_values(tab)
    deadline = time.time() + limits.max_seconds if limits.max_seconds is not None else None
    root_paths = {"k": [], "K": [0], "length": []}

    if workers <= 1 or R <= 1:
        chunks = [list(range(R))]
    else:
        chunks = [list(range(t, R, workers)) for t in range(min(workers, R))]
    args = [(moduli, chunk, objectives, witnesses, root_best, limits.max_nodes, deadline,
             limits.max_length) for chunk in chunks]
    if len(chunks) == 1:
        results = [_dfs(*args[0])]
    elif executor is not None:
        results = list(executor.map(_dfs, *zip(*args)))
    else:
        with ProcessPoolExecutor(max_workers=len(chunks)) as pool:
            results = list(pool.map(_dfs, *zip(*args)))

    best = {}
    wits: dict[str, list[Sequence]] = {}
    pos_of = {x: r for r, x in enumerate(candidate_ranking(moduli))}
    for o in objectives:
        top = max([root_best[o]] + [res[0][o] for res in results])
        best[o] = top
        if witnesses == "none":
            wits[o] = []
            continue
        paths = []
        if top == root_best[o]:
            paths.append(root_paths[o])
        if witnesses == "first":
            if not paths:
                firsts = [res[1][o][0] for res in results if res[0][o] == top and res[1][o]]
                paths = [min(firsts, key=lambda p: pos_of[p[0]])] if firsts else []
        else:
            for res in results:
                if res[0][o] == top:
                    paths.extend(res[1][o])
        seqs = {}
        for p in paths:
            S = Sequence.from_indices(G, p)
            seqs.setdefault(S.key, S)
        wits[o] = [seqs[k] for k in sorted(seqs)] if witnesses == "all" else list(seqs.values())

    partial = any(res[3] for res in results)
    reasons = sorted({res[4] for res in results if res[4]})
    return SearchOutcome(
        group=G, scale=tab.exponent, best=best, witnesses=wits,
        nodes=sum(res[2] for res in results), partial=partial,
        reason=",".join(reasons) or None, anomalies=sum(res[5] for res in results),
    )


def iter_zero_sum_free(G: GroupSpec, max_length: int | None = None,
                       include_empty: bool = True) -> Iterator[Sequence]:
    """Every zero-sum free sequence over ``G`` (optionally length-capped), in search order."""
    tab = G.tables
    rank = candidate_ranking(G.moduli)
    negbit = [1 << x for x in tab.neg]
    if include_empty:
        yield Sequence.empty(G)
    stack = [((rank[r],), r, 1 | (1 << rank[r])) for r in reversed(range(len(rank)))]
    while stack:
        path, j, A = stack.pop()
        yield Sequence.from_indices(G, path)
        if max_length is not None and len(path) >= max_length:
            continue
        children = []
        for jj in range(j, len(rank)):
            y = rank[jj]
            if not A & negbit[y]:
                children.append((path + (y,), jj, A | tab.translate(A, y)))
        stack.extend(reversed(children))
