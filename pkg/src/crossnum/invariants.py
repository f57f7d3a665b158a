"""Exact group invariants: cross numbers, Davenport, eta, s and Girard constants.

The maximisation problems run on :func:`crossnum.search.search`.  The
length thresholds (eta, s, Girard) use a separate exhaustive search for the
longest sequence avoiding a forbidden subsum pattern, tracked as one bitmap
of attainable sums per subsequence length.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .groups import GroupError, GroupSpec, divisors, smallest_prime_divisor
from .search import SearchLimitExceeded, SearchLimits, SearchOutcome, search
from .sequences import Sequence, terms_to_list
from .sumsets import is_minimal_zero_sum, is_zero_sum_free


def frac_dict(x: Fraction | int) -> dict:
    x = Fraction(x)
    return {"num": x.numerator, "den": x.denominator}


def frac_from(d: dict) -> Fraction:
    return Fraction(int(d["num"]), int(d["den"]))


# -- closed forms --------------------------------------------------------------

def k_star(G: GroupSpec) -> Fraction:
    """Sum of ``1 - 1/p^a`` over the canonical components."""
    return _k_star(G.moduli)


@lru_cache(maxsize=1024)
def _k_star(moduli: tuple[int, ...]) -> Fraction:
    return sum((1 - Fraction(1, m) for m in moduli), Fraction(0))


def K_star(G: GroupSpec) -> Fraction:
    return k_star(G) + Fraction(1, G.exponent)


def divisor_sum_ratio(n: int) -> Fraction:
    """``sum_{d | n} 1/d``, i.e. ``sigma(n)/n``."""
    return sum((Fraction(1, d) for d in divisors(n)), Fraction(0))


def is_wide(p: int, n: int) -> bool:
    """``p`` does not divide ``n`` and ``p/(p-1) >= sigma(n)/n``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return n % p != 0 and Fraction(p, p - 1) >= divisor_sum_ratio(n)


def is_two_small(p: int, n: int) -> bool:
    """``p`` does not divide ``n`` and ``(2p+2)/(2p+1) > sigma(n)/n`` (strict)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return n % p != 0 and Fraction(2 * p + 2, 2 * p + 1) > divisor_sum_ratio(n)


# -- cross numbers via the search engine ----------------------------------------

def _limits(limits: SearchLimits | None) -> SearchLimits:
    return limits if limits is not None else SearchLimits.from_env()


def little_cross_number(G: GroupSpec, limits: SearchLimits | None = None, *,
                        witnesses: str = "all", workers: int = 1,
                        strict: bool = True) -> tuple[Fraction, list[Sequence]]:
    """``k(G)`` and its maximising zero-sum free sequences.

    With ``strict`` a partial search raises :class:`SearchLimitExceeded`.
    """
    out = search(G, ("k",), witnesses=witnesses, limits=_limits(limits), workers=workers)
    if strict:
        out.raise_if_partial()
    return out.value("k"), out.witnesses["k"]


def big_cross_number(G: GroupSpec, limits: SearchLimits | None = None, *,
                     witnesses: str = "all", workers: int = 1,
                     strict: bool = True) -> tuple[Fraction, list[Sequence]]:
    """``K(G)`` and its maximising minimal zero-sum sequences (``K(trivial) = 1``)."""
    out = search(G, ("K",), witnesses=witnesses, limits=_limits(limits), workers=workers)
    if strict:
        out.raise_if_partial()
    return out.value("K"), out.witnesses["K"]


def davenport(G: GroupSpec, limits: SearchLimits | None = None, *, workers: int = 1) -> int:
    """``D(G)``: one more than the longest zero-sum free sequence."""
    return _davenport_cached(G.canonical) if limits is None and workers == 1 else \
        _davenport(G, limits, workers)


def _davenport(G: GroupSpec, limits, workers) -> int:
    out = search(G, ("length",), witnesses="none", limits=_limits(limits), workers=workers)
    out.raise_if_partial()
    return out.value("length") + 1


@lru_cache(maxsize=256)
def _davenport_cached(canonical) -> int:
    return _davenport(GroupSpec.from_canonical(canonical), None, 1)


# -- avoidance searches (eta, s, Girard) ----------------------------------------

def longest_avoiding(G: GroupSpec, candidates: list[int], bad: int, *,
                     max_sub_len: int | None = None, exact_len: bool = False,
                     cap: int | None = None,
                     limits: SearchLimits | None = None) -> tuple[int, Sequence]:
    """Longest sequence over ``candidates`` with no forbidden subsum.

    A nonempty subsequence ``T`` is forbidden when ``sigma(T)`` lies in the
    bitmap ``bad`` and ``|T| <= max_sub_len`` (or ``|T| == max_sub_len`` when
    ``exact_len``); ``max_sub_len=None`` means any length.  Returns the length
    and one longest sequence.
    """
    limits = _limits(limits)
    tab = G.tables
    cap = G.order * G.exponent if cap is None else cap
    cands = sorted(set(candidates))
    layered = max_sub_len is not None
    L = max_sub_len if layered else 1
    if layered and L < 1:
        return 0, Sequence.empty(G)

    def violates(layers) -> bool:
        if exact_len:
            return bool(layers[L] & bad)
        return any(layer & bad for layer in layers[1:])

    best_len = 0
    best_path: tuple[int, ...] = ()
    nodes = 0
    start = (1,) + (0,) * L
    stack = [((), 0, start)]
    while stack:
        path, j, layers = stack.pop()
        nodes += 1
        if limits.max_nodes is not None and nodes > limits.max_nodes:
            raise SearchLimitExceeded("max_nodes")
        if len(path) > best_len:
            best_len, best_path = len(path), path
        if len(path) >= cap:
            raise SearchLimitExceeded("length cap")
        children = []
        for jj in range(j, len(cands)):
            x = cands[jj]
            if layered:
                new = [1] + [layers[l] | tab.translate(layers[l - 1], x) for l in range(1, L + 1)]
            else:
                new = [1, layers[1] | (1 << x) | tab.translate(layers[1], x)]
            if not violates(new):
                children.append((path + (x,), jj, tuple(new)))
        stack.extend(reversed(children))
    return best_len, Sequence.from_indices(G, best_path)


def eta(G: GroupSpec, limits: SearchLimits | None = None) -> int:
    """Smallest ``l`` such that every length-``l`` sequence has a zero-sum subsequence of length in ``[1, exp G]``."""
    G.check_size()
    if G.is_trivial:
        return 1
    n, _ = longest_avoiding(G, list(range(G.order)), 1, max_sub_len=G.exponent, limits=limits)
    return n + 1


def s_egz(G: GroupSpec, limits: SearchLimits | None = None, *, max_rank: int = 2) -> int:
    """Smallest ``l`` such that every length-``l`` sequence has a zero-sum subsequence of length exactly ``exp G``."""
    G.check_size()
    if G.rank() > max_rank:
        raise GroupError(f"s(G) search limited to rank <= {max_rank}")
    if G.is_trivial:
        return 1
    n, _ = longest_avoiding(G, list(range(G.order)), 1, max_sub_len=G.exponent,
                            exact_len=True, limits=limits)
    return n + 1


@dataclass(frozen=True)
class GirardParams:
    d_prime: int
    d: int
    n: tuple[int, ...]
    A: tuple[int, ...]
    B: tuple[int, ...]
    v: tuple[int, ...]

    def to_dict(self) -> dict:
        return {"d_prime": self.d_prime, "d": self.d, "n": list(self.n),
                "A": list(self.A), "B": list(self.B), "v": list(self.v)}


def _check_girard(G: GroupSpec, d_prime: int, d: int) -> None:
    if d_prime < 1 or d < 1 or d % d_prime or G.exponent % d:
        raise GroupError(f"need d' | d | exp(G); got d'={d_prime}, d={d}, exp={G.exponent}")


def girard_pairs(G: GroupSpec) -> list[tuple[int, int]]:
    """Every admissible ``(d', d)`` with ``d' | d | exp(G)``."""
    return [(dp, d) for d in divisors(G.exponent) for dp in divisors(d)]


def girard_params(G: GroupSpec, d_prime: int, d: int) -> GirardParams:
    _check_girard(G, d_prime, d)
    ns = tuple(G.invariant_factors())
    A = tuple(math.gcd(d_prime, n) for n in ns)
    B = tuple(math.lcm(d, n) // math.lcm(d_prime, n) for n in ns)
    v = tuple(a // math.gcd(a, b) for a, b in zip(A, B))
    return GirardParams(d_prime, d, ns, A, B, v)


def girard_formula(G: GroupSpec, d_prime: int, d: int) -> tuple[int, GirardParams]:
    """``D(C_{v_1} + ... + C_{v_r})`` from the invariant factors of ``G``."""
    params = girard_params(G, d_prime, d)
    H = GroupSpec.from_factors([v for v in params.v if v > 1])
    return davenport(H), params


def _girard_setup(G: GroupSpec, d_prime: int, d: int):
    _check_girard(G, d_prime, d)
    G.check_size()
    tab = G.tables
    cand_mask = tab.subgroup_mask(d)
    candidates = [i for i in range(G.order) if (cand_mask >> i) & 1]
    return candidates, tab.subgroup_mask(d // d_prime)


def girard_bruteforce_D(G: GroupSpec, d_prime: int, d: int,
                        limits: SearchLimits | None = None) -> int:
    """Smallest ``t``: every length-``t`` sequence over ``G_d`` has a nonempty subsequence summing into ``G_{d/d'}``."""
    candidates, bad = _girard_setup(G, d_prime, d)
    n, _ = longest_avoiding(G, candidates, bad, limits=limits)
    return n + 1


def girard_bruteforce_eta(G: GroupSpec, d_prime: int, d: int,
                          limits: SearchLimits | None = None) -> int:
    """As :func:`girard_bruteforce_D` but the subsequence must have length at most ``d'``."""
    candidates, bad = _girard_setup(G, d_prime, d)
    n, _ = longest_avoiding(G, candidates, bad, max_sub_len=d_prime, limits=limits)
    return n + 1


# -- reports ---------------------------------------------------------------------

@dataclass
class InvariantReport:
    group: GroupSpec
    k_little: Fraction
    k_big: Fraction
    k_star: Fraction
    K_star: Fraction
    davenport: int | None = None
    eta: int | None = None
    s_egz: int | None = None
    witnesses_k: list[Sequence] = field(default_factory=list)
    witnesses_K: list[Sequence] = field(default_factory=list)
    conjecture_k: bool = False
    conjecture_K: bool = False
    sandwich_ok: bool = False
    witnesses_ok: bool = False
    partial: bool = False
    partial_reason: str | None = None
    nodes: int = 0

    @property
    def violation(self) -> bool:
        """A complete report whose exact values contradict a checked statement."""
        return not self.partial and not (self.conjecture_k and self.conjecture_K
                                         and self.sandwich_ok and self.witnesses_ok)

    def to_dict(self) -> dict:
        """JSON-ready form; excludes run metadata (node counts) so output is reproducible."""
        out = {
            "group": self.group.text(),
            "order": self.group.order,
            "exponent": self.group.exponent,
            "k": frac_dict(self.k_little),
            "K": frac_dict(self.k_big),
            "k_star": frac_dict(self.k_star),
            "K_star": frac_dict(self.K_star),
            "verdicts": {"conjecture_k": self.conjecture_k, "conjecture_K": self.conjecture_K,
                         "sandwich_ok": self.sandwich_ok, "witnesses_ok": self.witnesses_ok},
            "witnesses": {"k": [terms_to_list(S) for S in self.witnesses_k],
                          "K": [terms_to_list(U) for U in self.witnesses_K]},
            "partial": self.partial,
        }
        if self.partial_reason:
            out["partial_reason"] = self.partial_reason
        for name in ("davenport", "eta", "s_egz"):
            value = getattr(self, name)
            if value is not None:
                out[name] = value
        return out


def sandwich_holds(G: GroupSpec, k: Fraction, K: Fraction) -> bool:
    """``k + 1/exp <= K <= k + 1/P^-(exp)``; vacuous for the trivial group."""
    if G.is_trivial:
        return True
    e = G.exponent
    return k + Fraction(1, e) <= K <= k + Fraction(1, smallest_prime_divisor(e))


def verify_witnesses(k: Fraction, K: Fraction, wk: list[Sequence], wK: list[Sequence]) -> bool:
    ok = all(is_zero_sum_free(S) and S.cross_number() == k for S in wk)
    return ok and all(is_minimal_zero_sum(U) and U.cross_number() == K for U in wK)


def conjecture_verdict(G: GroupSpec, limits: SearchLimits | None = None, *,
                       witnesses: str = "first", workers: int = 1,
                       with_: tuple[str, ...] = (), executor=None) -> InvariantReport:
    """Full report: exact ``k``, ``K``, the closed forms, sandwich and witness checks.

    A resource limit marks the report partial instead of raising.  ``with_``
    may request ``"davenport"``, ``"eta"`` and ``"s_egz"``.
    """
    G.check_size()
    objectives = ("k", "K", "length") if "davenport" in with_ else ("k", "K")
    out: SearchOutcome = search(G, objectives, witnesses=witnesses, limits=_limits(limits),
                                workers=workers, executor=executor)
    k, K = out.value("k"), out.value("K")
    ks, Ks = k_star(G), K_star(G)
    report = InvariantReport(
        group=G, k_little=k, k_big=K, k_star=ks, K_star=Ks,
        witnesses_k=out.witnesses["k"], witnesses_K=out.witnesses["K"],
        conjecture_k=k == ks, conjecture_K=K == Ks, sandwich_ok=sandwich_holds(G, k, K),
        partial=out.partial, partial_reason=out.reason, nodes=out.nodes,
    )
    report.witnesses_ok = out.anomalies == 0 and verify_witnesses(
        k, K, report.witnesses_k, report.witnesses_K)
    if "davenport" in with_ and not out.partial:
        report.davenport = out.value("length") + 1
    if "eta" in with_:
        report.eta = eta(G, limits)
    if "s_egz" in with_:
        report.s_egz = s_egz(G, limits)
    return report
