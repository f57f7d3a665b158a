"""Executable versions of the structural arguments about dense and extremal sequences.

Everything here works on concrete groups and sequences: counting checks on
dense sequences, the replacement sequence ``S_1``, the classification of
orders divisible by ``p^a``, the floor-sum inequalities, and the
projection-merge pipelines that push a sequence into a primary component by
amalgamating blocks whose projection is a zero-sum.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import NamedTuple

from .groups import GroupError, GroupSpec, divisors
from .invariants import (K_star, big_cross_number, eta, frac_dict, girard_bruteforce_D,
                         is_two_small, is_wide, k_star, little_cross_number)
from .search import SearchLimits
from .sequences import Sequence, terms_to_list
from .sumsets import is_minimal_zero_sum, is_zero_sum_free, subsums


class HypothesisError(ValueError):
    """The hypotheses of a checked statement are not met; this is not a verdict."""


def _vp(n: int, p: int) -> int:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def _count_order(S: Sequence, order: int) -> int:
    orders = S.group.tables.orders
    return sum(m for i, m in S.terms if orders[i] == order)


def _smallest_prime(G: GroupSpec) -> int:
    if G.is_trivial:
        raise HypothesisError("trivial group has no primes")
    return G.primes[0]


def _cofactor(G: GroupSpec, p: int) -> int:
    """``exp(G) / p^{a_{p,1}}``: the product of the other primary exponents."""
    return G.exponent // p ** G.a(p, 1)


# -- dense sequences and counting bounds ----------------------------------------

def dense_sequences(G: GroupSpec, limits: SearchLimits | None = None, *,
                    workers: int = 1) -> list[Sequence]:
    """Zero-sum free sequences of maximal cross number and, among those, minimal length."""
    _, optimal = little_cross_number(G, limits, witnesses="all", workers=workers)
    if not optimal:
        return []
    shortest = min(len(S) for S in optimal)
    return [S for S in optimal if len(S) == shortest]


def _require_zsf(S: Sequence) -> None:
    if not is_zero_sum_free(S):
        raise HypothesisError("sequence is not zero-sum free")


def _require_order_param(G: GroupSpec, l: int) -> None:
    if l < 1 or G.exponent % l:
        raise HypothesisError(f"order {l} does not divide exp(G) = {G.exponent}")


@lru_cache(maxsize=None)
def eta_elementary(p: int, n: int) -> int:
    """``eta(C_p^n)`` by exhaustive search (order cap applies)."""
    return eta(GroupSpec.from_factors([p] * n))


def check_n_amalgamation_bound(G: GroupSpec, S: Sequence, p: int, n: int, l: int) -> bool:
    """At most ``eta(C_p^n) - 1`` terms of order ``l`` in a dense ``S``.

    Hypotheses: ``a_{p,n} > a_{p,n+1}`` and ``p^{a_{p,n+1}+1} | l``.
    """
    if n < 1 or G.a(p, n) <= G.a(p, n + 1):
        raise HypothesisError(f"need a_(p,{n}) > a_(p,{n + 1}) for p={p}")
    if l % p ** (G.a(p, n + 1) + 1):
        raise HypothesisError(f"p^(a_(p,{n + 1})+1) must divide l={l}")
    _require_order_param(G, l)
    _require_zsf(S)
    bound = p - 1 if n == 1 else eta_elementary(p, n) - 1
    return _count_order(S, l) <= bound


def check_amalgamation_bound(G: GroupSpec, S: Sequence, p: int, l: int) -> bool:
    """At most ``p - 1`` terms of order ``l``; needs ``a_{p,1} > a_{p,2}`` and ``p^{a_{p,2}+1} | l``."""
    return check_n_amalgamation_bound(G, S, p, 1, l)


def check_2_amalgamation_bound(G: GroupSpec, S: Sequence, p: int, l: int) -> bool:
    """At most ``3p - 3`` terms of order ``l``; needs ``a_{p,2} > a_{p,3}`` and ``p^{a_{p,3}+1} | l``.

    Same statement as :func:`check_n_amalgamation_bound` with ``n = 2`` but
    using the rank-two value ``eta(C_p^2) = 3p - 2`` instead of a search.
    """
    if G.a(p, 2) <= G.a(p, 3):
        raise HypothesisError(f"need a_(p,2) > a_(p,3) for p={p}")
    if l % p ** (G.a(p, 3) + 1):
        raise HypothesisError(f"p^(a_(p,3)+1) must divide l={l}")
    _require_order_param(G, l)
    _require_zsf(S)
    return _count_order(S, l) <= 3 * p - 3


def check_1_replacement(G: GroupSpec, S: Sequence, a: int) -> bool:
    """At least ``p - 1`` terms of order ``p^a`` for the smallest prime ``p``.

    Hypotheses: ``a_{p,1} > a_{p,2}``, ``a`` in ``[a_{p,2}+1, a_{p,1}]`` and ``p``
    wide with respect to the product of the other primary exponents.
    """
    p = _smallest_prime(G)
    a1, a2 = G.a(p, 1), G.a(p, 2)
    if not a1 > a2:
        raise HypothesisError("need a_(1,1) > a_(1,2)")
    if not a2 + 1 <= a <= a1:
        raise HypothesisError(f"a={a} outside [{a2 + 1}, {a1}]")
    if not is_wide(p, _cofactor(G, p)):
        raise HypothesisError(f"{p} is not wide with respect to {_cofactor(G, p)}")
    _require_zsf(S)
    return _count_order(S, p**a) >= p - 1


def check_2_replacement(G: GroupSpec, S: Sequence, a: int) -> bool:
    """At least ``2p - 2`` terms of order ``p^a`` for the smallest prime ``p``.

    Hypotheses: ``a_{p,2} > a_{p,3}``, ``a`` in ``[a_{p,3}+1, a_{p,2}]`` and ``p``
    2-small with respect to the product of the other primary exponents.
    """
    p = _smallest_prime(G)
    a2, a3 = G.a(p, 2), G.a(p, 3)
    if not a2 > a3:
        raise HypothesisError("need a_(1,2) > a_(1,3)")
    if not a3 + 1 <= a <= a2:
        raise HypothesisError(f"a={a} outside [{a3 + 1}, {a2}]")
    if not is_two_small(p, _cofactor(G, p)):
        raise HypothesisError(f"{p} is not 2-small with respect to {_cofactor(G, p)}")
    _require_zsf(S)
    return _count_order(S, p**a) >= 2 * p - 2


# -- the replacement sequence S_1 -----------------------------------------------

@dataclass(frozen=True)
class ReplacementS1:
    sequence: Sequence
    p: int
    a: int
    cross_number: Fraction
    closed_form: Fraction


def build_replacement_S1(G: GroupSpec, a: int, p: int | None = None) -> ReplacementS1:
    """``prod_k (p^k e1)^{p-1} * prod_l (p^l e2)^{p-1}`` with ``e1, e2`` the two largest p-generators."""
    p = _smallest_prime(G) if p is None else p
    comps = G.components_of(p)
    if len(comps) < 2:
        raise HypothesisError(f"the {p}-primary component has rank < 2")
    a1, a2 = G.a(p, 1), G.a(p, 2)
    if not 1 <= a <= a2:
        raise HypothesisError(f"a={a} outside [1, {a2}]")
    k = len(G.moduli)
    terms = []
    for comp, top in ((comps[0], a1), (comps[1], a2)):
        for s in range(top - a + 1):
            coords = [0] * k
            coords[comp] = p**s
            terms += [G.element(coords).index] * (p - 1)
    S1 = Sequence.from_indices(G, terms)
    closed = sum((Fraction(2 * p - 2, p**t) for t in range(a, a2 + 1)), Fraction(0))
    closed += sum((Fraction(p - 1, p**t) for t in range(a2 + 1, a1 + 1)), Fraction(0))
    return ReplacementS1(S1, p, a, S1.cross_number(), closed)


def subsum_orders_divisible(S: Sequence, m: int) -> bool:
    """Every nonempty subsequence sum has order divisible by ``m``."""
    orders = S.group.tables.orders
    bits = subsums(S).attainable
    i = 0
    while bits:
        if bits & 1 and orders[i] % m:
            return False
        bits >>= 1
        i += 1
    return True


# -- classification of orders divisible by p^a ----------------------------------

@dataclass
class OrderClassLedger:
    p: int
    a: int
    counts: dict[int, int]
    full: dict[int, bool]
    D1: list[int]
    D2: list[int]
    D3: list[int]
    D4: list[int]
    identities: dict[str, bool]
    girard: dict[int, int] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.identities.values())

    def to_dict(self) -> dict:
        return {
            "p": self.p, "a": self.a,
            "counts": {str(d): c for d, c in self.counts.items()},
            "full": {str(d): f for d, f in self.full.items()},
            "D1": self.D1, "D2": self.D2, "D3": self.D3, "D4": self.D4,
            "identities": self.identities,
            "girard_D": {str(d): v for d, v in self.girard.items()},
        }


def classify_full_orders(S: Sequence, p: int, a: int, *, check_girard: bool = False) -> OrderClassLedger:
    """Split ``{d : p^a | d | exp G}`` into ``{p^a}``, D1 (full), D2, D3, D4.

    ``d`` is full when ``p^a || d`` and ``2p-1 <= |S_d| <= 3p-3``.  The three
    set identities are evaluated, not assumed.  With ``check_girard`` the
    value ``D_(p,d)(G)`` is brute-forced for every ``d`` with ``p^a || d``.
    """
    G = S.group
    e = G.exponent
    pa = p**a
    a2 = G.a(p, 2)
    ds = [d for d in divisors(e) if d % pa == 0]
    counts = {d: _count_order(S, d) for d in ds}
    exact = [d for d in ds if _vp(d, p) == a]
    full = {d: (d in exact and 2 * p - 1 <= counts[d] <= 3 * p - 3) for d in ds}
    D1 = [d for d in ds if full[d]]
    D2 = [d for d in exact if not full[d] and d != pa]
    D3 = [d for d in ds if d % (pa * p) == 0 and d % p ** (a2 + 1)]
    D4 = [d for d in ds if d % p ** (a2 + 1) == 0]

    def disjoint_union(*parts) -> set[int] | None:
        seen: set[int] = set()
        for part in parts:
            if seen & set(part):
                return None
            seen |= set(part)
        return seen

    head = [pa] if pa in ds else []
    identities = {
        "all": disjoint_union(head, D1, D2, D3, D4) == set(ds),
        "below_a2": disjoint_union(head, D1, D2, D3) == {d for d in ds if d % p ** (a2 + 1)},
        "exact": disjoint_union(head, D1, D2) == set(exact),
    }
    ledger = OrderClassLedger(p, a, counts, full, D1, D2, D3, D4, identities)
    if check_girard:
        ledger.girard = {d: girard_bruteforce_D(G, p, d) for d in exact}
    return ledger


# -- floor-sum inequalities -------------------------------------------------------

class FloorSumResult(NamedTuple):
    lhs: Fraction
    rhs: Fraction
    is_tight: bool

    @property
    def holds(self) -> bool:
        return self.lhs >= self.rhs


def floor_sum_partials(t: list[Fraction]) -> list[Fraction]:
    """``s_1 = t_1``, ``s_i = {s_(i-1)} + t_i``."""
    s: list[Fraction] = []
    for ti in t:
        s.append(Fraction(ti) if not s else (s[-1] - math.floor(s[-1])) + ti)
    return s


def _check_floor_inputs(t, p: int, b: int) -> list[Fraction]:
    t = [Fraction(x) for x in t]
    if not t:
        raise HypothesisError("t must be nonempty")
    if p < 2 or b < 1:
        raise HypothesisError("need p >= 2 and b >= 1")
    if any((x * b).denominator != 1 for x in t):
        raise HypothesisError("b * t_i must be an integer for every i")
    return t


def floor_sum_bound1(t, p: int, b: int) -> FloorSumResult:
    """``sum floor(s_i)/p^i`` against ``sum t_i/p^i + (1/b - 1)/p``; tight means equality."""
    t = _check_floor_inputs(t, p, b)
    s = floor_sum_partials(t)
    lhs = sum((Fraction(math.floor(x), p**i) for i, x in enumerate(s, 1)), Fraction(0))
    rhs = sum((x / p**i for i, x in enumerate(t, 1)), Fraction(0)) + (Fraction(1, b) - 1) / p
    return FloorSumResult(lhs, rhs, lhs == rhs)


def floor_sum_bound2(t, p: int, b: int) -> FloorSumResult:
    """Variant for integral ``s_n``: the constant becomes ``(1/p - 1/p^n)(1/b - 1)``."""
    t = _check_floor_inputs(t, p, b)
    s = floor_sum_partials(t)
    if s[-1].denominator != 1:
        raise HypothesisError("s_n must be an integer")
    n = len(t)
    lhs = sum((Fraction(math.floor(x), p**i) for i, x in enumerate(s, 1)), Fraction(0))
    rhs = sum((x / p**i for i, x in enumerate(t, 1)), Fraction(0))
    rhs += (Fraction(1, p) - Fraction(1, p**n)) * (Fraction(1, b) - 1)
    return FloorSumResult(lhs, rhs, lhs == rhs)


def floor_condition1(t, b: int) -> bool:
    return all((x + Fraction(1, b)).denominator == 1 for x in floor_sum_partials(t))


def floor_condition2(t, b: int) -> bool:
    return all((x + Fraction(1, b)).denominator == 1 for x in floor_sum_partials(t)[:-1])


# -- projection-merge pipelines ---------------------------------------------------

def _cyclic_cross(values: list[int], n: int) -> Fraction:
    """Cross number of a sequence of residues in ``C_n`` (the residue 0 counts 1)."""
    return Fraction(sum(math.gcd(v, n) for v in values), n)


def first_minimal_zero_sum(values: list[int], n: int) -> tuple[int, ...] | None:
    """Lexicographically first minimal zero-sum sub-multiset of ``values`` in ``C_n``.

    Every minimal zero-sum multiset is its zero-sum free part plus one largest
    closing term, so sorted zero-sum free prefixes are extended by ``-sigma``
    whenever that residue is still available and not smaller than the prefix.
    """
    avail = Counter(v % n for v in values)
    if avail.get(0):
        return (0,)
    keys = sorted(avail)
    mask = (1 << n) - 1
    best: tuple[int, ...] | None = None
    stack: list[tuple[tuple[int, ...], int, int, int]] = [((), 0, 1, 0)]
    while stack:
        prefix, j, sums, total = stack.pop()
        if best is not None and prefix > best:
            continue
        if prefix:
            close = (-total) % n
            if close >= prefix[-1] and avail.get(close, 0) > prefix.count(close):
                cand = prefix + (close,)
                if best is None or cand < best:
                    best = cand
        for jj in range(len(keys) - 1, j - 1, -1):
            v = keys[jj]
            if prefix.count(v) >= avail[v]:
                continue
            rot = ((sums << v) | (sums >> (n - v))) & mask
            if rot & 1:
                continue
            stack.append((prefix + (v,), jj, sums | rot, (total + v) % n))
    return best


@dataclass
class MergeStage:
    index: int
    prime: int
    carried: Fraction
    incoming: Fraction
    total: Fraction
    blocks: list[Sequence]
    block_cross: list[Fraction]
    replaced: list[int]
    leftover: list[int]
    leftover_cross: Fraction

    @property
    def count_ok(self) -> bool:
        return len(self.replaced) == math.floor(self.total)

    @property
    def conservation_ok(self) -> bool:
        return self.leftover_cross == self.total - sum(self.block_cross, Fraction(0))

    @property
    def fractional_ok(self) -> bool:
        return self.leftover_cross == self.total - math.floor(self.total)

    @property
    def fractional_lower_ok(self) -> bool:
        return self.leftover_cross >= self.total - math.floor(self.total)

    def to_dict(self, G: GroupSpec) -> dict:
        coords = G.tables.coords
        return {
            "stage": self.index, "prime": self.prime,
            "carried_cross": frac_dict(self.carried), "incoming_cross": frac_dict(self.incoming),
            "total_cross": frac_dict(self.total),
            "blocks": [terms_to_list(B) for B in self.blocks],
            "block_cross": [frac_dict(c) for c in self.block_cross],
            "replaced": [list(coords[i]) for i in self.replaced],
            "leftover": [list(coords[i]) for i in self.leftover],
            "leftover_cross": frac_dict(self.leftover_cross),
            "checks": {"count": self.count_ok, "conservation": self.conservation_ok,
                       "fractional": self.fractional_ok,
                       "fractional_lower": self.fractional_lower_ok},
        }


@dataclass
class ChainStep:
    label: str
    value: Fraction

    def to_dict(self) -> dict:
        return {"label": self.label, "value": frac_dict(self.value)}


@dataclass
class MergeLedger:
    pipeline: str
    kind: str
    primes: tuple[int, ...]
    input: Sequence
    output: Sequence
    stages: list[MergeStage]
    chain: list[ChainStep]
    supplement: tuple[Fraction, Fraction]
    constant: Fraction
    bound: Fraction
    target: Fraction
    kept_part: Sequence
    output_preserved: bool
    kept_in_component: bool

    @property
    def chain_holds(self) -> list[bool]:
        return [a.value >= b.value for a, b in zip(self.chain, self.chain[1:])]

    @property
    def supplement_holds(self) -> bool:
        return self.supplement[0] >= self.supplement[1]

    @property
    def reassembly_ok(self) -> bool:
        """Last chain value plus the supplement's smaller side, minus the constant, is ``k(input)``."""
        return self.chain[-1].value + self.supplement[1] - self.constant == self.input.cross_number()

    @property
    def conclusion_holds(self) -> bool:
        return self.input.cross_number() <= self.bound

    @property
    def recurrences_ok(self) -> bool:
        return all(s.count_ok and s.fractional_ok for s in self.stages)

    @property
    def sound(self) -> bool:
        """The transformation itself behaved: preserved the sequence type and landed in the component."""
        return (self.output_preserved and self.kept_in_component
                and all(s.count_ok and s.conservation_ok for s in self.stages))

    def to_dict(self) -> dict:
        G = self.input.group
        chain_holds = self.chain_holds
        return {
            "pipeline": self.pipeline, "kind": self.kind, "group": G.text(),
            "primes": list(self.primes),
            "input": terms_to_list(self.input), "output": terms_to_list(self.output),
            "input_cross": frac_dict(self.input.cross_number()),
            "output_cross": frac_dict(self.output.cross_number()),
            "stages": [s.to_dict(G) for s in self.stages],
            "inequalities": {
                "chain": [dict(step.to_dict(), holds_vs_next=(chain_holds[i] if i < len(chain_holds) else None))
                          for i, step in enumerate(self.chain)],
                "supplement": {"lhs": frac_dict(self.supplement[0]), "rhs": frac_dict(self.supplement[1]),
                               "holds": self.supplement_holds},
                "constant": frac_dict(self.constant),
                "reassembly_ok": self.reassembly_ok,
                "conclusion": {"lhs": frac_dict(self.input.cross_number()), "rhs": frac_dict(self.bound),
                               "holds": self.conclusion_holds, "target": frac_dict(self.target),
                               "rhs_equals_target": self.bound == self.target},
            },
            "checks": {"output_preserved": self.output_preserved,
                       "kept_in_component": self.kept_in_component,
                       "recurrences_ok": self.recurrences_ok, "sound": self.sound},
        }


def _input_kind(S: Sequence) -> str:
    if is_zero_sum_free(S):
        return "zsf"
    if is_minimal_zero_sum(S):
        return "minimal"
    raise HypothesisError("input is neither zero-sum free nor minimal zero-sum")


def _merge_stage(G: GroupSpec, index: int, prime: int, comp: int, carried_pool: list[int],
                 incoming_pool: list[int]) -> MergeStage:
    """Extract ``floor(k(tau(pool)))`` blocks whose projections are minimal zero-sums."""
    tab = G.tables
    n = G.moduli[comp]
    proj = {i: tab.coords[i][comp] for i in carried_pool + incoming_pool}
    carried = _cyclic_cross([proj[i] for i in carried_pool], n)
    incoming = _cyclic_cross([proj[i] for i in incoming_pool], n)
    total = carried + incoming
    pool = sorted(carried_pool + incoming_pool)
    blocks, block_cross, replaced = [], [], []
    for _ in range(math.floor(total)):
        vals = first_minimal_zero_sum([proj[i] for i in pool], n)
        if vals is None:
            break
        chosen = []
        for v in vals:
            pos = next(k for k, i in enumerate(pool) if proj[i] == v)
            chosen.append(pool.pop(pos))
        B = Sequence.from_indices(G, chosen)
        blocks.append(B)
        block_cross.append(_cyclic_cross(list(vals), n))
        replaced.append(B.sum_index())
    leftover_cross = _cyclic_cross([proj[i] for i in pool], n)
    return MergeStage(index, prime, carried, incoming, total, blocks, block_cross,
                      replaced, pool, leftover_cross)


@lru_cache(maxsize=64)
def _component_cross(canonical) -> tuple[Fraction, Fraction]:
    H = GroupSpec.from_canonical(canonical)
    k, _ = little_cross_number(H, witnesses="none")
    K, _ = big_cross_number(H, witnesses="none")
    return k, K


def _pq_primes(G: GroupSpec, q: int | None) -> tuple[int, int]:
    if len(G.primes) != 2:
        raise GroupError(f"{G} must have exactly two prime divisors")
    cyclic = [r for r in G.primes if len(G.components_of(r)) == 1]
    if q is None:
        if not cyclic:
            raise GroupError(f"{G} has no cyclic primary component")
        q = max(cyclic)
    if q not in cyclic:
        raise GroupError(f"the {q}-primary component of {G} is not cyclic")
    p = next(r for r in G.primes if r != q)
    return p, q


def projection_merge_pq(S: Sequence, q: int | None = None) -> MergeLedger:
    """Merge pipeline over ``H_p + C_{q^m}``, projecting onto the cyclic q-part.

    Terms with trivial q-part form ``S_p``; the rest are split by the p-part
    of their order into ``T_0, ..., T_k``.  Stage ``i`` pools the leftover of
    stage ``i-1`` (``T_0`` at the start) with ``T_i`` and amalgamates
    ``floor`` of the projected cross number many blocks.
    """
    G = S.group
    p, q = _pq_primes(G, q)
    kind = _input_kind(S)
    tab = G.tables
    comp = G.components_of(q)[0]
    qm = G.moduli[comp]
    kexp = G.a(p, 1)
    orders = tab.orders

    Sp: list[int] = []
    T: list[list[int]] = [[] for _ in range(kexp + 1)]
    for i in S.indices():
        if tab.coords[i][comp] == 0:
            Sp.append(i)
        else:
            T[_vp(orders[i], p)].append(i)

    stages = []
    carry = T[0]
    for i in range(1, kexp + 1):
        st = _merge_stage(G, i, q, comp, carry, T[i])
        stages.append(st)
        carry = st.leftover
    Q = [x for st in stages for x in st.replaced]
    R = carry
    output = Sequence.from_indices(G, Sp + Q + R)
    kept = Sequence.from_indices(G, Sp + Q)
    preserved = is_zero_sum_free(output) if kind == "zsf" else is_minimal_zero_sum(output)
    in_component = all(tab.coords[x][comp] == 0 for x in kept.indices())

    Hp = G.primary_component(p)
    kH, KH = _component_cross(Hp.canonical)
    a_p = sum((Fraction(1, orders[i]) for i in Sp), Fraction(0))
    Tcross = [_cyclic_cross([tab.coords[i][comp] for i in Ti], qm) for Ti in T]
    closed = kind == "minimal" and not R
    top = KH if closed else kH
    const = ((Fraction(1, p) - Fraction(1, p**kexp)) if closed else Fraction(1, p)) * (Fraction(1, qm) - 1)
    chain = [
        ChainStep("K(H_p)" if closed else "k(H_p)", top),
        ChainStep("k(S_p Q_1...Q_k)", kept.cross_number()),
        ChainStep("k(S_p) + sum |Q_i|/p^i",
                  a_p + sum((Fraction(len(st.replaced), p**st.index) for st in stages), Fraction(0))),
        ChainStep("floor-sum lower bound",
                  a_p + Tcross[0] / p + sum((Tcross[i] / p**i for i in range(1, kexp + 1)), Fraction(0)) + const),
    ]
    q_part = sum((Fraction(1, orders[i]) for i in T[0]), Fraction(0))
    supplement = ((1 - Fraction(1, qm)) * (1 - Fraction(1, p)), q_part * (p - 1) / p)
    bound = top + supplement[0] - const
    target = K_star(G) if kind == "minimal" else k_star(G)
    return MergeLedger("pq", kind, (p, q), S, output, stages, chain, supplement, const,
                       bound, target, kept, preserved, in_component)


def projection_merge_pqr(S: Sequence, primes: tuple[int, int, int] | None = None) -> MergeLedger:
    """Three-pass merge over ``C_p + C_q + C_r`` (``primes`` fixes the roles, default ascending).

    Pass 1 projects ``S_q S_pq`` onto ``C_q``; pass 2 projects the leftover
    with ``S_qr S_pqr`` onto ``C_q``; pass 3 projects the pass-2 sums with
    ``S_r S_pr`` onto ``C_r``.  The kept part ``S_p Q_1 Q_3`` lies in ``C_p``.
    """
    G = S.group
    if len(G.moduli) != 3 or len(G.primes) != 3 or any(a != 1 for _, a in G.canonical):
        raise GroupError(f"{G} is not a product of three distinct cyclic groups of prime order")
    p, q, r = primes if primes is not None else tuple(G.primes)
    if sorted((p, q, r)) != G.primes:
        raise GroupError(f"primes {primes} do not match {G}")
    kind = _input_kind(S)
    tab = G.tables
    jp, jq, jr = (G.components_of(x)[0] for x in (p, q, r))

    parts: dict[str, list[int]] = {key: [] for key in ("p", "q", "r", "pq", "pr", "qr", "pqr")}
    for i in S.indices():
        c = tab.coords[i]
        key = "".join(name for name, j in (("p", jp), ("q", jq), ("r", jr)) if c[j]) or "p"
        parts[key].append(i)
    a = {key: len(v) for key, v in parts.items()}

    st1 = _merge_stage(G, 1, q, jq, parts["q"], parts["pq"])
    st2 = _merge_stage(G, 2, q, jq, st1.leftover, parts["qr"] + parts["pqr"])
    st3 = _merge_stage(G, 3, r, jr, st2.replaced, parts["r"] + parts["pr"])
    stages = [st1, st2, st3]
    kept = Sequence.from_indices(G, parts["p"] + st1.replaced + st3.replaced)
    R = st2.leftover + st3.leftover
    output = Sequence.from_indices(G, kept.indices() + R)
    preserved = is_zero_sum_free(output) if kind == "zsf" else is_minimal_zero_sum(output)
    in_component = all(tab.coords[x][jq] == 0 and tab.coords[x][jr] == 0 for x in kept.indices())

    F = Fraction
    c1 = F(a["q"] + a["pq"], q)
    frac1 = c1 - math.floor(c1)
    c2_unfloored = frac1 + F(a["qr"] + a["pqr"], q)
    tail = (F(a["p"], p) + F(a["pq"], p * q) + F(a["pr"], p * r) + F(a["pqr"], p * q * r)
            + F(a["q"], p * q) + F(a["r"], p * r) + F(a["qr"], p * q * r))
    closed = kind == "minimal" and not R
    base = F(a["p"], p) + F(math.floor(c1), p)
    if closed:
        const = -F(1, p) * (1 - F(1, q)) * (1 - F(1, r))
        chain = [
            ChainStep("K(C_p)", F(1)),
            ChainStep("k(S_p Q_1 Q_3)", kept.cross_number()),
            ChainStep("a(p)/p + |Q_1|/p + |Q_3|/p", base + F(len(st3.replaced), p)),
            ChainStep("floors removed", base + (c2_unfloored / r + F(a["r"] + a["pr"], r)) / p),
            ChainStep("expanded lower bound", tail + const),
        ]
    else:
        const = F(1, p * q) + F(1, p * r) - F(2, p)
        chain = [
            ChainStep("k(C_p)", 1 - F(1, p)),
            ChainStep("k(S_p Q_1 Q_3)", kept.cross_number()),
            ChainStep("a(p)/p + |Q_1|/p + |Q_3|/p", base + F(len(st3.replaced), p)),
            ChainStep("outer floor bound",
                      base + (F(len(st2.replaced), r) + F(a["r"] + a["pr"], r) + F(1, r) - 1) / p),
            ChainStep("inner floor bound",
                      base + ((c2_unfloored + F(1, q) - 1) / r + F(a["r"] + a["pr"], r) + F(1, r) - 1) / p),
            ChainStep("expanded lower bound", tail + const),
        ]
    supplement = (F(p - 1, p) * (2 - F(1, q) - F(1, r)),
                  F(p - 1, p) * (F(a["q"], q) + F(a["r"], r) + F(a["qr"], q * r)))
    bound = chain[0].value + supplement[0] - const
    target = K_star(G) if kind == "minimal" else k_star(G)
    return MergeLedger("pqr", kind, (p, q, r), S, output, stages, chain, supplement, const,
                       bound, target, kept, preserved, in_component)
