"""Extremal sequences and their decomposition along primary components.

A maximal zero-sum free sequence is expected to split into zero-sum free
pieces, one per primary component; a maximal minimal zero-sum sequence is
expected to be one element ``g`` of order ``exp(G)`` times such pieces.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .groups import GroupElement, GroupSpec, factorize
from .invariants import big_cross_number, frac_dict, little_cross_number
from .search import SearchLimits
from .sequences import Sequence, terms_to_list
from .sumsets import is_minimal_zero_sum, is_zero_sum_free

KINDS = ("zsf", "minimal")


class WitnessError(RuntimeError):
    """A search witness failed independent re-verification."""


def _recheck(seqs: list[Sequence], value: Fraction, kind: str) -> list[Sequence]:
    test = is_zero_sum_free if kind == "zsf" else is_minimal_zero_sum
    for S in seqs:
        if not test(S) or S.cross_number() != value:
            raise WitnessError(f"witness {S} does not re-verify as {kind} with cross number {value}")
    return sorted(seqs, key=lambda S: S.key)


def extremal_zero_sum_free(G: GroupSpec, limits: SearchLimits | None = None, *,
                           workers: int = 1) -> list[Sequence]:
    """Every nonempty zero-sum free sequence with ``k(S) = k(G)``, sorted by key."""
    k, seqs = little_cross_number(G, limits, witnesses="all", workers=workers)
    return _recheck([S for S in seqs if S], k, "zsf")


def extremal_minimal_zero_sum(G: GroupSpec, limits: SearchLimits | None = None, *,
                              workers: int = 1) -> list[Sequence]:
    """Every minimal zero-sum sequence with ``k(U) = K(G)``, sorted by key.

    For cyclic p-groups this includes the one-term sequence ``(0)``.
    """
    K, seqs = big_cross_number(G, limits, witnesses="all", workers=workers)
    return _recheck(seqs, K, "minimal")


def _prime_of(order: int) -> int | None:
    """The prime if ``order`` is a prime power greater than one, else ``None``."""
    f = factorize(order)
    return f[0][0] if len(f) == 1 else None


@dataclass
class StructureVerdict:
    kind: str
    decomposes: bool
    cross_element: GroupElement | None = None
    parts: dict[int, Sequence] = field(default_factory=dict)
    failures: list[GroupElement] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "decomposes": self.decomposes,
            "cross_element": list(self.cross_element.coords) if self.cross_element else None,
            "parts": {str(p): terms_to_list(S) for p, S in self.parts.items()},
            "failures": [list(g.coords) for g in self.failures],
            "notes": self.notes,
        }


def _split_by_prime(G: GroupSpec, indices: list[int]) -> tuple[dict[int, list[int]], list[int]]:
    orders = G.tables.orders
    parts: dict[int, list[int]] = {p: [] for p in G.primes}
    bad = []
    for i in indices:
        p = _prime_of(orders[i])
        if p is None:
            bad.append(i)
        else:
            parts[p].append(i)
    return parts, bad


def classify_structure(S: Sequence, kind: str = "zsf") -> StructureVerdict:
    """Check the primary-component decomposition of ``S``.

    ``zsf``: every term has prime-power order.  ``minimal``: exactly one term
    ``g`` has order with two or more prime divisors, ``ord(g) = exp(G)``, and
    the remaining terms have prime-power order.  Over a p-group the cross
    element is by convention the first term of order ``exp(G)``.
    """
    if kind not in KINDS:
        raise ValueError(f"kind must be one of {KINDS}")
    G = S.group
    tab = G.tables
    orders = tab.orders
    idx = S.indices()
    verdict = StructureVerdict(kind, False)

    if kind == "zsf":
        parts, bad = _split_by_prime(G, idx)
        verdict.parts = {p: Sequence.from_indices(G, v) for p, v in parts.items()}
        verdict.failures = [G.element_at(i) for i in bad]
        verdict.decomposes = not bad
    else:
        e = G.exponent
        if len(G.primes) <= 1:
            verdict.notes.append("single-prime group: cross element chosen by convention")
            top = [i for i in idx if orders[i] == e]
            if not top:
                verdict.failures = [G.element_at(i) for i in idx]
                return _finish(verdict, S)
            g = top[0]
            rest = list(idx)
            rest.remove(g)
            parts, bad = _split_by_prime(G, rest)
        else:
            mixed = [i for i in idx if _prime_of(orders[i]) is None]
            if len(mixed) != 1:
                verdict.failures = [G.element_at(i) for i in mixed]
                verdict.notes.append(f"{len(mixed)} terms of composite order")
                return _finish(verdict, S)
            g = mixed[0]
            rest = list(idx)
            rest.remove(g)
            parts, bad = _split_by_prime(G, rest)
            if orders[g] != e:
                verdict.failures.append(G.element_at(g))
                verdict.notes.append(f"cross element has order {orders[g]}, not exp(G) = {e}")
        verdict.cross_element = G.element_at(g)
        verdict.parts = {p: Sequence.from_indices(G, v) for p, v in parts.items()}
        verdict.failures += [G.element_at(i) for i in bad]
        verdict.decomposes = not verdict.failures
    return _finish(verdict, S)


def _finish(verdict: StructureVerdict, S: Sequence) -> StructureVerdict:
    G = S.group
    for p, part in verdict.parts.items():
        if not part:
            verdict.notes.append(f"empty part for prime {p}")
        elif not is_zero_sum_free(part):
            verdict.decomposes = False
            verdict.notes.append(f"part for prime {p} is not zero-sum free")
    if verdict.decomposes:
        rebuilt = [i for part in verdict.parts.values() for i in part.indices()]
        if verdict.cross_element is not None:
            rebuilt.append(verdict.cross_element.index)
        if Sequence.from_indices(G, rebuilt) != S:
            verdict.decomposes = False
            verdict.notes.append("parts do not reassemble the sequence")
    return verdict


@dataclass
class StructureReport:
    group: GroupSpec
    k: Fraction
    K: Fraction
    zsf: list[tuple[Sequence, StructureVerdict]]
    minimal: list[tuple[Sequence, StructureVerdict]]

    @property
    def all_pass(self) -> bool:
        return all(v.decomposes for _, v in self.zsf + self.minimal)

    def failing(self, kind: str) -> list[Sequence]:
        return [S for S, v in (self.zsf if kind == "zsf" else self.minimal) if not v.decomposes]

    def to_dict(self, include_verdicts: bool = False) -> dict:
        out = {
            "group": self.group.text(),
            "k": frac_dict(self.k), "K": frac_dict(self.K),
            "all_pass": self.all_pass,
        }
        for kind, rows in (("zsf", self.zsf), ("minimal", self.minimal)):
            out[kind] = {
                "count": len(rows),
                "passed": sum(v.decomposes for _, v in rows),
                "failed": [terms_to_list(S) for S in self.failing(kind)],
            }
            if include_verdicts:
                out[kind]["verdicts"] = [dict(v.to_dict(), sequence=terms_to_list(S)) for S, v in rows]
        return out


def verify_structure_conjecture(G: GroupSpec, limits: SearchLimits | None = None, *,
                                workers: int = 1) -> StructureReport:
    """Classify every extremal sequence of both kinds."""
    zs = extremal_zero_sum_free(G, limits, workers=workers)
    ms = extremal_minimal_zero_sum(G, limits, workers=workers)
    k = zs[0].cross_number() if zs else Fraction(0)
    K = ms[0].cross_number() if ms else Fraction(1)
    return StructureReport(
        G, k, K,
        [(S, classify_structure(S, "zsf")) for S in zs],
        [(U, classify_structure(U, "minimal")) for U in ms],
    )
