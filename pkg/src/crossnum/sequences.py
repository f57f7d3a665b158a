"""Sequences over a finite abelian group, stored as valuation maps.

A :class:`Sequence` is an immutable multiset keyed by dense element index.
Cross numbers are exact :class:`fractions.Fraction` values.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Mapping

from .groups import GroupElement, GroupError, GroupSpec, parse_group


class SequenceError(ValueError):
    pass


@dataclass(frozen=True)
class Sequence:
    """Finite multiset of elements of ``group``.

    ``terms`` holds ``(index, multiplicity)`` pairs sorted by index, every
    multiplicity positive; this is also the canonical serialisation order.
    """

    group: GroupSpec
    terms: tuple[tuple[int, int], ...] = ()

    @classmethod
    def from_indices(cls, group: GroupSpec, indices: Iterable[int]) -> Sequence:
        counts = Counter(int(i) for i in indices)
        for i in counts:
            if not 0 <= i < group.order:
                raise SequenceError(f"element index {i} out of range")
        return cls(group, tuple(sorted(counts.items())))

    @classmethod
    def from_elements(cls, group: GroupSpec, elements: Iterable[GroupElement]) -> Sequence:
        return cls.from_indices(group, (g.index for g in elements))

    @classmethod
    def from_coords(cls, group: GroupSpec, coords: Iterable) -> Sequence:
        return cls.from_indices(group, (group.element(c).index for c in coords))

    @classmethod
    def from_valuations(cls, group: GroupSpec, valuations: Mapping[int, int]) -> Sequence:
        if any(m < 0 for m in valuations.values()):
            raise SequenceError("negative multiplicity")
        return cls(group, tuple(sorted((int(i), int(m)) for i, m in valuations.items() if m)))

    @classmethod
    def empty(cls, group: GroupSpec) -> Sequence:
        return cls(group, ())

    # -- basic accessors ---------------------------------------------------

    @property
    def valuations(self) -> dict[int, int]:
        return dict(self.terms)

    def v(self, g: GroupElement | int) -> int:
        i = g if isinstance(g, int) else g.index
        return self.valuations.get(i, 0)

    def indices(self) -> list[int]:
        """Terms with repetition, ascending index."""
        return [i for i, m in self.terms for _ in range(m)]

    def elements(self) -> list[GroupElement]:
        return [self.group.element_at(i) for i in self.indices()]

    def __len__(self) -> int:
        return sum(m for _, m in self.terms)

    def __bool__(self) -> bool:
        return bool(self.terms)

    @property
    def key(self) -> tuple[tuple[int, int], ...]:
        return self.terms

    def __repr__(self) -> str:
        body = " ".join(
            f"{self.group.tables.coords[i]}" + (f"^{m}" if m > 1 else "") for i, m in self.terms
        )
        return f"Sequence[{self.group}]({body})"

    # -- arithmetic ----------------------------------------------------------

    def sum_index(self) -> int:
        tab = self.group.tables
        coords = [0] * len(tab.moduli)
        for i, m in self.terms:
            for j, c in enumerate(tab.coords[i]):
                coords[j] += m * c
        return tab.index_of([c % mod for c, mod in zip(coords, tab.moduli)])

    def cross_number(self) -> Fraction:
        orders = self.group.tables.orders
        e = self.group.exponent
        return Fraction(sum(m * (e // orders[i]) for i, m in self.terms), e)


def cross_number(S: Sequence) -> Fraction:
    """``sum_g v_g(S) / ord(g)``, exact."""
    return S.cross_number()


def weighted_cross_number(S: Sequence, f: Mapping[int, Fraction] | Callable[[int], Fraction]) -> Fraction:
    """``sum_g v_g(S) * f(ord(g))``.

    ``f`` is either a callable on orders or a mapping order -> weight; a mapping
    must cover every order that occurs in ``S``.
    """
    orders = S.group.tables.orders
    total = Fraction(0)
    for i, m in S.terms:
        o = orders[i]
        if callable(f):
            w = f(o)
        else:
            if o not in f:
                raise SequenceError(f"no weight for order {o}")
            w = f[o]
        total += m * Fraction(w)
    return total


def sequence_sum(S: Sequence) -> GroupElement:
    return S.group.element_at(S.sum_index())


def _same_group(S: Sequence, T: Sequence) -> None:
    if S.group.canonical != T.group.canonical:
        raise SequenceError(f"group mismatch: {S.group} vs {T.group}")


def divides(T: Sequence, S: Sequence) -> bool:
    _same_group(T, S)
    vs = S.valuations
    return all(vs.get(i, 0) >= m for i, m in T.terms)


def concat(S: Sequence, T: Sequence) -> Sequence:
    _same_group(S, T)
    v = Counter(S.valuations)
    v.update(T.valuations)
    return Sequence.from_valuations(S.group, v)


def remove_one(S: Sequence, g: GroupElement | int) -> Sequence:
    i = g if isinstance(g, int) else g.index
    v = S.valuations
    if v.get(i, 0) < 1:
        raise SequenceError(f"element {S.group.tables.coords[i]} not in sequence")
    v[i] -= 1
    return Sequence.from_valuations(S.group, v)


def difference(S: Sequence, T: Sequence) -> Sequence:
    """``S T^{-1}`` for ``T | S``."""
    if not divides(T, S):
        raise SequenceError("subtrahend does not divide sequence")
    v = Counter(S.valuations)
    v.subtract(T.valuations)
    return Sequence.from_valuations(S.group, v)


def amalgamate(S: Sequence, T: Sequence) -> Sequence:
    """Replace the subsequence ``T`` of ``S`` by the single term ``sigma(T)``."""
    if not T:
        raise SequenceError("cannot amalgamate the empty sequence")
    rest = difference(S, T)
    return concat(rest, Sequence.from_indices(S.group, [T.sum_index()]))


def order_histogram(S: Sequence) -> dict[int, int]:
    orders = S.group.tables.orders
    hist: Counter[int] = Counter()
    for i, m in S.terms:
        hist[orders[i]] += m
    return dict(sorted(hist.items()))


# -- sequence file format ----------------------------------------------------

def sequence_to_dict(S: Sequence) -> dict:
    coords = S.group.tables.coords
    return {
        "group": S.group.text(),
        "terms": [{"coords": list(coords[i]), "mult": m} for i, m in S.terms],
    }


def terms_to_list(S: Sequence) -> list[dict]:
    coords = S.group.tables.coords
    return [{"coords": list(coords[i]), "mult": m} for i, m in S.terms]


def sequence_from_dict(data: Mapping, group: GroupSpec | None = None) -> Sequence:
    """Inverse of :func:`sequence_to_dict`; term order in the input is irrelevant."""
    try:
        G = group if group is not None else parse_group(str(data["group"]))
        terms = data["terms"]
        valuations: Counter[int] = Counter()
        for t in terms:
            mult = int(t.get("mult", 1))
            if mult < 1:
                raise SequenceError("multiplicity must be >= 1")
            valuations[G.element(t["coords"]).index] += mult
    except (KeyError, TypeError, GroupError) as exc:
        raise SequenceError(f"malformed sequence document: {exc}") from exc
    return Sequence.from_valuations(G, valuations)


def dumps_sequence(S: Sequence) -> str:
    return json.dumps(sequence_to_dict(S), sort_keys=True)


def loads_sequence(text: str) -> Sequence:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SequenceError(f"not JSON: {exc}") from exc
    return sequence_from_dict(data)
