"""Subsequence-sum tables and the zero-sum predicates built on them.

Sets of group elements are Python ints used as bitmaps over dense indices.
Translating a bitmap by a group element is done with one masked wrap-around
shift per nonzero coordinate (see :meth:`GroupTables.translate`).
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .groups import GroupElement, GroupSpec
from .sequences import Sequence


def bits_to_indices(bits: int) -> list[int]:
    out = []
    i = 0
    while bits:
        if bits & 1:
            out.append(i)
        bits >>= 1
        i += 1
    return out


@dataclass(frozen=True)
class SubsumTable:
    """Sums of the nonempty subsequences of some sequence ``S``.

    ``attainable`` is the bitmap of Sigma(S); ``proper`` the bitmap of sums of
    proper nonempty subsequences; ``total`` the index of sigma(S); ``length`` is |S|.
    """

    group: GroupSpec
    attainable: int = 0
    proper: int = 0
    total: int = 0
    length: int = 0

    @property
    def full_sum_unique(self) -> bool:
        """True iff sigma(S) is not the sum of any proper nonempty subsequence."""
        return not (self.proper >> self.total) & 1

    @property
    def zero_sum_free(self) -> bool:
        return not self.attainable & 1

    def __contains__(self, g: GroupElement | int) -> bool:
        i = g if isinstance(g, int) else g.index
        return bool((self.attainable >> i) & 1)

    def __len__(self) -> int:
        return self.attainable.bit_count()

    def elements(self) -> list[GroupElement]:
        return [self.group.element_at(i) for i in bits_to_indices(self.attainable)]

    def indices(self) -> set[int]:
        return set(bits_to_indices(self.attainable))


def extend(table: SubsumTable, g: GroupElement | int, *, scalar: bool = False) -> SubsumTable:
    """Table for ``S g`` from the table for ``S``.

    Sigma(Sg) = Sigma(S) | {g} | (Sigma(S) + g), and the proper subsums are
    Sigma(S) | {g if S nonempty} | (proper(S) + g).
    """
    x = g if isinstance(g, int) else g.index
    tab = table.group.tables
    shift = tab.translate_scalar if scalar else tab.translate
    gbit = 1 << x
    attainable = table.attainable | gbit | shift(table.attainable, x)
    proper = table.attainable | shift(table.proper, x)
    if table.length:
        proper |= gbit
    total = tab.add_index(table.total, x)
    return SubsumTable(table.group, attainable, proper, total, table.length + 1)


def subsums(S: Sequence, *, scalar: bool = False) -> SubsumTable:
    table = SubsumTable(S.group)
    for x in S.indices():
        table = extend(table, x, scalar=scalar)
    return table


def is_zero_sum_free(S: Sequence) -> bool:
    return subsums(S).zero_sum_free


def is_minimal_zero_sum(U: Sequence) -> bool:
    """Minimal zero-sum test via ``U = S x``: S zero-sum free and sigma(S) unique."""
    if not U or U.sum_index() != 0:
        return False
    x = U.terms[-1][0]
    S_table = SubsumTable(U.group)
    removed = False
    for i in U.indices():
        if i == x and not removed:
            removed = True
            continue
        S_table = extend(S_table, i)
    return S_table.zero_sum_free and S_table.full_sum_unique


def subsums_by_length(S: Sequence, max_len: int) -> list[int]:
    """``layers[l]`` is the bitmap of sums of subsequences of length exactly ``l``, for ``l <= max_len``."""
    tab = S.group.tables
    layers = [1] + [0] * max_len
    for x in S.indices():
        for l in range(max_len, 0, -1):
            layers[l] |= tab.translate(layers[l - 1], x)
    return layers


def has_short_zero_sum(S: Sequence, max_len: int) -> bool:
    """Some nonempty subsequence of length at most ``max_len`` sums to zero."""
    return any(layer & 1 for layer in subsums_by_length(S, max_len)[1:])


def has_zero_sum_of_length(S: Sequence, length: int) -> bool:
    return bool(subsums_by_length(S, length)[length] & 1)


def covers_all_nonzero(S: Sequence) -> bool:
    everything = (1 << S.group.order) - 1
    return subsums(S).attainable | 1 == everything


# -- brute-force references ---------------------------------------------------

def subsequences(S: Sequence):
    """Every sub-multiset of ``S`` as a tuple of ``(index, mult)``, including empty."""
    idx = [i for i, _ in S.terms]
    for mults in product(*(range(m + 1) for _, m in S.terms)):
        yield tuple((i, k) for i, k in zip(idx, mults) if k)


def _sum_of(group: GroupSpec, terms) -> int:
    coords = [0] * len(group.moduli)
    for i, k in terms:
        for j, c in enumerate(group.tables.coords[i]):
            coords[j] += k * c
    return group.tables.index_of([c % m for c, m in zip(coords, group.moduli)])


def subsums_bruteforce(S: Sequence) -> set[int]:
    return {_sum_of(S.group, T) for T in subsequences(S) if T}


def is_minimal_zero_sum_bruteforce(U: Sequence) -> bool:
    if not U or U.sum_index() != 0:
        return False
    full = U.terms
    return all(_sum_of(U.group, T) != 0 for T in subsequences(U) if T and T != full)
