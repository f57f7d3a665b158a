"""Finite abelian groups in canonical prime-power form.

A group is given as a list of cyclic factors ``C_{n_1} + ... + C_{n_r}`` and is
stored in canonical form: every factor is split into prime-power cyclic groups,
sorted by prime ascending and, for a fixed prime, by exponent descending.

Elements carry their coordinate vector in the canonical decomposition together
with a dense mixed-radix index (component 0 most significant).  All enumeration
and tie-breaking in the package uses that index.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterator, Sequence

import numpy as np

DEFAULT_ORDER_CAP = 512


class GroupError(ValueError):
    """Malformed group text or invalid factor."""


class GroupTooLarge(GroupError):
    """Group order exceeds the configured resource cap."""


def factorize(n: int) -> list[tuple[int, int]]:
    """Prime factorisation of ``n`` as ``[(p, a), ...]`` with p ascending."""
    if n < 1:
        raise ValueError(f"cannot factorise {n}")
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            a = 0
            while n % p == 0:
                n //= p
                a += 1
            out.append((p, a))
        p += 1 if p == 2 else 2
    if n > 1:
        out.append((n, 1))
    return out


def smallest_prime_divisor(n: int) -> int:
    """Least prime factor of ``n > 1``."""
    if n <= 1:
        raise ValueError(f"smallest_prime_divisor needs n > 1, got {n}")
    return factorize(n)[0][0]


def prime_divisors(n: int) -> list[int]:
    return [p for p, _ in factorize(n)]


def divisors(n: int) -> list[int]:
    """All positive divisors of ``n``, ascending."""
    divs = [1]
    for p, a in factorize(n):
        divs = [d * p**k for d in divs for k in range(a + 1)]
    return sorted(divs)


@dataclass(frozen=True)
class GroupElement:
    coords: tuple[int, ...]
    index: int

    def __repr__(self) -> str:
        return f"GroupElement({self.coords})"


@dataclass(frozen=True, eq=False)
class GroupSpec:
    """A finite abelian group ``G = C_{n_1} + ... + C_{n_r}``.

    ``canonical`` lists ``(p, a)`` pairs for the prime-power decomposition,
    sorted by ``(p ascending, a descending)``.  Equality and hashing use the
    canonical form only, so ``C6`` and ``C2xC3`` compare equal.
    """

    given_factors: tuple[int, ...]
    canonical: tuple[tuple[int, int], ...]
    order: int
    exponent: int

    @classmethod
    def from_factors(cls, factors: Sequence[int]) -> GroupSpec:
        factors = tuple(int(n) for n in factors)
        for n in factors:
            if n < 2:
                raise GroupError(f"cyclic factor must be >= 2, got {n}")
        parts = [pa for n in factors for pa in factorize(n)]
        parts.sort(key=lambda pa: (pa[0], -pa[1]))
        order = math.prod(factors)
        exponent = math.lcm(*factors) if factors else 1
        return cls(factors, tuple(parts), order, exponent)

    @classmethod
    def from_canonical(cls, canonical: Sequence[tuple[int, int]]) -> GroupSpec:
        return cls.from_factors([p**a for p, a in canonical])

    def __eq__(self, other: object) -> bool:
        return isinstance(other, GroupSpec) and self.canonical == other.canonical

    def __hash__(self) -> int:
        return hash(self.canonical)

    # -- shape -------------------------------------------------------------

    @cached_property
    def moduli(self) -> tuple[int, ...]:
        """Orders of the canonical cyclic components."""
        return tuple(p**a for p, a in self.canonical)

    @cached_property
    def _primes(self) -> tuple[int, ...]:
        return tuple(sorted({p for p, _ in self.canonical}))

    @property
    def primes(self) -> list[int]:
        return list(self._primes)

    @property
    def is_trivial(self) -> bool:
        return self.order == 1

    def exponents_of(self, p: int) -> list[int]:
        """``[a_{p,1}, a_{p,2}, ...]`` nonincreasing; empty if p does not divide |G|."""
        return [a for q, a in self.canonical if q == p]

    def a(self, p: int, j: int) -> int:
        """Exponent ``a_{p,j}`` (1-based ``j``); zero past the p-rank."""
        exps = self.exponents_of(p)
        return exps[j - 1] if 1 <= j <= len(exps) else 0

    def rank(self) -> int:
        """Largest number of canonical components sharing one prime."""
        return max((len(self.exponents_of(p)) for p in self.primes), default=0)

    def components_of(self, p: int) -> list[int]:
        return [j for j, (q, _) in enumerate(self.canonical) if q == p]

    def primary_component(self, p: int) -> GroupSpec:
        return GroupSpec.from_canonical([(q, a) for q, a in self.canonical if q == p])

    def invariant_factors(self) -> list[int]:
        """``[n_1, ..., n_r]`` with ``1 < n_1 | n_2 | ... | n_r``."""
        columns = [self.exponents_of(p) for p in self.primes]
        r = self.rank()
        factors = []
        for j in range(r):
            factors.append(math.prod(p ** (exps[j] if j < len(exps) else 0)
                                     for p, exps in zip(self.primes, columns)))
        return sorted(factors)

    def text(self) -> str:
        """Canonical text form, e.g. ``C2xC2xC3``; ``C1`` for the trivial group."""
        if not self.canonical:
            return "C1"
        return "x".join(f"C{m}" for m in self.moduli)

    def __str__(self) -> str:
        return self.text()

    # -- elements ----------------------------------------------------------

    @property
    def tables(self) -> GroupTables:
        return _tables(self.moduli)

    def element(self, coords: Sequence[int]) -> GroupElement:
        mods = self.moduli
        if len(coords) != len(mods):
            raise GroupError(f"expected {len(mods)} coordinates, got {len(coords)}")
        c = tuple(int(x) % m for x, m in zip(coords, mods))
        return GroupElement(c, self.tables.index_of(c))

    def element_at(self, index: int) -> GroupElement:
        if not 0 <= index < self.order:
            raise GroupError(f"index {index} out of range for order {self.order}")
        return GroupElement(self.tables.coords[index], index)

    @property
    def zero(self) -> GroupElement:
        return self.element_at(0)

    def add(self, g: GroupElement, h: GroupElement) -> GroupElement:
        return self.element_at(self.tables.add_index(g.index, h.index))

    def neg(self, g: GroupElement) -> GroupElement:
        return self.element_at(self.tables.neg[g.index])

    def scale(self, k: int, g: GroupElement) -> GroupElement:
        return self.element([k * c for c in g.coords])

    def check_size(self, cap: int = DEFAULT_ORDER_CAP) -> None:
        if self.order > cap:
            raise GroupTooLarge(f"|G| = {self.order} exceeds cap {cap}")


class GroupTables:
    """Precomputed index arithmetic for one tuple of cyclic moduli."""

    def __init__(self, moduli: tuple[int, ...]):
        self.moduli = moduli
        self.n = n = math.prod(moduli)
        k = len(moduli)
        strides = [1] * k
        for j in range(k - 2, -1, -1):
            strides[j] = strides[j + 1] * moduli[j + 1]
        self.strides = tuple(strides)
        idx = np.arange(n)
        coord_arr = np.stack([(idx // s) % m for s, m in zip(strides, moduli)], axis=1) \
            if k else np.zeros((1, 0), dtype=int)
        self.coords = [tuple(int(x) for x in row) for row in coord_arr]
        strides_arr = np.array(strides, dtype=np.int64)
        mods_arr = np.array(moduli, dtype=np.int64)
        self.neg = [int(i) for i in ((-coord_arr) % mods_arr) @ strides_arr] if k else [0]
        self.exponent = math.lcm(*moduli) if k else 1
        orders = []
        for c in self.coords:
            o = 1
            for x, m in zip(c, moduli):
                o = math.lcm(o, m // math.gcd(x, m))
            orders.append(o)
        self.orders = orders
        self._coord_arr = coord_arr
        self._strides_arr = strides_arr
        self._mods_arr = mods_arr
        self._add = None
        self._ops = None

    def index_of(self, coords: Sequence[int]) -> int:
        return sum(c * s for c, s in zip(coords, self.strides))

    def add_index(self, i: int, j: int) -> int:
        ci, cj = self.coords[i], self.coords[j]
        return sum(((a + b) % m) * s for a, b, m, s in zip(ci, cj, self.moduli, self.strides))

    @property
    def add(self) -> list[list[int]]:
        """Full Cayley table on indices (built on first use)."""
        if self._add is None:
            if not self.moduli:
                self._add = [[0]]
            else:
                c = self._coord_arr
                summed = (c[:, None, :] + c[None, :, :]) % self._mods_arr
                self._add = (summed @ self._strides_arr).tolist()
        return self._add

    @property
    def shift_ops(self) -> list[tuple[tuple[int, int, int, int], ...]]:
        """Per element, the masked shifts translating an index bitmap by it.

        Translating by ``x`` decomposes into one wrap-around shift per nonzero
        coordinate ``x_j``: bits whose j-th digit stays below the modulus move
        left by ``x_j * stride_j``; the rest wrap right by ``(m_j - x_j) * stride_j``.
        """
        if self._ops is None:
            n = self.n
            full = (1 << n) - 1
            per_digit = {}
            for j, (m, s) in enumerate(zip(self.moduli, self.strides)):
                digit = self._coord_arr[:, j]
                for v in range(1, m):
                    hi = _mask(np.nonzero(digit >= v)[0])
                    per_digit[j, v] = (v * s, (m - v) * s, hi, full ^ hi)
            self._ops = [tuple(per_digit[j, v] for j, v in enumerate(c) if v)
                         for c in self.coords]
        return self._ops

    def translate(self, bits: int, x: int) -> int:
        for s, r, hi, lo in self.shift_ops[x]:
            bits = ((bits << s) & hi) | ((bits >> r) & lo)
        return bits

    def translate_scalar(self, bits: int, x: int) -> int:
        """Reference bit-by-bit translation; must agree with :meth:`translate`."""
        out = 0
        i = 0
        while bits:
            if bits & 1:
                out |= 1 << self.add_index(i, x)
            bits >>= 1
            i += 1
        return out

    def subgroup_mask(self, d: int) -> int:
        """Bitmap of ``G_d``: elements whose order divides ``d``."""
        return _mask([i for i, o in enumerate(self.orders) if d % o == 0])


def _mask(indices) -> int:
    m = 0
    for i in indices:
        m |= 1 << int(i)
    return m


@lru_cache(maxsize=64)
def _tables(moduli: tuple[int, ...]) -> GroupTables:
    return GroupTables(moduli)


_CYCLIC_FORM = re.compile(r"^c\d+(xc\d+)*$")
_LIST_FORM = re.compile(r"^\d+(,\d+)*$")


def parse_group(text: str) -> GroupSpec:
    """Parse ``"C4xC2xC3"`` or ``"4,2,3"`` (case-insensitive, whitespace ignored).

    The empty string, ``"1"``, ``"C1"`` and ``"trivial"`` denote the trivial group.
    """
    t = re.sub(r"\s+", "", text).lower()
    if t in ("", "1", "c1", "trivial"):
        return GroupSpec.from_factors([])
    if _CYCLIC_FORM.match(t):
        nums = [int(x) for x in t[1:].split("xc")]
    elif _LIST_FORM.match(t):
        nums = [int(x) for x in t.split(",")]
    else:
        raise GroupError(f"malformed group text {text!r}")
    return GroupSpec.from_factors(nums)


def element_order(g: GroupElement, G: GroupSpec) -> int:
    return G.tables.orders[g.index]


def in_subgroup_Gd(g: GroupElement, d: int, G: GroupSpec) -> bool:
    if d < 1:
        raise ValueError("d must be >= 1")
    return d % element_order(g, G) == 0


def primary_projection(g: GroupElement, p: int, G: GroupSpec) -> GroupElement:
    """Zero every coordinate not belonging to the p-primary component."""
    return G.element([c if q == p else 0 for c, (q, _) in zip(g.coords, G.canonical)])


def coordinate_projection(g: GroupElement, component_index: int, G: GroupSpec) -> int:
    if not 0 <= component_index < len(G.canonical):
        raise GroupError(f"component index {component_index} out of range")
    return g.coords[component_index]


def enumerate_elements(G: GroupSpec, cap: int = DEFAULT_ORDER_CAP) -> list[GroupElement]:
    G.check_size(cap)
    return [G.element_at(i) for i in range(G.order)]


def _partitions(a: int, max_part: int | None = None) -> Iterator[tuple[int, ...]]:
    """Partitions of ``a`` as nonincreasing tuples, in lexicographic order."""
    if a == 0:
        yield ()
        return
    top = a if max_part is None else min(a, max_part)
    for first in range(1, top + 1):
        for rest in _partitions(a - first, first):
            yield (first,) + rest


def abelian_groups_of_order(n: int) -> list[GroupSpec]:
    """Every abelian group of order ``n`` up to isomorphism, deterministic order.

    Each prime power ``p^a || n`` contributes a partition of ``a``; partitions
    are taken in lexicographic order, primes ascending.
    """
    groups = [[]]
    for p, a in factorize(n) if n > 1 else []:
        groups = [g + [(p, e) for e in part] for g in groups for part in _partitions(a)]
    return [GroupSpec.from_canonical(c) for c in groups]


def abelian_groups_up_to(max_order: int, min_order: int = 2) -> list[GroupSpec]:
    return [G for n in range(min_order, max_order + 1) for G in abelian_groups_of_order(n)]
