from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import seq
from crossnum.groups import parse_group
from crossnum.sequences import (Sequence, SequenceError, amalgamate, concat, cross_number,
                                divides, dumps_sequence, loads_sequence, order_histogram,
                                remove_one, sequence_sum, weighted_cross_number)
from crossnum.sumsets import subsequences


def test_cross_number_examples():
    S = seq("2,3", {(1, 1): 1, (1, 0): 1, (0, 1): 2})
    assert cross_number(S) == Fraction(4, 3)
    assert cross_number(Sequence.empty(parse_group("5"))) == 0
    assert cross_number(seq("5", {(1,): 4})) == Fraction(4, 5)


def test_weighted_cross_number():
    S = seq("2,3", {(1, 1): 1, (1, 0): 1, (0, 1): 2})
    assert weighted_cross_number(S, lambda n: Fraction(1, n)) == cross_number(S)
    g = {2: Fraction(1, 2), 3: Fraction(1, 3), 6: Fraction(2, 6)}
    assert weighted_cross_number(seq("2,3", {(1, 1): 1}), g) == Fraction(1, 3)
    assert weighted_cross_number(S, lambda n: Fraction(1)) == len(S)


def test_sequence_sum():
    assert sequence_sum(seq("5", {(1,): 5})) == parse_group("5").zero
    assert sequence_sum(seq("2,3", [(1, 0), (0, 1)])).coords == (1, 1)
    assert sequence_sum(Sequence.empty(parse_group("4"))).coords == (0,)


def test_divides():
    assert divides(seq("5", {(1,): 2}), seq("5", {(1,): 3}))
    assert not divides(seq("5", {(1,): 4}), seq("5", {(1,): 3}))
    assert divides(Sequence.empty(parse_group("5")), seq("5", {(1,): 3}))


def test_amalgamate():
    assert amalgamate(seq("5", {(1,): 3}), seq("5", {(1,): 2})) == seq("5", [(1,), (2,)])
    S = seq("2,3", {(1, 1): 3})
    assert amalgamate(S, S) == seq("2,3", [(1, 0)])
    with pytest.raises(SequenceError):
        amalgamate(seq("5", {(1,): 1}), seq("5", {(2,): 1}))


def test_order_histogram():
    assert order_histogram(seq("2,3", {(1, 0): 1, (0, 1): 2})) == {2: 1, 3: 2}
    assert order_histogram(Sequence.empty(parse_group("6"))) == {}
    assert order_histogram(seq("2,3", {(1, 1): 2})) == {6: 2}


def test_concat_and_remove_one():
    g = seq("7", [(1,)])
    assert concat(g, g) == seq("7", {(1,): 2})
    assert remove_one(seq("7", {(1,): 2}), parse_group("7").element((1,))) == g
    assert concat(g, Sequence.empty(parse_group("7"))) == g
    with pytest.raises(SequenceError):
        remove_one(g, parse_group("7").element((2,)))


def test_serialisation_round_trip_is_order_insensitive():
    S = seq("4,2,3", {(3, 1, 2): 2, (1, 0, 0): 1})
    text = dumps_sequence(S)
    assert loads_sequence(text) == S
    reordered = '{"terms": [{"coords": [1,0,0], "mult": 1}, {"coords": [3,1,2], "mult": 2}], "group": "2,4,3"}'
    assert loads_sequence(reordered) == S
    with pytest.raises(SequenceError):
        loads_sequence('{"group": "4", "terms": [{"coords": [1], "mult": 0}]}')
    with pytest.raises(SequenceError):
        loads_sequence('{"terms": []}')


groups = st.sampled_from(["4", "6", "2,2", "2,3", "3,3", "2,2,3", "8"])


@st.composite
def sequences(draw, max_len=6):
    G = parse_group(draw(groups))
    idx = draw(st.lists(st.integers(0, G.order - 1), max_size=max_len))
    return Sequence.from_indices(G, idx)


@settings(max_examples=100, deadline=None)
@given(st.data())
def test_concat_is_additive(data):
    S = data.draw(sequences())
    T = Sequence.from_indices(S.group, data.draw(st.lists(st.integers(0, S.group.order - 1), max_size=5)))
    U = concat(S, T)
    assert cross_number(U) == cross_number(S) + cross_number(T)
    assert len(U) == len(S) + len(T)
    assert sequence_sum(U) == S.group.add(sequence_sum(S), sequence_sum(T))


@settings(max_examples=100, deadline=None)
@given(sequences())
def test_histogram_resums_to_cross_number(S):
    assert sum((Fraction(c, n) for n, c in order_histogram(S).items()), Fraction(0)) == cross_number(S)


@settings(max_examples=60, deadline=None)
@given(sequences(max_len=5))
def test_amalgamation_changes_cross_number_by_exact_amount(S):
    G = S.group
    for terms in subsequences(S):
        if not terms:
            continue
        T = Sequence.from_valuations(G, dict(terms))
        A = amalgamate(S, T)
        expected = cross_number(S) - cross_number(T) + Fraction(1, G.tables.orders[T.sum_index()])
        assert cross_number(A) == expected
        if len(T) == 1:
            assert A == S


def test_amalgamation_can_raise_cross_number():
    # {1, 3} over C8 is zero-sum free; its sum 4 has order 2
    S = seq("8", [(1,), (3,)])
    A = amalgamate(S, S)
    assert A == seq("8", [(4,)])
    assert cross_number(A) == Fraction(1, 2) > cross_number(S) == Fraction(1, 4)
