from math import comb

from gmpy2 import mpq

from schouten_ep.multiindex import canonical, insert, merge, multiplicity, multisets, splits


def test_canonical_and_multisets():
    assert canonical((1, 0, 1)) == (0, 1, 1)
    assert multisets(2, 2) == ((0, 0), (0, 1), (1, 1))
    assert len(multisets(3, 3)) == comb(5, 3)
    assert multisets(2, 0) == ((),)


def test_multiplicity_counts_orderings():
    assert multiplicity(()) == 1
    assert multiplicity((0, 0)) == 1
    assert multiplicity((0, 1)) == 2
    assert multiplicity((0, 1, 1)) == 3
    assert multiplicity((0, 1, 2)) == 6


def test_merge_insert():
    assert merge((0, 2), (1,)) == (0, 1, 2)
    assert insert((0, 2), 1) == (0, 1, 2)


def test_split_weights_sum_to_one():
    for I in [(0, 0, 1), (0, 1, 2), (1, 1, 1, 0)]:
        for size in range(len(I) + 1):
            parts = splits(I, size)
            assert sum(w for _, _, w in parts) == 1
            for part, rest, _ in parts:
                assert merge(part, rest) == canonical(I)
                assert len(part) == size


def test_split_weight_is_hypergeometric():
    parts = {p: w for p, _, w in splits((0, 0, 1), 1)}
    assert parts == {(0,): mpq(2, 3), (1,): mpq(1, 3)}
