from math import comb

import pytest

from qstirling.errors import InvalidLabel, InvalidParams, InvalidPartition
from qstirling.groups import SignedPerm, enumerate_bn, fmaj, stats_b
from qstirling.qpoly import ONE, Q, ZERO, q_factorial
from qstirling.starred import (
    OrderedSignPartition,
    StarredPerm,
    bfmaj_enum,
    bfmaj_enum_naive,
    bfmaj_rec,
    enumerate_starred,
    expected_delta,
    fmaj_labelling,
    fmaj_starred,
    insert_bar,
    insert_star,
    ordered_stirling_b,
    partition_to_starred,
    starred_to_partition,
)
from qstirling.stirling import stirling_b

TWO = ONE + Q
EXAMPLE = StarredPerm(SignedPerm((4, 3, -1, 7, -2, -6, 8, -5)), frozenset({1, 2, 4, 7}))
BASE = StarredPerm(SignedPerm((1,)), frozenset())


def sp(window, stars=()):
    return StarredPerm(SignedPerm(tuple(window)), frozenset(stars))


def test_enumerate_starred_small():
    assert set(enumerate_starred(1, 0)) == {sp((1,)), sp((-1,))}
    assert list(enumerate_starred(1, 1)) == [sp((-1,), {0})]
    assert list(enumerate_starred(2, 3)) == []


def test_stars_must_be_descents():
    with pytest.raises(InvalidParams):
        sp((1, 2), {1})


def test_fmaj_starred():
    assert fmaj_starred(sp((-1,), {0})) == 0
    for pi in enumerate_bn(3):
        assert fmaj_starred(StarredPerm(pi, frozenset())) == fmaj(pi.window)
    assert fmaj(EXAMPLE.window) == 42
    assert fmaj_starred(EXAMPLE) == 20


def test_labelling():
    assert fmaj_labelling(BASE) == {0: 1, 1: 0}
    assert fmaj_labelling(EXAMPLE) == {0: 8, 1: 5, 2: 0, 3: 3, 4: 6}


def test_labels_cover_unstarred_gaps():
    for n in range(5):
        for k in range(n + 1):
            for s in enumerate_starred(n, k):
                gaps = fmaj_labelling(s)
                assert sorted(gaps.values()) == sorted(set(range(n + 1)) - s.stars)


def test_insert_bar_examples():
    got = insert_bar(2, 1, BASE)
    assert got == sp((2, 1)) and fmaj_starred(got) == 2
    got = insert_bar(-2, 1, BASE)
    assert got == sp((-2, 1)) and fmaj_starred(got) == 1
    got = insert_bar(-2, 0, BASE)
    assert got == sp((1, -2)) and fmaj_starred(got) == 3


def test_insert_star_examples():
    got = insert_star(2, 1, BASE)
    assert got == sp((2, 1), {1}) and fmaj_starred(got) == 1
    # -2 1 has its only descent at gap 0, so that is where the star lands
    got = insert_star(-2, 1, BASE)
    assert got == sp((-2, 1), {0}) and fmaj_starred(got) == 0
    got = insert_star(-2, 0, BASE)
    assert got == sp((1, -2), {1}) and fmaj_starred(got) == 2


def test_insertion_errors():
    with pytest.raises(InvalidLabel):
        insert_bar(2, 2, BASE)
    with pytest.raises(InvalidLabel):
        insert_star(2, 0, BASE)
    with pytest.raises(InvalidParams):
        insert_bar(3, 0, BASE)
    with pytest.raises(InvalidParams):
        expected_delta("other", 1, 0, 1, 0)


def _images(n):
    """Every insertion into size ``n - 1`` with its predicted statistic."""
    out = []
    for k_old in range(n):
        for src in enumerate_starred(n - 1, k_old):
            base = fmaj_starred(src)
            for letter in (n, -n):
                for label in range(0, n - k_old):
                    t = insert_bar(letter, label, src)
                    out.append((t, base + expected_delta("bar", letter, label, n, k_old)))
                lo = 1 if letter > 0 else 0
                for label in range(lo, n - k_old):
                    t = insert_star(letter, label, src)
                    out.append((t, base + expected_delta("star", letter, label, n, k_old + 1)))
    return out


@pytest.mark.parametrize("n", range(1, 6))
def test_insertions_are_a_bijection_with_predicted_deltas(n):
    images = _images(n)
    for target, predicted in images:
        assert fmaj_starred(target) == predicted
    produced = [t for t, _ in images]
    assert len(produced) == len(set(produced))
    expected = {s for k in range(n + 1) for s in enumerate_starred(n, k)}
    assert set(produced) == expected


def test_bfmaj_small():
    assert bfmaj_enum(1, 0) == TWO
    assert bfmaj_enum(1, 1) == ONE
    assert bfmaj_rec(1, 0) == TWO
    assert bfmaj_rec(3, -1) == ZERO
    for n in range(6):
        assert bfmaj_rec(n, n) == ONE


def test_bfmaj_at_one_counts_star_choices():
    for n in range(6):
        for k in range(n + 1):
            count = sum(comb(stats_b(pi)[0], k) for pi in enumerate_bn(n))
            assert bfmaj_enum(n, k).at_one() == count


def test_bfmaj_grouped_matches_naive():
    for n in range(5):
        for k in range(n + 1):
            assert bfmaj_enum(n, k) == bfmaj_enum_naive(n, k)


def test_bfmaj_recurrence_and_closed_form():
    for n in range(7):
        for k in range(n + 1):
            assert bfmaj_enum(n, k) == bfmaj_rec(n, k)
            assert bfmaj_enum(n, n - k) == ordered_stirling_b(n, k)


def test_ordered_stirling_b():
    assert ordered_stirling_b(0, 0) == ONE
    assert ordered_stirling_b(1, 1) == TWO
    for n in range(9):
        for k in range(n + 1):
            assert ordered_stirling_b(n, k) == TWO ** k * q_factorial(k).subst_q_power(2) * stirling_b(n, k)


def test_starred_statistic_is_nonnegative():
    for n in range(6):
        for k in range(n + 1):
            assert all(fmaj_starred(s) >= 0 for s in enumerate_starred(n, k))


# -- partitions -------------------------------------------------------------------


def test_partition_example():
    p = OrderedSignPartition((
        frozenset({0, -3, -1, -4}),
        frozenset({-2, 7}),
        frozenset({-6}),
        frozenset({8, -5}),
    ))
    s = partition_to_starred(p)
    assert s.window == (-1, -3, -4, 7, -2, -6, 8, -5)
    assert s.stars == {0, 1, 2, 4, 7}
    assert str(s) == "0* -1* -3* -4 7* -2 -6 8* -5"
    assert starred_to_partition(s) == p


def test_singleton_partition():
    n = 4
    p = OrderedSignPartition((frozenset({0}),) + tuple(frozenset({i}) for i in range(1, n + 1)))
    assert partition_to_starred(p) == sp(range(1, n + 1))


def test_partition_round_trip():
    for n in range(5):
        for k in range(n + 1):
            for s in enumerate_starred(n, k):
                p = starred_to_partition(s)
                assert p.k == n - k
                assert partition_to_starred(p) == s


def test_partition_validation():
    with pytest.raises(InvalidPartition):
        OrderedSignPartition((frozenset({1}),))
    with pytest.raises(InvalidPartition):
        OrderedSignPartition((frozenset({0, 1}),))
    with pytest.raises(InvalidPartition):
        OrderedSignPartition((frozenset({0}), frozenset()))
    with pytest.raises(InvalidPartition):
        OrderedSignPartition((frozenset({0}), frozenset({2})))
