import itertools
from math import factorial

import pytest

from qstirling.errors import CapExceeded, InvalidParams
from qstirling.groups import (
    Caps,
    ColoredPerm,
    SignedPerm,
    bn_window_chunks,
    bn_windows,
    enumerate_bn,
    enumerate_colored,
    enumerate_sn,
    eulerian_a,
    eulerian_b,
    eulerian_numbers_a,
    eulerian_numbers_b,
    eulerian_r,
    psi,
    sign_type_profile,
    stats_a,
    stats_b,
    stats_r,
)
from qstirling.qpoly import ONE, Q, ZERO, LaurentPoly, q_factorial

P = LaurentPoly.parse
EXAMPLE = SignedPerm((1, 5, -3, 4, 6, -2))


def naive_eulerian_b(n):
    acc = [ZERO] * (n + 1)
    for pi in enumerate_bn(n):
        des, fm, _, _ = stats_b(pi)
        acc[des] = acc[des] + Q ** fm
    return tuple(acc)


def naive_eulerian_r(r, n):
    acc = [ZERO] * (n + 1)
    for pi in enumerate_colored(r, n):
        des, fm = stats_r(pi)
        acc[des] = acc[des] + Q ** fm
    return tuple(acc)


# -- enumeration -------------------------------------------------------------


def test_enumerate_sn():
    assert list(enumerate_sn(0)) == [()]
    assert list(enumerate_sn(2)) == [(1, 2), (2, 1)]
    s3 = list(enumerate_sn(3))
    assert len(s3) == 6 and s3[0] == (1, 2, 3) and s3[-1] == (3, 2, 1)
    s5 = list(enumerate_sn(5))
    assert s5 == sorted(s5) and len(set(s5)) == 120


def test_enumerate_bn():
    assert [pi.window for pi in enumerate_bn(1)] == [(1,), (-1,)]
    assert len(list(enumerate_bn(2))) == 8
    b3 = [pi.window for pi in enumerate_bn(3)]
    assert len(b3) == 48 and len(set(b3)) == 48
    # lexicographic on the absolute values first
    abs_seq = [tuple(map(abs, w)) for w in b3]
    assert abs_seq == sorted(abs_seq)


def test_window_chunks_follow_enumeration_order():
    for n in range(5):
        chunked = [tuple(int(x) for x in row) for c in bn_window_chunks(n) for row in c]
        assert chunked == list(bn_windows(n))


def test_enumerate_colored():
    for n in range(5):
        one = list(enumerate_colored(1, n))
        assert len(one) == factorial(n)
        assert all(set(c.colors) <= {0} for c in one)
    assert len(list(enumerate_colored(3, 2))) == 18
    for n in range(4):
        as_signed = {tuple(-b if z else b for b, z in zip(c.base, c.colors))
                     for c in enumerate_colored(2, n)}
        assert as_signed == {pi.window for pi in enumerate_bn(n)}


def test_enumeration_is_deterministic():
    assert list(enumerate_bn(4)) == list(enumerate_bn(4))
    assert list(enumerate_colored(3, 3)) == list(enumerate_colored(3, 3))


def test_caps():
    with pytest.raises(CapExceeded):
        list(enumerate_sn(11))
    with pytest.raises(CapExceeded):
        list(enumerate_bn(9))
    with pytest.raises(CapExceeded):
        list(enumerate_colored(2, 3, Caps(colored=47)))
    with pytest.raises(CapExceeded):
        eulerian_b(4, Caps(bn=3))
    assert len(list(enumerate_bn(3, Caps(bn=3)))) == 48


def test_invalid_elements():
    with pytest.raises(InvalidParams):
        SignedPerm((1, -1))
    with pytest.raises(InvalidParams):
        ColoredPerm(2, (1, 2), (0, 2))


# -- statistics -----------------------------------------------------------


def test_stats_a():
    assert stats_a((1, 2, 3, 4)) == (0, 0)
    assert stats_a((2, 1)) == (1, 1)
    assert stats_a((3, 1, 4, 2)) == (2, 4)


def test_stats_b():
    assert stats_b(SignedPerm((1, 2, 3))) == (0, 0, 0, frozenset())
    assert stats_b(SignedPerm((-1,))) == (1, 1, 1, frozenset({0}))
    assert stats_b(EXAMPLE) == (2, 16, 2, frozenset({2, 5}))


def test_stats_r():
    assert stats_r(ColoredPerm(3, (1, 2, 3), (0, 0, 0))) == (0, 0)
    assert stats_r(ColoredPerm(3, (1,), (2,))) == (1, 2)


def test_stats_r_matches_stats_b_for_two_colors():
    for n in range(4):
        for c in enumerate_colored(2, n):
            pi = SignedPerm(tuple(-b if z else b for b, z in zip(c.base, c.colors)))
            des, fm, _, _ = stats_b(pi)
            assert stats_r(c) == (des, fm)


def test_colored_order_puts_colored_letters_below_zero():
    # 1^1 > 2^1 under the colored order, so "1^1 2^1" has a descent at 1
    assert stats_r(ColoredPerm(3, (1, 2), (1, 1)))[0] == 2
    # 1^2 < 1^1 < 0: descent at 0 only when the first letter is colored
    assert stats_r(ColoredPerm(3, (2, 1), (2, 0)))[0] == 1


# -- Eulerian polynomials ---------------------------------------------------


def test_eulerian_a():
    assert eulerian_a(1) == (ONE,)
    assert eulerian_a(2) == (ONE, Q)
    for n in range(1, 8):
        assert sum(eulerian_a(n), ZERO) == q_factorial(n)


def test_eulerian_b():
    assert eulerian_b(1) == (ONE, Q)
    for n in range(7):
        assert sum(p.at_one() for p in eulerian_b(n)) == 2 ** n * factorial(n)
    for n in range(6):
        assert eulerian_b(n) == naive_eulerian_b(n)


def test_eulerian_r():
    assert eulerian_r(3, 1) == (ONE, P("q + q^2"))
    for n in range(1, 7):
        assert eulerian_r(1, n) == eulerian_a(n) + (ZERO,)
        assert eulerian_r(2, n) == eulerian_b(n)
    for r, n in [(3, 3), (3, 4), (4, 3)]:
        assert eulerian_r(r, n) == naive_eulerian_r(r, n)
        assert sum(p.at_one() for p in eulerian_r(r, n)) == r ** n * factorial(n)


def test_eulerian_numbers_match_q_one():
    for n in range(1, 9):
        assert eulerian_numbers_a(n) == tuple(p.at_one() for p in eulerian_a(n))
    for n in range(8):
        assert eulerian_numbers_b(n) == tuple(p.at_one() for p in eulerian_b(n))


def test_b_symmetry():
    for n in range(8):
        row = eulerian_b(n)
        for k in range(n + 1):
            assert row[k] == row[n - k].shift(2 * n * k - n * n)


# -- psi and sign types ------------------------------------------------------


def test_psi_examples():
    assert psi(EXAMPLE) == SignedPerm((5, -1, -3, 4, -2, -6))
    assert psi(SignedPerm((1,))) == SignedPerm((-1,))


def test_psi_properties():
    for n in range(6):
        for pi in enumerate_bn(n):
            tilde = psi(pi)
            assert psi(tilde) == pi
            des, fm, _, _ = stats_b(pi)
            des2, fm2, _, _ = stats_b(tilde)
            assert des2 == n - des
            assert fm == 2 * n * des - n * n + fm2


def test_sign_type_profile_examples():
    assert sign_type_profile(SignedPerm((1, 2, 3, 4))).asc_pp == frozenset({1, 2, 3})
    prof = sign_type_profile(EXAMPLE)
    assert prof.desc_pn == {2, 5}
    assert prof.asc_pp == {1, 4}
    assert prof.asc_np == {3}
    assert not (prof.desc_pp or prof.desc_nn or prof.asc_nn)
    neg = sign_type_profile(SignedPerm((-4, -3, -2, -1)))
    assert neg.asc_nn == {1, 2, 3}


def test_sign_type_profile_partitions_positions():
    for n in range(1, 6):
        for pi in enumerate_bn(n):
            sets = sign_type_profile(pi).sets()
            union = set()
            for s in sets:
                assert not union & s
                union |= s
            assert union == set(range(1, n))


def test_index_sums():
    for n in range(1, 7):
        for pi in enumerate_bn(n):
            prof = sign_type_profile(pi)
            m = stats_b(pi)[2]
            extra = n if pi.window[-1] < 0 else 0
            assert sum(prof.desc_pn) + m == sum(prof.asc_np) + extra


def test_mahonian_fmaj():
    # sum of q^fmaj over B_n is [2]_q [4]_q ... [2n]_q
    from qstirling.qpoly import q_int

    for n in range(7):
        expected = ONE
        for i in range(1, n + 1):
            expected = expected * q_int(2 * i)
        assert sum(eulerian_b(n), ZERO) == expected


def test_itertools_oracle_for_sn():
    assert list(enumerate_sn(6)) == list(itertools.permutations(range(1, 7)))
