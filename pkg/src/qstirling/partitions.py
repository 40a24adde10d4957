"""Signed set partitions.

A *standard signed partition* (SSP) of a set ``S`` of positive integers is a
sequence of blocks ``(S_1, ..., S_k)`` of signed letters such that each letter
of ``S`` appears exactly once up to sign and the blocks are ordered by their
smallest absolute value. A *partial* one (PSSP) covers only a subset of ``S``.

On a PSSP, ``pos`` counts positive letters and
``m = 2 * sum_i i * |S_i| - pos``.

Type B partitions of ``{-n..n}`` have a symmetric zero block and pairs of
opposite blocks; type D ones additionally forbid a zero block with exactly
one positive letter.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from math import comb
from typing import Iterable, Iterator, Sequence

from .errors import CapExceeded, InvalidParams, InvalidPartition
from .qpoly import ONE, Q, ZERO, LaurentPoly, q_int
from .stirling import classical

PARTITION_CAP = 8


def _check(n: int, k: int, cap: int | None):
    cap = PARTITION_CAP if cap is None else cap
    if n < 0:
        raise InvalidParams("n must be nonnegative")
    if n > cap:
        raise CapExceeded(f"partition enumeration capped at n <= {cap}")


def set_partitions(elements: Sequence[int], k: int) -> Iterator[list[list[int]]]:
    """Unordered partitions of ``elements`` into ``k`` nonempty blocks.

    Generated from restricted growth strings, so blocks come out ordered by
    their first element (the minimum when ``elements`` is sorted).
    """
    elements = list(elements)
    n = len(elements)
    if k < 0 or k > n:
        return
    if n == 0:
        if k == 0:
            yield []
        return
    if k == 0:
        return
    rgs = [0] * n

    def rec(i, used):
        if n - i < k - used:
            return
        if i == n:
            if used == k:
                blocks = [[] for _ in range(k)]
                for x, b in zip(elements, rgs):
                    blocks[b].append(x)
                yield blocks
            return
        for b in range(min(used + 1, k)):
            rgs[i] = b
            yield from rec(i + 1, max(used, b + 1))

    rgs[0] = 0
    yield from rec(1, 1)


def _signings(block: Sequence[int]) -> Iterator[frozenset]:
    for signs in itertools.product((1, -1), repeat=len(block)):
        yield frozenset(s * x for s, x in zip(signs, block))


def _natural_desc(block: Iterable[int]) -> list[int]:
    return sorted(block, reverse=True)


# -- PSSPs -----------------------------------------------------------------------


@dataclass(frozen=True)
class Pssp:
    """Partial standard signed partition; blocks in canonical order."""

    blocks: tuple[frozenset, ...]

    def __post_init__(self):
        blocks = tuple(frozenset(b) for b in self.blocks)
        object.__setattr__(self, "blocks", blocks)
        seen = set()
        for b in blocks:
            if not b:
                raise InvalidPartition("empty block")
            for x in b:
                if x == 0 or abs(x) in seen:
                    raise InvalidPartition(f"letter {x} repeated or zero")
                seen.add(abs(x))
        mins = [min(abs(x) for x in b) for b in blocks]
        if any(a >= b for a, b in zip(mins, mins[1:])):
            raise InvalidPartition("blocks not ordered by minimum absolute value")

    @property
    def support(self) -> frozenset:
        return frozenset(abs(x) for b in self.blocks for x in b)

    def __str__(self):
        if not self.blocks:
            return "{}"
        return " ".join("{" + ",".join(map(str, _natural_desc(b))) + "}" for b in self.blocks)


def enumerate_ssp(support: Iterable[int], k: int) -> Iterator[Pssp]:
    """All SSPs of ``support`` with ``k`` blocks: ``2^|S| * S(|S|, k)`` of them."""
    elems = sorted(support)
    for blocks in set_partitions(elems, k):
        for signed in itertools.product(*(list(_signings(b)) for b in blocks)):
            yield Pssp(tuple(signed))


def enumerate_pssp(n: int, k: int, cap: int | None = None) -> Iterator[Pssp]:
    """All PSSPs of ``[n]`` with ``k`` blocks, grouped by covered subset."""
    _check(n, k, cap)
    for size in range(n + 1):
        for subset in itertools.combinations(range(1, n + 1), size):
            yield from enumerate_ssp(subset, k)


def enumerate_d_subset(n: int, k: int, cap: int | None = None) -> Iterator[Pssp]:
    """PSSPs of ``[n]`` leaving a number of letters other than one uncovered."""
    for p in enumerate_pssp(n, k, cap):
        if n - len(p.support) != 1:
            yield p


def m_stat(p: Pssp) -> tuple[int, int]:
    """``(m, pos)``."""
    pos = sum(1 for b in p.blocks for x in b if x > 0)
    m = 2 * sum(i * len(b) for i, b in enumerate(p.blocks, start=1)) - pos
    return m, pos


def _weight(parts: Iterable[Pssp]) -> LaurentPoly:
    acc: dict[int, int] = {}
    for p in parts:
        m, _ = m_stat(p)
        acc[m] = acc.get(m, 0) + 1
    return LaurentPoly(acc)


def pssp_weight(n: int, k: int, cap: int | None = None) -> LaurentPoly:
    """Sum of ``q^m`` over all PSSPs of ``[n]`` with ``k`` blocks."""
    return _weight(enumerate_pssp(n, k, cap))


def d_weight(n: int, k: int, cap: int | None = None) -> LaurentPoly:
    """Sum of ``q^m`` over the type D family of PSSPs."""
    return _weight(enumerate_d_subset(n, k, cap))


def btilde_enum(n: int, k: int, cap: int | None = None) -> LaurentPoly:
    """Sum of ``q^m`` over full SSPs of ``[n]`` with ``k`` blocks."""
    _check(n, k, cap)
    return _weight(enumerate_ssp(range(1, n + 1), k))


_TWO = ONE + Q


@lru_cache(maxsize=None)
def btilde_rec(n: int, k: int) -> LaurentPoly:
    """The SSP weight from its insertion recurrence.

    A new letter ``n`` or ``-n`` either opens block ``k`` (weight
    ``q^(2k-1) + q^(2k)``) or joins block ``i`` (weight ``q^(2i-1) + q^(2i)``).
    """
    if k < 0 or k > n:
        return ZERO
    if n == 0:
        return ONE
    open_new = _TWO.shift(2 * k - 1) * btilde_rec(n - 1, k - 1) if k else ZERO
    join = (_TWO * q_int(k).subst_q_power(2)).shift(1) * btilde_rec(n - 1, k)
    return open_new + join


# -- type B / D partitions -------------------------------------------------


def _neg(block: Iterable[int]) -> frozenset:
    return frozenset(-x for x in block)


@dataclass(frozen=True)
class TypeBPartition:
    """A type B partition of ``{-n, ..., n}``.

    ``zero_block`` is the full symmetric block containing 0; ``pairs`` holds
    each pair ``{T, -T}`` as a frozenset of two frozensets.
    """

    zero_block: frozenset
    pairs: frozenset

    def __post_init__(self):
        z = frozenset(self.zero_block)
        object.__setattr__(self, "zero_block", z)
        if 0 not in z or _neg(z) != z:
            raise InvalidPartition("zero block must contain 0 and be symmetric")
        for pair in self.pairs:
            a, b = tuple(pair)
            if _neg(a) != b or not a:
                raise InvalidPartition("paired blocks must be nonempty negatives")

    @property
    def n(self) -> int:
        letters = set(self.zero_block)
        for pair in self.pairs:
            for b in pair:
                letters |= b
        return (len(letters) - 1) // 2

    @property
    def k(self) -> int:
        return len(self.pairs)

    @property
    def is_type_d(self) -> bool:
        """Zero block is ``{0}`` or has at least two positive letters."""
        positives = sum(1 for x in self.zero_block if x > 0)
        by_positives = positives == 0 or positives >= 2
        by_size = len(self.zero_block) != 3
        if by_positives != by_size:
            raise AssertionError("type D formulations disagree")
        return by_size


def enumerate_type_b_partitions(n: int, k: int, cap: int | None = None) -> Iterator[TypeBPartition]:
    """Type B partitions of ``{-n..n}`` with ``2k + 1`` blocks."""
    _check(n, k, cap)
    letters = list(range(1, n + 1))
    for size in range(n + 1):
        for zero_pos in itertools.combinations(letters, size):
            zero = frozenset(zero_pos) | _neg(zero_pos) | {0}
            rest = [x for x in letters if x not in zero_pos]
            for blocks in set_partitions(rest, k):
                # fix the sign of each block's smallest letter to pick one of the pair
                choices = []
                for b in blocks:
                    head, tail = b[0], b[1:]
                    choices.append([s | {head} for s in _signings(tail)])
                for chosen in itertools.product(*choices):
                    pairs = frozenset(frozenset((c, _neg(c))) for c in chosen)
                    yield TypeBPartition(zero, pairs)


def enumerate_ordered_signed(n: int, k: int, cap: int | None = None) -> Iterator[tuple[frozenset, ...]]:
    """Ordered signed partitions ``(T_0, T_1, ..., T_2k)`` with ``T_2i = -T_(2i-1)``."""
    _check(n, k, cap)
    letters = list(range(1, n + 1))
    for size in range(n + 1):
        for zero_pos in itertools.combinations(letters, size):
            zero = frozenset(zero_pos) | _neg(zero_pos) | {0}
            rest = [x for x in letters if x not in zero_pos]
            for blocks in set_partitions(rest, k):
                for order in itertools.permutations(blocks):
                    for signed in itertools.product(*(list(_signings(b)) for b in order)):
                        seq = [zero]
                        for s in signed:
                            seq += [s, _neg(s)]
                        yield tuple(seq)


def count_type_d_partitions(n: int, k: int) -> int:
    """``S_D(n, k)`` counted by the number ``p`` of positive letters in the zero block.

    With ``p`` fixed the other ``n - p`` letters form ``k`` unordered pairs of
    blocks: ``2^(n-p-k) S(n-p, k)`` ways; ``p = 1`` is excluded.
    """
    if k < 0 or k > n:
        return 0
    return sum(
        comb(n, p) * 2 ** (n - p - k) * classical("A", n - p, k)
        for p in range(n + 1)
        if p != 1 and n - p >= k
    )
