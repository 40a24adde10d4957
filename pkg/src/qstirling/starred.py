"""Descent-starred signed permutations.

A starred permutation is a pair ``(pi, S)`` with ``pi`` in ``B_n`` and ``S`` a
set of type B descent positions of ``pi``. Gap ``i`` (``0 <= i <= n``) is the
space right after ``pi_i``; gap 0 follows the implicit leading 0.

Its statistic subtracts, for each starred gap ``j``, the quantity
``2 * |Des_B(pi) & {j, ..., n-1}| - 1`` from ``fmaj(pi)``.

Starred permutations with ``n - k`` stars are the same thing as ordered set
partitions with sign ``(S_0, ..., S_k)``: write each block decreasingly,
the zero block first, and star the gaps inside blocks.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Sequence

from .errors import InvalidLabel, InvalidParams, InvalidPartition
from .groups import (
    Caps,
    SignedPerm,
    _check_bn,
    bn_windows,
    descent_mask_histogram,
    descent_set_b,
)
from .qpoly import ONE, ZERO, LaurentPoly, q_int


@dataclass(frozen=True)
class StarredPerm:
    perm: SignedPerm
    stars: frozenset

    def __post_init__(self):
        if not isinstance(self.perm, SignedPerm):
            object.__setattr__(self, "perm", SignedPerm(self.perm))
        stars = frozenset(self.stars)
        object.__setattr__(self, "stars", stars)
        if not stars <= set(descent_set_b(self.perm.window)):
            raise InvalidParams(f"stars {sorted(stars)} are not all descents of {self.perm}")

    @property
    def n(self) -> int:
        return self.perm.n

    @property
    def window(self) -> tuple[int, ...]:
        return self.perm.window

    def __str__(self):
        w = self.perm.window
        head = "0* " if 0 in self.stars else ""
        return head + " ".join(
            f"{x}*" if i in self.stars else str(x) for i, x in enumerate(w, start=1)
        )


def enumerate_starred(n: int, k: int, caps: Caps | None = None) -> Iterator[StarredPerm]:
    """All ``(pi, S)`` with ``|S| = k``, in the enumeration order of ``B_n``."""
    if k < 0 or k > n:
        return iter(())
    return _starred_gen(n, k, caps)


def _starred_gen(n, k, caps):
    for w in bn_windows(n, caps):
        des = descent_set_b(w)
        if len(des) < k:
            continue
        perm = SignedPerm(w)
        for s in itertools.combinations(des, k):
            yield StarredPerm(perm, frozenset(s))


def _fmaj_starred(window: Sequence[int], stars) -> int:
    des = descent_set_b(window)
    total = 2 * sum(des) + sum(1 for x in window if x < 0)
    for j in stars:
        total -= 2 * sum(1 for d in des if d >= j) - 1
    return total


def fmaj_starred(sp: StarredPerm) -> int:
    return _fmaj_starred(sp.window, sp.stars)


# -- labelling and insertion -----------------------------------------------------


def _labelling(window: Sequence[int], stars) -> list[int]:
    """``gaps[label]`` for every label of the fmaj-labelling."""
    n = len(window)
    des = descent_set_b(window)
    gaps = [n]
    gaps += [d for d in reversed(des) if d not in stars]
    dset = set(des)
    gaps += [g for g in range(n) if g not in dset]
    return gaps


def fmaj_labelling(sp: StarredPerm) -> dict[int, int]:
    """Map each label to its gap.

    The last gap gets label 0, unstarred descent gaps get 1, 2, ... from
    right to left, then the remaining unstarred gaps are numbered from left
    to right. Starred gaps carry no label.
    """
    return dict(enumerate(_labelling(sp.window, sp.stars)))


def _insert(window, stars, letter, gap):
    new = window[:gap] + (letter,) + window[gap:]
    new_des = descent_set_b(new)
    moved = set()
    for j in stars:
        if j < gap:
            moved.add(j)
        else:
            # the old gap j is now gap j + 1; slide to the previous descent
            target = max(d for d in new_des if d < j + 1)
            moved.add(target)
    if len(moved) != len(stars):
        raise AssertionError("star collision while moving stars")
    return new, frozenset(moved), new_des


def _check_letter(letter: int, n_new: int):
    if abs(letter) != n_new:
        raise InvalidParams(f"can only insert {n_new} or -{n_new}, got {letter}")


def _insert_bar_raw(letter, label, window, stars):
    n_new = len(window) + 1
    k = len(stars)
    if not 0 <= label <= n_new - k - 1:
        raise InvalidLabel(f"label {label} outside 0..{n_new - k - 1}")
    gap = _labelling(window, stars)[label]
    new, moved, _ = _insert(window, stars, letter, gap)
    return new, moved


def _insert_star_raw(letter, label, window, stars):
    n_new = len(window) + 1
    k = len(stars) + 1
    lo = 1 if letter > 0 else 0
    if not lo <= label <= n_new - k:
        raise InvalidLabel(f"label {label} outside {lo}..{n_new - k} for letter {letter}")
    gap = _labelling(window, stars)[label]
    new, moved, new_des = _insert(window, stars, letter, gap)
    last = new_des[-1]
    if last in moved:
        raise AssertionError("rightmost descent already starred")
    return new, moved | {last}


def insert_bar(letter: int, label: int, sp: StarredPerm) -> StarredPerm:
    """Insert ``letter`` at ``label`` keeping the number of stars."""
    _check_letter(letter, sp.n + 1)
    new, stars = _insert_bar_raw(letter, label, sp.window, sp.stars)
    return StarredPerm(SignedPerm(new), stars)


def insert_star(letter: int, label: int, sp: StarredPerm) -> StarredPerm:
    """Insert ``letter`` at ``label`` and star the rightmost descent."""
    _check_letter(letter, sp.n + 1)
    new, stars = _insert_star_raw(letter, label, sp.window, sp.stars)
    return StarredPerm(SignedPerm(new), stars)


def expected_delta(kind: str, letter: int, label: int, n: int, k: int) -> int:
    """Predicted change of the starred statistic under an insertion.

    ``n`` is the size after insertion and ``k`` the number of stars after it.
    """
    if kind == "bar":
        if letter > 0:
            return 2 * label
        return 2 * label - 1 if label else 2 * n - 2 * k - 1
    if kind == "star":
        if letter > 0:
            return 2 * label - 1
        return 2 * label - 2 if label else 2 * n - 2 * k
    raise InvalidParams(f"unknown insertion kind {kind!r}")


# -- generating polynomials --------------------------------------------------


@lru_cache(maxsize=None)
def _bfmaj_row(n: int) -> tuple[LaurentPoly, ...]:
    # Everything about (pi, S) that the statistic sees is Des_B(pi) and
    # neg(pi), so B_n is visited once as a histogram over those two values.
    acc = [dict() for _ in range(n + 1)]
    for (mask, negs), count in descent_mask_histogram(n).items():
        des = [i for i in range(n) if mask >> i & 1]
        base = 2 * sum(des) + negs
        for k in range(len(des) + 1):
            row = acc[k]
            for s in itertools.combinations(des, k):
                e = base - sum(2 * sum(1 for d in des if d >= j) - 1 for j in s)
                row[e] = row.get(e, 0) + count
    return tuple(LaurentPoly(r) for r in acc)


def bfmaj_enum(n: int, k: int, caps: Caps | None = None) -> LaurentPoly:
    """Sum of the starred statistic over ``(pi, S)`` with ``|S| = k``."""
    _check_bn(n, caps)
    if k < 0 or k > n:
        return ZERO
    return _bfmaj_row(n)[k]


def bfmaj_enum_naive(n: int, k: int, caps: Caps | None = None) -> LaurentPoly:
    """Same as :func:`bfmaj_enum`, object by object."""
    acc: dict[int, int] = {}
    for sp in enumerate_starred(n, k, caps):
        e = fmaj_starred(sp)
        acc[e] = acc.get(e, 0) + 1
    return LaurentPoly(acc)


@lru_cache(maxsize=None)
def bfmaj_rec(n: int, k: int) -> LaurentPoly:
    if k < 0 or k > n:
        return ZERO
    if k == n:
        return ONE
    return q_int(2 * n - 2 * k) * bfmaj_rec(n - 1, k) + q_int(2 * n - 2 * k + 1) * bfmaj_rec(n - 1, k - 1)


@lru_cache(maxsize=None)
def ordered_stirling_b(n: int, k: int) -> LaurentPoly:
    """``[2k] S[n-1,k-1] + [2k+1] S[n-1,k]`` with a Kronecker delta row at ``n = 0``."""
    if n < 0 or k < 0 or k > n:
        return ZERO
    if n == 0:
        return ONE
    return q_int(2 * k) * ordered_stirling_b(n - 1, k - 1) + q_int(2 * k + 1) * ordered_stirling_b(n - 1, k)


# -- ordered set partitions with sign ------------------------------------------


@dataclass(frozen=True)
class OrderedSignPartition:
    """``(S_0, S_1, ..., S_k)``; ``S_0`` holds 0 and the negative zero-block letters."""

    parts: tuple[frozenset, ...]

    def __post_init__(self):
        parts = tuple(frozenset(p) for p in self.parts)
        object.__setattr__(self, "parts", parts)
        if not parts or 0 not in parts[0] or any(x > 0 for x in parts[0]):
            raise InvalidPartition("first part must contain 0 and no positive letter")
        letters = [abs(x) for p in parts for x in p if x != 0]
        if any(not p for p in parts[1:]) or any(0 in p for p in parts[1:]):
            raise InvalidPartition("later parts must be nonempty and avoid 0")
        if sorted(letters) != list(range(1, len(letters) + 1)):
            raise InvalidPartition("absolute values must form [n] exactly once")

    @property
    def n(self) -> int:
        return sum(len(p) for p in self.parts) - 1

    @property
    def k(self) -> int:
        return len(self.parts) - 1


def partition_to_starred(p: OrderedSignPartition) -> StarredPerm:
    """Write blocks decreasingly, zero block first, and star inner gaps."""
    window: list[int] = []
    stars = set()
    zero_rest = sorted((x for x in p.parts[0] if x != 0), reverse=True)
    if zero_rest:
        stars.add(0)
    for block in [zero_rest] + [sorted(b, reverse=True) for b in p.parts[1:]]:
        for j, x in enumerate(block):
            window.append(x)
            if j < len(block) - 1:
                stars.add(len(window))
    return StarredPerm(SignedPerm(tuple(window)), frozenset(stars))


def starred_to_partition(sp: StarredPerm) -> OrderedSignPartition:
    """Cut ``0 pi_1 ... pi_n`` at every unstarred gap."""
    seq = (0,) + sp.window
    parts = []
    current = [0]
    for gap in range(len(sp.window)):
        if gap in sp.stars:
            current.append(seq[gap + 1])
        else:
            parts.append(frozenset(current))
            current = [seq[gap + 1]]
    parts.append(frozenset(current))
    return OrderedSignPartition(tuple(parts))
