"""Symmetric, hyperoctahedral and colored permutation groups.

Elements are written in window (one-line) notation. Statistics follow the
usual conventions with an implicit letter ``0`` in front of the window:

* type A: ``des`` and ``maj`` on ``S_n``;
* type B: ``des_B``, ``fmaj = 2 * sum(Des_B) + neg`` on ``B_n`` under the
  natural order ``-n < ... < -1 < 0 < 1 < ... < n``;
* colored: ``des_r``, ``fmaj_r = r * sum(Des_r) + sum(colors)`` on
  ``Z_r wr S_n`` under the order
  ``n^(r-1) < ... < n^1 < ... < 1^(r-1) < ... < 1^1 < 0 < 1 < ... < n``.

The q-Eulerian builders accumulate ``(descents, major statistic)``
histograms over the whole group with vectorised numpy kernels, one chunk
of base permutations at a time, so the group is never stored.
"""
from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Sequence

import numpy as np

from .errors import CapExceeded, InvalidParams
from .qpoly import LaurentPoly


@dataclass(frozen=True)
class Caps:
    """Enumeration size limits.

    ``sn`` and ``bn`` bound ``n``; ``colored`` bounds the group order
    ``r**n * n!``.
    """

    sn: int = 10
    bn: int = 8
    colored: int = 10**7


DEFAULT_CAPS = Caps()


def _check_sn(n: int, caps: Caps | None):
    caps = caps or DEFAULT_CAPS
    if n < 0:
        raise InvalidParams("n must be nonnegative")
    if n > caps.sn:
        raise CapExceeded(f"S_{n} exceeds the cap n <= {caps.sn}")


def _check_bn(n: int, caps: Caps | None):
    caps = caps or DEFAULT_CAPS
    if n < 0:
        raise InvalidParams("n must be nonnegative")
    if n > caps.bn:
        raise CapExceeded(f"B_{n} exceeds the cap n <= {caps.bn}")


def _check_colored(r: int, n: int, caps: Caps | None):
    caps = caps or DEFAULT_CAPS
    if r < 1:
        raise InvalidParams("need at least one color")
    if n < 0:
        raise InvalidParams("n must be nonnegative")
    if r**n * math.factorial(n) > caps.colored:
        raise CapExceeded(
            f"Z_{r} wr S_{n} has {r**n * math.factorial(n)} elements, cap is {caps.colored}"
        )


# -- element types -----------------------------------------------------------


@dataclass(frozen=True)
class SignedPerm:
    """A signed permutation in window notation, e.g. ``(1, 5, -3, 4, 6, -2)``."""

    window: tuple[int, ...]

    def __post_init__(self):
        w = tuple(self.window)
        object.__setattr__(self, "window", w)
        if sorted(abs(x) for x in w) != list(range(1, len(w) + 1)):
            raise InvalidParams(f"{w} is not a signed permutation")

    @property
    def n(self) -> int:
        return len(self.window)

    def __str__(self):
        return " ".join(str(x) for x in self.window)


@dataclass(frozen=True)
class ColoredPerm:
    """``pi_1^{z_1} ... pi_n^{z_n}`` with colors ``z_i`` in ``[0, r-1]``."""

    r: int
    base: tuple[int, ...]
    colors: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "base", tuple(self.base))
        object.__setattr__(self, "colors", tuple(self.colors))
        if self.r < 1:
            raise InvalidParams("need at least one color")
        if sorted(self.base) != list(range(1, len(self.base) + 1)):
            raise InvalidParams(f"{self.base} is not a permutation")
        if len(self.colors) != len(self.base) or any(
            not 0 <= z < self.r for z in self.colors
        ):
            raise InvalidParams(f"bad colors {self.colors} for r={self.r}")

    @property
    def n(self) -> int:
        return len(self.base)

    def __str__(self):
        return " ".join(
            str(p) if z == 0 else f"{p}^{z}" for p, z in zip(self.base, self.colors)
        )


@dataclass(frozen=True)
class SignTypeProfile:
    """Classification of ``[n-1]`` by descent/ascent and the signs around it.

    ``desc_pp``, ``desc_nn``, ``desc_pn`` hold descents of sign type
    ``++``, ``--``, ``+-``; ``asc_pp``, ``asc_nn``, ``asc_np`` hold ascents of
    type ``++``, ``--``, ``-+``.
    """

    desc_pp: frozenset
    desc_nn: frozenset
    desc_pn: frozenset
    asc_pp: frozenset
    asc_nn: frozenset
    asc_np: frozenset

    def sets(self) -> tuple[frozenset, ...]:
        return (self.desc_pp, self.desc_nn, self.desc_pn,
                self.asc_pp, self.asc_nn, self.asc_np)


# -- enumeration -------------------------------------------------------------


def enumerate_sn(n: int, caps: Caps | None = None) -> Iterator[tuple[int, ...]]:
    """All permutations of ``[n]`` in lexicographic order."""
    _check_sn(n, caps)
    return itertools.permutations(range(1, n + 1))


def _sign_patterns(n: int):
    # positive before negative, so 1 comes before -1
    return itertools.product((1, -1), repeat=n)


def bn_windows(n: int, caps: Caps | None = None) -> Iterator[tuple[int, ...]]:
    """Raw windows of ``B_n`` in the order of :func:`enumerate_bn`."""
    _check_bn(n, caps)
    signs = list(_sign_patterns(n))
    for perm in itertools.permutations(range(1, n + 1)):
        for s in signs:
            yield tuple(p * e for p, e in zip(perm, s))


def enumerate_bn(n: int, caps: Caps | None = None) -> Iterator[SignedPerm]:
    """All of ``B_n``: lexicographic in ``|pi|``, then in the sign pattern."""
    return (SignedPerm(w) for w in bn_windows(n, caps))


def enumerate_colored(r: int, n: int, caps: Caps | None = None) -> Iterator[ColoredPerm]:
    _check_colored(r, n, caps)
    colorings = list(itertools.product(range(r), repeat=n))
    for perm in itertools.permutations(range(1, n + 1)):
        for z in colorings:
            yield ColoredPerm(r, perm, z)


# -- statistics ----------------------------------------------------------------


def colored_key(letter: int, color: int, r: int) -> int:
    """Integer key realising the colored total order (0 maps to 0)."""
    if color == 0:
        return letter
    return -(letter * r + color)


def descent_set_a(perm: Sequence[int]) -> list[int]:
    return [i + 1 for i in range(len(perm) - 1) if perm[i] > perm[i + 1]]


def stats_a(perm: Sequence[int]) -> tuple[int, int]:
    """``(des, maj)`` of an ordinary permutation."""
    d = descent_set_a(perm)
    return len(d), sum(d)


def descent_set_b(window: Sequence[int]) -> list[int]:
    """Type B descent positions, including 0 when ``pi_1 < 0``."""
    prev = 0
    out = []
    for i, x in enumerate(window):
        if prev > x:
            out.append(i)
        prev = x
    return out


def neg(window: Sequence[int]) -> int:
    return sum(1 for x in window if x < 0)


def fmaj(window: Sequence[int]) -> int:
    return 2 * sum(descent_set_b(window)) + neg(window)


def stats_b(pi: SignedPerm | Sequence[int]) -> tuple[int, int, int, frozenset]:
    """``(des_B, fmaj, neg, Des_B)``."""
    w = pi.window if isinstance(pi, SignedPerm) else tuple(pi)
    d = descent_set_b(w)
    m = neg(w)
    return len(d), 2 * sum(d) + m, m, frozenset(d)


def stats_r(pi: ColoredPerm) -> tuple[int, int]:
    """``(des_r, fmaj_r)`` of a colored permutation."""
    r = pi.r
    prev = 0
    total = 0
    count = 0
    for i, (p, z) in enumerate(zip(pi.base, pi.colors)):
        cur = colored_key(p, z, r)
        if prev > cur:
            count += 1
            total += i
        prev = cur
    return count, r * total + sum(pi.colors)


# -- the involution psi and sign types --------------------------------------


def psi_window(w: Sequence[int]) -> tuple[int, ...]:
    n = len(w)
    return tuple(x - n - 1 if x > 0 else x + n + 1 for x in reversed(w))


def psi(pi: SignedPerm) -> SignedPerm:
    """Reverse the window, then replace ``x`` by ``x - (n+1)`` or ``x + (n+1)``.

    >>> str(psi(SignedPerm((1, 5, -3, 4, 6, -2))))
    '5 -1 -3 4 -2 -6'
    """
    return SignedPerm(psi_window(pi.window))


def sign_type_profile(pi: SignedPerm | Sequence[int]) -> SignTypeProfile:
    w = pi.window if isinstance(pi, SignedPerm) else tuple(pi)
    buckets: dict[str, set] = {k: set() for k in ("dpp", "dnn", "dpn", "app", "ann", "anp")}
    for i in range(1, len(w)):
        a, b = w[i - 1], w[i]
        kind = "d" if a > b else "a"
        signs = ("p" if a > 0 else "n") + ("p" if b > 0 else "n")
        buckets[kind + signs].add(i)
    # an ascent cannot be +- and a descent cannot be -+ in the natural order
    assert not buckets.get("apn") and not buckets.get("dnp")
    return SignTypeProfile(*(frozenset(buckets[k]) for k in ("dpp", "dnn", "dpn", "app", "ann", "anp")))


# -- vectorised histogram kernels -------------------------------------------


@lru_cache(maxsize=None)
def _perm_array(n: int) -> np.ndarray:
    if n == 0:
        return np.zeros((1, 0), dtype=np.int16)
    return np.array(list(itertools.permutations(range(1, n + 1))), dtype=np.int16)


_CHUNK_CELLS = 1 << 21


def _descent_matrix(values: np.ndarray) -> np.ndarray:
    """Boolean ``(rows, n)`` matrix; column ``i`` is a descent at ``i`` (with 0 prepended)."""
    rows = values.shape[0]
    padded = np.concatenate([np.zeros((rows, 1), dtype=values.dtype), values], axis=1)
    return padded[:, :-1] > padded[:, 1:]


def _accumulate(hist: Counter, desc: np.ndarray, major: np.ndarray, width: int):
    des = desc.sum(axis=1)
    codes = des.astype(np.int64) * width + major
    counts = np.bincount(codes)
    for code in np.flatnonzero(counts):
        hist[divmod(int(code), width)] += int(counts[code])


def _sn_histogram(n: int) -> Counter:
    """``{(des, maj): count}`` over ``S_n``."""
    perms = _perm_array(n)
    hist: Counter = Counter()
    if n == 0:
        hist[(0, 0)] = 1
        return hist
    width = n * (n - 1) // 2 + 1
    weights = np.arange(1, n, dtype=np.int64)
    step = max(1, _CHUNK_CELLS // max(n, 1))
    for start in range(0, len(perms), step):
        chunk = perms[start:start + step]
        desc = chunk[:, :-1] > chunk[:, 1:]
        _accumulate(hist, desc, desc @ weights, width)
    return hist


def _signed_chunks(n: int):
    """Yield windows of ``B_n`` as int16 matrices, chunk by chunk."""
    perms = _perm_array(n)
    signs = np.array(list(_sign_patterns(n)), dtype=np.int16).reshape(-1, n)
    step = max(1, _CHUNK_CELLS // (len(signs) * max(n, 1)))
    for start in range(0, len(perms), step):
        chunk = perms[start:start + step]
        yield (chunk[:, None, :] * signs[None, :, :]).reshape(-1, n)


def bn_window_chunks(n: int, caps: Caps | None = None) -> Iterator[np.ndarray]:
    """All of ``B_n`` as int16 window matrices, in enumeration order."""
    _check_bn(n, caps)
    if n == 0:
        yield np.zeros((1, 0), dtype=np.int16)
        return
    yield from _signed_chunks(n)


def _bn_histogram(n: int) -> Counter:
    """``{(des_B, fmaj): count}`` over ``B_n``."""
    hist: Counter = Counter()
    if n == 0:
        hist[(0, 0)] = 1
        return hist
    width = n * n + 1
    weights = 2 * np.arange(n, dtype=np.int64)
    for w in _signed_chunks(n):
        desc = _descent_matrix(w)
        major = desc @ weights + (w < 0).sum(axis=1)
        _accumulate(hist, desc, major, width)
    return hist


@lru_cache(maxsize=None)
def descent_mask_histogram(n: int) -> dict[tuple[int, int], int]:
    """``{(Des_B bitmask, neg): count}`` over ``B_n``; bit ``i`` marks position ``i``."""
    _check_bn(n, None)
    hist: Counter = Counter()
    if n == 0:
        return {(0, 0): 1}
    bits = (1 << np.arange(n, dtype=np.int64))
    width = n + 1
    for w in _signed_chunks(n):
        desc = _descent_matrix(w)
        codes = (desc @ bits) * width + (w < 0).sum(axis=1)
        counts = np.bincount(codes)
        for code in np.flatnonzero(counts):
            hist[divmod(int(code), width)] += int(counts[code])
    return dict(hist)


def _colored_histogram(r: int, n: int) -> Counter:
    """``{(des_r, fmaj_r): count}`` over ``Z_r wr S_n``."""
    if n == 0:
        return Counter({(0, 0): 1})
    perms = _perm_array(n)
    colorings = np.array(list(itertools.product(range(r), repeat=n)), dtype=np.int16).reshape(-1, n)
    table = np.zeros((n + 1, r), dtype=np.int32)
    for letter in range(1, n + 1):
        for z in range(r):
            table[letter, z] = colored_key(letter, z, r)
    width = r * n * (n - 1) // 2 + (r - 1) * n + 1
    weights = r * np.arange(n, dtype=np.int64)
    color_sums = colorings.sum(axis=1).astype(np.int64)
    step = max(1, _CHUNK_CELLS // (len(colorings) * max(n, 1)))
    hist: Counter = Counter()
    for start in range(0, len(perms), step):
        chunk = perms[start:start + step]
        vals = table[chunk[:, None, :], colorings[None, :, :]].reshape(-1, n)
        desc = _descent_matrix(vals)
        major = desc @ weights + np.tile(color_sums, len(chunk))
        _accumulate(hist, desc, major, width)
    return hist


def _hist_to_polys(hist: Counter, length: int) -> tuple[LaurentPoly, ...]:
    rows: list[dict[int, int]] = [{} for _ in range(length)]
    for (d, e), c in hist.items():
        rows[d][e] = rows[d].get(e, 0) + c
    return tuple(LaurentPoly(r) for r in rows)


# -- q-Eulerian polynomials ---------------------------------------------------


def eulerian_a(n: int, caps: Caps | None = None) -> tuple[LaurentPoly, ...]:
    """``A_{n,k}(q)`` for ``k = 0 .. max(n-1, 0)``: sum of ``q^maj`` over ``des = k``."""
    _check_sn(n, caps)
    return _eulerian_a(n)


@lru_cache(maxsize=None)
def _eulerian_a(n: int):
    return _hist_to_polys(_sn_histogram(n), max(n, 1))


def eulerian_b(n: int, caps: Caps | None = None) -> tuple[LaurentPoly, ...]:
    """``B_{n,k}(q)`` for ``k = 0 .. n``: sum of ``q^fmaj`` over ``des_B = k``."""
    _check_bn(n, caps)
    return _eulerian_b(n)


@lru_cache(maxsize=None)
def _eulerian_b(n: int):
    return _hist_to_polys(_bn_histogram(n), n + 1)


def eulerian_r(r: int, n: int, caps: Caps | None = None) -> tuple[LaurentPoly, ...]:
    """``A^r_{n,k}(q)`` for ``k = 0 .. n``."""
    _check_colored(r, n, caps)
    return _eulerian_r(r, n)


@lru_cache(maxsize=None)
def _eulerian_r(r: int, n: int):
    return _hist_to_polys(_colored_histogram(r, n), n + 1)


def bn_statistic_histogram(n: int, caps: Caps | None = None) -> dict[tuple[int, int], int]:
    """``{(des_B, fmaj): count}`` over ``B_n``."""
    _check_bn(n, caps)
    return dict(_bn_histogram_cached(n))


@lru_cache(maxsize=None)
def _bn_histogram_cached(n: int):
    return _bn_histogram(n)


# -- classical Eulerian numbers ----------------------------------------------


@lru_cache(maxsize=None)
def eulerian_numbers_a(n: int) -> tuple[int, ...]:
    """Classical Eulerian numbers ``A(n, k)``, ``k = 0 .. max(n-1, 0)``.

    Uses ``A(n,k) = (k+1) A(n-1,k) + (n-k) A(n-1,k-1)``.
    """
    if n <= 1:
        return (1,)
    prev = eulerian_numbers_a(n - 1)
    get = lambda k: prev[k] if 0 <= k < len(prev) else 0
    return tuple((k + 1) * get(k) + (n - k) * get(k - 1) for k in range(n))


@lru_cache(maxsize=None)
def eulerian_numbers_b(n: int) -> tuple[int, ...]:
    """Type B Eulerian numbers ``B(n, k)``, ``k = 0 .. n``.

    Uses ``B(n,k) = (2k+1) B(n-1,k) + (2n-2k+1) B(n-1,k-1)``.
    """
    if n == 0:
        return (1,)
    prev = eulerian_numbers_b(n - 1)
    get = lambda k: prev[k] if 0 <= k < len(prev) else 0
    return tuple((2 * k + 1) * get(k) + (2 * n - 2 * k + 1) * get(k - 1) for k in range(n + 1))
