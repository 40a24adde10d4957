"""q-Stirling numbers of the second kind.

Families, all zero outside ``0 <= k <= n``:

``A``   ``S[n,k] = S[n-1,k-1] + [k] S[n-1,k]``
``B``   ``S_B[n,k] = S_B[n-1,k-1] + [2k+1] S_B[n-1,k]``
``CG``  ``S_{n,k} = q^(2k-1) (1+q) S_{n-1,k-1} + [2k+1] S_{n-1,k}``, ``S_{n,0} = 1``
``R``   ``S_r[n,k] = S_r[n-1,k-1] + [rk+1] S_r[n-1,k]``
``D``   ``S_B[n,k] - n [2]^(n-k-1) q^(n-k-1) S[n-1,k](q^2)``, and 1 on the diagonal

Rows are memoised per family (and per ``r``). Table growth is guarded by a
lock per family so concurrent callers never build the same row twice.
"""
from __future__ import annotations

import threading
from dataclasses import dataclass
from functools import lru_cache

from .errors import InvalidParams
from .qpoly import ONE, Q, ZERO, LaurentPoly, q_int

FAMILIES = ("A", "B", "CG", "R", "D")


class _RowCache:
    """Triangular table built row by row on demand (single-flight)."""

    def __init__(self, first_row, next_row):
        self._rows: list[tuple[LaurentPoly, ...]] = []
        self._first_row = first_row
        self._next_row = next_row
        self._lock = threading.Lock()
        self.rows_built = 0

    def row(self, n: int) -> tuple[LaurentPoly, ...]:
        rows = self._rows
        if n < len(rows):
            return rows[n]
        with self._lock:
            while len(rows) <= n:
                m = len(rows)
                rows.append(self._first_row() if m == 0 else self._next_row(m, rows[m - 1]))
                self.rows_built += 1
            return rows[n]


def _entry(row, k):
    return row[k] if 0 <= k < len(row) else ZERO


def _delta_row():
    return (ONE,)


def _next_a(n, prev):
    return tuple(_entry(prev, k - 1) + q_int(k) * _entry(prev, k) for k in range(n + 1))


def _next_b(n, prev):
    return tuple(_entry(prev, k - 1) + q_int(2 * k + 1) * _entry(prev, k) for k in range(n + 1))


_ONE_PLUS_Q = ONE + Q


def _next_cg(n, prev):
    out = [ONE]
    for k in range(1, n + 1):
        out.append(
            _entry(prev, k - 1) * _ONE_PLUS_Q.shift(2 * k - 1)
            + q_int(2 * k + 1) * _entry(prev, k)
        )
    return tuple(out)


def _next_r(r):
    def step(n, prev):
        return tuple(_entry(prev, k - 1) + q_int(r * k + 1) * _entry(prev, k) for k in range(n + 1))
    return step


_caches: dict[tuple, _RowCache] = {}
_caches_lock = threading.Lock()


def _cache(family: str, r: int | None = None) -> _RowCache:
    key = (family, r)
    cache = _caches.get(key)
    if cache is None:
        with _caches_lock:
            cache = _caches.get(key)
            if cache is None:
                nxt = {"A": _next_a, "B": _next_b, "CG": _next_cg}.get(family)
                if family == "R":
                    nxt = _next_r(r)
                cache = _caches[key] = _RowCache(_delta_row, nxt)
    return cache


def _lookup(family, n, k, r=None):
    if n < 0:
        raise InvalidParams("n must be nonnegative")
    if k < 0 or k > n:
        return ZERO
    return _cache(family, r).row(n)[k]


def stirling_a(n: int, k: int) -> LaurentPoly:
    return _lookup("A", n, k)


def stirling_b(n: int, k: int) -> LaurentPoly:
    return _lookup("B", n, k)


def chow_gessel(n: int, k: int) -> LaurentPoly:
    return _lookup("CG", n, k)


def stirling_r(r: int, n: int, k: int) -> LaurentPoly:
    if r < 1:
        raise InvalidParams("r must be positive")
    return _lookup("R", n, k, r)


def stirling_d(n: int, k: int) -> LaurentPoly:
    """Type D q-Stirling number, from the type A and type B tables."""
    if n < 0:
        raise InvalidParams("n must be nonnegative")
    if k < 0 or k > n:
        return ZERO
    if k == n:
        return ONE
    e = n - k - 1
    correction = (ONE + Q) ** e * stirling_a(n - 1, k).subst_q_power(2)
    return stirling_b(n, k) - correction.shift(e) * n


@dataclass(frozen=True)
class StirlingTable:
    family: str
    rows: tuple[tuple[LaurentPoly, ...], ...]
    r: int | None = None

    def __getitem__(self, nk):
        n, k = nk
        return _entry(self.rows[n], k) if 0 <= n < len(self.rows) else ZERO


def stirling_table(family: str, N: int, r: int | None = None) -> StirlingTable:
    """Rows ``0..N`` of one family as an immutable table."""
    family = family.upper()
    if family not in FAMILIES:
        raise InvalidParams(f"unknown family {family!r}")
    if family == "R" and (r is None or r < 1):
        raise InvalidParams("family R needs r >= 1")
    if family == "D":
        rows = tuple(tuple(stirling_d(n, k) for k in range(n + 1)) for n in range(N + 1))
    else:
        cache = _cache(family, r if family == "R" else None)
        rows = tuple(cache.row(n) for n in range(N + 1))
    return StirlingTable(family, rows, r if family == "R" else None)


# -- classical (q = 1) numbers -------------------------------------------------


@lru_cache(maxsize=None)
def _int_row(family: str, n: int, r: int | None) -> tuple[int, ...]:
    if n == 0:
        return (1,)
    prev = _int_row(family, n - 1, r)
    get = lambda k: prev[k] if 0 <= k < len(prev) else 0
    if family == "A":
        weight = lambda j: j
    elif family == "B":
        weight = lambda j: 2 * j + 1
    else:
        weight = lambda j: r * j + 1
    return tuple(get(k - 1) + weight(k) * get(k) for k in range(n + 1))


def classical(family: str, n: int, k: int, r: int | None = None) -> int:
    """Integer Stirling numbers ``S``, ``S_B`` and ``S_r`` from their own recurrences."""
    family = family.upper()
    if family not in ("A", "B", "R"):
        raise InvalidParams(f"no integer recurrence for family {family!r}")
    if family == "R" and (r is None or r < 1):
        raise InvalidParams("family R needs r >= 1")
    if k < 0 or k > n:
        return 0
    return _int_row(family, n, r if family == "R" else None)[k]
