"""Registry of exactly checkable identities.

Each entry computes a left side and a right side through different code
paths and compares them structurally. A report covers one parameter point;
when an entry is indexed by ``k`` (or ``l``) and that index is not given,
the values for every index are packed into a polynomial in ``t`` so one
report covers a whole row.

Entries flagged ``relation`` compare two quantities read off the same
objects (symmetries, involutions, counts of elements satisfying a
statistic relation); they are exempt from the route disjointness rule.
Entries flagged ``control`` are deliberately corrupted copies that must fail.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from math import comb, factorial
from typing import Callable

import numpy as np

from . import groups, partitions, starred, stirling
from .errors import InvalidParams, NotDivisible, UnknownIdentity
from .groups import Caps
from .qpoly import (
    ONE,
    Q,
    ZERO,
    LaurentPoly,
    TPoly,
    TSeries,
    div_exact,
    falling_factorial,
    one_minus_tq,
    q_binomial,
    q_factorial,
    q_int,
    series_from_rational,
)

# the colored cap is raised so that Z_2 wr S_8 fits
VERIFY_CAPS = Caps(sn=10, bn=8, colored=2**8 * factorial(8))
DEFAULT_ORDER = 8

_TWO = ONE + Q


def _mono(e: int, c: int = 1) -> LaurentPoly:
    return LaurentPoly.monomial(e, c)


def _qbin(n: int, k: int, r: int = 1) -> LaurentPoly:
    return q_binomial(n, k).subst_q_power(r)


def _qfact(k: int, r: int = 1) -> LaurentPoly:
    return q_factorial(k).subst_q_power(r)


def _get(row, i):
    return row[i] if 0 <= i < len(row) else ZERO


# -- reports ------------------------------------------------------------------


@dataclass(frozen=True)
class IdentityReport:
    id: str
    params: dict
    lhs: str
    rhs: str
    equal: bool
    witness: dict | None = None
    index: str | None = None

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "params": dict(self.params),
            "equal": self.equal,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "witness": self.witness,
            "index": self.index,
        }

    def params_text(self) -> str:
        return ";".join(f"{k}={v}" for k, v in self.params.items())


def _coefficients(x) -> dict[tuple[int, int], int]:
    """``{(t-degree, q-exponent): coefficient}`` of any value a side can take."""
    if isinstance(x, int):
        return {(0, 0): x} if x else {}
    if isinstance(x, LaurentPoly):
        return {(0, e): c for e, c in x.terms}
    if isinstance(x, (TPoly, TSeries)):
        out = {}
        for d, coeff in enumerate(x.coeffs):
            for e, c in coeff.terms:
                out[(d, e)] = c
        return out
    raise TypeError(f"cannot compare values of type {type(x).__name__}")


def first_difference(lhs, rhs) -> dict | None:
    """Lowest ``(t, q)`` location where the two sides differ, or None."""
    a, b = _coefficients(lhs), _coefficients(rhs)
    for key in sorted(set(a) | set(b)):
        if a.get(key, 0) != b.get(key, 0):
            return {"t": key[0], "q": key[1], "lhs": a.get(key, 0), "rhs": b.get(key, 0)}
    return None


def _corrupt(x):
    """Push the exponent of the top term of the last coefficient up by one."""
    if isinstance(x, int):
        return x + 1
    if isinstance(x, LaurentPoly):
        if x.is_zero():
            return ONE
        e, c = x.terms[-1]
        return x - _mono(e, c) + _mono(e + 1, c)
    if isinstance(x, (TPoly, TSeries)):
        coeffs = list(x.coeffs)
        idx = max((i for i, c in enumerate(coeffs) if not c.is_zero()), default=0)
        if not coeffs:
            coeffs = [ZERO]
        coeffs[idx] = _corrupt(coeffs[idx])
        return TPoly(coeffs) if isinstance(x, TPoly) else TSeries(coeffs, x.order)
    raise TypeError(type(x).__name__)


# -- registry plumbing -----------------------------------------------------


@dataclass(frozen=True)
class GridOptions:
    max_n: int | None = None
    r_set: tuple[int, ...] | None = None
    order: int | None = None


@dataclass(frozen=True)
class Identity:
    id: str
    claim: str
    lhs_route: tuple[str, ...]
    rhs_route: tuple[str, ...]
    compute: Callable[[dict, Caps], tuple]
    grid: Callable[[GridOptions], list[dict]]
    index: str | None = "k"
    relation: bool = False
    control: bool = False
    params: tuple[str, ...] = ("n",)


REGISTRY: dict[str, Identity] = {}


def _register(ident: Identity):
    if ident.id in REGISTRY:
        raise ValueError(f"duplicate identity id {ident.id}")
    REGISTRY[ident.id] = ident
    return ident


def _top(default: int, g: GridOptions) -> int:
    return default if g.max_n is None else min(default, g.max_n)


def n_grid(lo: int, hi: int):
    def grid(g: GridOptions):
        return [{"n": n} for n in range(lo, _top(hi, g) + 1)]
    return grid


def rn_grid(lo: int, hi, r_default=(1, 2, 3), series=False):
    """``hi`` is an int or a function of ``r``."""
    def grid(g: GridOptions):
        out = []
        for r in g.r_set or r_default:
            top = hi(r) if callable(hi) else hi
            for n in range(lo, _top(top, g) + 1):
                p = {"r": r, "n": n}
                if series:
                    p["order"] = g.order or DEFAULT_ORDER
                out.append(p)
        return out
    return grid


def _indexed(p: dict, kmax: int, fn, name: str = "k"):
    """Evaluate ``fn`` at ``p[name]`` or pack it over ``0..kmax`` into ``t``."""
    if name in p:
        return fn(p[name])
    pairs = [fn(k) for k in range(kmax + 1)]
    return TPoly([a for a, _ in pairs]), TPoly([b for _, b in pairs])


# -- type A ----------------------------------------------------------------------


def _a_classical(p, caps):
    n = p["n"]
    eul = groups.eulerian_numbers_a(n)

    def at(k):
        lhs = factorial(k) * stirling.classical("A", n, k)
        rhs = sum(eul[l - 1] * comb(n - l, k - l) for l in range(1, k + 1))
        return lhs, rhs
    return _indexed(p, n, at)


def _a_q(p, caps):
    n = p["n"]
    eul = groups.eulerian_a(n, caps)

    def at(k):
        lhs = _mono(comb(k, 2)) * q_factorial(k) * stirling.stirling_a(n, k)
        rhs = ZERO
        for l in range(1, k + 1):
            rhs += _mono(k * (k - l)) * _get(eul, l - 1) * q_binomial(n - l, k - l)
        return lhs, rhs
    return _indexed(p, n, at)


def _a_q_shifted(p, caps):
    n = p["n"]
    eul = groups.eulerian_a(n, caps)

    def at(k):
        lhs = _mono(comb(k + 1, 2)) * q_factorial(k) * stirling.stirling_a(n + 1, k + 1)
        rhs = ZERO
        for l in range(k + 1):
            rhs += _mono(k * (k - l)) * _get(eul, l) * q_binomial(n - l, k - l)
        return lhs, rhs
    return _indexed(p, n, at)


def _frobenius_a(p, caps):
    n, order = p["n"], p.get("order", DEFAULT_ORDER)
    numer = TPoly([ZERO] + list(groups.eulerian_a(n, caps)))
    lhs = series_from_rational(numer, [one_minus_tq(i) for i in range(n + 1)], order)
    rhs = TSeries([], order)
    for k in range(n + 1):
        c = _mono(comb(k, 2)) * q_factorial(k) * stirling.stirling_a(n, k)
        num = TPoly([ZERO] * k + [c])
        rhs = rhs + series_from_rational(num, [one_minus_tq(i) for i in range(k + 1)], order)
    return lhs, rhs


# -- type B ----------------------------------------------------------------


def _b_classical(p, caps):
    n = p["n"]
    eul = groups.eulerian_numbers_b(n)

    def at(k):
        lhs = 2**k * factorial(k) * stirling.classical("B", n, k)
        rhs = sum(eul[l] * comb(n - l, k - l) for l in range(k + 1))
        return lhs, rhs
    return _indexed(p, n, at)


def _thm_lhs(n, k):
    return _TWO**k * _qfact(k, 2) * stirling.stirling_b(n, k)


def _thm_main_b(p, caps):
    n = p["n"]
    eul = groups.eulerian_b(n, caps)

    def at(k):
        rhs = ZERO
        for l in range(k + 1):
            rhs += _mono(k * (k - 2 * l)) * eul[l] * _qbin(n - l, k - l, 2)
        return _thm_lhs(n, k), rhs
    return _indexed(p, n, at)


def _euler_side(n, k, eul):
    """``sum_l q^((n-k)(2l-n-k)) B_{n,n-l} [n-l, k-l]_{q^2}``."""
    out = ZERO
    for l in range(k + 1):
        out += _mono((n - k) * (2 * l - n - k)) * eul[n - l] * _qbin(n - l, k - l, 2)
    return out


def _thm_main_b_trans(p, caps):
    n = p["n"]
    eul = groups.eulerian_b(n, caps)
    return _indexed(p, n, lambda k: (_thm_lhs(n, k), _euler_side(n, k, eul)))


def _cg_relation(p, caps):
    n = p["n"]

    def at(k):
        rhs = _TWO**k * _mono(k * k) * stirling.stirling_b(n, k)
        return stirling.chow_gessel(n, k), rhs
    return _indexed(p, n, at)


def _b_symmetry(p, caps):
    n = p["n"]
    eul = groups.eulerian_b(n, caps)
    return _indexed(p, n, lambda k: (eul[k], _mono(2 * n * k - n * n) * eul[n - k]))


def _psi_counts(n: int, caps) -> dict[str, int]:
    """Counts of elements of ``B_n`` satisfying each ``psi`` relation."""
    return dict(_psi_counts_cached(n, (caps or VERIFY_CAPS).bn))


@lru_cache(maxsize=None)
def _psi_counts_cached(n: int, bn_cap: int):
    out = {"total": 0, "involution": 0, "des": 0, "fmaj": 0, "index": 0}
    target = np.arange(1, n + 1)
    weights = 2 * np.arange(n, dtype=np.int64)
    pos = np.arange(1, n, dtype=np.int64)
    for w in groups.bn_window_chunks(n, Caps(bn=bn_cap)):
        w = w.astype(np.int64)
        rows = w.shape[0]
        out["total"] += rows
        if n == 0:
            for key in ("involution", "des", "fmaj", "index"):
                out[key] += rows
            continue
        flipped = w[:, ::-1]
        tw = np.where(flipped > 0, flipped - n - 1, flipped + n + 1)
        back = tw[:, ::-1]
        back = np.where(back > 0, back - n - 1, back + n + 1)
        valid = (np.sort(np.abs(tw), axis=1) == target).all(axis=1)
        out["involution"] += int(((back == w).all(axis=1) & valid).sum())

        desc = groups._descent_matrix(w)
        tdesc = groups._descent_matrix(tw)
        des, tdes = desc.sum(axis=1), tdesc.sum(axis=1)
        out["des"] += int((tdes == n - des).sum())
        fm = desc @ weights + (w < 0).sum(axis=1)
        tfm = tdesc @ weights + (tw < 0).sum(axis=1)
        out["fmaj"] += int((fm == 2 * n * des - n * n + tfm).sum())

        # +- pairs are always descents and -+ pairs always ascents
        plus_minus = (w[:, :-1] > 0) & (w[:, 1:] < 0)
        minus_plus = (w[:, :-1] < 0) & (w[:, 1:] > 0)
        left = plus_minus @ pos + (w < 0).sum(axis=1)
        right = minus_plus @ pos + np.where(w[:, -1] < 0, n, 0)
        out["index"] += int((left == right).sum())
    return out


def _psi_relation(key):
    def compute(p, caps):
        c = _psi_counts(p["n"], caps)
        return c[key], c["total"]
    return compute


def _specialize_r2_stats(p, caps):
    n = p["n"]
    total = hits = 0
    for w in groups.bn_windows(n, caps):
        cp = groups.ColoredPerm(2, tuple(abs(x) for x in w), tuple(int(x < 0) for x in w))
        d, f, _, _ = groups.stats_b(w)
        hits += groups.stats_r(cp) == (d, f)
        total += 1
    return hits, total


def _specialize_r1_stats(p, caps):
    n = p["n"]
    total = hits = 0
    for perm in groups.enumerate_sn(n, caps):
        cp = groups.ColoredPerm(1, perm, (0,) * n)
        hits += groups.stats_r(cp) == groups.stats_a(perm)
        total += 1
    return hits, total


# -- starred permutations ------------------------------------------------------


def _starred_product(p, caps):
    n = p["n"]
    lhs = TPoly([starred.bfmaj_enum(n, k, caps) for k in range(n + 1)])
    rhs = TPoly()
    for (des, fm), count in sorted(groups.bn_statistic_histogram(n, caps).items()):
        term = TPoly([_mono(fm, count)])
        for i in range(1, des + 1):
            term = term * TPoly.linear(ONE, _mono(-(2 * i - 1)))
        rhs = rhs + term
    return lhs, rhs


def _bfmaj_euler(p, caps):
    n = p["n"]
    eul = groups.eulerian_b(n, caps)
    return _indexed(p, n, lambda k: (starred.bfmaj_enum(n, n - k, caps), _euler_side(n, k, eul)))


def _bfmaj_rec(p, caps):
    n = p["n"]
    return _indexed(p, n, lambda k: (starred.bfmaj_enum(n, k, caps), starred.bfmaj_rec(n, k)))


def _so_closed_form(p, caps):
    n = p["n"]
    return _indexed(
        p, n, lambda k: (starred.bfmaj_enum(n, n - k, caps), starred.ordered_stirling_b(n, k))
    )


def _so_product(p, caps):
    n = p["n"]
    return _indexed(p, n, lambda k: (starred.ordered_stirling_b(n, k), _thm_lhs(n, k)))


@lru_cache(maxsize=None)
def _phi_sweep(n: int) -> tuple[tuple[int, int, int, int], ...]:
    """Per ``k``: (delta matches, insertions, distinct images, ``|B^>_{n,k}|``)."""
    sources: dict[int, list] = {}
    for w in groups.bn_windows(n - 1, VERIFY_CAPS):
        des = groups.descent_set_b(w)
        for size in range(len(des) + 1):
            for s in itertools.combinations(des, size):
                stars = frozenset(s)
                sources.setdefault(size, []).append((w, stars, starred._fmaj_starred(w, stars)))
    full = [0] * (n + 1)
    for (mask, _), count in groups.descent_mask_histogram(n).items():
        d = bin(mask).count("1")
        for k in range(d + 1):
            full[k] += count * comb(d, k)
    out = []
    for k in range(n + 1):
        matches = total = 0
        images = set()
        for letter in (n, -n):
            for w, stars, f0 in sources.get(k, ()):
                for i in range(n - k):
                    new, ns = starred._insert_bar_raw(letter, i, w, stars)
                    total += 1
                    matches += starred._fmaj_starred(new, ns) - f0 == starred.expected_delta("bar", letter, i, n, k)
                    images.add(_checked(new, ns))
            lo = 1 if letter > 0 else 0
            for w, stars, f0 in sources.get(k - 1, ()):
                for i in range(lo, n - k + 1):
                    new, ns = starred._insert_star_raw(letter, i, w, stars)
                    total += 1
                    matches += starred._fmaj_starred(new, ns) - f0 == starred.expected_delta("star", letter, i, n, k)
                    images.add(_checked(new, ns))
        out.append((matches, total, len(images), full[k]))
    return tuple(out)


def _checked(window, stars):
    if not stars <= set(groups.descent_set_b(window)):
        raise AssertionError(f"insertion produced stars off the descents: {window} {sorted(stars)}")
    return window, stars


def _fmaj_deltas(p, caps):
    n = p["n"]
    rows = _phi_sweep(n)
    return _indexed(p, n, lambda k: (rows[k][0], rows[k][1]))


def _phi_images(p, caps):
    # 2 * distinct - insertions equals |B^>_{n,k}| exactly when the maps are
    # injective, their images are disjoint, and they cover everything
    n = p["n"]
    rows = _phi_sweep(n)
    return _indexed(p, n, lambda k: (2 * rows[k][2] - rows[k][1], rows[k][3]))


# -- signed partitions -------------------------------------------------------


def _prefactor(k):
    return _mono(k * k) * _TWO**k


def _pssp_weight(p, caps):
    n = p["n"]
    return _indexed(p, n, lambda k: (_prefactor(k) * stirling.stirling_b(n, k), partitions.pssp_weight(n, k)))


def _d_count(p, caps):
    n = p["n"]

    def at(k):
        rhs = sum(1 for _ in partitions.enumerate_d_subset(n, k))
        return 2**k * stirling.stirling_d(n, k).at_one(), rhs
    return _indexed(p, n, at)


def _d_weight(p, caps):
    n = p["n"]
    return _indexed(p, n, lambda k: (_prefactor(k) * stirling.stirling_d(n, k), partitions.d_weight(n, k)))


def _d_partition_count(p, caps):
    n = p["n"]

    def at(k):
        rhs = sum(1 for t in partitions.enumerate_type_b_partitions(n, k) if t.is_type_d)
        return stirling.stirling_d(n, k).at_one(), rhs
    return _indexed(p, n, at)


def _btilde(p, caps):
    n = p["n"]

    def at(k):
        lhs = _TWO**n * _mono(k * (k - 1) + n) * stirling.stirling_a(n, k).subst_q_power(2)
        return lhs, partitions.btilde_enum(n, k)
    return _indexed(p, n, at)


def _btilde_rec(p, caps):
    n = p["n"]
    return _indexed(p, n, lambda k: (partitions.btilde_rec(n, k), partitions.btilde_enum(n, k)))


def _b_from_a_q(p, caps):
    n = p["n"]

    def at(k):
        rhs = ZERO
        for j in range(k, n + 1):
            rhs += _TWO ** (j - k) * _mono(j - k, comb(n, j)) * stirling.stirling_a(j, k).subst_q_power(2)
        return stirling.stirling_b(n, k), rhs
    return _indexed(p, n, at)


def stirling_d_by_weight(n: int, k: int) -> LaurentPoly:
    """Type D q-Stirling number from SSP weights, by exact division.

    A PSSP of ``[n]`` leaving ``u`` letters uncovered has the weight of a full
    SSP of ``n - u`` letters, so the type D sum is a binomial combination of
    the SSP weights with ``u = 1`` left out.
    """
    if k < 0 or k > n:
        return ZERO
    total = ZERO
    for u in range(n + 1):
        if u != 1:
            total += partitions.btilde_rec(n - u, k) * comb(n, u)
    return div_exact(total, _prefactor(k))


def _b_from_d_q(p, caps):
    n = p["n"]

    def at(k):
        rhs = stirling_d_by_weight(n, k)
        if k < n:
            e = n - k - 1
            rhs += _TWO**e * _mono(e, n) * stirling.stirling_a(n - 1, k).subst_q_power(2)
        return stirling.stirling_b(n, k), rhs
    return _indexed(p, n, at)


def _b_from_a(p, caps):
    n = p["n"]

    def at(k):
        rhs = sum(2 ** (j - k) * comb(n, j) * stirling.classical("A", j, k) for j in range(k, n + 1))
        return stirling.classical("B", n, k), rhs
    return _indexed(p, n, at)


def _b_from_d(p, caps):
    n = p["n"]

    def at(k):
        rhs = partitions.count_type_d_partitions(n, k)
        if k < n:
            rhs += n * 2 ** (n - k - 1) * stirling.classical("A", n - 1, k)
        return stirling.classical("B", n, k), rhs
    return _indexed(p, n, at)


# -- falling factorial bases --------------------------------------------------


def _t_power(n):
    return TPoly.t() ** n


def _classical_ff(kind, n, k, r=None):
    return falling_factorial(kind, n, k, r).specialize_q_one()


def _basis_a(p, caps):
    n = p["n"]
    rhs = TPoly()
    for k in range(n + 1):
        rhs = rhs + _classical_ff("A", n, k) * stirling.classical("A", n, k)
    return _t_power(n), rhs


def _basis_b(p, caps):
    n = p["n"]
    rhs = TPoly()
    for k in range(n + 1):
        rhs = rhs + _classical_ff("B", n, k) * stirling.classical("B", n, k)
    return _t_power(n), rhs


def _basis_d(p, caps):
    n = p["n"]
    rhs = TPoly()
    for k in range(n + 1):
        rhs = rhs + _classical_ff("D", n, k) * partitions.count_type_d_partitions(n, k)
    if n >= 1:
        rhs = rhs + (TPoly.linear(-1, 1) ** (n - 1) - _classical_ff("D", n, n - 1)) * n
    return _t_power(n), rhs


def _basis_a_q(p, caps):
    n = p["n"]
    rhs = TPoly()
    for k in range(n + 1):
        rhs = rhs + falling_factorial("A", n, k) * stirling.stirling_a(n, k)
    return _t_power(n), rhs


def _basis_b_q(p, caps):
    n = p["n"]
    rhs = TPoly()
    for k in range(n + 1):
        rhs = rhs + falling_factorial("B", n, k) * stirling.stirling_b(n, k)
    return _t_power(n), rhs


def _basis_d_q(p, caps):
    n = p["n"]
    rhs = TPoly()
    for k in range(n + 1):
        rhs = rhs + falling_factorial("D", n, k) * stirling.stirling_d(n, k)
    if n >= 1:
        rhs = rhs + TPoly.linear(-1, 1) ** (n - 1) * n
        rhs = rhs - falling_factorial("D", n, n - 1) * (q_int(n) * _mono(n - 1))
    return _t_power(n), rhs


def _basis_r_q(p, caps):
    r, n = p["r"], p["n"]
    rhs = TPoly()
    for k in range(n + 1):
        rhs = rhs + falling_factorial("R", n, k, r) * stirling.stirling_r(r, n, k)
    return _t_power(n), rhs


def _basis_bd_bridge(p, caps):
    n = p["n"]
    rhs = falling_factorial("D", n, n) - falling_factorial("D", n, n - 1) * (q_int(n) * _mono(n - 1))
    return falling_factorial("B", n, n), rhs


# -- q-series ---------------------------------------------------------------


def _q_binom_theorem(p, caps):
    n = p["n"]
    lhs = TPoly([ONE])
    for i in range(1, n + 1):
        lhs = lhs * one_minus_tq(i - 1)
    rhs = TPoly([q_binomial(n, j) * _mono(j * (j - 1) // 2, (-1) ** j) for j in range(n + 1)])
    return lhs, rhs


def _q_binom_negative(p, caps):
    n, order = p["n"], p.get("order", DEFAULT_ORDER)
    lhs = series_from_rational(1, [one_minus_tq(i - 1) for i in range(1, n + 1)], order)
    rhs = TSeries([q_binomial(n + j - 1, j) for j in range(order)], order)
    return lhs, rhs


def _r_coefficient(r, n, k):
    e = r * comb(k + 1, 2) + (1 - r) * k
    return _mono(e) * q_int(r) ** k * _qfact(k, r) * stirling.stirling_r(r, n, k)


def _power_sum_series(r, n, order):
    return TSeries([q_int(r * m + 1) ** n for m in range(order)], order)


def _r_denominator(r, k):
    return [one_minus_tq(r * i) for i in range(k + 1)]


def _stirling_r_series(r, n, order):
    out = TSeries([], order)
    for k in range(n + 1):
        num = TPoly([ZERO] * k + [_r_coefficient(r, n, k)])
        out = out + series_from_rational(num, _r_denominator(r, k), order)
    return out


def _eulerian_r_series(r, n, order, caps):
    numer = TPoly(groups.eulerian_r(r, n, caps))
    return series_from_rational(numer, _r_denominator(r, n), order)


def _genfun_r(p, caps):
    r, n, order = p["r"], p["n"], p.get("order", DEFAULT_ORDER)
    return _stirling_r_series(r, n, order), _power_sum_series(r, n, order)


def _carlitz_r(p, caps):
    r, n, order = p["r"], p["n"], p.get("order", DEFAULT_ORDER)
    return _eulerian_r_series(r, n, order, caps), _power_sum_series(r, n, order)


def _frobenius_r(p, caps):
    r, n, order = p["r"], p["n"], p.get("order", DEFAULT_ORDER)
    return _eulerian_r_series(r, n, order, caps), _stirling_r_series(r, n, order)


def _thm_main_r(p, caps):
    r, n = p["r"], p["n"]
    eul = groups.eulerian_r(r, n, caps)

    def at(k):
        rhs = ZERO
        for l in range(k + 1):
            rhs += _mono(r * k * (k - l)) * eul[l] * _qbin(n - l, k - l, r)
        return _r_coefficient(r, n, k), rhs
    return _indexed(p, n, at)


def _q_extension(p, caps):
    r, n, l, order = p["r"], p["n"], p["l"], p.get("order", DEFAULT_ORDER)
    lhs = series_from_rational(1, _r_denominator(r, n), order)
    rhs = TSeries([], order)
    for k in range(l, n + 1):
        num = TPoly([ZERO] * (k - l) + [_mono(r * k * (k - l)) * _qbin(n - l, k - l, r)])
        rhs = rhs + series_from_rational(num, _r_denominator(r, k), order)
    return lhs, rhs


def _q_extension_grid(g: GridOptions):
    out = []
    order = g.order or DEFAULT_ORDER
    for r in g.r_set or (1, 2, 3):
        for n in range(_top(6, g) + 1):
            for l in range(n + 1):
                out.append({"r": r, "n": n, "l": l, "order": order})
    return out


def _chu_vandermonde(p, caps):
    n, m = p["n"], p["m"]

    def at(l):
        rhs = ZERO
        for k in range(n - l + 1):
            rhs += q_binomial(n - l, k) * q_binomial(m + l, m - k) * _mono(k * (k + l))
        return q_binomial(n + m, m), rhs
    return _indexed(p, n, at, "l")


def _chu_grid(g: GridOptions):
    top = _top(8, g)
    return [{"n": n, "m": m} for n in range(top + 1) for m in range(top + 1)]


# -- colored specializations -------------------------------------------------


def _specialize_r1(p, caps):
    n = p["n"]
    return _indexed(p, n, lambda k: (stirling.stirling_r(1, n, k), stirling.stirling_a(n + 1, k + 1)))


def _specialize_r2(p, caps):
    n = p["n"]
    return _indexed(p, n, lambda k: (stirling.stirling_r(2, n, k), stirling.stirling_b(n, k)))


def _specialize_r1_eulerian(p, caps):
    n = p["n"]
    a = groups.eulerian_a(n, caps)
    return TPoly(groups.eulerian_r(1, n, caps)), TPoly(a)


def _specialize_r2_eulerian(p, caps):
    n = p["n"]
    return TPoly(groups.eulerian_r(2, n, caps)), TPoly(groups.eulerian_b(n, caps))


def _thm_r_top(r: int) -> int:
    """Largest ``n <= 6`` whose colored group has at most 2 * 10^6 elements."""
    n = 0
    while n < 6 and r ** (n + 1) * factorial(n + 1) <= 2 * 10**6:
        n += 1
    return n


# -- the registry ----------------------------------------------------------------

R = _register
ENUM_B, ENUM_A, ENUM_R = "groups:B_n-enumeration", "groups:S_n-enumeration", "groups:colored-enumeration"
REC = "stirling:recurrence"
SERIES = "qpoly:series-expansion"

R(Identity("a-classical", "k! S(n,k) = sum_{l=1}^k A(n,l-1) C(n-l,k-l)",
           ("stirling:integer-recurrence",), ("groups:eulerian-integer-recurrence",), _a_classical, n_grid(1, 10)))
R(Identity("a-q", "q^C(k,2) [k]! S[n,k] = sum_{l=1}^k q^(k(k-l)) A_{n,l-1}(q) [n-l,k-l]",
           (REC,), (ENUM_A,), _a_q, n_grid(1, 8)))
R(Identity("a-q-shifted", "q^C(k+1,2) [k]! S[n+1,k+1] = sum_{l=0}^k q^(k(k-l)) A_{n,l}(q) [n-l,k-l]",
           (REC,), (ENUM_A,), _a_q_shifted, n_grid(0, 8)))
R(Identity("b-classical", "2^k k! S_B(n,k) = sum_l B(n,l) C(n-l,k-l)",
           ("stirling:integer-recurrence",), ("groups:eulerian-integer-recurrence",), _b_classical, n_grid(0, 10)))
R(Identity("thm-main-B", "[2]^k [k]_{q^2}! S_B[n,k] = sum_l q^(k(k-2l)) B_{n,l}(q) [n-l,k-l]_{q^2}",
           (REC,), (ENUM_B,), _thm_main_b, n_grid(0, 7)))
R(Identity("thm-main-B-trans", "[2]^k [k]_{q^2}! S_B[n,k] = sum_l q^((n-k)(2l-n-k)) B_{n,n-l}(q) [n-l,k-l]_{q^2}",
           (REC,), (ENUM_B,), _thm_main_b_trans, n_grid(0, 7)))
R(Identity("cg-relation", "S_{n,k}(q) = (1+q)^k q^(k^2) S_B[n,k]",
           ("stirling:CG-recurrence",), ("stirling:B-recurrence",), _cg_relation, n_grid(0, 10)))
R(Identity("b-symmetry", "B_{n,k}(q) = q^(2nk-n^2) B_{n,n-k}(q)",
           (ENUM_B,), (ENUM_B,), _b_symmetry, n_grid(0, 7), relation=True))
R(Identity("des-complement", "#{pi : des_B(psi(pi)) = n - des_B(pi)} = |B_n|",
           (ENUM_B,), (ENUM_B,), _psi_relation("des"), n_grid(0, 7), index=None, relation=True))
R(Identity("psi-involution", "#{pi : psi(psi(pi)) = pi, psi(pi) in B_n} = |B_n|",
           (ENUM_B,), (ENUM_B,), _psi_relation("involution"), n_grid(0, 7), index=None, relation=True))
R(Identity("fmaj-psi", "#{pi : fmaj(pi) = 2n des_B(pi) - n^2 + fmaj(psi(pi))} = |B_n|",
           (ENUM_B,), (ENUM_B,), _psi_relation("fmaj"), n_grid(0, 7), index=None, relation=True))
R(Identity("index-sums", "#{pi : sum(+- descents) + neg = sum(-+ ascents) + n [pi_n < 0]} = |B_n|",
           (ENUM_B,), (ENUM_B,), _psi_relation("index"), n_grid(0, 7), index=None, relation=True))
R(Identity("starred-product", "sum_k B^fmaj_{n,k} z^k = sum_pi q^fmaj prod_{i<=des_B} (1 + z q^(1-2i))",
           ("starred:descent-mask-histogram",), ("groups:des-fmaj-histogram",), _starred_product, n_grid(0, 6), index=None))
R(Identity("q-binom-theorem", "prod_{i=1}^N (1 - z q^(i-1)) = sum_j [N,j] (-1)^j z^j q^(j(j-1)/2)",
           ("qpoly:product",), ("qpoly:q-binomial",), _q_binom_theorem, n_grid(0, 8), index=None))
R(Identity("q-binom-negative", "1 / prod_{i=1}^N (1 - z q^(i-1)) = sum_j [N+j-1,j] z^j",
           (SERIES,), ("qpoly:q-binomial",), _q_binom_negative,
           lambda g: [{"n": n, "order": g.order or DEFAULT_ORDER} for n in range(1, _top(8, g) + 1)], index=None,
           params=("n", "order")))
R(Identity("bfmaj-euler", "B^fmaj_{n,n-k} = sum_l q^((n-k)(2l-n-k)) B_{n,n-l}(q) [n-l,k-l]_{q^2}",
           ("starred:descent-mask-histogram",), ("groups:des-fmaj-histogram",), _bfmaj_euler, n_grid(0, 6)))
R(Identity("bfmaj-rec", "B^fmaj_{n,k} = [2n-2k] B^fmaj_{n-1,k} + [2n-2k+1] B^fmaj_{n-1,k-1}",
           ("starred:descent-mask-histogram",), ("starred:recurrence",), _bfmaj_rec, n_grid(0, 7)))
R(Identity("so-closed-form", "B^fmaj_{n,n-k} = S^o_B[n,k]",
           ("starred:descent-mask-histogram",), ("starred:ordered-recurrence",), _so_closed_form, n_grid(0, 7)))
R(Identity("so-product", "S^o_B[n,k] = [2]^k [k]_{q^2}! S_B[n,k]",
           ("starred:ordered-recurrence",), ("stirling:B-recurrence",), _so_product, n_grid(0, 12)))
R(Identity("fmaj-deltas", "#{insertions whose fmaj change matches the predicted delta} = #insertions",
           ("starred:insertion",), ("starred:insertion",), _fmaj_deltas, n_grid(1, 6), relation=True))
R(Identity("phi-images", "2 #distinct images - #insertions = |B^>_{n,k}|",
           ("starred:insertion",), ("groups:descent-mask-histogram",), _phi_images, n_grid(1, 6), relation=True))
R(Identity("pssp-weight", "q^(k^2) [2]^k S_B[n,k] = sum over PSSPs of q^m",
           ("stirling:B-recurrence",), ("partitions:pssp-enumeration",), _pssp_weight, n_grid(0, 6)))
R(Identity("d-count", "2^k S_D(n,k) = #D_sub([n],k)",
           ("stirling:D-closed-form",), ("partitions:pssp-enumeration",), _d_count, n_grid(0, 6)))
R(Identity("d-weight", "q^(k^2) [2]^k S_D[n,k] = sum over D_sub([n],k) of q^m",
           ("stirling:D-closed-form",), ("partitions:pssp-enumeration",), _d_weight, n_grid(0, 6)))
R(Identity("d-partition-count", "S_D(n,k) = #type D partitions with 2k+1 blocks",
           ("stirling:D-closed-form",), ("partitions:type-b-enumeration",), _d_partition_count, n_grid(0, 6)))
R(Identity("b-from-a-q", "S_B[n,k] = sum_j C(n,j) [2]^(j-k) q^(j-k) S[j,k]_{q^2}",
           ("stirling:B-recurrence",), ("stirling:A-recurrence",), _b_from_a_q, n_grid(0, 20)))
R(Identity("b-from-d-q", "S_B[n,k] = S_D[n,k] + n [2]^(n-k-1) q^(n-k-1) S[n-1,k]_{q^2}",
           ("stirling:B-recurrence",), ("partitions:btilde-recurrence", "stirling:A-recurrence"), _b_from_d_q, n_grid(0, 20)))
R(Identity("b-from-a", "S_B(n,k) = sum_j 2^(j-k) C(n,j) S(j,k)",
           ("stirling:B-integer-recurrence",), ("stirling:A-integer-recurrence",), _b_from_a, n_grid(0, 10)))
R(Identity("b-from-d", "S_B(n,k) = S_D(n,k) + n 2^(n-k-1) S(n-1,k)",
           ("stirling:B-integer-recurrence",), ("partitions:type-d-count", "stirling:A-integer-recurrence"), _b_from_d, n_grid(0, 10)))
R(Identity("btilde", "sum over SSPs of q^m = [2]^n q^(k(k-1)+n) S[n,k]_{q^2}",
           ("stirling:A-recurrence",), ("partitions:ssp-enumeration",), _btilde, n_grid(0, 6)))
R(Identity("btilde-rec", "Btilde_{n,k} = [2] q^(2k-1) Btilde_{n-1,k-1} + q [2] [k]_{q^2} Btilde_{n-1,k}",
           ("partitions:btilde-recurrence",), ("partitions:ssp-enumeration",), _btilde_rec, n_grid(0, 6)))
R(Identity("basis-A", "t^n = sum_k S(n,k) (t)_k",
           ("qpoly:t-power",), ("stirling:A-integer-recurrence", "qpoly:falling-factorial"), _basis_a, n_grid(0, 12), index=None))
R(Identity("basis-B", "t^n = sum_k S_B(n,k) (t)^B_k",
           ("qpoly:t-power",), ("stirling:B-integer-recurrence", "qpoly:falling-factorial"), _basis_b, n_grid(0, 12), index=None))
R(Identity("basis-D", "t^n = sum_k S_D(n,k) (t)^D_k + n((t-1)^(n-1) - (t)^D_{n-1})",
           ("qpoly:t-power",), ("partitions:type-d-count", "qpoly:falling-factorial"), _basis_d, n_grid(0, 12), index=None))
R(Identity("basis-A-q", "t^n = sum_k S[n,k] (t)_{k,q}",
           ("qpoly:t-power",), ("stirling:A-recurrence", "qpoly:falling-factorial"), _basis_a_q, n_grid(0, 12), index=None))
R(Identity("basis-B-q", "t^n = sum_k S_B[n,k] (t)^B_{k,q}",
           ("qpoly:t-power",), ("stirling:B-recurrence", "qpoly:falling-factorial"), _basis_b_q, n_grid(0, 12), index=None))
R(Identity("basis-D-q", "t^n = sum_k S_D[n,k] (t)^D_{k,q} + n(t-1)^(n-1) - [n] q^(n-1) (t)^D_{n-1,q}",
           ("qpoly:t-power",), ("stirling:D-closed-form", "qpoly:falling-factorial"), _basis_d_q, n_grid(0, 12), index=None))
R(Identity("basis-r-q", "t^n = sum_k S_r[n,k] (t)^r_{k,q}",
           ("qpoly:t-power",), ("stirling:R-recurrence", "qpoly:falling-factorial"), _basis_r_q, rn_grid(0, 12), index=None,
           params=("r", "n")))
R(Identity("basis-bd-bridge", "(t)^B_{n,q} = (t)^D_{n,q} - [n] q^(n-1) (t)^D_{n-1,q}",
           ("qpoly:falling-factorial-B",), ("qpoly:falling-factorial-D",), _basis_bd_bridge, n_grid(1, 12), index=None))
R(Identity("genfun-r", "sum_k c_k S_r[n,k] t^k / prod_{i<=k} (1 - t q^(ri)) = sum_m [rm+1]^n t^m",
           ("stirling:R-recurrence", SERIES), ("qpoly:power-sum",), _genfun_r, rn_grid(0, 6, series=True), index=None,
           params=("r", "n", "order")))
R(Identity("carlitz-r", "A^r_n(t,q) / prod_{i<=n} (1 - t q^(ri)) = sum_m [rm+1]^n t^m",
           (ENUM_R, SERIES), ("qpoly:power-sum",), _carlitz_r, rn_grid(0, 6, series=True), index=None,
           params=("r", "n", "order")))
R(Identity("frobenius-r", "A^r_n(t,q) / prod_{i<=n} (1 - t q^(ri)) = sum_k c_k S_r[n,k] t^k / prod_{i<=k} (1 - t q^(ri))",
           (ENUM_R, SERIES), ("stirling:R-recurrence", "qpoly:series-expansion-rhs"), _frobenius_r,
           rn_grid(0, 6, series=True), index=None, params=("r", "n", "order")))
R(Identity("thm-main-r", "q^(r C(k+1,2) + (1-r)k) [r]^k [k]_{q^r}! S_r[n,k] = sum_l q^(rk(k-l)) A^r_{n,l}(q) [n-l,k-l]_{q^r}",
           ("stirling:R-recurrence",), (ENUM_R,), _thm_main_r, rn_grid(0, _thm_r_top, r_default=(1, 2, 3, 4)),
           params=("r", "n")))
R(Identity("q-extension", "1 / prod_{i<=n} (1 - t q^(ri)) = sum_{k>=l} (t q^(rk))^(k-l) [n-l,k-l]_{q^r} / prod_{i<=k} (1 - t q^(ri))",
           (SERIES,), ("qpoly:series-expansion-rhs", "qpoly:q-binomial"), _q_extension, _q_extension_grid, index=None,
           params=("r", "n", "l", "order")))
R(Identity("chu-vandermonde", "[n+m,m] = sum_k [n-l,k] [m+l,m-k] q^(k(k+l)) for every l <= n",
           ("qpoly:q-binomial-direct",), ("qpoly:q-binomial-convolution",), _chu_vandermonde, _chu_grid, index="l",
           params=("n", "m")))
R(Identity("frobenius-A", "t A_n(t,q) / prod_{i<=n} (1 - t q^i) = sum_k q^C(k,2) [k]! S[n,k] t^k / prod_{i<=k} (1 - t q^i)",
           (ENUM_A, SERIES), ("stirling:A-recurrence", "qpoly:series-expansion-rhs"), _frobenius_a,
           lambda g: [{"n": n, "order": g.order or DEFAULT_ORDER} for n in range(1, _top(8, g) + 1)], index=None,
           params=("n", "order")))
R(Identity("specialize-r1", "S_1[n,k] = S[n+1,k+1]",
           ("stirling:R-recurrence",), ("stirling:A-recurrence",), _specialize_r1, n_grid(0, 8)))
R(Identity("specialize-r2", "S_2[n,k] = S_B[n,k]",
           ("stirling:R-recurrence",), ("stirling:B-recurrence",), _specialize_r2, n_grid(0, 8)))
R(Identity("specialize-r1-eulerian", "A^1_n(t,q) = A_n(t,q)",
           (ENUM_R,), (ENUM_A,), _specialize_r1_eulerian, n_grid(0, 8), index=None))
R(Identity("specialize-r2-eulerian", "A^2_n(t,q) = B_n(t,q)",
           (ENUM_R,), (ENUM_B,), _specialize_r2_eulerian, n_grid(0, 8), index=None))
R(Identity("specialize-r1-stats", "#{sigma : (des_1, fmaj_1)(sigma) = (des, maj)(sigma)} = n!",
           (ENUM_A,), (ENUM_A,), _specialize_r1_stats, n_grid(0, 6), index=None, relation=True))
R(Identity("specialize-r2-stats", "#{pi : (des_2, fmaj_2)(pi) = (des_B, fmaj)(pi)} = |B_n|",
           (ENUM_B,), (ENUM_B,), _specialize_r2_stats, n_grid(0, 6), index=None, relation=True))


def _control(base_id: str, top: int):
    base = REGISTRY[base_id]

    def compute(p, caps):
        lhs, rhs = base.compute(p, caps)
        return lhs, _corrupt(rhs)

    def grid(g: GridOptions):
        return [p for p in base.grid(g) if p.get("n", 0) <= top]

    R(Identity(base_id + "-corrupted", "negative control: " + base.claim,
               base.lhs_route, base.rhs_route, compute, grid, base.index,
               base.relation, True, base.params))


_control("thm-main-B", 4)
_control("basis-B-q", 6)
_control("pssp-weight", 4)
_control("carlitz-r", 4)
_control("fmaj-deltas", 4)

del R


# -- public API ----------------------------------------------------------------


def registry_ids(include_controls: bool = False) -> list[str]:
    return [i for i, e in REGISTRY.items() if include_controls or not e.control]


def lookup(identity_id: str) -> Identity:
    try:
        return REGISTRY[identity_id]
    except KeyError:
        raise UnknownIdentity(identity_id) from None


def verify(identity_id: str, caps: Caps | None = None, **params) -> IdentityReport:
    """Check one entry at one parameter point."""
    entry = lookup(identity_id)
    caps = caps or VERIFY_CAPS
    missing = [name for name in entry.params if name not in params and name != "order"]
    if missing:
        raise InvalidParams(f"{identity_id} needs parameters {missing}")
    p = {}
    for name in entry.params:
        if name == "order":
            p[name] = params.get("order", DEFAULT_ORDER)
        else:
            p[name] = params[name]
    for name in ("l", "k"):
        if name in params and name not in p:
            p[name] = params[name]
    for name, value in p.items():
        if not isinstance(value, int) or value < 0:
            raise InvalidParams(f"parameter {name} must be a nonnegative integer")
    if "r" in p and p["r"] < 1:
        raise InvalidParams("r must be positive")
    index = entry.index if entry.index and entry.index not in p else None
    try:
        lhs, rhs = entry.compute(p, caps)
    except NotDivisible as exc:
        return IdentityReport(entry.id, p, "", "", False, {"error": f"not divisible: {exc}"}, index)
    witness = first_difference(lhs, rhs)
    return IdentityReport(entry.id, p, str(lhs), str(rhs), witness is None, witness, index)


def grid_for(identity_id: str, max_n: int | None = None, r_set=None, order: int | None = None) -> list[dict]:
    entry = lookup(identity_id)
    opts = GridOptions(max_n, tuple(r_set) if r_set else None, order)
    return entry.grid(opts)


def verify_all(
    max_n: int | None = None,
    r_set=None,
    order: int | None = None,
    ids=None,
    include_controls: bool = False,
    caps: Caps | None = None,
) -> list[IdentityReport]:
    """Run entries over their grids, in registry order then grid order.

    ``max_n`` lowers every grid's upper bound for ``n`` (it never raises it);
    ``r_set`` replaces the colors used; ``order`` sets the series truncation.
    """
    if ids is None:
        ids = registry_ids(include_controls)
    else:
        for i in ids:
            lookup(i)
        ids = [i for i in REGISTRY if i in set(ids)]
    reports = []
    for identity_id in ids:
        for p in grid_for(identity_id, max_n, r_set, order):
            reports.append(verify(identity_id, caps, **p))
    return reports
