"""Exact arithmetic in q, t and truncated power series in t.

Three value types live here:

* :class:`LaurentPoly` -- sparse Laurent polynomial in ``q`` with Python
  integer coefficients. Every q-count in the package is one of these.
* :class:`TPoly` -- dense polynomial in ``t`` whose coefficients are
  :class:`LaurentPoly` values.
* :class:`TSeries` -- power series in ``t`` truncated at a fixed order.

All three are immutable and hashable.
"""
from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Sequence, Union

from .errors import InvalidParams, NotDivisible

Scalar = Union[int, "LaurentPoly"]


class LaurentPoly:
    """A Laurent polynomial in ``q`` with integer coefficients.

    Terms are stored sparsely as ``{exponent: coefficient}`` with zero
    coefficients pruned, so structural equality is polynomial equality.

    >>> q = LaurentPoly.q()
    >>> str((1 + q) ** 2)
    '1 + 2*q + q^2'
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[int, int] | int | None = None):
        if terms is None:
            clean = {}
        elif isinstance(terms, int):
            clean = {0: terms} if terms else {}
        else:
            clean = {int(e): int(c) for e, c in terms.items() if c}
        self._terms = clean
        self._hash = None

    # -- constructors -----------------------------------------------------

    @classmethod
    def _raw(cls, terms: dict) -> "LaurentPoly":
        # caller guarantees no zero coefficients
        obj = cls.__new__(cls)
        obj._terms = terms
        obj._hash = None
        return obj

    @classmethod
    def monomial(cls, exp: int, coeff: int = 1) -> "LaurentPoly":
        return cls._raw({exp: coeff} if coeff else {})

    @classmethod
    def q(cls) -> "LaurentPoly":
        return cls._raw({1: 1})

    @classmethod
    def parse(cls, text: str) -> "LaurentPoly":
        """Inverse of :meth:`__str__` on canonical text."""
        text = text.strip()
        if text == "0":
            return cls()
        if text.startswith("-"):
            text = "0 - " + text[1:]
        terms: dict[int, int] = {}
        parts = re.split(r" ([+-]) ", text)
        tokens = [(1, parts[0])] + [
            (1 if parts[j] == "+" else -1, parts[j + 1]) for j in range(1, len(parts), 2)
        ]
        for sign, tok in tokens:
            m = re.fullmatch(r"(?:(\d+)\*)?q(?:\^(-?\d+))?", tok)
            if m:
                coeff = int(m.group(1)) if m.group(1) else 1
                exp = int(m.group(2)) if m.group(2) else 1
            elif re.fullmatch(r"\d+", tok):
                coeff, exp = int(tok), 0
            else:
                raise ValueError(f"not a canonical Laurent polynomial: {text!r}")
            terms[exp] = terms.get(exp, 0) + sign * coeff
        return cls(terms)

    # -- inspection -------------------------------------------------------

    @property
    def terms(self) -> tuple[tuple[int, int], ...]:
        """``(exponent, coefficient)`` pairs in ascending exponent order."""
        return tuple(sorted(self._terms.items()))

    def coeff(self, exp: int) -> int:
        return self._terms.get(exp, 0)

    def is_zero(self) -> bool:
        return not self._terms

    def min_exp(self) -> int:
        if not self._terms:
            raise ValueError("zero polynomial has no exponents")
        return min(self._terms)

    def max_exp(self) -> int:
        if not self._terms:
            raise ValueError("zero polynomial has no exponents")
        return max(self._terms)

    def is_polynomial(self) -> bool:
        """True when no exponent is negative."""
        return all(e >= 0 for e in self._terms)

    def at_one(self) -> int:
        return sum(self._terms.values())

    def evaluate(self, x):
        """Evaluate at a number; negative powers use exact fractions."""
        total = 0
        for e, c in self._terms.items():
            total += c * (x ** e if e >= 0 else Fraction(1) / Fraction(x) ** (-e))
        return total

    # -- transforms -------------------------------------------------------

    def shift(self, k: int) -> "LaurentPoly":
        """Multiply by ``q**k``."""
        return LaurentPoly._raw({e + k: c for e, c in self._terms.items()})

    def subst_q_power(self, r: int) -> "LaurentPoly":
        """Substitute ``q -> q**r``."""
        if r < 1:
            raise InvalidParams("substitution power must be positive")
        return LaurentPoly._raw({e * r: c for e, c in self._terms.items()})

    # -- arithmetic -------------------------------------------------------

    @staticmethod
    def _coerce(other) -> "LaurentPoly | None":
        if isinstance(other, LaurentPoly):
            return other
        if isinstance(other, int):
            return LaurentPoly(other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        out = dict(self._terms)
        for e, c in other._terms.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return LaurentPoly._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly._raw({e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, int):
            if not other:
                return LaurentPoly()
            return LaurentPoly._raw({e: c * other for e, c in self._terms.items()})
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        a, b = self._terms, other._terms
        if len(a) < len(b):
            a, b = b, a
        out: dict[int, int] = {}
        get = out.get
        for eb, cb in b.items():
            for ea, ca in a.items():
                e = ea + eb
                out[e] = get(e, 0) + ca * cb
        return LaurentPoly._raw({e: c for e, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            if len(self._terms) == 1:
                ((e, c),) = self._terms.items()
                if c in (1, -1):
                    return LaurentPoly._raw({e * k: c ** (-k)})
            raise InvalidParams("only unit monomials have negative powers")
        result = LaurentPoly(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __bool__(self):
        return bool(self._terms)

    def __repr__(self):
        return f"LaurentPoly({str(self)!r})"

    def __str__(self):
        if not self._terms:
            return "0"
        out = []
        for i, (e, c) in enumerate(sorted(self._terms.items())):
            mag = abs(c)
            if e == 0:
                body = str(mag)
            else:
                mono = "q" if e == 1 else f"q^{e}"
                body = mono if mag == 1 else f"{mag}*{mono}"
            if i == 0:
                out.append(("-" if c < 0 else "") + body)
            else:
                out.append((" - " if c < 0 else " + ") + body)
        return "".join(out)


ZERO = LaurentPoly()
ONE = LaurentPoly(1)
Q = LaurentPoly.q()


def as_laurent(x: Scalar) -> LaurentPoly:
    if isinstance(x, LaurentPoly):
        return x
    return LaurentPoly(int(x))


def div_exact(num: LaurentPoly, den: LaurentPoly) -> LaurentPoly:
    """Return ``num / den``, raising :class:`NotDivisible` on a remainder."""
    if den.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    if num.is_zero():
        return ZERO
    top_e, top_c = max(den._terms.items())
    low_bound = num.min_exp() - den.min_exp()
    rem = num
    quot: dict[int, int] = {}
    while not rem.is_zero():
        e = rem.max_exp()
        c = rem.coeff(e)
        qe = e - top_e
        if qe < low_bound or c % top_c:
            raise NotDivisible(f"{num} is not divisible by {den}")
        qc = c // top_c
        quot[qe] = qc
        rem = rem - den.shift(qe) * qc
    return LaurentPoly(quot)


# -- q-numbers ---------------------------------------------------------------


@lru_cache(maxsize=None)
def q_int(k: int) -> LaurentPoly:
    """``[k]_q = 1 + q + ... + q^(k-1)``; zero for ``k == 0``."""
    if k < 0:
        raise InvalidParams("q-integer of a negative number")
    return LaurentPoly._raw({i: 1 for i in range(k)})


@lru_cache(maxsize=None)
def q_factorial(k: int) -> LaurentPoly:
    if k < 0:
        raise InvalidParams("q-factorial of a negative number")
    if k == 0:
        return ONE
    return q_factorial(k - 1) * q_int(k)


@lru_cache(maxsize=None)
def q_binomial(n: int, k: int) -> LaurentPoly:
    """Gaussian binomial coefficient, zero outside ``0 <= k <= n``.

    Built from ``[n,k] = [n-1,k-1] + q^k [n-1,k]`` so no division occurs.
    """
    if n < 0:
        raise InvalidParams("q-binomial with negative top argument")
    if k < 0 or k > n:
        return ZERO
    if k == 0 or k == n:
        return ONE
    return q_binomial(n - 1, k - 1) + q_binomial(n - 1, k).shift(k)


def subst_q_power(p: LaurentPoly, r: int) -> LaurentPoly:
    return p.subst_q_power(r)


# -- polynomials in t --------------------------------------------------------


class TPoly:
    """Polynomial in ``t`` with :class:`LaurentPoly` coefficients.

    ``coeffs[d]`` is the coefficient of ``t**d``; trailing zeros are trimmed,
    so the zero polynomial has an empty coefficient tuple.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Scalar] = ()):
        cs = [as_laurent(c) for c in coeffs]
        while cs and cs[-1].is_zero():
            cs.pop()
        self.coeffs: tuple[LaurentPoly, ...] = tuple(cs)

    @classmethod
    def t(cls) -> "TPoly":
        return cls([ZERO, ONE])

    @classmethod
    def const(cls, c: Scalar) -> "TPoly":
        return cls([c])

    @classmethod
    def linear(cls, c0: Scalar, c1: Scalar) -> "TPoly":
        """``c0 + c1*t``."""
        return cls([c0, c1])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def coeff(self, d: int) -> LaurentPoly:
        return self.coeffs[d] if 0 <= d < len(self.coeffs) else ZERO

    def is_zero(self) -> bool:
        return not self.coeffs

    def specialize_q_one(self) -> "TPoly":
        """Set ``q = 1`` in every coefficient."""
        return TPoly(c.at_one() for c in self.coeffs)

    def map_coeffs(self, fn) -> "TPoly":
        return TPoly(fn(c) for c in self.coeffs)

    def evaluate(self, x: Scalar) -> LaurentPoly:
        """Substitute a Laurent polynomial (or integer) for ``t``."""
        x = as_laurent(x)
        acc = ZERO
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    @staticmethod
    def _coerce(other) -> "TPoly | None":
        if isinstance(other, TPoly):
            return other
        if isinstance(other, (int, LaurentPoly)):
            return TPoly([other])
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        n = max(len(self.coeffs), len(other.coeffs))
        return TPoly(self.coeff(i) + other.coeff(i) for i in range(n))

    __radd__ = __add__

    def __neg__(self):
        return TPoly(-c for c in self.coeffs)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, LaurentPoly)):
            return TPoly(c * other for c in self.coeffs)
        if not isinstance(other, TPoly):
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return TPoly()
        out = [ZERO] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return TPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise InvalidParams("negative power of a polynomial in t")
        result = TPoly([ONE])
        for _ in range(k):
            result = result * self
        return result

    def __eq__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"TPoly({str(self)!r})"

    def __str__(self):
        return _render_t_terms(self.coeffs) or "0"


def _render_t_terms(coeffs: Sequence[LaurentPoly]) -> str:
    parts = []
    for d, c in enumerate(coeffs):
        if c.is_zero():
            continue
        mono = "" if d == 0 else ("*t" if d == 1 else f"*t^{d}")
        parts.append(f"({c}){mono}")
    return " + ".join(parts)


# -- truncated power series --------------------------------------------------


class TSeries:
    """Power series in ``t`` modulo ``t**order``.

    Two series may only be combined when their orders agree.
    """

    __slots__ = ("order", "coeffs")

    def __init__(self, coeffs: Iterable[Scalar], order: int):
        if order < 0:
            raise InvalidParams("truncation order must be nonnegative")
        cs = [as_laurent(c) for c in coeffs][:order]
        cs += [ZERO] * (order - len(cs))
        self.order = order
        self.coeffs: tuple[LaurentPoly, ...] = tuple(cs)

    @classmethod
    def from_tpoly(cls, p: TPoly, order: int) -> "TSeries":
        return cls(p.coeffs, order)

    def coeff(self, m: int) -> LaurentPoly:
        return self.coeffs[m]

    def truncate(self, order: int) -> "TSeries":
        if order > self.order:
            raise InvalidParams("cannot raise the truncation order")
        return TSeries(self.coeffs[:order], order)

    def _check(self, other: "TSeries"):
        if other.order != self.order:
            raise InvalidParams(
                f"truncation orders differ ({self.order} vs {other.order})"
            )

    def __add__(self, other):
        if isinstance(other, (int, LaurentPoly)):
            other = TSeries([other], self.order)
        if not isinstance(other, TSeries):
            return NotImplemented
        self._check(other)
        return TSeries((a + b for a, b in zip(self.coeffs, other.coeffs)), self.order)

    __radd__ = __add__

    def __neg__(self):
        return TSeries((-c for c in self.coeffs), self.order)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, LaurentPoly)):
            return TSeries((c * other for c in self.coeffs), self.order)
        if isinstance(other, TPoly):
            other = TSeries.from_tpoly(other, self.order)
        if not isinstance(other, TSeries):
            return NotImplemented
        self._check(other)
        M = self.order
        out = [ZERO] * M
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for j in range(M - i):
                b = other.coeffs[j]
                if not b.is_zero():
                    out[i + j] = out[i + j] + a * b
        return TSeries(out, M)

    __rmul__ = __mul__

    def inverse(self) -> "TSeries":
        """Multiplicative inverse; the constant coefficient must be 1."""
        if self.order and self.coeffs[0] != ONE:
            raise InvalidParams("series inversion needs constant term 1")
        M = self.order
        inv = [ZERO] * M
        if M:
            inv[0] = ONE
        for m in range(1, M):
            acc = ZERO
            for j in range(1, m + 1):
                f = self.coeffs[j]
                if not f.is_zero():
                    acc = acc + f * inv[m - j]
            inv[m] = -acc
        return TSeries(inv, M)

    def __eq__(self, other):
        if not isinstance(other, TSeries):
            return NotImplemented
        return self.order == other.order and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.order, self.coeffs))

    def __repr__(self):
        return f"TSeries({str(self)!r})"

    def __str__(self):
        body = _render_t_terms(self.coeffs) or "0"
        return f"{body} + O(t^{self.order})"


def series_from_rational(
    numer: TPoly | Scalar, denom_factors: Sequence[TPoly], order: int
) -> TSeries:
    """Expand ``numer / prod(denom_factors)`` modulo ``t**order``.

    Each factor must have constant term exactly 1 in ``t``; it is inverted as
    a series and the inverses are multiplied into the numerator.
    """
    if not isinstance(numer, TPoly):
        numer = TPoly.const(numer)
    result = TSeries.from_tpoly(numer, order)
    for f in denom_factors:
        if f.coeff(0) != ONE:
            raise InvalidParams(f"denominator factor {f} does not start with 1")
        result = result * TSeries.from_tpoly(f, order).inverse()
    return result


def one_minus_tq(exp: int, scale: Scalar = 1) -> TPoly:
    """The factor ``1 - scale * q**exp * t``."""
    return TPoly.linear(ONE, -(as_laurent(scale).shift(exp)))


# -- falling factorials ------------------------------------------------------


def falling_factorial(kind: str, n: int, k: int, r: int | None = None) -> TPoly:
    """q-falling factorial in ``t`` for the families ``A``, ``B``, ``D``, ``R``.

    * ``A``: ``prod_{i<k} (t - [i])``
    * ``B``: ``prod_{i=1..k} (t - [2i-1])``
    * ``R``: ``prod_{i<k} (t - [r*i+1])`` (needs ``r >= 1``)
    * ``D``: the ``B`` product for ``k < n``; for ``k == n`` the last factor
      ``t - [2n-1]`` is replaced by ``t - [n-1]``.

    ``n`` only matters for ``D``.
    """
    if k < 0:
        raise InvalidParams("falling factorial of negative length")
    kind = kind.upper()
    if kind == "A":
        roots = [q_int(i) for i in range(k)]
    elif kind == "B":
        roots = [q_int(2 * i - 1) for i in range(1, k + 1)]
    elif kind == "R":
        if r is None or r < 1:
            raise InvalidParams("kind R needs r >= 1")
        roots = [q_int(r * i + 1) for i in range(k)]
    elif kind == "D":
        if k > n:
            raise InvalidParams(f"type D falling factorial needs k <= n (k={k}, n={n})")
        if k == 0 or k < n:
            roots = [q_int(2 * i - 1) for i in range(1, k + 1)]
        else:
            roots = [q_int(2 * i - 1) for i in range(1, n)] + [q_int(n - 1)]
    else:
        raise InvalidParams(f"unknown falling factorial kind {kind!r}")
    out = TPoly([ONE])
    for root in roots:
        out = out * TPoly.linear(-root, ONE)
    return out
