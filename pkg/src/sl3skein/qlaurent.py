"""Laurent polynomials in q^{1/2} with integer coefficients.

Exponents are stored doubled, so ``q**(1/2)`` has twice-exponent 1 and
``A = q`` throughout the package.
"""

from __future__ import annotations

from typing import Iterable, Iterator, Mapping


class NotExact(ArithmeticError):
    """Raised when a coefficient-ring division leaves a remainder."""


class QLaurent:
    """An immutable element of Z[q^{1/2}, q^{-1/2}].

    Terms map a twice-exponent to a nonzero integer coefficient.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[int, int] | Iterable[tuple[int, int]] = ()):
        acc: dict[int, int] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for e, c in items:
            e = int(e)
            acc[e] = acc.get(e, 0) + int(c)
        self._terms = {e: c for e, c in acc.items() if c}
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict[int, int]) -> QLaurent:
        # trusted constructor: terms already pruned
        obj = cls.__new__(cls)
        obj._terms = terms
        obj._hash = None
        return obj

    @classmethod
    def monomial(cls, twice_exp: int, coeff: int = 1) -> QLaurent:
        return cls._raw({twice_exp: coeff} if coeff else {})

    @classmethod
    def const(cls, c: int) -> QLaurent:
        return cls.monomial(0, c)

    @classmethod
    def q(cls, exp) -> QLaurent:
        """``q**exp`` for integer or half-integer ``exp``."""
        twice = 2 * exp
        if twice != int(twice):
            raise ValueError(f"exponent {exp} is not a half-integer")
        return cls.monomial(int(twice))

    # -- inspection -------------------------------------------------------
    @property
    def terms(self) -> dict[int, int]:
        return dict(self._terms)

    def items(self) -> Iterator[tuple[int, int]]:
        return iter(sorted(self._terms.items()))

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def min_exp(self) -> int:
        return min(self._terms)

    def max_exp(self) -> int:
        return max(self._terms)

    def coeff(self, twice_exp: int) -> int:
        return self._terms.get(twice_exp, 0)

    # -- ring operations --------------------------------------------------
    def __add__(self, other) -> QLaurent:
        other = _coerce(other)
        out = dict(self._terms)
        for e, c in other._terms.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return QLaurent._raw(out)

    __radd__ = __add__

    def __neg__(self) -> QLaurent:
        return QLaurent._raw({e: -c for e, c in self._terms.items()})

    def __sub__(self, other) -> QLaurent:
        return self + (-_coerce(other))

    def __rsub__(self, other) -> QLaurent:
        return _coerce(other) - self

    def __mul__(self, other) -> QLaurent:
        other = _coerce(other)
        a, b = self._terms, other._terms
        if not a or not b:
            return ZERO
        out: dict[int, int] = {}
        for e1, c1 in a.items():
            for e2, c2 in b.items():
                e = e1 + e2
                out[e] = out.get(e, 0) + c1 * c2
        return QLaurent._raw({e: c for e, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, n: int) -> QLaurent:
        if n < 0:
            raise ValueError("negative powers are only defined for monomials; use shift")
        result, base = ONE, self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def shift(self, twice_exp: int) -> QLaurent:
        """Multiply by q^{twice_exp/2}."""
        if not twice_exp:
            return self
        return QLaurent._raw({e + twice_exp: c for e, c in self._terms.items()})

    def exact_div(self, other: QLaurent) -> QLaurent:
        """Return h with self = other * h, or raise NotExact."""
        other = _coerce(other)
        if not other:
            raise ZeroDivisionError("division by the zero polynomial")
        if other.is_monomial():
            (e0, c0), = other._terms.items()
            out = {}
            for e, c in self._terms.items():
                qd, r = divmod(c, c0)
                if r:
                    raise NotExact(f"{self} is not divisible by {other}")
                out[e - e0] = qd
            return QLaurent._raw(out)
        # long division from the top exponent down
        rem = self
        quot: dict[int, int] = {}
        top_b, lead_b = other.max_exp(), other._terms[other.max_exp()]
        low_bound = (self.min_exp() - other.min_exp()) if self else 0
        while rem:
            e = rem.max_exp()
            d = e - top_b
            if d < low_bound:
                raise NotExact(f"{self} is not divisible by {other}")
            qd, r = divmod(rem._terms[e], lead_b)
            if r:
                raise NotExact(f"{self} is not divisible by {other}")
            quot[d] = quot.get(d, 0) + qd
            rem = rem - other * QLaurent.monomial(d, qd)
        return QLaurent._raw({e: c for e, c in quot.items() if c})

    # -- structure --------------------------------------------------------
    def bar(self) -> QLaurent:
        return QLaurent._raw({-e: c for e, c in self._terms.items()})

    def is_bar_invariant(self) -> bool:
        return self == self.bar()

    def is_positive(self) -> bool:
        """True iff every stored coefficient is positive (zero counts as positive)."""
        return all(c > 0 for c in self._terms.values())

    def specialize_at_one(self) -> int:
        return sum(self._terms.values())

    # -- comparison / hashing ---------------------------------------------
    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = QLaurent.const(other)
        if not isinstance(other, QLaurent):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    # -- serialization ----------------------------------------------------
    def to_json(self) -> list[list]:
        return [[e, str(c)] for e, c in sorted(self._terms.items())]

    @classmethod
    def from_json(cls, data: Iterable) -> QLaurent:
        return cls((int(e), int(c)) for e, c in data)

    def __repr__(self) -> str:
        return f"QLaurent({self})"

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for e, c in sorted(self._terms.items(), reverse=True):
            if e == 0:
                mono = ""
            elif e % 2:
                mono = f"q^({e}/2)"
            else:
                mono = "q" if e == 2 else f"q^{e // 2}"
            if not mono:
                body = str(abs(c))
            elif abs(c) == 1:
                body = mono
            else:
                body = f"{abs(c)}*{mono}"
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            s += f" {sign} {body}"
        return s


def _coerce(x) -> QLaurent:
    if isinstance(x, QLaurent):
        return x
    if isinstance(x, int):
        return QLaurent.const(x)
    raise TypeError(f"cannot use {type(x).__name__} as a QLaurent")


ZERO = QLaurent._raw({})
ONE = QLaurent._raw({0: 1})


def add(a: QLaurent, b: QLaurent) -> QLaurent:
    return a + b


def mul(a: QLaurent, b: QLaurent) -> QLaurent:
    return a * b


def bar(a: QLaurent) -> QLaurent:
    return a.bar()


def is_positive(a: QLaurent) -> bool:
    return a.is_positive()


def specialize_at_one(a: QLaurent) -> int:
    return a.specialize_at_one()
