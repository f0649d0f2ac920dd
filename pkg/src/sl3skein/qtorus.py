"""Based quantum tori with a Weyl-normalized monomial basis.

For a skew form Pi on Z^n the basis elements M^a multiply as

    M^a * M^b = q^{Pi(a, b)/2} M^{a+b},

so ``M^a M^b = q^{Pi(a, b)} M^b M^a`` and every M^a is bar-invariant.
"""

from __future__ import annotations

from typing import Iterable, Mapping, Sequence

from .qlaurent import ONE, ZERO, NotExact, QLaurent

Exp = tuple[int, ...]


class NotDivisible(ArithmeticError):
    """Raised by :func:`exact_left_divide` when no exact quotient exists."""


class _Inhomogeneous:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "Inhomogeneous"

    def __bool__(self) -> bool:
        return False


INHOMOGENEOUS = _Inhomogeneous()


class SkewForm:
    """An integral skew-symmetric form on Z^n."""

    __slots__ = ("n", "pi", "_key")

    def __init__(self, pi: Sequence[Sequence[int]]):
        rows = tuple(tuple(int(v) for v in row) for row in pi)
        n = len(rows)
        for i, row in enumerate(rows):
            if len(row) != n:
                raise ValueError("skew form must be square")
            if row[i]:
                raise ValueError("skew form must have zero diagonal")
            for j in range(i):
                if row[j] != -rows[j][i]:
                    raise ValueError(f"form is not skew-symmetric at ({i}, {j})")
        self.n = n
        self.pi = rows
        self._key = rows

    def pair(self, a: Sequence[int], b: Sequence[int]) -> int:
        """Pi(a, b) = a^T pi b."""
        total = 0
        for i, ai in enumerate(a):
            if ai:
                row = self.pi[i]
                total += ai * sum(r * bj for r, bj in zip(row, b) if bj)
        return total

    def apply(self, b: Sequence[int]) -> tuple[int, ...]:
        """The vector pi * b."""
        return tuple(sum(r * bj for r, bj in zip(row, b) if bj) for row in self.pi)

    def __eq__(self, other) -> bool:
        return isinstance(other, SkewForm) and self._key == other._key

    def __hash__(self) -> int:
        return hash(self._key)

    def __repr__(self) -> str:
        return f"SkewForm(n={self.n})"


def _deglex(a: Exp) -> tuple:
    return (sum(a), a)


class TorusElement:
    """A finite Z[q^{1/2}]-combination of Weyl monomials M^a."""

    __slots__ = ("form", "_terms", "_hash")

    def __init__(self, form: SkewForm, terms: Mapping[Exp, QLaurent] | Iterable = ()):
        self.form = form
        acc: dict[Exp, QLaurent] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for a, c in items:
            a = tuple(int(v) for v in a)
            if len(a) != form.n:
                raise ValueError(f"exponent {a} has length {len(a)}, expected {form.n}")
            if not isinstance(c, QLaurent):
                c = QLaurent.const(c)
            acc[a] = acc[a] + c if a in acc else c
        self._terms = {a: c for a, c in acc.items() if c}
        self._hash = None

    @classmethod
    def _raw(cls, form: SkewForm, terms: dict[Exp, QLaurent]) -> TorusElement:
        obj = cls.__new__(cls)
        obj.form = form
        obj._terms = terms
        obj._hash = None
        return obj

    # -- constructors -----------------------------------------------------
    @classmethod
    def zero(cls, form: SkewForm) -> TorusElement:
        return cls._raw(form, {})

    @classmethod
    def one(cls, form: SkewForm) -> TorusElement:
        return cls._raw(form, {(0,) * form.n: ONE})

    @classmethod
    def basis(cls, form: SkewForm, i: int) -> TorusElement:
        a = [0] * form.n
        a[i] = 1
        return cls._raw(form, {tuple(a): ONE})

    # -- inspection -------------------------------------------------------
    @property
    def terms(self) -> dict[Exp, QLaurent]:
        return dict(self._terms)

    def items(self):
        return iter(sorted(self._terms.items()))

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def leading(self) -> tuple[Exp, QLaurent]:
        a = max(self._terms, key=_deglex)
        return a, self._terms[a]

    def trailing(self) -> tuple[Exp, QLaurent]:
        a = min(self._terms, key=_deglex)
        return a, self._terms[a]

    def _check(self, other: TorusElement) -> None:
        if self.form is not other.form and self.form != other.form:
            raise ValueError("torus elements live over different skew forms")

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other: TorusElement) -> TorusElement:
        self._check(other)
        out = dict(self._terms)
        for a, c in other._terms.items():
            if a in out:
                v = out[a] + c
                if v:
                    out[a] = v
                else:
                    del out[a]
            else:
                out[a] = c
        return TorusElement._raw(self.form, out)

    def __neg__(self) -> TorusElement:
        return TorusElement._raw(self.form, {a: -c for a, c in self._terms.items()})

    def __sub__(self, other: TorusElement) -> TorusElement:
        return self + (-other)

    def scale(self, c: QLaurent | int) -> TorusElement:
        if isinstance(c, int):
            c = QLaurent.const(c)
        if not c:
            return TorusElement.zero(self.form)
        return TorusElement._raw(self.form, {a: v * c for a, v in self._terms.items()})

    def qshift(self, twice_exp: int) -> TorusElement:
        """Multiply by q^{twice_exp/2}."""
        if not twice_exp:
            return self
        return TorusElement._raw(self.form, {a: v.shift(twice_exp) for a, v in self._terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, QLaurent)):
            return self.scale(other)
        self._check(other)
        form = self.form
        right = [(b, c, form.apply(b)) for b, c in other._terms.items()]
        acc: dict[Exp, dict[int, int]] = {}
        for a, ca in self._terms.items():
            nz = [(i, v) for i, v in enumerate(a) if v]
            for b, cb, pib in right:
                s = sum(v * pib[i] for i, v in nz)
                g = tuple(x + y for x, y in zip(a, b))
                slot = acc.setdefault(g, {})
                for e1, c1 in ca._terms.items():
                    for e2, c2 in cb._terms.items():
                        e = e1 + e2 + s
                        slot[e] = slot.get(e, 0) + c1 * c2
        out = {}
        for g, slot in acc.items():
            poly = {e: c for e, c in slot.items() if c}
            if poly:
                out[g] = QLaurent._raw(poly)
        return TorusElement._raw(form, out)

    def __rmul__(self, other):
        if isinstance(other, (int, QLaurent)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, n: int) -> TorusElement:
        if n < 0:
            raise ValueError("negative powers are not supported")
        result, base = TorusElement.one(self.form), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # -- structure --------------------------------------------------------
    def bar(self) -> TorusElement:
        return TorusElement._raw(self.form, {a: c.bar() for a, c in self._terms.items()})

    def is_bar_invariant(self) -> bool:
        return all(c.is_bar_invariant() for c in self._terms.values())

    def is_positive(self) -> bool:
        return all(c.is_positive() for c in self._terms.values())

    def specialize_at_one(self) -> dict[Exp, int]:
        out = {a: c.specialize_at_one() for a, c in self._terms.items()}
        return {a: v for a, v in out.items() if v}

    def exponents(self) -> list[Exp]:
        return sorted(self._terms)

    # -- comparison / serialization -----------------------------------------
    def __eq__(self, other) -> bool:
        if not isinstance(other, TorusElement):
            return NotImplemented
        return self.form == other.form and self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def to_json(self) -> list[list]:
        return [[list(a), c.to_json()] for a, c in sorted(self._terms.items())]

    @classmethod
    def from_json(cls, form: SkewForm, data: Iterable) -> TorusElement:
        return cls(form, [(tuple(a), QLaurent.from_json(c)) for a, c in data])

    def key(self) -> str:
        """A canonical string used for hashing and deduplication."""
        parts = []
        for a, c in sorted(self._terms.items()):
            coeff = ",".join(f"{e}:{v}" for e, v in c.items())
            parts.append(f"{','.join(map(str, a))}|{coeff}")
        return ";".join(parts)

    def __repr__(self) -> str:
        return f"TorusElement({self})"

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        chunks = []
        for a, c in sorted(self._terms.items(), key=lambda t: _deglex(t[0]), reverse=True):
            chunks.append(f"({c})*M{list(a)}")
        return " + ".join(chunks)


# -- module-level operations ----------------------------------------------

def monomial(form: SkewForm, alpha: Sequence[int], coeff: QLaurent | int = 1) -> TorusElement:
    alpha = tuple(int(v) for v in alpha)
    if len(alpha) != form.n:
        raise ValueError(f"exponent has length {len(alpha)}, expected {form.n}")
    if isinstance(coeff, int):
        coeff = QLaurent.const(coeff)
    if not coeff:
        return TorusElement.zero(form)
    return TorusElement._raw(form, {alpha: coeff})


def mul(x: TorusElement, y: TorusElement) -> TorusElement:
    return x * y


def weyl_product(form: SkewForm, alphas: Sequence[Sequence[int]]) -> TorusElement:
    """The ordered product M^{a_1} ... M^{a_k} expressed on the Weyl basis."""
    total = [0] * form.n
    twice = 0
    for a in alphas:
        twice += form.pair(total, a)
        total = [x + y for x, y in zip(total, a)]
    return monomial(form, total, QLaurent.monomial(twice))


def commutation_exponent(form: SkewForm, alpha: Sequence[int], beta: Sequence[int]) -> int:
    return form.pair(alpha, beta)


def bar_element(x: TorusElement) -> TorusElement:
    return x.bar()


def exact_left_divide(f: TorusElement, g: TorusElement) -> TorusElement:
    """Return h with f = g * h, cancelling leading terms in degree-lex order."""
    f._check(g)
    if not g:
        raise ZeroDivisionError("division by the zero element")
    form = f.form
    if not f:
        return TorusElement.zero(form)
    lg, cg = g.leading()
    tg, _ = g.trailing()
    tf, _ = f.trailing()
    floor = _deglex(tuple(x - y for x, y in zip(tf, tg)))
    quotient: dict[Exp, QLaurent] = {}
    rem = f
    while rem:
        lr, cr = rem.leading()
        beta = tuple(x - y for x, y in zip(lr, lg))
        if _deglex(beta) < floor:
            raise NotDivisible("remainder fell below the trailing bound")
        try:
            d = cr.exact_div(cg).shift(-form.pair(lg, beta))
        except NotExact as exc:
            raise NotDivisible(str(exc)) from None
        quotient[beta] = quotient[beta] + d if beta in quotient else d
        rem = rem - g * TorusElement._raw(form, {beta: d})
    return TorusElement._raw(form, {a: c for a, c in quotient.items() if c})


def grade(x: TorusElement, projection: Sequence[Sequence[int]]):
    """Common projected exponent of all terms, or INHOMOGENEOUS."""
    m = len(projection)
    if not x:
        return (0,) * m
    seen = None
    for a in x._terms:
        g = tuple(sum(p * v for p, v in zip(row, a)) for row in projection)
        if seen is None:
            seen = g
        elif g != seen:
            return INHOMOGENEOUS
    return seen
