import pytest

from sl3skein.qlaurent import QLaurent
from sl3skein.qtorus import (
    INHOMOGENEOUS,
    NotDivisible,
    SkewForm,
    TorusElement,
    exact_left_divide,
    grade,
    monomial,
    weyl_product,
)

F = SkewForm([[0, 1, -2], [-1, 0, 3], [2, -3, 0]])


def test_form_validation():
    with pytest.raises(ValueError):
        SkewForm([[0, 1], [1, 0]])
    with pytest.raises(ValueError):
        SkewForm([[1, 0], [0, 0]])
    with pytest.raises(ValueError):
        SkewForm([[0, 1]])


def test_product_of_generators():
    x, y = TorusElement.basis(F, 0), TorusElement.basis(F, 1)
    # M^a M^b = q^{Pi(a,b)/2} M^{a+b}
    assert x * y == monomial(F, (1, 1, 0), QLaurent.monomial(1))
    assert y * x == monomial(F, (1, 1, 0), QLaurent.monomial(-1))
    assert x * y == (y * x).qshift(2)


def test_weyl_product_matches_ordered_product():
    alphas = [(1, 0, 0), (0, 2, 0), (1, 0, 1)]
    expected = TorusElement.one(F)
    for a in alphas:
        expected = expected * monomial(F, a)
    assert weyl_product(F, alphas) == expected


def test_powers_and_bar():
    x = monomial(F, (1, 0, 0)) + monomial(F, (0, 1, 0))
    assert x ** 0 == TorusElement.one(F)
    assert x ** 3 == x * x * x
    assert (x * x).is_bar_invariant()
    with pytest.raises(ValueError):
        x ** -1


def test_exact_left_divide():
    g = monomial(F, (1, 0, 0)) + monomial(F, (0, 0, 1), QLaurent.monomial(2))
    h = monomial(F, (0, 1, 0)) + monomial(F, (1, 1, 1))
    assert exact_left_divide(g * h, g) == h
    with pytest.raises(NotDivisible):
        exact_left_divide(monomial(F, (0, 0, 0)) + monomial(F, (1, 0, 0)),
                          monomial(F, (0, 0, 0)) + monomial(F, (0, 1, 0)))
    with pytest.raises(ZeroDivisionError):
        exact_left_divide(g, TorusElement.zero(F))


def test_grade_and_serialization():
    proj = [[1, 1, 0]]
    assert grade(monomial(F, (1, 0, 0)) + monomial(F, (0, 1, 5)), proj) == (1,)
    assert grade(monomial(F, (1, 0, 0)) + monomial(F, (1, 1, 0)), proj) is INHOMOGENEOUS
    x = monomial(F, (1, -1, 2), QLaurent({1: 2, -3: 1}))
    assert TorusElement.from_json(F, x.to_json()) == x
    with pytest.raises(ValueError):
        monomial(F, (1, 0))
    with pytest.raises(ValueError):
        x + TorusElement.one(SkewForm([[0]]))
