from fractions import Fraction

import pytest

from sl3skein.qlaurent import NotExact, QLaurent

q = QLaurent.q


def test_half_integer_exponents_are_doubled():
    x = q(Fraction(1, 2))
    assert x * x == q(1)
    assert x.terms == {1: 1}


def test_arithmetic_and_zero_pruning():
    a = QLaurent({2: 1, 0: 3})
    assert (a - a).is_zero()
    assert a + 0 == a
    assert (a * 2).terms == {2: 2, 0: 6}
    assert QLaurent([(0, 1), (0, -1)]).is_zero()
    with pytest.raises(ValueError):
        q(Fraction(1, 3))


def test_bar_and_positivity():
    a = QLaurent({3: 2, -1: 1})
    assert a.bar().terms == {-3: 2, 1: 1}
    assert a.is_positive() and not (-a).is_positive()
    assert (a + a.bar()).is_bar_invariant()
    # the zero polynomial has no negative coefficient
    assert QLaurent().is_positive()


def test_exact_division():
    a = QLaurent({2: 1, 0: 1})
    b = QLaurent({2: 1, -2: -1})
    assert (a * b).exact_div(a) == b
    with pytest.raises(NotExact):
        QLaurent({0: 1}).exact_div(QLaurent({0: 2}))
    with pytest.raises(ZeroDivisionError):
        a.exact_div(QLaurent())


def test_specialization_and_json():
    a = QLaurent({4: 2, -2: -5})
    assert a.specialize_at_one() == -3
    assert QLaurent.from_json(a.to_json()) == a
    assert hash(QLaurent.from_json(a.to_json())) == hash(a)
