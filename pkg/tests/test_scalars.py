from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from chowsmooth.scalars import Cmp, ExtScalar, as_rational, ext_eq, ext_inv, ext_mul

ints = st.integers(min_value=-10**6, max_value=10**6)


def test_reduced_representative():
    assert ExtScalar(6, -4) == ExtScalar(-3, 2)
    # first nonzero entry is made positive
    assert ExtScalar(6, -4).num == 3 and ExtScalar(6, -4).den == -2
    assert ExtScalar(5, 0) == ExtScalar.infinity() == ExtScalar(-1, 0)
    assert ExtScalar(0, -7) == ExtScalar.zero()


def test_undefined_is_a_value_not_an_error():
    u = ExtScalar(0, 0)
    assert u.is_undefined and not u.is_finite
    assert str(u) == "undef"
    assert ext_eq(u, u) is Cmp.INCOMPARABLE
    assert ext_eq(u, ExtScalar(1)) is Cmp.INCOMPARABLE


def test_zero_times_infinity_is_undefined():
    assert ext_mul(ExtScalar.zero(), ExtScalar.infinity()).is_undefined


def test_parse_and_coercion():
    assert ExtScalar.parse("inf").is_infinite
    assert ExtScalar.parse("undef").is_undefined
    assert ExtScalar.parse("-3/9").value() == Fraction(-1, 3)
    assert as_rational(" 3/4 ") == Fraction(3, 4)
    with pytest.raises(TypeError):
        as_rational(1.5 + 2j)


def test_value_raises_off_the_finite_part():
    with pytest.raises(ValueError):
        ExtScalar.infinity().value()


def test_immutable():
    with pytest.raises(AttributeError):
        ExtScalar(1).num = 2


@given(ints, ints, ints.filter(bool))
def test_scaling_does_not_change_the_class(a, b, k):
    assert ExtScalar(a, b) == ExtScalar(k * a, k * b)


@given(ints, ints, ints, ints)
def test_ext_eq_matches_cross_multiplication(a, b, c, d):
    x, y = ExtScalar(a, b), ExtScalar(c, d)
    r = ext_eq(x, y)
    if (a, b) == (0, 0) or (c, d) == (0, 0):
        assert r is Cmp.INCOMPARABLE
    else:
        assert (r is Cmp.EQUAL) == (a * d == b * c)


@given(ints, ints)
def test_inverse_swaps(a, b):
    x = ExtScalar(a, b)
    assert ext_inv(ext_inv(x)) == x
    if not x.is_undefined:
        assert ext_eq(ext_mul(x, ext_inv(x)), ExtScalar(1)) in (Cmp.EQUAL, Cmp.INCOMPARABLE)
