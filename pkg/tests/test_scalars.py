from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from lcsverify.scalars import GaussianRational, format_rational, format_scalar, parse_rational

fr = st.fractions(min_value=-50, max_value=50, max_denominator=20)
gauss = st.builds(GaussianRational, fr, fr)


def as_complex(z):
    return complex(float(z.re), float(z.im))


@pytest.mark.parametrize("text,value", [("3", Fraction(3)), ("-2/6", Fraction(-1, 3)), (" 7/1 ", Fraction(7)), (5, Fraction(5))])
def test_parse_rational_accepts_literals(text, value):
    assert parse_rational(text) == value


@pytest.mark.parametrize("bad", ["0.5", "1e3", "", "x", "1/0", 0.5, True, None])
def test_parse_rational_rejects_non_literals(bad):
    with pytest.raises(ValueError):
        parse_rational(bad)


@given(fr)
def test_rational_format_round_trip(q):
    assert parse_rational(format_rational(q)) == q


@given(gauss, gauss)
def test_gaussian_arithmetic_matches_complex(a, b):
    assert as_complex(a + b) == pytest.approx(as_complex(a) + as_complex(b))
    assert as_complex(a * b) == pytest.approx(as_complex(a) * as_complex(b))
    assert as_complex(a - b) == pytest.approx(as_complex(a) - as_complex(b))
    if b:
        assert as_complex(a / b) == pytest.approx(as_complex(a) / as_complex(b))
        assert (a / b) * b == a


@given(gauss)
def test_conjugate_product_is_norm(z):
    p = z * z.conjugate()
    assert p.im == 0 and p.re == z.re**2 + z.im**2


def test_mixed_arithmetic_and_equality():
    i = GaussianRational(0, 1)
    assert i * i == -1
    assert 2 + i == GaussianRational(2, 1)
    assert Fraction(1, 2) * i == GaussianRational(0, Fraction(1, 2))
    assert hash(GaussianRational(3, 0)) == hash(Fraction(3))


def test_format_scalar():
    assert format_scalar(Fraction(-3, 4)) == "-3/4"
    assert format_scalar(GaussianRational(1, -2)) == "1-2i"
    assert format_scalar(GaussianRational(0, 1)) == "1i"
