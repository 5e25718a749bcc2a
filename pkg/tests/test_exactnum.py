from fractions import Fraction

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from symcolor.exactnum import (
    InvariantViolation,
    IrrationalityError,
    ParameterError,
    QAdjoined,
    Rational,
    as_rational,
    format_rational,
    parse_rational,
    qadj_arith,
    qadj_div_exact,
    rat_arith,
    to_rational,
)

rationals = st.fractions(max_denominator=10**6).map(to_rational)
small_q = st.integers(4, 30)


def qadj(q):
    return st.builds(lambda a, b: QAdjoined(q, a, b), rationals, rationals)


@pytest.mark.parametrize(
    "x, y, kind, expected",
    [
        (Fraction(1, 2), Fraction(1, 3), "add", Fraction(5, 6)),
        (Fraction(1, 2), Fraction(1, 3), "sub", Fraction(1, 6)),
        (Fraction(1, 5), Fraction(1, 4), "mul", Fraction(1, 20)),
        (Fraction(1, 5), Fraction(1, 4), "div", Fraction(4, 5)),
    ],
)
def test_rat_arith(x, y, kind, expected):
    assert rat_arith(x, y, kind) == expected


def test_rat_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        rat_arith(1, 0, "div")


def test_canonical_form():
    assert Rational(2, 4) == Fraction(1, 2)
    r = Rational(-3, -6)
    assert (r.numerator, r.denominator) == (1, 2)
    r = Rational(3, -7)
    assert (r.numerator, r.denominator) == (-3, 7)
    z = Rational(0, 5)
    assert (z.numerator, z.denominator) == (0, 1)


def test_rational_serialization():
    assert format_rational(Rational(-3, 7)) == "-3/7"
    assert format_rational(Rational(4, 2)) == "2"
    assert format_rational(0) == "0"
    assert parse_rational("-3/7") == Fraction(-3, 7)


@given(rationals)
def test_rational_roundtrip(x):
    assert parse_rational(format_rational(x)) == x


@given(rationals, rationals, rationals)
def test_field_axioms(x, y, z):
    assert (x + y) + z == x + (y + z)
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    if y:
        assert rat_arith(rat_arith(x, y, "mul"), y, "div") == x


def test_sqrt_q_squared():
    r = QAdjoined.sqrt(5)
    assert r * r == QAdjoined(5, 5, 0)


def test_product_at_q4():
    c1 = QAdjoined(4, 0, Fraction(1, 2))
    d1 = QAdjoined(4, 0, 1)
    assert c1 * d1 == QAdjoined(4, 2, 0)
    # 2 C(1)^2 = C(2) + C(0), and C(2) = (q - 2)/2 = 1
    assert c1 * c1 * 2 == QAdjoined(4, 1) + QAdjoined(4, 1)


@given(small_q.flatmap(qadj))
def test_multiplicative_identity(x):
    assert QAdjoined(x.q, 1) * x == x


def test_mismatched_q():
    with pytest.raises(ParameterError):
        qadj_arith(QAdjoined(4, 1), QAdjoined(5, 1), "add")
    with pytest.raises(ParameterError):
        QAdjoined(4, 1) * QAdjoined(5, 1)
    with pytest.raises(ParameterError):
        qadj_div_exact(QAdjoined(4, 1), QAdjoined(5, 1))


@pytest.mark.parametrize("q", [3, 0, -1])
def test_q_below_four(q):
    with pytest.raises(ParameterError):
        QAdjoined(q, 1)


@pytest.mark.parametrize(
    "x, y, expected",
    [
        (QAdjoined(5, 1), QAdjoined(5, 5), QAdjoined(5, Fraction(1, 5))),  # C(0)/D(2) = P(1)
        (QAdjoined(7, 0, 3), QAdjoined(7, 0, 1), QAdjoined(7, 3)),
        (QAdjoined(4, 0, 6), QAdjoined(4, 0, 2), QAdjoined(4, 3)),  # D(3)/D(1) = q - 1
    ],
)
def test_div_exact(x, y, expected):
    assert qadj_div_exact(x, y) == expected
    assert x / y == expected


def test_div_by_zero():
    with pytest.raises(ZeroDivisionError):
        QAdjoined(5, 1) / QAdjoined(5)


def test_zero_norm_divisor_for_square_q():
    # 2 + sqrt(4) is nonzero but has norm 4 - 4 = 0
    with pytest.raises(InvariantViolation):
        QAdjoined(4, 1) / QAdjoined(4, 2, 1)


@given(st.sampled_from([5, 6, 7, 8, 10, 11, 13]).flatmap(lambda q: st.tuples(qadj(q), qadj(q))))
def test_division_roundtrip(pair):
    x, y = pair
    assume(not y.is_zero())
    assert qadj_div_exact(x * y, y) == x


@given(small_q.flatmap(lambda q: st.tuples(qadj(q), qadj(q), qadj(q))))
def test_ring_axioms(triple):
    x, y, z = triple
    assert (x + y) + z == x + (y + z)
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert x * y == y * x
    assert x - x == QAdjoined(x.q)


def test_as_rational():
    assert as_rational(QAdjoined(5, Fraction(3, 7))) == Fraction(3, 7)
    with pytest.raises(IrrationalityError):
        as_rational(QAdjoined(5, 0, Fraction(1, 2)))


def test_no_implicit_collapse_for_square_q():
    x = QAdjoined(4, 0, 1)
    assert x != QAdjoined(4, 2)
    assert x.collapse() == 2
    with pytest.raises(IrrationalityError):
        QAdjoined(5, 0, 1).collapse()


def test_serialization():
    x = QAdjoined(5, Fraction(-3, 7), Fraction(1, 2))
    assert str(x) == "-3/7 + 1/2*sqrt(5)"
    assert QAdjoined.parse(str(x)) == x


def test_immutable():
    x = QAdjoined(5, 1, 2)
    with pytest.raises(AttributeError):
        x.a = 3


@pytest.mark.parametrize(
    "a, b, sign",
    [(0, 0, 0), (1, 0, 1), (0, -1, -1), (3, -1, 1), (2, -1, -1), (-3, 1, -1), (-2, 1, 1)],
)
def test_sign(a, b, sign):
    # sqrt(5) is about 2.236
    assert QAdjoined(5, a, b).sign() == sign
