from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from symcolor.chebyshev import CoeffTable
from symcolor.exactnum import ParameterError, QAdjoined
from symcolor.measure import (
    ColorRangeError,
    ConditioningError,
    CylinderMeasure,
    DomainError,
    Word,
    WordTooLongError,
    delete_at,
    is_proper,
    proper_words,
    relabel,
)


@pytest.fixture(scope="module")
def measures():
    return {q: CylinderMeasure(q) for q in range(4, 9)}


def proper_word(q, max_len=8):
    def extend(first_and_steps):
        first, steps = first_and_steps
        out = [first]
        for s in steps:
            # shift by 1..q-1 keeps neighbours distinct
            out.append((out[-1] - 1 + s) % q + 1)
        return tuple(out)

    return st.tuples(
        st.integers(1, q), st.lists(st.integers(1, q - 1), max_size=max_len - 1)
    ).map(extend)


@pytest.mark.parametrize(
    "x, proper", [((1, 2, 1, 2), True), ((1, 2, 2), False), ((), True), ((3,), True)]
)
def test_is_proper(x, proper):
    assert is_proper(x) is proper
    assert Word(5, x).proper is proper


@pytest.mark.parametrize(
    "x, i, expected", [((1, 2, 3), 2, (1, 3)), ((1, 2, 1), 1, (2, 1)), ((5,), 1, ())]
)
def test_delete_at(x, i, expected):
    assert delete_at(x, i) == expected
    assert delete_at(Word(5, x), i) == Word(5, expected)


@pytest.mark.parametrize("i", [0, 4, -1])
def test_delete_at_out_of_range(i):
    with pytest.raises(IndexError):
        delete_at((1, 2, 3), i)


def test_word_validation():
    with pytest.raises(ColorRangeError):
        Word(4, (1, 5))
    with pytest.raises(ColorRangeError):
        Word(4, (0,))
    with pytest.raises(ColorRangeError):
        Word.parse("1,x", 4)
    assert Word.parse("", 4) == Word(4, ())
    assert str(Word.parse(" 1,2,3 ", 4)) == "1,2,3"


def test_proper_words_counts():
    for q in (4, 5, 6):
        for n in range(0, 5):
            words = list(proper_words(q, n))
            assert len(words) == (q * (q - 1) ** (n - 1) if n else 1)
            assert len(set(words)) == len(words)
            assert all(is_proper(w) for w in words)


@pytest.mark.parametrize(
    "q, x, expected",
    [
        (5, (1, 2, 3), Fraction(1, 75)),
        (4, (1, 2, 1, 2), Fraction(1, 240)),
        (4, (1, 2, 3, 4), Fraction(1, 80)),
        (4, (1, 2, 1), Fraction(1, 48)),
        (5, (1, 1, 2), Fraction(0)),
        (5, (), Fraction(1)),
    ],
)
def test_prob_examples(measures, q, x, expected):
    assert measures[q].prob(x) == expected


# frozen from an independent symbolic evaluation (sympy Chebyshev polynomials at sqrt(q)/2)
@pytest.mark.parametrize(
    "q, x, expected",
    [
        (5, (1, 2, 1, 2, 1), Fraction(7, 22000)),
        (5, (1, 2, 3, 1, 2), Fraction(1, 1200)),
        (5, (1, 2, 3, 4, 5, 1), Fraction(3, 11000)),
        (4, (1, 2, 1, 3), Fraction(1, 120)),
        (7, (1, 2, 3, 2, 1), Fraction(1, 9947)),
    ],
)
def test_prob_golden(measures, q, x, expected):
    assert measures[q].prob(x) == expected


def test_prob_parameter_errors(measures):
    with pytest.raises(ParameterError):
        measures[4].prob(Word(5, (1, 2)))
    with pytest.raises(ColorRangeError):
        measures[4].prob((1, 5))


def test_length_cap():
    m = CylinderMeasure(5, max_length=6)
    m.prob((1, 2, 1, 2, 1, 2))
    with pytest.raises(WordTooLongError):
        m.prob((1, 2, 1, 2, 1, 2, 1))


def test_coefficient_table_must_match_q():
    with pytest.raises(ParameterError):
        CylinderMeasure(5, coeffs=CoeffTable(6))


def test_q_functional_examples(measures):
    m4, m5 = measures[4], measures[5]
    q12 = m4.q_functional((1, 2))
    # P(12) C(3) at q=4: (1/12) * (sqrt(4) / 2) = 1/12
    assert q12 == m4.coeffs.c(3).scale(Fraction(1, 12))
    assert q12.collapse() == Fraction(1, 12)
    for q, m in measures.items():
        assert m.q_functional((1, 2)) == m.q_functional((1, 2), starred=True)
    assert m5.q_functional((1,)) == QAdjoined(5, Fraction(3, 10))
    assert m5.prob((1,)) * Fraction(3, 2) == Fraction(3, 10)


def test_q_functional_domain(measures):
    with pytest.raises(DomainError):
        measures[5].q_functional(())
    with pytest.raises(DomainError):
        measures[5].q_functional((1, 1))
    with pytest.raises(DomainError):
        measures[5].deletion_dsum(())


def test_conditional_examples(measures):
    m4, m5 = measures[4], measures[5]
    assert m5.conditional((1,), 1) == 0
    assert m5.conditional((), 3) == Fraction(1, 5)
    vals = [m4.conditional((1, 2), a) for a in (1, 3, 4)]
    assert sum(vals) == 1
    assert vals[0] == Fraction(1, 4)
    assert m4.conditional((1, 2), 2) == 0


def test_conditional_on_null(measures):
    with pytest.raises(ConditioningError):
        measures[5].conditional((1, 1), 2)
    with pytest.raises(ColorRangeError):
        measures[5].conditional((1,), 6)


def test_gap_prob_examples(measures):
    m4, m5 = measures[4], measures[5]
    # brute-force sums over the free site
    assert sum(m5.prob((1, a, 2)) for a in range(1, 6)) == Fraction(1, 25)
    assert m5.gap_prob((1,), (2,)) == Fraction(1, 25) == m5.prob((1,)) * m5.prob((2,))
    assert m5.gap_prob((), (2,)) == Fraction(1, 5)
    assert sum(m4.prob((1, 2, a, 2, 1)) for a in range(1, 5)) == Fraction(1, 144)
    assert m4.gap_prob((1, 2), (2, 1)) == Fraction(1, 144)
    assert m4.gap_prob((1, 1), (2,)) == 0


@pytest.mark.parametrize("q", [4, 5, 6, 7, 8])
def test_rationality_and_positivity(measures, q):
    m = measures[q]
    for n in range(1, 6):
        for x in proper_words(q, n):
            assert m.sqrt_q_component(x) == 0
            assert 0 < m.prob(x) <= 1


@pytest.mark.parametrize("q", [4, 5])
def test_consistency(measures, q):
    m = measures[q]
    for n in range(0, 5):
        for x in proper_words(q, n):
            assert sum(m.prob(x + (a,)) for a in range(1, q + 1)) == m.prob(x)


@pytest.mark.parametrize("q", [4, 5])
def test_prop2_small(measures, q):
    m = measures[q]
    for n in range(1, 5):
        for x in proper_words(q, n):
            assert m.deletion_dsum(x) == 0
            target = m.coeffs.c(n + 1).scale(m.prob(x))
            assert m.q_functional(x) == target
            assert m.q_functional(x, starred=True) == target


def test_one_dependence_small(measures):
    m = measures[5]
    for lx in range(0, 3):
        for ly in range(0, 3):
            for x in proper_words(5, lx):
                for y in proper_words(5, ly):
                    assert m.gap_prob(x, y) == m.prob(x) * m.prob(y)


@settings(max_examples=60, deadline=None)
@given(st.integers(4, 9).flatmap(lambda q: st.tuples(st.just(q), proper_word(q), st.permutations(range(1, q + 1)))))
def test_permutation_and_reflection(case):
    q, x, perm = case
    m = CylinderMeasure(q, canonical=False)
    p = m.prob(x)
    assert m.prob(tuple(perm[c - 1] for c in x)) == p
    assert m.prob(x[::-1]) == p


def test_q4_reduces_to_uniform_weights(measures):
    m = measures[4]
    ref = {(): Fraction(1)}

    def direct(x):
        if not is_proper(x):
            return Fraction(0)
        if x not in ref:
            n = len(x)
            ref[x] = sum(direct(x[:i] + x[i + 1 :]) for i in range(n)) / (2 * (n + 1))
        return ref[x]

    for n in range(0, 7):
        for x in proper_words(4, n):
            assert m.prob(x) == direct(x)


def test_canonical_memo_agrees():
    exact, canon = CylinderMeasure(5), CylinderMeasure(5, canonical=True)
    for n in range(0, 7):
        for x in proper_words(5, n):
            assert canon.prob(x) == exact.prob(x)
    assert canon.memo_size() < exact.memo_size()


def test_relabel():
    assert relabel((3, 1, 3, 2)) == (1, 2, 1, 3)
    assert relabel(()) == ()


def test_memo_integrity():
    m = CylinderMeasure(6)
    words = [w for n in range(6) for w in proper_words(6, n)]
    first = [m.prob(w) for w in words]
    m.clear()
    assert m.memo_size() == 1
    assert [m.prob(w) for w in words] == first
    fresh = CylinderMeasure(6)
    assert [fresh.prob(w) for w in reversed(words)] == first[::-1]


def test_improper_subwords_not_memoized():
    m = CylinderMeasure(5)
    m.prob((1, 2, 1, 2))
    assert all(is_proper(k) for k in m._memo)
