import math
from fractions import Fraction

import pytest

from malle_lab.convolve import (
    AsymptoticForm,
    CountingSequence,
    csum,
    empirical_fit,
    predict_equal,
    predict_product_lower,
    predict_unequal,
    predict_unequal_bound,
    product_count_brute,
    product_count_exact,
)
from malle_lab.errors import (
    DivergenceSuspected,
    InsufficientData,
    InsufficientRange,
    SlopeMismatch,
    SlopeNotGreater,
)

INTS = CountingSequence.integers()


def test_product_count_small_examples():
    # sum_{n<=10} floor(10/n) = 10+5+3+2+2+1+1+1+1+1 = 27
    assert product_count_exact(INTS, INTS, 1, 1, 10) == 27
    assert product_count_exact(INTS, INTS, 1, 2, 100) == 153


def test_product_count_empty():
    empty = CountingSequence(entries=[])
    assert product_count_exact(empty, INTS, 1, 1, 100) == 0


def test_product_count_matches_brute_force():
    seq = CountingSequence(entries=[(1, 2), (3, 1), (4, 5), (10, 1)], complete_to=10**6)
    for a, b, x in [(1, 1, 50), (2, 1, 200), (Fraction(1, 2), 1, 9), (3, 2, 10**4)]:
        assert product_count_exact(seq, INTS, a, b, x) == product_count_brute(
            seq, INTS, a, b, x
        )
        assert product_count_exact(INTS, seq, b, a, x) == product_count_brute(
            INTS, seq, b, a, x
        )


def test_product_count_symmetry():
    seq = CountingSequence(entries=[(2, 1), (5, 2), (9, 1)], complete_to=10**4)
    for x in (10, 100, 1000):
        assert product_count_exact(seq, INTS, 2, 3, x) == product_count_exact(
            INTS, seq, 3, 2, x
        )


def test_product_count_rational_weights_threshold_exact():
    # s1^(1/2) s2 <= 3  with s1 = 9, s2 = 1: 9^(1/2)*1 = 3 counts exactly
    seq = CountingSequence(entries=[(9, 1)])
    one = CountingSequence(entries=[(1, 1)])
    assert product_count_exact(seq, one, Fraction(1, 2), 1, 3) == 1
    assert product_count_exact(seq, one, Fraction(1, 2), 1, Fraction(29999, 10000)) == 0


def test_insufficient_range():
    short = CountingSequence(entries=[(1, 1), (2, 1)], complete_to=2)
    with pytest.raises(InsufficientRange):
        product_count_exact(short, short, 1, 1, 100)


def test_squares_rule_equals_integers_reindexed():
    # squares with b=1 behave like integers with b=2
    for x in (10, 100, 12345):
        assert product_count_exact(INTS, CountingSequence.squares(), 1, 1, x) == \
            product_count_exact(INTS, INTS, 1, 2, x)


def test_predict_equal():
    f = AsymptoticForm(1.0, 1, 0)
    out = predict_equal(f, f, 1, 1)
    assert out.coefficient == pytest.approx(1.0)
    assert out.exponent == 1 and out.logpower == 1

    out = predict_equal(AsymptoticForm(1.0, 1, 1), AsymptoticForm(1.0, 1, 0), 1, 1)
    assert out.coefficient == pytest.approx(0.5)
    assert out.logpower == 2

    out = predict_equal(AsymptoticForm(0.0, 1, 0), f, 1, 1)
    assert out.coefficient == 0.0


def test_predict_equal_slope_mismatch():
    with pytest.raises(SlopeMismatch):
        predict_equal(AsymptoticForm(1, 1, 0), AsymptoticForm(1, 1, 0), 1, 2)


def test_predict_unequal_and_bound():
    f1 = AsymptoticForm(1.0, 1, 0)
    f2 = AsymptoticForm(1.0, 1, 0)
    zeta2 = math.pi**2 / 6
    pred = predict_unequal(f1, f2, 1, 2, zeta2)
    assert pred.coefficient == pytest.approx(zeta2)
    assert pred.exponent == 1 and pred.logpower == 0
    bound = predict_unequal_bound(f1, f2, 1, 2)
    assert bound.coefficient == pytest.approx(2.0)
    assert pred.coefficient <= bound.coefficient
    with pytest.raises(SlopeNotGreater):
        predict_unequal(f1, f2, 2, 1, 1.0)
    with pytest.raises(SlopeNotGreater):
        predict_unequal_bound(f1, f2, 1, 1)


def test_csum_zeta2():
    res = csum(INTS, 2, 1, 0, 10**8)
    assert res.value == pytest.approx(math.pi**2 / 6, abs=2e-4)
    res_sq = csum(CountingSequence.squares(), 1, 1, 0, 10**8)
    assert res_sq.value == pytest.approx(res.value, abs=1e-12)


def test_csum_finite_sequence_exact():
    seq = CountingSequence(entries=[(1, 1), (2, 3)], complete_to=10**9)
    res = csum(seq, 1, 1, 0, 10**6)
    assert res.value == pytest.approx(1 + 3 / 2)


def test_csum_monotone_in_x():
    vals = [csum(INTS, 2, 1, 1, x).value for x in (10**4, 10**6, 10**8)]
    assert vals == sorted(vals)


def test_csum_divergence_detected():
    # b*n1/a = 1/2 < 1: the sum over integers diverges
    with pytest.raises(DivergenceSuspected):
        csum(INTS, 1, Fraction(1, 2), 0, 10**6)


def test_predict_product_lower():
    # S_3 (a=1, b=1, deg 3) with C_3 (a=2, b=1, deg 3)
    assert predict_product_lower(1, 3, 1, 2, 3, 1) == (Fraction(1, 3), 0)
    # equal slopes: log power adds
    assert predict_product_lower(1, 2, 1, 1, 2, 1) == (Fraction(1, 2), 1)
    # sharper second factor: slope2 = 1/(a2*deg1) = 1/5 wins, r = b2 - 1
    exp, r = predict_product_lower(4, 5, 7, 1, 3, 2)
    assert exp == Fraction(1, 5) and r == 1


def test_empirical_fit_roundtrip():
    pts = [(10.0**k, 3.5 * 10.0**k * math.log(10.0**k) ** 2) for k in range(2, 10)]
    fit = empirical_fit(pts, 1, 2)
    assert fit.coefficient == pytest.approx(3.5, rel=1e-9)
    assert fit.residual < 1e-9


def test_empirical_fit_harmonic():
    xs = [10**k for k in range(3, 9)] + [3 * 10**k for k in range(3, 8)]
    pts = []
    for x in xs:
        pts.append((x, product_count_exact(INTS, INTS, 1, 1, x)))
    fit = empirical_fit(pts, 1, 1)
    assert fit.coefficient == pytest.approx(1.0, rel=0.02)


def test_empirical_fit_insufficient():
    with pytest.raises(InsufficientData):
        empirical_fit([(10, 1)] * 4, 1, 0)
    with pytest.raises(InsufficientData):
        empirical_fit([(10 + i, 10) for i in range(10)], 1, 0)
