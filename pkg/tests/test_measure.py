from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cantorcvt.errors import OverlappingCylinders
from cantorcvt.measure import CantorMeasure
from cantorcvt.oracles import discretize
from cantorcvt.ratfunc import RationalFunction as RF
from cantorcvt.words import all_words, midpoint, reflect_word, weight_and_scale

R = RF.parameter()

ratios = st.fractions(min_value=F(1, 100), max_value=F(49, 100), max_denominator=100)
words = st.text(alphabet="12", max_size=6)
points = st.fractions(min_value=F(-1), max_value=F(2), max_denominator=40)


def test_mean(r49):
    assert CantorMeasure(r49).mean() == F(1, 2)
    assert CantorMeasure(F(1, 3)).mean() == F(1, 2)
    assert CantorMeasure.formal().mean() == RF(F(1, 2))


def test_moments_at_4_9(r49):
    m = CantorMeasure(r49)
    assert m.second_moment() == F(9, 26)
    assert m.variance() == F(5, 52)


def test_variance_formal_closed_form():
    v = CantorMeasure.formal().variance()
    assert v == (1 - R) / (4 * (R + 1))
    assert v.num == (1, -1) and v.den == (4, 4)
    # two-point limiting case: Bernoulli(1/2) on {0, 1}
    assert v.evaluate(F(0)) == F(1, 4)


def test_variance_third_vs_discrete_oracle():
    m = CantorMeasure(F(1, 3))
    assert m.variance() == F(1, 8)
    dm = discretize(m, 14)
    assert abs(dm.variance() - F(1, 8)) <= F(1, 10**6)


def test_cylinder_integral_whole_space(r49):
    m = CantorMeasure(r49)
    for x0 in (F(0), F(1, 3), F(7, 9)):
        assert m.cylinder_integral("", x0) == m.variance() + (x0 - F(1, 2)) ** 2


def test_cylinder_integral_centroid_minimizes(r49):
    m = CantorMeasure(r49)
    for w in ("1", "12", "221"):
        p, s = weight_and_scale(w, r49)
        center = midpoint(w, r49)
        assert m.cylinder_integral(w, center) == p * s * s * m.variance()
        assert m.cylinder_integral(w, center + F(1, 50)) > p * s * s * m.variance()


def test_cylinder_integral_example(r49):
    m = CantorMeasure(r49)
    assert m.cylinder_integral("2", F(7, 9)) == F(10, 1053)
    # discrete Riemann-style cross-check
    dm = discretize(m, 14)
    approx = sum(
        mass * (x - F(7, 9)) ** 2
        for x, mass in zip(dm.positions, dm.masses)
        if x >= F(5, 9)
    )
    assert abs(approx - F(10, 1053)) <= F(1, 10**5)


def test_cond_expectation_basics(r49):
    m = CantorMeasure(r49)
    assert m.cond_expectation([""]) == F(1, 2)
    assert m.cond_expectation(["2"]) == F(7, 9)
    a = m.cond_expectation(["1222", "21"])
    b = m.cond_expectation(["22"])
    assert (a + b) / 2 == F(9905, 13122)


def test_cond_expectation_rejects_overlap(r49):
    m = CantorMeasure(r49)
    with pytest.raises(OverlappingCylinders):
        m.cond_expectation(["12", "121"])
    with pytest.raises(OverlappingCylinders):
        m.cond_expectation(["", "2"])


def test_self_similarity_identity(r49):
    # splitting the integral across all level-k cylinders is exact
    m = CantorMeasure(r49)
    for x0 in (F(0), F(1, 3), F(1, 2), F(7, 9)):
        whole = m.cylinder_integral("", x0)
        for k in range(1, 7):
            assert whole == sum(m.cylinder_integral(w, x0) for w in all_words(k))


@given(words, ratios)
@settings(max_examples=60, deadline=None)
def test_cond_expectation_reflection(w, r):
    m = CantorMeasure(r)
    assert m.cond_expectation([reflect_word(w)]) == 1 - m.cond_expectation([w])


@given(words, points, ratios)
@settings(max_examples=60, deadline=None)
def test_cylinder_integral_additivity(w, x0, r):
    m = CantorMeasure(r)
    total = m.cylinder_integral(w, x0)
    assert total == m.cylinder_integral(w + "1", x0) + m.cylinder_integral(w + "2", x0)


@given(words, points, ratios)
@settings(max_examples=60, deadline=None)
def test_cylinder_integral_lower_bound(w, x0, r):
    m = CantorMeasure(r)
    p, s = weight_and_scale(w, r)
    floor = p * s * s * m.variance()
    value = m.cylinder_integral(w, x0)
    assert value >= floor
    assert (value == floor) == (x0 == midpoint(w, r))
