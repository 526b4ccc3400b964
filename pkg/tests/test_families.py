from fractions import Fraction as F

import pytest

from cantorcvt.errors import BadCardinality, BadWordLength
from cantorcvt.families import (
    Codebook,
    alpha,
    beta,
    canonical_codebook,
    count_cvts,
    delta,
    enumerate_cvts,
    level,
    make_codebook,
)
from cantorcvt.measure import CantorMeasure
from cantorcvt.ratfunc import RationalFunction as RF
from cantorcvt.words import reflect_word


def test_level():
    assert [level(n) for n in (2, 3, 4, 7, 8, 15, 16)] == [1, 1, 2, 2, 3, 3, 4]
    with pytest.raises(ValueError):
        level(1)


def test_alpha_power_of_two(r49):
    cb = alpha(4, r49)
    assert cb.points == (F(8, 81), F(28, 81), F(53, 81), F(73, 81))
    assert cb.groups == (("11",), ("12",), ("21",), ("22",))


def test_alpha_three_means(r49):
    cb = alpha(3, r49)
    assert cb.groups == (("11", "121", "1221"), ("1222", "21"), ("22",))
    assert cb.points == (F(1268, 6561), F(3992, 6561), F(73, 81))
    mirror = alpha(3, r49, variants=(1,))
    assert mirror.groups == (("11",), ("12", "2111"), ("2112", "212", "22"))
    # the two variants are reflections of each other
    assert tuple(1 - p for p in reversed(mirror.points)) == cb.points


def test_alpha_five_means(r49):
    cb = alpha(5, r49, I=("1",))
    assert cb.groups == (
        ("111", "1121", "11221"),
        ("11222", "121"),
        ("122",),
        ("21",),
        ("22",),
    )


def test_alpha_seven_means_regime(r49):
    # n=7 lies in the second regime: quads under I, triples elsewhere
    cb = alpha(7, r49, I=("2",))
    assert cb.groups == (
        ("111", "1121", "11221"),
        ("11222", "121"),
        ("122",),
        ("211",),
        ("212",),
        ("221",),
        ("222",),
    )


def test_beta(r49):
    cb = beta(3, r49, I=("1",))
    assert cb.groups == (("11",), ("12",), ("2",))
    m = CantorMeasure(r49)
    assert cb.points == (m.cond_expectation(["11"]), m.cond_expectation(["12"]), F(7, 9))
    other = beta(3, r49, I=("2",))
    assert other.points == (F(2, 9), F(53, 81), F(73, 81))


def test_families_coincide_at_powers_of_two(r49):
    for k in (1, 2, 3):
        n = 2**k
        pts = alpha(n, r49).points
        assert beta(n, r49).points == pts
        assert delta(n, r49).points == pts


def test_delta_variants(r49):
    cb = delta(3, r49)
    assert cb.groups == (("11", "1211", "12121"), ("12122", "122", "211"), ("212", "22"))
    mirror = delta(3, r49, variants=(1,))
    assert mirror.groups == (("11", "121"), ("122", "211", "21211"), ("21212", "2122", "22"))
    assert tuple(1 - p for p in reversed(mirror.points)) == cb.points


def test_counts():
    assert [count_cvts(n, "alpha") for n in (2, 3, 4, 5, 6, 7, 8, 16)] == [
        1, 2, 1, 4, 4, 4, 1, 1,
    ]
    assert count_cvts(9, "alpha") == 8
    assert count_cvts(12, "alpha") == 16
    assert count_cvts(13, "alpha") == 32
    for n in range(2, 20):
        assert count_cvts(n, "delta") == count_cvts(n, "alpha")
    with pytest.raises(ValueError):
        count_cvts(3, "beta")


def test_count_formula_case_boundary_agrees():
    # at k = 2^(ell-1) the generic binomial form matches the dedicated case
    from math import comb

    for ell in (2, 3, 4):
        n = 2**ell + 2 ** (ell - 1)
        k = n - 2**ell
        assert count_cvts(n, "alpha") == 2**k * comb(2 ** (ell - 1), k)


def test_enumerate_counts_and_uniqueness(r49):
    for family in ("alpha", "delta"):
        for n in range(2, 17):
            cbs = list(enumerate_cvts(n, family, r49))
            assert len(cbs) == count_cvts(n, family)
            assert len({cb.points for cb in cbs}) == len(cbs)


def test_enumerate_deterministic_order(r49):
    first = [cb.to_dict() for cb in enumerate_cvts(5, "alpha", r49)]
    second = [cb.to_dict() for cb in enumerate_cvts(5, "alpha", r49)]
    assert first == second
    assert [tuple(cb["I"]) for cb in first] == [("1",), ("1",), ("2",), ("2",)]
    assert [tuple(cb["variants"]) for cb in first] == [(0,), (1,), (0,), (1,)]


def test_enumerate_mirror_symmetry(r49):
    for n in (3, 5, 6, 7):
        point_sets = {cb.points for cb in enumerate_cvts(n, "alpha", r49)}
        reflected = {tuple(1 - p for p in reversed(pts)) for pts in point_sets}
        assert point_sets == reflected


def test_strictly_increasing_across_ratios():
    for r in (F(1, 10), F(1, 3), F(4, 9), F(44, 100), F(49, 100)):
        for family in ("alpha", "beta", "delta"):
            cb = canonical_codebook(family, 6, r)
            assert all(a < b for a, b in zip(cb.points, cb.points[1:]))


def test_index_set_validation(r49):
    with pytest.raises(BadCardinality):
        alpha(5, r49, I=("1", "2"))
    with pytest.raises(BadWordLength):
        alpha(5, r49, I=("11",))
    with pytest.raises(BadCardinality):
        alpha(5, r49, I=("1",), variants=(0, 1))
    with pytest.raises(BadCardinality):
        alpha(5, r49, I=("1", "1"))


def test_formal_construction():
    cb = alpha(3, RF.parameter())
    assert cb.is_formal
    evaluated = tuple(p.evaluate(F(4, 9)) for p in cb.points)
    assert evaluated == alpha(3, F(4, 9)).points


def test_serialization(r49):
    cb = alpha(3, r49)
    d = cb.to_dict()
    assert d == {
        "family": "alpha",
        "n": 3,
        "I": ["e"],
        "variants": [0],
        "points": ["1268/6561", "3992/6561", "73/81"],
    }


def test_custom_codebook_requires_sorted():
    from cantorcvt.errors import UnsortedCodebook

    with pytest.raises(UnsortedCodebook):
        Codebook.custom([F(1, 2), F(1, 3)])


def test_make_codebook_dispatch(r49):
    assert make_codebook("beta", 3, r49).points == beta(3, r49).points
    with pytest.raises(ValueError):
        make_codebook("custom", 3, r49)
    with pytest.raises(ValueError):
        make_codebook("beta", 3, r49, variants=(0,))
