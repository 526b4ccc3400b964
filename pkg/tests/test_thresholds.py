from decimal import Decimal, localcontext
from fractions import Fraction as F

import pytest

from cantorcvt.engine import family_distortion, make_codebook, verify_cvt
from cantorcvt.ratfunc import poly_divmod
from cantorcvt.thresholds import Threshold, family_window, format_decimals, solve_all

EXPECTED = {
    "alpha3_gate_lower": "0.4364590141",
    "alpha3_gate_upper": "0.4512271429",
    "beta3_gate_upper": "0.4384471872",
    "alpha_beta_crossover": "0.4371985206",
    "delta3_gate_lower": "0.4332840530",
    "delta3_gate_upper": "0.4486234903",
    "delta_alpha_crossover": "0.4307442489",
}


@pytest.fixture(scope="module")
def solved() -> dict:
    return {t.name: t for t in solve_all()}


def test_format_decimals():
    assert format_decimals(F(1, 3)) == "0.3333333333"
    assert format_decimals(F(1, 2), 3) == "0.500"
    assert format_decimals(F(2, 3), 4) == "0.6667"


def test_seven_constants(solved):
    assert set(solved) == set(EXPECTED)
    for name, decimals in EXPECTED.items():
        assert solved[name].decimals == decimals, name


def test_threshold_ordering(solved):
    chain = [
        "delta_alpha_crossover",
        "delta3_gate_lower",
        "alpha3_gate_lower",
        "alpha_beta_crossover",
        "beta3_gate_upper",
        "delta3_gate_upper",
        "alpha3_gate_upper",
    ]
    values = [solved[name].value for name in chain]
    assert values == sorted(values)


def test_sign_change_near_each_value(solved):
    eps = F(1, 10**9)
    for t in solved.values():
        assert t.defining.evaluate(t.value - eps) * t.defining.evaluate(t.value + eps) < 0


def test_beta_gate_is_quadratic_root(solved):
    t = solved["beta3_gate_upper"]
    quotient, remainder = poly_divmod(t.defining.num, (2, -5, 1))
    assert remainder == ()
    assert len(quotient) == 1  # the gate is a constant multiple of r^2 - 5r + 2
    # algebraic residual at the bisected value
    v = t.value
    assert abs(v * v - 5 * v + 2) < F(1, 10**11)
    with localcontext() as ctx:
        ctx.prec = 40
        reference = (5 - Decimal(17).sqrt()) / 2
    assert abs(v - F(str(reference))) <= F(2, 10**12)


def test_binding_sides_recorded(solved):
    assert solved["beta3_gate_upper"].binding == "b2_left_of_2"
    for t in solved.values():
        assert t.binding


def test_beta_has_no_lower_gate():
    lower, upper = family_window("beta")
    assert lower is None
    assert isinstance(upper, Threshold)


def test_orderings_on_sample_grids(solved):
    lo = solved["alpha_beta_crossover"].value
    hi = solved["beta3_gate_upper"].value
    samples = [lo + (hi - lo) * F(j, 11) for j in range(1, 11)]
    for r in samples:
        assert family_distortion("alpha", 3, r) < family_distortion("beta", 3, r)
        for fam in ("alpha", "beta"):
            assert verify_cvt(make_codebook(fam, 3, r), r).status == "valid"

    lo = solved["alpha3_gate_lower"].value
    hi = solved["delta3_gate_upper"].value
    samples = [lo + (hi - lo) * F(j, 11) for j in range(1, 11)]
    for r in samples:
        assert family_distortion("delta", 3, r) < family_distortion("alpha", 3, r)
        for fam in ("alpha", "delta"):
            assert verify_cvt(make_codebook(fam, 3, r), r).status == "valid"


def test_certificate_serialization(solved):
    d = solved["alpha_beta_crossover"].to_dict()
    assert d["decimals"] == "0.4371985206"
    assert set(d) == {"name", "value", "decimals", "bracket", "defining", "binding"}
