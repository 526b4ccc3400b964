import random
from fractions import Fraction as F

import pytest

from cantorcvt.engine import (
    DEFAULT_MAX_DEPTH,
    distortion,
    distortion_over_window,
    family_distortion,
    gap_witness,
    gate_inequalities,
    partition,
    reflect_codebook,
    resolve_cells,
    verify_cvt,
)
from cantorcvt.errors import UnresolvedPartition, UnsortedCodebook
from cantorcvt.families import Codebook, alpha, beta, delta, enumerate_cvts, make_codebook
from cantorcvt.measure import CantorMeasure
from cantorcvt.oracles import discretize, lloyd
from cantorcvt.ratfunc import RationalFunction as RF

R = RF.parameter()

# fixed point of x -> S1(S2(x)): lies in the support at every depth, so a
# boundary there never resolves; handy for exercising interval bounds
NEVER_RESOLVES = F(4, 13)


def test_partition_two_points(r49):
    part = partition(Codebook.custom([F(2, 9), F(7, 9)]))
    assert part.boundaries == (F(1, 2),)


def test_partition_alpha3(r49):
    part = partition(alpha(3, r49))
    assert part.boundaries == (F(2630, 6561), F(9905, 13122))


def test_partition_single_point():
    part = partition(Codebook.custom([F(1, 2)]))
    assert part.boundaries == ()


def test_partition_rejects_unsorted():
    with pytest.raises(UnsortedCodebook):
        Codebook(points=(F(1, 2), F(3, 10), F(9, 10)))
    # formal points dodge the constructor's ordering check; partition of a
    # decreasing formal codebook is still constructible, so only concrete
    # misuse is caught here
    with pytest.raises(UnsortedCodebook):
        partition(Codebook(points=()))


def test_resolve_alpha3(r49):
    res = resolve_cells(partition(alpha(3, r49)), r49, 4)
    assert res.fully_resolved
    assert res.assigned == (
        ("11", 0),
        ("121", 0),
        ("1221", 0),
        ("1222", 1),
        ("21", 1),
        ("22", 2),
    )


def test_resolve_single_point(r49):
    res = resolve_cells(partition(Codebook.custom([F(1, 2)])), r49, 5)
    assert res.assigned == (("", 0),)


def test_resolve_center_pair(r49):
    cb = Codebook.custom([F(1, 2) - F(1, 100), F(1, 2) + F(1, 100)])
    res = resolve_cells(partition(cb), r49, 5)
    assert res.fully_resolved
    assert res.assigned == (("1", 0), ("2", 1))


def test_resolve_boundary_touching_gap_endpoint(r49):
    # boundary exactly at the left endpoint of the right cylinder resolves
    cb = Codebook.custom([F(1, 2), F(11, 18)])  # midpoint 5/9 = right cylinder start
    res = resolve_cells(partition(cb), r49, 5)
    assert res.fully_resolved
    assert res.assigned == (("1", 0), ("2", 1))
    cert = verify_cvt(cb, r49, 5)
    assert cert.status == "invalid"  # resolved, but the points are not centroids
    assert cert.gap_witnesses == ("",)


def test_distortion_alpha2(r49):
    bound = distortion(alpha(2, r49), r49)
    assert bound.exact and bound.value == F(20, 1053)


def test_distortion_beta3_formal():
    v = CantorMeasure.formal().variance()
    expected = (R**4 * v + R**2 * v) * F(1, 2)
    assert family_distortion("beta", 3, R) == expected
    engine_route = distortion_over_window(
        lambda r: beta(3, r, I=("1",)), (F(42, 100), F(43, 100))
    )
    assert engine_route == expected


def test_distortion_alpha3_formal_closed_form():
    got = family_distortion("alpha", 3, R)
    printed = RF((28, -84, 88, 4, 49, -71, -22, 14, -3, -3), (560, 560))
    assert got == printed
    assert got.num == printed.num and got.den == printed.den
    engine_route = distortion_over_window(
        lambda r: alpha(3, r), (F(437, 1000), F(451, 1000))
    )
    assert engine_route == printed


def test_distortion_delta3_formal_closed_form():
    got = family_distortion("delta", 3, R)
    printed = RF(
        (220, -660, 568, 140, 48, -180, -21, -89, -18, 2, -5, -5), (3168, 3168)
    )
    assert got == printed
    engine_route = distortion_over_window(
        lambda r: delta(3, r), (F(434, 1000), F(448, 1000))
    )
    assert engine_route == printed


def test_distortion_power_of_two_formal():
    v = CantorMeasure.formal().variance()
    for k in (1, 2, 3):
        f = distortion_over_window(
            lambda r: alpha(2**k, r), (F(1, 10), F(45, 100))
        )
        assert f == R ** (2 * k) * v


def test_distortion_over_window_rejects_changing_combinatorics():
    # the beta3 boundary leaves the root gap above (5 - sqrt(17))/2
    with pytest.raises(UnresolvedPartition):
        distortion_over_window(lambda r: beta(3, r, I=("1",)), (F(42, 100), F(45, 100)))


def test_verify_alpha3_valid(r49):
    cert = verify_cvt(alpha(3, r49), r49)
    assert cert.status == "valid"
    assert cert.gap_witnesses == ("122", "2")
    assert all(x == 0 for x in cert.residuals)
    assert sum(cert.cell_masses, F(0)) == 1


def test_verify_beta3_gate_violation():
    assert verify_cvt(beta(3, F(43, 100), I=("1",)), F(43, 100)).status == "valid"
    assert verify_cvt(beta(3, F(45, 100), I=("1",)), F(45, 100)).status == "invalid"
    assert verify_cvt(beta(3, F(44, 100), I=("1",)), F(44, 100)).status == "invalid"


def test_verify_alpha3_outside_window():
    assert verify_cvt(alpha(3, F(43, 100)), F(43, 100)).status == "invalid"
    assert verify_cvt(alpha(3, F(45, 100)), F(45, 100)).status == "valid"


def test_verify_power_of_two_any_ratio():
    rng = random.Random(7)
    for _ in range(10):
        r = F(rng.randint(1, 980), 2000)  # in (0, 0.49]
        for k in (1, 2, 3):
            assert verify_cvt(alpha(2**k, r), r).status == "valid"


def test_verify_undecided_at_shallow_depth(r49):
    cb = Codebook.custom([NEVER_RESOLVES - F(1, 10), NEVER_RESOLVES + F(1, 10)])
    cert = verify_cvt(cb, r49, 6)
    assert cert.status == "undecided"
    assert cert.unresolved


def test_valid_cvt_is_lloyd_fixed_point(r49):
    # discrete measure at a depth past full resolution reproduces the
    # codepoints exactly in one Lloyd step
    for cb in (alpha(3, r49), alpha(5, r49, I=("1",)), delta(3, r49)):
        dm = discretize(CantorMeasure(r49), 9)
        pts, _, iters = lloyd(dm, cb.points, max_iters=1)
        assert tuple(pts) == cb.points


def test_gap_witness_basics(r49):
    assert gap_witness(F(1, 2), r49) == ""
    assert gap_witness(F(5, 9), r49) == ""  # touching endpoint counts
    assert gap_witness(F(2630, 6561), r49) == "122"
    assert gap_witness(F(3, 2), r49) is None
    assert gap_witness(NEVER_RESOLVES, r49, 30) is None


def test_gate_inequalities_alpha():
    gates = gate_inequalities("alpha", 3)
    assert [label for label, _ in gates] == [
        "b1_right_of_1221",
        "b1_left_of_1222",
        "b2_right_of_21",
        "b2_left_of_22",
    ]
    inside, outside_lo, outside_hi = F(44, 100), F(43, 100), F(46, 100)
    assert all(g.evaluate(inside) >= 0 for _, g in gates)
    assert any(g.evaluate(outside_lo) < 0 for _, g in gates)
    assert any(g.evaluate(outside_hi) < 0 for _, g in gates)


def test_gate_inequalities_beta_quadratic():
    gates = dict(gate_inequalities("beta", 3))
    assert gates["b2_left_of_2"] == RF((2, -5, 1), (4,))


def test_gate_inequalities_match_verify(r49):
    # the gate signs and the engine's certificate agree at sampled ratios
    for family in ("alpha", "beta", "delta"):
        gates = gate_inequalities(family, 3)
        for num in range(40, 50):
            r = F(num, 100)
            cb = make_codebook(family, 3, r)
            expected = all(g.evaluate(r) >= 0 for _, g in gates)
            assert (verify_cvt(cb, r).status == "valid") == expected


def test_reflection_invariance(r49):
    for cb in (alpha(3, r49), beta(3, r49, I=("1",)), delta(3, r49), alpha(5, r49)):
        direct = distortion(cb, r49)
        mirrored = distortion(reflect_codebook(cb), r49)
        assert (direct.lo, direct.hi) == (mirrored.lo, mirrored.hi)


def test_reflection_invariance_with_bounds(r49):
    cb = Codebook.custom([NEVER_RESOLVES - F(1, 10), NEVER_RESOLVES + F(1, 10)])
    direct = distortion(cb, r49, 8)
    mirrored = distortion(reflect_codebook(cb), r49, 8)
    assert not direct.exact
    assert (direct.lo, direct.hi) == (mirrored.lo, mirrored.hi)


def test_bound_monotone_refinement(r49):
    cb = Codebook.custom([NEVER_RESOLVES - F(1, 10), NEVER_RESOLVES + F(1, 10)])
    bounds = [distortion(cb, r49, depth) for depth in range(2, 15)]
    for shallow, deep in zip(bounds, bounds[1:]):
        assert deep.lo >= shallow.lo
        assert deep.hi <= shallow.hi
        assert deep.width < shallow.width
    # the straddling mass halves per level, so the width decays geometrically
    assert bounds[-1].width <= F(1, 2) ** 12 * bounds[0].width * 2


def test_distortion_dominates_power_of_two_optimum(r49):
    rng = random.Random(11)
    v = CantorMeasure(r49).variance()
    for n, k in ((2, 1), (4, 2)):
        optimum = r49 ** (2 * k) * v
        for _ in range(8):
            pts = sorted(F(rng.randint(0, 400), 400) for _ in range(n))
            if len(set(pts)) < n:
                continue
            bound = distortion(Codebook.custom(pts), r49)
            assert bound.hi >= optimum
            if bound.exact:
                assert bound.value >= optimum


def test_formal_matches_concrete_at_samples():
    rng = random.Random(3)
    formal = {
        fam: family_distortion(fam, 3, R) for fam in ("alpha", "beta", "delta")
    }
    for _ in range(20):
        r = F(4366 + rng.randint(0, 17), 10**4)  # inside all three validity windows
        for fam, f in formal.items():
            cb = make_codebook(fam, 3, r)
            bound = distortion(cb, r, DEFAULT_MAX_DEPTH)
            assert bound.exact
            assert f.evaluate(r) == bound.value


def test_certificate_serialization(r49):
    d = verify_cvt(alpha(3, r49), r49).to_dict()
    assert d["status"] == "valid"
    assert d["gap_witnesses"] == ["122", "2"]
    assert d["residuals"] == ["0", "0", "0"]
