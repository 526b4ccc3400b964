"""Certified critical ratios: validity windows and distortion crossovers.

Every threshold is the root of an explicitly constructed rational function,
bracketed by a coarse sign scan and then bisected on exact rational
midpoints.  Validity windows come from the boundary-in-gap conditions of the
three-generator codebooks; crossovers from differences of the closed-form
family distortions.  Ten-decimal renderings are certified stable: the digits
are only reported if both ends of the final bracket round identically.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .engine import family_distortion, gate_inequalities
from .ratfunc import RationalFunction, isolate_root, scan_sign_changes

DEFAULT_TOL = Fraction(1, 10**12)

_GRID_STEP = Fraction(1, 1000)
_REFERENCE = {"alpha": Fraction(44, 100), "beta": Fraction(2, 10), "delta": Fraction(44, 100)}


@dataclass(frozen=True)
class Threshold:
    """A solved critical ratio with its defining function and certificate data."""

    name: str
    value: Fraction
    decimals: str
    bracket: tuple
    defining: RationalFunction
    binding: str

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "value": str(self.value),
            "decimals": self.decimals,
            "bracket": [str(self.bracket[0]), str(self.bracket[1])],
            "defining": self.defining.to_dict(),
            "binding": self.binding,
        }


def format_decimals(x: Fraction, places: int = 10) -> str:
    """Round-half-even rendering of a nonnegative rational to fixed places."""
    scale = 10**places
    y = Fraction(x) * scale
    fl = y.numerator // y.denominator
    rem = y - fl
    if rem > Fraction(1, 2) or (rem == Fraction(1, 2) and fl % 2 == 1):
        fl += 1
    int_part, frac_part = divmod(fl, scale)
    return f"{int_part}.{frac_part:0{places}d}"


def _certified_decimals(value: Fraction, tol: Fraction, places: int = 10) -> str:
    low = format_decimals(value - 2 * tol, places)
    high = format_decimals(value + 2 * tol, places)
    if low != high:
        raise RuntimeError(
            f"{places}-decimal rendering of {value} is not stable at tolerance {tol}"
        )
    return low


def _solve_bracket(name, f, bracket, tol, binding) -> Threshold:
    value = isolate_root(f, bracket[0], bracket[1], tol)
    return Threshold(
        name=name,
        value=value,
        decimals=_certified_decimals(value, tol),
        bracket=bracket,
        defining=f,
        binding=binding,
    )


def _single_root_near(f, lo, hi) -> tuple:
    brackets = scan_sign_changes(f, lo, hi, _GRID_STEP)
    if len(brackets) != 1:
        raise RuntimeError(
            f"expected one sign change on [{lo}, {hi}], found {len(brackets)}: {brackets}"
        )
    return brackets[0]


def family_window(family: str, tol: Fraction = DEFAULT_TOL, n: int = 3):
    """(lower, upper) validity thresholds of a family's boundary gates.

    Either side may be None when the gates hold all the way to the end of the
    scanned ratio range.  The binding gate at each end is recorded.
    """
    gates = gate_inequalities(family, n)
    grid = [Fraction(j, 1000) for j in range(1, 500)]
    ok = [all(g.evaluate(r) >= 0 for _, g in gates) for r in grid]
    ref = _REFERENCE[family]
    ref_idx = grid.index(ref)
    if not ok[ref_idx]:
        raise RuntimeError(f"reference ratio {ref} is outside the {family} gate window")
    left = ref_idx
    while left > 0 and ok[left - 1]:
        left -= 1
    right = ref_idx
    while right + 1 < len(grid) and ok[right + 1]:
        right += 1

    def edge(lo_r, hi_r, pick_max, side):
        roots = []
        for label, g in gates:
            if scan_sign_changes(g, lo_r, hi_r, hi_r - lo_r):
                roots.append((isolate_root(g, lo_r, hi_r, tol), label, g))
        if not roots:
            raise RuntimeError(f"no gate changes sign on [{lo_r}, {hi_r}]")
        roots.sort(key=lambda t: t[0])
        value, label, g = roots[-1] if pick_max else roots[0]
        return Threshold(
            name=f"{family}{n}_gate_{side}",
            value=value,
            decimals=_certified_decimals(value, tol),
            bracket=(lo_r, hi_r),
            defining=g,
            binding=label,
        )

    lower = None
    if left > 0:
        lower = edge(grid[left - 1], grid[left], pick_max=True, side="lower")
    upper = None
    if right + 1 < len(grid):
        upper = edge(grid[right], grid[right + 1], pick_max=False, side="upper")
    return lower, upper


def solve_all(tol: Fraction = DEFAULT_TOL) -> list:
    """The seven critical ratios, ordered as solved."""
    alpha_lo, alpha_hi = family_window("alpha", tol)
    beta_lo, beta_hi = family_window("beta", tol)
    if beta_lo is not None:
        raise RuntimeError("beta gates unexpectedly fail at small ratios")
    delta_lo, delta_hi = family_window("delta", tol)

    v_alpha = family_distortion("alpha", 3, RationalFunction.parameter())
    v_beta = family_distortion("beta", 3, RationalFunction.parameter())
    v_delta = family_distortion("delta", 3, RationalFunction.parameter())

    scan_lo, scan_hi = Fraction(2, 5), Fraction(46, 100)
    diff_ab = v_beta - v_alpha
    ab = _solve_bracket(
        "alpha_beta_crossover",
        diff_ab,
        _single_root_near(diff_ab, scan_lo, scan_hi),
        tol,
        binding="V(beta3) - V(alpha3)",
    )
    diff_da = v_alpha - v_delta
    da = _solve_bracket(
        "delta_alpha_crossover",
        diff_da,
        _single_root_near(diff_da, scan_lo, scan_hi),
        tol,
        binding="V(alpha3) - V(delta3)",
    )
    return [alpha_lo, alpha_hi, beta_hi, ab, delta_lo, delta_hi, da]
