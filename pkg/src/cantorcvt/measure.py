"""Moments and cylinder integrals of the symmetric dyadic Cantor measure.

The measure P splits its mass evenly between the images of the two
similarities S1(x) = r*x and S2(x) = r*x + (1 - r), so every length-k
cylinder carries mass 2^-k.  The first two moments follow from the one-step
self-similarity of P and are derived here by solving the resulting linear
equations rather than hard-coding the simplified forms, which keeps the
algebra honest for both concrete and formal ratios:

    E[X]   = r*E[X] + (1 - r)/2          =>  E[X]  = 1/2
    E[X^2] = r^2*E[X^2] + r(1-r)E[X] + (1-r)^2/2

Quadratic integrals over cylinders reduce to the closed form

    integral over J_w of (x - x0)^2 dP = p * (s^2 * V + (mid - x0)^2)

with p, s the weight and scale of the word and mid its centroid.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import OverlappingCylinders
from .ratfunc import RationalFunction
from .words import check_ratio, check_word, is_prefix, midpoint, weight_and_scale

HALF = Fraction(1, 2)


@dataclass(frozen=True)
class CantorMeasure:
    """The self-similar measure with contraction ratio ``ratio``.

    ``ratio`` is either a Fraction in (0, 1/2) or the formal parameter
    ``RationalFunction.parameter()``.
    """

    ratio: object

    def __post_init__(self):
        check_ratio(self.ratio)

    @classmethod
    def formal(cls) -> "CantorMeasure":
        return cls(RationalFunction.parameter())

    def mean(self):
        """E[X], solved from E = r*E + (1-r)/2."""
        r = self.ratio
        return (1 - r) * HALF / (1 - r)

    def second_moment(self):
        """E[X^2], solved from the one-step self-similarity relation."""
        r = self.ratio
        rhs = r * (1 - r) * self.mean() + (1 - r) * (1 - r) * HALF
        return rhs / (1 - r * r)

    def variance(self):
        m = self.mean()
        return self.second_moment() - m * m

    def cylinder_integral(self, word: str, x0):
        """Exact integral of (x - x0)^2 over the cylinder of ``word``."""
        check_word(word)
        p, s = weight_and_scale(word, self.ratio)
        d = midpoint(word, self.ratio) - x0
        return p * (s * s * self.variance() + d * d)

    def cond_expectation(self, words) -> object:
        """Conditional expectation of X on a disjoint union of cylinders.

        The words must be prefix-free so the cylinders are pairwise disjoint.
        """
        words = list(words)
        if not words:
            raise ValueError("need at least one word")
        for w in words:
            check_word(w)
        for i, a in enumerate(words):
            for b in words[i + 1 :]:
                if is_prefix(a, b) or is_prefix(b, a):
                    raise OverlappingCylinders(
                        f"cylinders of {a or 'e'!r} and {b or 'e'!r} overlap"
                    )
        total = Fraction(0)
        acc = None
        for w in words:
            p = Fraction(1, 2 ** len(w))
            term = p * midpoint(w, self.ratio)
            acc = term if acc is None else acc + term
            total += p
        return acc / total
