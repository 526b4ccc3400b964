"""Construction and enumeration of the three structured codebook families.

Every family places one generator per group of cylinders, at the conditional
expectation of the union.  With ``ell`` the unique level such that
``2^ell <= n < 2^(ell+1)`` and ``k = n - 2^ell``:

* ``alpha``: for k <= 2^(ell-1), each chosen level-(ell-1) word ``w`` in I is
  refined into a fixed three-group pattern below ``w`` (two mirror-image
  variants exist) while every other level-(ell-1) word contributes its two
  child midpoints.  For larger k the roles flip: words in I contribute their
  four grandchild midpoints and words outside I carry the three-group pattern.
* ``beta``: the classical midpoint family; words of level ``ell`` outside I
  contribute their midpoint, words in I the midpoints of both children.
* ``delta``: same index bookkeeping as ``alpha`` with a deeper three-group
  pattern that trades mass between neighbouring subtrees.

Powers of two collapse all three families to the full set of level-``ell``
cylinder midpoints.  Constructions are pure bookkeeping: whether the result
is an actual centroidal Voronoi tessellation at a given ratio is decided by
the engine, not here.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, product
from math import comb
from typing import Iterator

from .errors import BadCardinality, BadWordLength, UnsortedCodebook
from .measure import CantorMeasure
from .ratfunc import RationalFunction
from .words import all_words, word_from_str, word_to_str

FAMILIES = ("alpha", "beta", "delta", "custom")

# The two mirror variants of the three-group refinement pattern, as suffix
# groups hung below a word.  Variant 0 is the left-heavy form, variant 1 its
# 1 <-> 2 mirror image.
_ALPHA_PATTERN = (
    (("11", "121", "1221"), ("1222", "21"), ("22",)),
    (("11",), ("12", "2111"), ("2112", "212", "22")),
)
_DELTA_PATTERN = (
    (("11", "1211", "12121"), ("12122", "122", "211"), ("212", "22")),
    (("11", "121"), ("122", "211", "21211"), ("21212", "2122", "22")),
)
_PATTERNS = {"alpha": _ALPHA_PATTERN, "delta": _DELTA_PATTERN}


def level(n: int) -> int:
    """The unique ell with 2^ell <= n < 2^(ell+1)."""
    if n < 2:
        raise ValueError("need n >= 2")
    return n.bit_length() - 1


@dataclass(frozen=True)
class Codebook:
    """An ordered set of generator points with its construction metadata.

    ``groups`` records, for each point, the words of the cylinders whose
    union the point is the centroid of; it is what makes closed-form
    distortion sums and certificates possible.  Custom codebooks carry no
    groups.
    """

    points: tuple
    family: str = "custom"
    n: int = 0
    ell: int = 0
    index_set: tuple = ()
    variants: tuple = ()
    groups: tuple = field(default=(), repr=False)

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        object.__setattr__(self, "points", tuple(self.points))
        if self.n == 0:
            object.__setattr__(self, "n", len(self.points))
        if len(self.points) != self.n:
            raise BadCardinality(f"expected {self.n} points, got {len(self.points)}")
        if self.points and isinstance(self.points[0], Fraction):
            for a, b in zip(self.points, self.points[1:]):
                if not a < b:
                    raise UnsortedCodebook("codebook points must be strictly increasing")

    @classmethod
    def custom(cls, points) -> "Codebook":
        return cls(tuple(Fraction(p) for p in points))

    @property
    def is_formal(self) -> bool:
        return bool(self.points) and isinstance(self.points[0], RationalFunction)

    def to_dict(self) -> dict:
        if self.is_formal:
            points = [p.to_dict() for p in self.points]
        else:
            points = [str(Fraction(p)) for p in self.points]
        return {
            "family": self.family,
            "n": self.n,
            "I": [word_to_str(w) for w in self.index_set],
            "variants": list(self.variants),
            "points": points,
        }


def _require_index_set(I, base_words, card: int, base_len: int) -> tuple:
    if I is None:
        I = tuple(base_words[:card])  # lexicographically least admissible choice
    I = tuple(sorted(word_from_str(w) for w in I))
    if len(set(I)) != len(I):
        raise BadCardinality("index set contains duplicate words")
    for w in I:
        if len(w) != base_len:
            raise BadWordLength(f"index word {word_to_str(w)!r} must have length {base_len}")
    if len(I) != card:
        raise BadCardinality(f"index set must have {card} words, got {len(I)}")
    return I


def _require_variants(variants, count: int) -> tuple:
    if variants is None:
        variants = (0,) * count
    variants = tuple(int(v) for v in variants)
    if len(variants) != count:
        raise BadCardinality(f"need {count} variant selectors, got {len(variants)}")
    if any(v not in (0, 1) for v in variants):
        raise ValueError("variant selectors must be 0 or 1")
    return variants


@lru_cache(maxsize=None)
def _group_point(group: tuple, r):
    # enumeration rebuilds the same group centroids thousands of times
    return CantorMeasure(r).cond_expectation(group)


def _build(groups, family: str, n: int, ell: int, I, variants, r) -> Codebook:
    points = tuple(_group_point(tuple(g), r) for g in groups)
    return Codebook(
        points=points,
        family=family,
        n=n,
        ell=ell,
        index_set=tuple(I),
        variants=tuple(variants),
        groups=tuple(tuple(g) for g in groups),
    )


def _triple_family(family: str, n: int, I, variants, r) -> Codebook:
    pattern = _PATTERNS[family]
    ell = level(n)
    if n == 2**ell:
        I = _require_index_set(I, (), 0, 0)
        variants = _require_variants(variants, 0)
        groups = [(w,) for w in all_words(ell)]
        return _build(groups, family, n, ell, I, variants, r)

    k = n - 2**ell
    base = all_words(ell - 1)
    groups = []
    if k <= 2 ** (ell - 1):
        I = _require_index_set(I, base, k, ell - 1)
        variants = _require_variants(variants, k)
        chosen = dict(zip(I, variants))
        for w in base:
            if w in chosen:
                groups.extend(tuple(w + s for s in grp) for grp in pattern[chosen[w]])
            else:
                groups.append((w + "1",))
                groups.append((w + "2",))
    else:
        card = n - 3 * 2 ** (ell - 1)
        I = _require_index_set(I, base, card, ell - 1)
        rest = [w for w in base if w not in set(I)]
        variants = _require_variants(variants, len(rest))
        chosen = dict(zip(rest, variants))
        for w in base:
            if w in chosen:
                groups.extend(tuple(w + s for s in grp) for grp in pattern[chosen[w]])
            else:
                groups.extend((w + t,) for t in ("11", "12", "21", "22"))
    return _build(groups, family, n, ell, I, variants, r)


def alpha(n: int, r, I=None, variants=None) -> Codebook:
    """Three-group refinements hung below the words of I (or its complement)."""
    return _triple_family("alpha", n, I, variants, r)


def delta(n: int, r, I=None, variants=None) -> Codebook:
    """The deeper refinement pattern; same index bookkeeping as alpha."""
    return _triple_family("delta", n, I, variants, r)


def beta(n: int, r, I=None) -> Codebook:
    """The midpoint family: split the level-ell cylinders listed in I."""
    ell = level(n)
    k = n - 2**ell
    base = all_words(ell)
    I = _require_index_set(I, base, k, ell)
    groups = []
    in_I = set(I)
    for w in base:
        if w in in_I:
            groups.append((w + "1",))
            groups.append((w + "2",))
        else:
            groups.append((w,))
    return _build(groups, "beta", n, ell, I, (), r)


def make_codebook(family: str, n: int, r, I=None, variants=None) -> Codebook:
    if family == "alpha":
        return alpha(n, r, I, variants)
    if family == "beta":
        if variants:
            raise ValueError("beta has no variant selectors")
        return beta(n, r, I)
    if family == "delta":
        return delta(n, r, I, variants)
    raise ValueError(f"cannot construct family {family!r}")


def count_cvts(n: int, family: str) -> int:
    """Number of distinct (I, variants) constructions for alpha or delta."""
    if family not in ("alpha", "delta"):
        raise ValueError("counting is defined for the alpha and delta families")
    ell = level(n)
    if n == 2**ell:
        return 1
    k = n - 2**ell
    half = 2 ** (ell - 1)
    if k < half:
        return 2**k * comb(half, k)
    if k == half:
        return 2**half
    kp = n - 3 * half
    return 2 ** (2 ** (ell + 1) - n) * comb(half, kp)


def enumerate_cvts(n: int, family: str, r) -> Iterator[Codebook]:
    """All admissible (I, variants) codebooks, lexicographic in I then bits."""
    if family not in ("alpha", "delta"):
        raise ValueError("enumeration is defined for the alpha and delta families")
    ell = level(n)
    if n == 2**ell:
        yield make_codebook(family, n, r)
        return
    k = n - 2**ell
    base = all_words(ell - 1)
    if k <= 2 ** (ell - 1):
        card, bit_count = k, k
    else:
        card = n - 3 * 2 ** (ell - 1)
        bit_count = 2 ** (ell - 1) - card
    for I in combinations(base, card):
        for bits in product((0, 1), repeat=bit_count):
            yield make_codebook(family, n, r, I, bits)


def canonical_codebook(family: str, n: int, r) -> Codebook:
    """The lexicographically first construction of a family (least I, zero bits)."""
    if family == "beta":
        ell = level(n)
        k = n - 2**ell
        I = tuple(all_words(ell)[:k])
        return beta(n, r, I)
    return next(iter(enumerate_cvts(n, family, r)))
