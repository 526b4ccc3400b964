"""Words over {1, 2} and the similarity maps they index.

A word addresses a cylinder interval of the dyadic Cantor construction: the
empty word is the whole unit interval, appending '1' descends into the left
child, '2' into the right.  The two generators are S1(x) = r*x and
S2(x) = r*x + (1 - r), composed left to right, so the map of "21" is
S2 after S1.

Everything here is generic over the ratio: pass a Fraction for concrete
arithmetic or ``RationalFunction.parameter()`` for closed forms in r.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import InvalidRatio, InvalidSymbol, WordTooLong
from .ratfunc import RationalFunction

#: Words longer than this are rejected; their mass 2^-k is far below any
#: tolerance used in the package.  Override per call where needed.
MAX_WORD_LENGTH = 64

HALF = Fraction(1, 2)


def check_ratio(r) -> None:
    """Reject concrete ratios outside (0, 1/2); formal parameters pass through."""
    if isinstance(r, RationalFunction):
        return
    r = Fraction(r)
    if not (0 < r < HALF):
        raise InvalidRatio(f"ratio must lie in (0, 1/2), got {r}")


def check_word(word: str, max_len: int = MAX_WORD_LENGTH) -> str:
    for ch in word:
        if ch not in "12":
            raise InvalidSymbol(f"invalid symbol {ch!r} in word {word!r}")
    if len(word) > max_len:
        raise WordTooLong(f"word of length {len(word)} exceeds cap {max_len}")
    return word


def word_to_str(word: str) -> str:
    """Serialize a word; the empty word prints as 'e'."""
    return word if word else "e"


def word_from_str(text: str) -> str:
    if text == "e" or text == "":
        return ""
    return check_word(text)


def reflect_word(word: str) -> str:
    """Swap 1 <-> 2, the mirror symmetry x -> 1 - x of the construction."""
    return word.translate(str.maketrans("12", "21"))


@dataclass(frozen=True)
class AffineMap:
    """An increasing similarity x -> scale*x + translate."""

    scale: object
    translate: object

    def __call__(self, x):
        return self.scale * x + self.translate

    def after(self, other: "AffineMap") -> "AffineMap":
        """Composition self o other."""
        return AffineMap(self.scale * other.scale, self(other.translate))


def compose(word: str, r) -> AffineMap:
    """The composed similarity of a word, built symbol by symbol."""
    check_ratio(r)
    check_word(word)
    scale = r**0 if isinstance(r, RationalFunction) else Fraction(1)
    translate = scale - scale  # zero of the same scalar type
    one_minus_r = scale - r if isinstance(r, RationalFunction) else 1 - r
    for ch in word:
        # multiply on the right by S1 or S2: scale shrinks, the translate
        # moves only for the right branch
        if ch == "2":
            translate = translate + scale * one_minus_r
        scale = scale * r
    return AffineMap(scale, translate)


def cylinder(word: str, r) -> tuple:
    """Endpoints of the cylinder interval a word addresses."""
    m = compose(word, r)
    return (m.translate, m.translate + m.scale)


def weight_and_scale(word: str, r) -> tuple:
    """The measure weight 2^-k and the length scale r^k of a length-k word."""
    check_ratio(r)
    check_word(word)
    k = len(word)
    return (Fraction(1, 2**k), r**k)


def midpoint(word: str, r):
    """Image of 1/2, which is both the cylinder midpoint and its centroid."""
    m = compose(word, r)
    return m.scale * HALF + m.translate


def is_prefix(a: str, b: str) -> bool:
    return b.startswith(a)


def all_words(length: int) -> list[str]:
    """All words of a given length in lexicographic (= spatial) order."""
    if length == 0:
        return [""]
    words = [""]
    for _ in range(length):
        words = [w + ch for w in words for ch in "12"]
    return words
