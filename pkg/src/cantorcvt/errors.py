"""Exception hierarchy shared by all cantorcvt modules."""


class CantorCvtError(Exception):
    """Base class for every error raised by this package."""


class InvalidRatio(CantorCvtError):
    """Contraction ratio outside the open interval (0, 1/2)."""


class InvalidSymbol(CantorCvtError):
    """Word contains a symbol other than '1' or '2'."""


class WordTooLong(CantorCvtError):
    """Word exceeds the configured maximum length."""


class OverlappingCylinders(CantorCvtError):
    """A word in a union is a prefix of another, so the cylinders overlap."""


class DivisionByZero(CantorCvtError, ZeroDivisionError):
    """Division by an identically-zero rational function."""


class PoleAtPoint(CantorCvtError, ZeroDivisionError):
    """Evaluation of a rational function at a zero of its denominator."""


class NoSignChange(CantorCvtError):
    """Root bracket does not exhibit a strict sign change."""


class PoleInInterval(CantorCvtError):
    """Denominator vanishes somewhere on a root-isolation bracket."""


class BadCardinality(CantorCvtError):
    """Index set I has the wrong number of words for the requested n."""


class BadWordLength(CantorCvtError):
    """Index set I contains words of the wrong length."""


class UnsortedCodebook(CantorCvtError):
    """Codebook points are not strictly increasing."""


class DepthOutOfRange(CantorCvtError):
    """Discretization depth outside the supported range."""


class TooManyCodepoints(CantorCvtError):
    """More codepoints requested than atoms available."""


class EmptyCell(CantorCvtError):
    """A Lloyd iteration produced a codepoint that captures no atoms."""


class UnresolvedPartition(CantorCvtError):
    """Voronoi cells could not be resolved into whole cylinders at the
    requested depth, so an exact symbolic computation is not possible."""
