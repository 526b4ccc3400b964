"""Voronoi partitioning, CVT verification, and certified distortion on the line.

Cells of a one-dimensional Voronoi partition are delimited by midpoints of
consecutive generators.  Because the measure lives on a Cantor set, a cell
boundary that falls inside one of the construction gaps splits the support
into whole cylinders, and masses, centroids, and quadratic integrals of the
cell are then exact closed forms.  ``resolve_cells`` descends the cylinder
tree until every cylinder lies inside a single cell (or a depth cap is hit);
everything else builds on that resolution:

* ``distortion`` sums exact per-cylinder integrals and encloses whatever did
  not resolve in a certified interval;
* ``verify_cvt`` checks the centroid condition with zero-residual exactness
  and reports the gap witnessing each boundary;
* ``distortion_over_window`` certifies that the cell combinatorics are
  constant across a ratio interval (checked at both endpoints and an interior
  point) and then reuses the cylinder assignment symbolically, producing the
  closed-form distortion as a rational function of r.

A boundary that touches a gap endpoint is treated as resolved, with the
touching cylinder assigned to the left cell; single points carry no mass, so
distortion is unaffected.

The descent itself runs on plain integers: with ratio p/q, the level-k
cylinder starting at T/q^k is compared against boundaries by cross
multiplication, avoiding any rational normalization in the hot path.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import InvalidRatio, UnresolvedPartition, UnsortedCodebook
from .families import Codebook, make_codebook
from .measure import CantorMeasure
from .ratfunc import RationalFunction
from .words import check_ratio, compose, reflect_word, word_to_str

DEFAULT_MAX_DEPTH = 40

HALF = Fraction(1, 2)


@dataclass(frozen=True)
class VoronoiPartition:
    """A codebook with the n-1 midpoint boundaries between its generators."""

    codebook: Codebook
    boundaries: tuple

    @property
    def n(self) -> int:
        return len(self.codebook.points)


def partition(cb: Codebook) -> VoronoiPartition:
    pts = cb.points
    if not pts:
        raise UnsortedCodebook("codebook is empty")
    if not cb.is_formal:
        for a, b in zip(pts, pts[1:]):
            if not a < b:
                raise UnsortedCodebook("codebook points must be strictly increasing")
    bounds = tuple((a + b) * HALF for a, b in zip(pts, pts[1:]))
    return VoronoiPartition(cb, bounds)


@dataclass(frozen=True)
class CellResolution:
    """Result of descending the cylinder tree against cell boundaries.

    ``assigned`` maps whole cylinders to the single cell containing them, in
    depth-first (spatial) order.  ``unresolved`` lists cylinders that still
    straddle a boundary at the depth cap, with the inclusive range of cells
    they overlap.  The private node tuples additionally carry the integer
    start offset T and level k of each cylinder (start = T / q^k) so that
    downstream consumers can form exact values without re-deriving maps.
    """

    assigned_nodes: tuple  # (word, level, T, cell)
    unresolved_nodes: tuple  # (word, level, T, first_cell, last_cell)
    max_depth: int

    @property
    def assigned(self) -> tuple:
        return tuple((w, c) for w, _, _, c in self.assigned_nodes)

    @property
    def unresolved(self) -> tuple:
        return tuple(w for w, _, _, _, _ in self.unresolved_nodes)

    @property
    def fully_resolved(self) -> bool:
        return not self.unresolved_nodes


def _bisect_ge(bounds, lo: int, hi: int, num: int, den: int) -> int:
    """First index j in [lo, hi) with bounds[j] >= num/den, else hi."""
    while lo < hi:
        mid = (lo + hi) // 2
        bn, bd = bounds[mid]
        if bn * den >= num * bd:
            hi = mid
        else:
            lo = mid + 1
    return lo


def resolve_cells(part: VoronoiPartition, r, max_depth: int = DEFAULT_MAX_DEPTH) -> CellResolution:
    if max_depth < 0:
        raise ValueError("max_depth must be nonnegative")
    cb = part.codebook
    if cb.is_formal:
        raise TypeError("cell resolution needs a concrete ratio and codebook")
    r = Fraction(r)
    check_ratio(r)
    p, q = r.numerator, r.denominator
    p_pow = [1] * (max_depth + 1)
    q_pow = [1] * (max_depth + 1)
    for k in range(1, max_depth + 1):
        p_pow[k] = p_pow[k - 1] * p
        q_pow[k] = q_pow[k - 1] * q
    bounds = [(Fraction(b).numerator, Fraction(b).denominator) for b in part.boundaries]
    nb = len(bounds)

    assigned = []
    unresolved = []
    # stack entries: (word, level, T, window_lo, window_hi); boundaries outside
    # the window are already known to clear the cylinder on that side
    stack = [("", 0, 0, 0, nb)]
    while stack:
        word, k, T, blo, bhi = stack.pop()
        D = q_pow[k]
        L = T
        R = T + p_pow[k]
        c_right = _bisect_ge(bounds, blo, bhi, R, D)
        if c_right == 0:
            fits = True
        elif c_right - 1 < blo:
            fits = True  # that boundary already cleared the parent on the left
        else:
            bn, bd = bounds[c_right - 1]
            fits = bn * D <= L * bd
        if fits:
            assigned.append((word, k, T, c_right))
            continue
        c_left = _bisect_ge(bounds, blo, c_right, L, D)
        if k == max_depth:
            unresolved.append((word, k, T, c_left, c_right))
            continue
        t2 = T * q + p_pow[k] * (q - p)
        stack.append((word + "2", k + 1, t2, c_left, c_right))
        stack.append((word + "1", k + 1, T * q, c_left, c_right))
    return CellResolution(tuple(assigned), tuple(unresolved), max_depth)


@dataclass(frozen=True)
class DistortionBound:
    """A closed interval certified to contain the distortion of a codebook."""

    lo: Fraction
    hi: Fraction
    exact: bool

    @property
    def value(self) -> Fraction:
        if not self.exact:
            raise ValueError("distortion bound is not exact")
        return self.lo

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def to_dict(self) -> dict:
        return {"lo": str(self.lo), "hi": str(self.hi), "exact": self.exact}


def distortion(cb: Codebook, r, max_depth: int = DEFAULT_MAX_DEPTH) -> DistortionBound:
    """Exact or interval-certified expected squared distance to the codebook."""
    part = partition(cb)
    res = resolve_cells(part, r, max_depth)
    r = Fraction(r)
    p, q = r.numerator, r.denominator
    variance = CantorMeasure(r).variance()
    pts = cb.points
    total = Fraction(0)
    for _, k, T, cell in res.assigned_nodes:
        mid = Fraction(2 * T + p**k, 2 * q**k)
        d = mid - pts[cell]
        total += Fraction(1, 2**k) * (r ** (2 * k) * variance + d * d)
    if res.fully_resolved:
        return DistortionBound(total, total, True)
    # An unresolved cylinder contributes nothing to the lower bound: any
    # positive floor (e.g. its residual variance) can overshoot the true
    # value once several codepoints crowd the cylinder, and would break the
    # monotonicity of refinement.  The upper bound charges the cylinder as
    # if served by its worst candidate codepoint.
    hi = total
    for _, k, T, c_first, c_last in res.unresolved_nodes:
        weight = Fraction(1, 2**k)
        left = Fraction(T, q**k)
        right = Fraction(T + p**k, q**k)
        d = max(max(abs(left - a), abs(right - a)) for a in pts[c_first : c_last + 1])
        hi += weight * (r ** (2 * k) * variance + d * d)
    return DistortionBound(total, hi, False)


def gap_witness(b: Fraction, r, max_depth: int = DEFAULT_MAX_DEPTH):
    """Word whose construction gap contains b (endpoints included), if any.

    Returns None for boundaries outside [0, 1] or when the search exhausts
    max_depth, which only happens if b is a point of the Cantor set itself.
    """
    b = Fraction(b)
    r = Fraction(r)
    if b < 0 or b > 1:
        return None
    bn, bd = b.numerator, b.denominator
    p, q = r.numerator, r.denominator
    T, p_pow, q_pow = 0, 1, 1  # cylinder of `word` starts at T / q^|word|
    word = ""
    for _ in range(max_depth + 1):
        den = q_pow * q
        gap_lo = T * q + p_pow * p
        gap_hi = T * q + p_pow * (q - p)
        scaled = bn * den
        if gap_lo * bd <= scaled <= gap_hi * bd:
            return word
        if scaled < gap_lo * bd:
            word += "1"
            T = T * q
        else:
            word += "2"
            T = gap_hi
        p_pow *= p
        q_pow = den
    return None


@dataclass(frozen=True)
class CvtCertificate:
    """Verification record for the centroid condition of a codebook.

    ``status`` is "valid" when every boundary resolves into a gap and every
    generator equals its cell's conditional expectation exactly, "invalid"
    when resolution succeeded but some residual is nonzero or a cell carries
    no mass, and "undecided" when a boundary stayed unresolved at the depth
    cap.  Residual None marks an empty cell.
    """

    status: str
    boundaries: tuple
    gap_witnesses: tuple
    residuals: tuple
    cell_masses: tuple
    unresolved: tuple
    max_depth: int

    def to_dict(self) -> dict:
        return {
            "status": self.status,
            "boundaries": [str(b) for b in self.boundaries],
            "gap_witnesses": [
                None if w is None else word_to_str(w) for w in self.gap_witnesses
            ],
            "residuals": [None if x is None else str(x) for x in self.residuals],
            "cell_masses": [str(m) for m in self.cell_masses],
            "unresolved": [word_to_str(w) for w in self.unresolved],
            "max_depth": self.max_depth,
        }


def verify_cvt(cb: Codebook, r, max_depth: int = DEFAULT_MAX_DEPTH) -> CvtCertificate:
    part = partition(cb)
    res = resolve_cells(part, r, max_depth)
    r = Fraction(r)
    p, q = r.numerator, r.denominator
    n = len(cb.points)
    witnesses = tuple(gap_witness(b, r, max_depth) for b in part.boundaries)
    if not res.fully_resolved:
        return CvtCertificate(
            status="undecided",
            boundaries=part.boundaries,
            gap_witnesses=witnesses,
            residuals=(None,) * n,
            cell_masses=(Fraction(0),) * n,
            unresolved=res.unresolved,
            max_depth=max_depth,
        )
    masses = [Fraction(0)] * n
    moments = [Fraction(0)] * n
    for _, k, T, cell in res.assigned_nodes:
        weight = Fraction(1, 2**k)
        masses[cell] += weight
        moments[cell] += weight * Fraction(2 * T + p**k, 2 * q**k)
    residuals = []
    for i in range(n):
        if masses[i] == 0:
            residuals.append(None)
        else:
            residuals.append(cb.points[i] - moments[i] / masses[i])
    ok = all(x == 0 for x in residuals)
    return CvtCertificate(
        status="valid" if ok else "invalid",
        boundaries=part.boundaries,
        gap_witnesses=witnesses,
        residuals=tuple(residuals),
        cell_masses=tuple(masses),
        unresolved=(),
        max_depth=max_depth,
    )


def _canonical_cells(assigned) -> frozenset:
    """Merge sibling cylinders assigned to the same cell into their parent.

    Two ratios can resolve the same partition at different granularities;
    canonical form makes the comparison granularity-independent.
    """
    cells = dict(assigned)
    changed = True
    while changed:
        changed = False
        for w in sorted(cells, key=len, reverse=True):
            if w and w.endswith("1"):
                sib = w[:-1] + "2"
                if sib in cells and cells.get(w) == cells[sib]:
                    cell = cells.pop(w)
                    cells.pop(sib)
                    cells[w[:-1]] = cell
                    changed = True
    return frozenset(cells.items())


def distortion_over_window(builder, window, max_depth: int = DEFAULT_MAX_DEPTH) -> RationalFunction:
    """Closed-form distortion in r, valid across a ratio window.

    ``builder(ratio)`` must construct the codebook at a concrete or formal
    ratio.  The cell combinatorics are certified at the window endpoints and
    at the midpoint; if they differ, or any boundary fails to resolve, the
    symbolic sum would be meaningless and UnresolvedPartition is raised.
    """
    lo, hi = Fraction(window[0]), Fraction(window[1])
    if not 0 < lo < hi or hi >= HALF:
        raise InvalidRatio(f"window [{lo}, {hi}] must sit inside (0, 1/2)")
    canon = None
    for s in (lo, (lo + hi) / 2, hi):
        res = resolve_cells(partition(builder(s)), s, max_depth)
        if not res.fully_resolved:
            raise UnresolvedPartition(f"cells do not resolve at r = {s}")
        cmap = _canonical_cells(res.assigned)
        if canon is None:
            canon = cmap
        elif cmap != canon:
            raise UnresolvedPartition("cell combinatorics change across the window")
    formal = builder(RationalFunction.parameter())
    meas = CantorMeasure.formal()
    total = RationalFunction(0)
    for word, cell in sorted(canon):
        total = total + meas.cylinder_integral(word, formal.points[cell])
    return total


def family_distortion(family: str, n: int, ratio, I=None, variants=None):
    """Distortion of a structured codebook summed over its construction groups.

    This is the closed-form route: each generator is the centroid of its
    group, so the quadratic integral decomposes over the group's cylinders.
    It equals the Voronoi distortion exactly when the construction is a CVT
    at the given ratio, and stays a well-defined rational function of r
    elsewhere (the cost of that fixed assignment), which is what distortion
    comparisons across families use.
    """
    cb = make_codebook(family, n, ratio, I, variants)
    meas = CantorMeasure(ratio)
    total = None
    for point, group in zip(cb.points, cb.groups):
        for w in group:
            term = meas.cylinder_integral(w, point)
            total = term if total is None else total + term
    return total


def gate_inequalities(family: str, n: int = 3, I=None, variants=None) -> list:
    """The boundary-in-gap conditions of a structured codebook, as functions of r.

    For each pair of adjacent generators the cell boundary (their midpoint)
    must lie between the right end of the left group's last cylinder and the
    left end of the right group's first cylinder.  Each condition is returned
    as a (label, difference) pair with the convention difference >= 0.
    """
    rp = RationalFunction.parameter()
    cb = make_codebook(family, n, rp, I, variants)
    gates = []
    for i in range(cb.n - 1):
        left_word = cb.groups[i][-1]
        right_word = cb.groups[i + 1][0]
        b = (cb.points[i] + cb.points[i + 1]) * HALF
        m_left = compose(left_word, rp)
        m_right = compose(right_word, rp)
        gates.append(
            (f"b{i + 1}_right_of_{word_to_str(left_word)}", b - (m_left.translate + m_left.scale))
        )
        gates.append(
            (f"b{i + 1}_left_of_{word_to_str(right_word)}", m_right.translate - b)
        )
    return gates


def reflect_codebook(cb: Codebook) -> Codebook:
    """Mirror image x -> 1 - x; the measure is symmetric, so distortion is preserved."""
    pts = tuple(1 - a for a in reversed(cb.points))
    groups = tuple(
        tuple(reflect_word(w) for w in reversed(g)) for g in reversed(cb.groups)
    )
    return Codebook(points=pts, family="custom", groups=groups)
