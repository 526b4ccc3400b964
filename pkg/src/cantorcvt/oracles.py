"""Independent numeric verification machinery.

The engine computes distortions from closed forms; the oracles here know
nothing about those formulas.  They collapse the measure to its level-k
cylinder centroids (an atom of mass 2^-k at each centroid) and work on the
resulting finite problem:

* ``dp_optimal`` finds the globally optimal n-point quantizer of the discrete
  measure by dynamic programming over partitions of the sorted atoms into
  consecutive runs, using prefix sums for O(1) interval costs and
  divide-and-conquer over the (monotone) optimal split points;
* ``lloyd`` is the classical alternating nearest-point / centroid iteration.

For a codebook whose Voronoi cells resolve into whole cylinders by level k,
the discrete distortion understates the exact one by exactly r^(2k) * V, the
variance left inside the collapsed cylinders.  That makes DP results usable
as certified lower bounds up to a computable correction.

Exact mode keeps every computation in rational arithmetic (atoms are rescaled
to a common integer grid so interval costs are single Fraction constructions);
float mode trades certainty for speed.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .errors import DepthOutOfRange, EmptyCell, TooManyCodepoints
from .measure import CantorMeasure
from .words import check_ratio

MAX_DISCRETIZE_DEPTH = 20


@dataclass(frozen=True)
class DiscreteMeasure:
    """Finitely many weighted atoms in increasing position order."""

    positions: tuple
    masses: tuple
    depth: int = 0

    def __post_init__(self):
        if len(self.positions) != len(self.masses):
            raise ValueError("positions and masses must align")
        for a, b in zip(self.positions, self.positions[1:]):
            if not a < b:
                raise ValueError("atom positions must be strictly increasing")

    def __len__(self):
        return len(self.positions)

    def total_mass(self) -> Fraction:
        return sum(self.masses, Fraction(0))

    def mean(self) -> Fraction:
        return sum((m * x for x, m in zip(self.positions, self.masses)), Fraction(0))

    def variance(self) -> Fraction:
        mu = self.mean()
        return sum(
            (m * (x - mu) ** 2 for x, m in zip(self.positions, self.masses)),
            Fraction(0),
        )


def discretize(measure: CantorMeasure, depth: int) -> DiscreteMeasure:
    """Atoms at the level-``depth`` cylinder centroids, mass 2^-depth each."""
    if not 1 <= depth <= MAX_DISCRETIZE_DEPTH:
        raise DepthOutOfRange(f"depth must be in [1, {MAX_DISCRETIZE_DEPTH}]")
    r = Fraction(measure.ratio)
    check_ratio(r)
    p, q = r.numerator, r.denominator
    starts = [0]
    p_pow = 1
    for _ in range(depth):
        shift = p_pow * (q - p)
        starts = [t for s in starts for t in (s * q, s * q + shift)]
        p_pow *= p
    q_pow = q**depth
    positions = tuple(Fraction(2 * t + p_pow, 2 * q_pow) for t in starts)
    mass = Fraction(1, 2**depth)
    return DiscreteMeasure(positions, (mass,) * len(positions), depth)


class _Prefix:
    """Integer prefix sums of mass, first and second moments on a common grid.

    Positions are scaled by D (lcm of denominators) and masses by M, so every
    interval cost is a single exact Fraction:

        cost(i..j) = (W * Q - S^2) / (W * M * D^2)

    with W, S, Q the interval's weight, moment and second-moment sums.
    """

    def __init__(self, dm: DiscreteMeasure):
        D = 1
        for x in dm.positions:
            D = D * x.denominator // gcd(D, x.denominator)
        M = 1
        for m in dm.masses:
            M = M * m.denominator // gcd(M, m.denominator)
        xs = [int(x * D) for x in dm.positions]
        ws = [int(m * M) for m in dm.masses]
        n = len(xs)
        self.W = [0] * (n + 1)
        self.S = [0] * (n + 1)
        self.Q = [0] * (n + 1)
        for i in range(n):
            self.W[i + 1] = self.W[i] + ws[i]
            self.S[i + 1] = self.S[i] + ws[i] * xs[i]
            self.Q[i + 1] = self.Q[i] + ws[i] * xs[i] * xs[i]
        self.D = D
        self.M = M
        self._den_base = M * D * D

    def cost(self, i: int, j: int) -> Fraction:
        """Weighted squared deviation from the mean over atoms[i..j] inclusive."""
        w = self.W[j + 1] - self.W[i]
        s = self.S[j + 1] - self.S[i]
        qq = self.Q[j + 1] - self.Q[i]
        return Fraction(w * qq - s * s, w * self._den_base)

    def mean(self, i: int, j: int) -> Fraction:
        return Fraction(self.S[j + 1] - self.S[i], (self.W[j + 1] - self.W[i]) * self.D)


class _PrefixFloat:
    def __init__(self, dm: DiscreteMeasure):
        xs = [float(x) for x in dm.positions]
        ws = [float(m) for m in dm.masses]
        n = len(xs)
        self.W = [0.0] * (n + 1)
        self.S = [0.0] * (n + 1)
        self.Q = [0.0] * (n + 1)
        for i in range(n):
            self.W[i + 1] = self.W[i] + ws[i]
            self.S[i + 1] = self.S[i] + ws[i] * xs[i]
            self.Q[i + 1] = self.Q[i] + ws[i] * xs[i] * xs[i]

    def cost(self, i, j):
        w = self.W[j + 1] - self.W[i]
        s = self.S[j + 1] - self.S[i]
        qq = self.Q[j + 1] - self.Q[i]
        return max(qq - s * s / w, 0.0)

    def mean(self, i, j):
        return (self.S[j + 1] - self.S[i]) / (self.W[j + 1] - self.W[i])


def _prefix_for(dm: DiscreteMeasure, mode: str):
    if mode == "exact":
        return _Prefix(dm)
    if mode == "float":
        return _PrefixFloat(dm)
    raise ValueError(f"unknown mode {mode!r}")


def dp_optimal(dm: DiscreteMeasure, n: int, mode: str = "exact"):
    """Globally optimal n-point quantizer of a discrete measure.

    Returns (codebook points, distortion).  Ties between equally good
    partitions are broken toward shorter runs on the left.
    """
    m = len(dm)
    if not 1 <= n <= m:
        raise TooManyCodepoints(f"need 1 <= n <= {m}, got {n}")
    pre = _prefix_for(dm, mode)

    # dp[i] = optimal cost of covering atoms[i:] with the current number of
    # runs; choice[layer][i] = end of the first run, smallest among optima.
    dp = [pre.cost(i, m - 1) for i in range(m)] + [None]
    choices = [[m - 1] * m]  # one run always extends to the last atom

    for layer in range(2, n + 1):
        nxt = [None] * (m + 1)
        choice = [0] * m
        e_cap = m - layer  # leave layer-1 atoms for the remaining runs

        def solve(ilo, ihi, elo, ehi):
            if ilo > ihi:
                return
            mid = (ilo + ihi) // 2
            best = None
            best_e = -1
            for e in range(max(elo, mid), min(ehi, e_cap) + 1):
                v = pre.cost(mid, e) + dp[e + 1]
                if best is None or v < best:
                    best, best_e = v, e
            nxt[mid] = best
            choice[mid] = best_e
            solve(ilo, mid - 1, elo, best_e)
            solve(mid + 1, ihi, best_e, ehi)

        solve(0, e_cap, 0, e_cap)
        dp = nxt
        choices.append(choice)

    points = []
    start = 0
    for layer in range(n, 0, -1):
        end = choices[layer - 1][start]
        points.append(pre.mean(start, end))
        start = end + 1
    return tuple(points), dp[0]


def lloyd(dm: DiscreteMeasure, init, max_iters: int = 1000, tol=Fraction(0), mode: str = "exact"):
    """Alternating nearest-point assignment and centroid update.

    Stops when the largest codepoint movement is <= tol or after max_iters.
    Returns (codebook points, distortion, iterations); distortion is the cost
    of the final assignment.  An iteration that empties a cell raises
    EmptyCell rather than silently repairing the codebook.
    """
    m = len(dm)
    points = [Fraction(a) for a in init] if mode == "exact" else [float(a) for a in init]
    n = len(points)
    if not 1 <= n <= m:
        raise TooManyCodepoints(f"need 1 <= n <= {m} codepoints, got {n}")
    for a, b in zip(points, points[1:]):
        if not a < b:
            raise ValueError("initial codepoints must be strictly increasing")
    pre = _prefix_for(dm, mode)
    positions = (
        list(dm.positions) if mode == "exact" else [float(x) for x in dm.positions]
    )
    tol = Fraction(tol) if mode == "exact" else float(tol)

    def assign(pts):
        # an atom exactly on a boundary joins the left cell
        cuts = [bisect_right(positions, (a + b) / 2) for a, b in zip(pts, pts[1:])]
        runs = []
        lo = 0
        for i, hi in enumerate(cuts + [m]):
            if hi <= lo:
                raise EmptyCell(f"codepoint {i} at {pts[i]} captures no atoms")
            runs.append((lo, hi - 1))
            lo = hi
        return runs

    iters = 0
    runs = assign(points)
    dist = sum(pre.cost(a, b) for a, b in runs)
    while iters < max_iters:
        new_points = [pre.mean(a, b) for a, b in runs]
        movement = max(abs(x - y) for x, y in zip(points, new_points))
        points = new_points
        iters += 1
        runs = assign(points)
        dist = sum(pre.cost(a, b) for a, b in runs)
        if movement <= tol:
            break
    return tuple(points), dist, iters
