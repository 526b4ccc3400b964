"""Bulk orchestration: family comparisons, sweep grids, batch verification.

The distortion columns are the closed-form costs of each family's canonical
construction (its fixed cylinder assignment), which coincide with the Voronoi
distortion wherever the construction is a valid CVT and remain well-defined
rational values elsewhere; that is what makes the sign changes of the column
differences line up with the solved crossover ratios.  Validity columns come
from the engine's exact certificate: 1 valid, 0 invalid, U undecided.

Workers are plain processes; tasks carry only construction parameters, and
results come back in deterministic grid/enumeration order.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

from .engine import DEFAULT_MAX_DEPTH, family_distortion, verify_cvt
from .families import canonical_codebook, enumerate_cvts, make_codebook

_STATUS_FLAG = {"valid": "1", "invalid": "0", "undecided": "U"}


def compare_at(r, n: int = 3, depth: int = DEFAULT_MAX_DEPTH) -> dict:
    """One comparison row: construction costs and CVT validity per family."""
    r = Fraction(r)
    row = {"r": r}
    for family in ("alpha", "beta", "delta"):
        cb = canonical_codebook(family, n, r)
        row[f"V_{family}{n}"] = family_distortion(family, n, r)
        row[f"valid_{family}"] = _STATUS_FLAG[verify_cvt(cb, r, depth).status]
    return row


def _row(args) -> dict:
    return compare_at(*args)


def sweep(
    lo,
    hi,
    step,
    n: int = 3,
    depth: int = DEFAULT_MAX_DEPTH,
    parallel: int = 1,
) -> list[dict]:
    """Comparison rows on the grid lo, lo+step, ..., up to and including hi."""
    lo, hi, step = Fraction(lo), Fraction(hi), Fraction(step)
    if step <= 0:
        raise ValueError("step must be positive")
    grid = []
    x = lo
    while x <= hi:
        grid.append(x)
        x += step
    tasks = [(r, n, depth) for r in grid]
    if parallel > 1:
        with ProcessPoolExecutor(max_workers=parallel) as pool:
            return list(pool.map(_row, tasks))
    return [_row(t) for t in tasks]


def _verify_construction(args) -> str:
    family, n, r, index_set, variants, depth = args
    cb = make_codebook(family, n, r, index_set, variants)
    return verify_cvt(cb, r, depth).status


def enumerate_with_verification(
    family: str,
    n: int,
    r,
    depth: int = DEFAULT_MAX_DEPTH,
    parallel: int = 1,
    verify: bool = True,
) -> list[tuple]:
    """(codebook, status) for every construction, in enumeration order."""
    r = Fraction(r)
    codebooks = list(enumerate_cvts(n, family, r))
    if not verify:
        return [(cb, None) for cb in codebooks]
    tasks = [(family, n, r, cb.index_set, cb.variants, depth) for cb in codebooks]
    if parallel > 1:
        with ProcessPoolExecutor(max_workers=parallel) as pool:
            statuses = list(pool.map(_verify_construction, tasks))
    else:
        statuses = [_verify_construction(t) for t in tasks]
    return list(zip(codebooks, statuses))
