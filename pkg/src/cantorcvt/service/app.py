"""HTTP service exposing the exact CVT engine.

Every endpoint is a stateless wrapper over a pure library call; requests and
responses are the pydantic models in :mod:`.schemas`.  Domain errors from the
core (invalid ratios, malformed index sets, unresolvable partitions, ...)
surface as 400 responses carrying the error class and message.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from fastapi import FastAPI
from fastapi.responses import JSONResponse

from .. import __version__
from ..compare import compare_at, enumerate_with_verification, sweep
from ..engine import (
    distortion,
    distortion_over_window,
    family_distortion,
    verify_cvt,
)
from ..errors import CantorCvtError
from ..families import Codebook, count_cvts, make_codebook
from ..measure import CantorMeasure
from ..oracles import discretize, dp_optimal, lloyd
from ..thresholds import family_window, solve_all
from ..words import word_to_str
from . import schemas as sc


def _build_codebook(spec, points, ratio) -> Codebook:
    if points is not None:
        return Codebook.custom([Fraction(p) for p in points])
    return make_codebook(spec.family, spec.n, ratio, spec.I, spec.variants)


@lru_cache(maxsize=None)
def _margined_window(family: str) -> tuple:
    """The family's gate window, pulled in slightly so the endpoints are
    strictly inside it (the closed-form combinatorics are certified there)."""
    margin = Fraction(1, 10**6)
    lower, upper = family_window(family)
    lo = lower.value + margin if lower is not None else Fraction(1, 100)
    hi = upper.value - margin
    return (lo, hi)


def create_app() -> FastAPI:
    app = FastAPI(
        title="cantor-cvt",
        version=__version__,
        description="Exact quantization and centroidal Voronoi tessellations "
        "for dyadic Cantor measures.",
    )

    @app.exception_handler(CantorCvtError)
    async def _domain_error(request, exc):
        return JSONResponse(
            status_code=400,
            content={"detail": f"{type(exc).__name__}: {exc}"},
        )

    @app.exception_handler(ValueError)
    async def _value_error(request, exc):
        return JSONResponse(
            status_code=400,
            content={"detail": f"ValueError: {exc}"},
        )

    @app.get("/health", response_model=sc.HealthReply)
    def health():
        return sc.HealthReply(version=__version__)

    @app.post("/moments", response_model=sc.MomentsReply)
    def moments(req: sc.MomentsRequest):
        measure = CantorMeasure(sc.parse_ratio(req.r))
        return sc.MomentsReply(
            r=req.r,
            mean=sc.scalar_value(measure.mean()),
            variance=sc.scalar_value(measure.variance()),
            second_moment=sc.scalar_value(measure.second_moment()),
        )

    @app.post("/codebook", response_model=sc.CodebookReply)
    def codebook(req: sc.CodebookRequest):
        cb = make_codebook(req.family, req.n, sc.parse_ratio(req.r), req.I, req.variants)
        data = cb.to_dict()
        if cb.is_formal:
            data["points"] = [sc.formal_value(p) for p in cb.points]
        return sc.CodebookReply(
            **data, groups=[[word_to_str(w) for w in g] for g in cb.groups]
        )

    @app.post("/verify", response_model=sc.CertificateReply)
    def verify(req: sc.VerifyRequest):
        r = sc.parse_ratio(req.r)
        cb = _build_codebook(req.codebook, req.points, r)
        cert = verify_cvt(cb, r, req.depth)
        return sc.CertificateReply(**cert.to_dict())

    @app.post("/distortion", response_model=sc.DistortionReply)
    def distortion_endpoint(req: sc.DistortionRequest):
        if req.r == "formal":
            spec = req.codebook
            closed = family_distortion(
                spec.family, spec.n, sc.parse_ratio("formal"), spec.I, spec.variants
            )
            window = _margined_window(spec.family)
            if req.certify_window:
                certified = distortion_over_window(
                    lambda ratio: make_codebook(
                        spec.family, spec.n, ratio, spec.I, spec.variants
                    ),
                    window,
                    req.depth,
                )
                if certified != closed:
                    # would indicate a bug in one of the two routes
                    return JSONResponse(
                        status_code=500,
                        content={"detail": "closed form and certified route disagree"},
                    )
            return sc.DistortionReply(
                r="formal",
                exact=True,
                value=sc.formal_value(closed),
                window=[sc.exact_value(window[0]), sc.exact_value(window[1])],
            )
        r = sc.parse_ratio(req.r)
        cb = _build_codebook(req.codebook, req.points, r)
        bound = distortion(cb, r, req.depth)
        return sc.DistortionReply(
            r=req.r,
            exact=bound.exact,
            lo=sc.exact_value(bound.lo),
            hi=sc.exact_value(bound.hi),
            value=sc.exact_value(bound.lo) if bound.exact else None,
        )

    @app.post("/enumerate", response_model=sc.EnumerateReply)
    def enumerate_endpoint(req: sc.EnumerateRequest):
        r = sc.parse_ratio(req.r)
        rows = []
        statuses = []
        for cb, status in enumerate_with_verification(
            req.family, req.n, r, req.depth, req.parallel, req.verify
        ):
            if status is not None:
                statuses.append(status)
            d = cb.to_dict()
            rows.append(
                sc.EnumeratedCodebook(
                    I=d["I"], variants=d["variants"], points=d["points"], status=status
                )
            )
        return sc.EnumerateReply(
            family=req.family,
            n=req.n,
            count=len(rows),
            count_formula=count_cvts(req.n, req.family),
            all_valid=all(s == "valid" for s in statuses) if req.verify else None,
            codebooks=rows,
        )

    @app.post("/thresholds", response_model=sc.ThresholdsReply)
    def thresholds(req: sc.ThresholdsRequest):
        rows = []
        for t in solve_all(Fraction(req.tol)):
            d = t.to_dict()
            rows.append(
                sc.ThresholdRow(
                    name=d["name"],
                    value=d["value"],
                    decimals=d["decimals"],
                    bracket=d["bracket"],
                    binding=d["binding"],
                    defining=sc.formal_value(t.defining),
                )
            )
        return sc.ThresholdsReply(tol=req.tol, thresholds=rows)

    @app.post("/compare", response_model=sc.CompareReply)
    def compare(req: sc.CompareRequest):
        if req.r is not None:
            rows = [compare_at(sc.parse_ratio(req.r), req.n, req.depth)]
        else:
            lo, hi, step = (Fraction(x) for x in req.sweep)
            rows = sweep(lo, hi, step, req.n, req.depth, req.parallel)
        out = []
        for row in rows:
            out.append(
                sc.CompareRow(
                    r=str(row["r"]),
                    r_decimal=sc.decimal_sig(row["r"]),
                    V_alpha=sc.exact_value(row[f"V_alpha{req.n}"]),
                    V_beta=sc.exact_value(row[f"V_beta{req.n}"]),
                    V_delta=sc.exact_value(row[f"V_delta{req.n}"]),
                    valid_alpha=row["valid_alpha"],
                    valid_beta=row["valid_beta"],
                    valid_delta=row["valid_delta"],
                )
            )
        return sc.CompareReply(n=req.n, rows=out)

    @app.post("/oracle", response_model=sc.OracleReply)
    def oracle(req: sc.OracleRequest):
        r = sc.parse_ratio(req.r)
        dm = discretize(CantorMeasure(r), req.depth)
        if req.method == "dp":
            points, dist = dp_optimal(dm, req.n, req.mode)
            iters = None
        else:
            init = [Fraction(x) for x in req.init]
            points, dist, iters = lloyd(dm, init, req.max_iters, Fraction(req.tol), req.mode)
        return sc.OracleReply(
            method=req.method,
            atoms=len(dm),
            points=[str(Fraction(p)) for p in points],
            distortion=sc.exact_value(Fraction(dist)),
            iterations=iters,
        )

    return app


app = create_app()
