"""Pydantic request/response models for the HTTP service.

Exact values travel as strings: concrete rationals as ``num/den`` fractions
with a 15-significant-digit decimal rendering alongside (presentation only,
never re-ingested), and closed forms in r as ascending-degree integer
coefficient lists for numerator and denominator.
"""

from __future__ import annotations

from decimal import Decimal, localcontext
from fractions import Fraction
from typing import Literal, Optional, Union

from pydantic import BaseModel, Field, field_validator, model_validator

from ..ratfunc import RationalFunction

SCHEMA_VERSION = "1"

RatioStr = str  # "num/den", a decimal literal, or "formal"


def parse_ratio(text: str):
    if text == "formal":
        return RationalFunction.parameter()
    return Fraction(text)


def decimal_sig(x: Fraction, sig: int = 15) -> str:
    with localcontext() as ctx:
        ctx.prec = sig
        return str(Decimal(x.numerator) / Decimal(x.denominator))


class ExactValue(BaseModel):
    fraction: str
    decimal: str


class FormalValue(BaseModel):
    num: list[str]
    den: list[str]
    display: str


def exact_value(x) -> ExactValue:
    x = Fraction(x)
    return ExactValue(fraction=str(x), decimal=decimal_sig(x))


def formal_value(f: RationalFunction) -> FormalValue:
    d = f.to_dict()
    return FormalValue(num=d["num"], den=d["den"], display=str(f))


def scalar_value(x) -> Union[ExactValue, FormalValue]:
    if isinstance(x, RationalFunction):
        return formal_value(x)
    return exact_value(x)


class Reply(BaseModel):
    schema_version: str = SCHEMA_VERSION


class HealthReply(Reply):
    status: str = "ok"
    version: str


def _validate_ratio_syntax(value: str, allow_formal: bool) -> str:
    if value == "formal":
        if not allow_formal:
            raise ValueError("a concrete ratio is required here")
        return value
    try:
        Fraction(value)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"cannot parse ratio {value!r}: {exc}") from exc
    return value


class MomentsRequest(BaseModel):
    r: RatioStr = "4/9"

    @field_validator("r")
    @classmethod
    def _r(cls, v):
        return _validate_ratio_syntax(v, allow_formal=True)


class MomentsReply(Reply):
    r: str
    mean: Union[ExactValue, FormalValue]
    variance: Union[ExactValue, FormalValue]
    second_moment: Union[ExactValue, FormalValue]


class CodebookSpec(BaseModel):
    """Construction parameters of a structured codebook."""

    family: Literal["alpha", "beta", "delta"]
    n: int = Field(ge=2, le=1024)
    I: Optional[list[str]] = None
    variants: Optional[list[int]] = None


class CodebookRequest(CodebookSpec):
    r: RatioStr = "4/9"

    @field_validator("r")
    @classmethod
    def _r(cls, v):
        return _validate_ratio_syntax(v, allow_formal=True)


class CodebookReply(Reply):
    family: str
    n: int
    I: list[str]
    variants: list[int]
    points: Union[list[str], list[FormalValue]]
    groups: list[list[str]]


class VerifyRequest(BaseModel):
    """Verify either a construction or an explicit point list (custom codebook)."""

    r: RatioStr
    depth: int = Field(default=40, ge=1, le=64)
    codebook: Optional[CodebookSpec] = None
    points: Optional[list[str]] = None

    @field_validator("r")
    @classmethod
    def _r(cls, v):
        return _validate_ratio_syntax(v, allow_formal=False)

    @model_validator(mode="after")
    def _one_source(self):
        if (self.codebook is None) == (self.points is None):
            raise ValueError("provide exactly one of 'codebook' or 'points'")
        return self


class CertificateReply(Reply):
    status: Literal["valid", "invalid", "undecided"]
    boundaries: list[str]
    gap_witnesses: list[Optional[str]]
    residuals: list[Optional[str]]
    cell_masses: list[str]
    unresolved: list[str]
    max_depth: int


class DistortionRequest(BaseModel):
    r: RatioStr
    depth: int = Field(default=40, ge=1, le=64)
    codebook: Optional[CodebookSpec] = None
    points: Optional[list[str]] = None
    certify_window: bool = Field(
        default=False,
        description="for formal requests, also certify the closed form with the "
        "windowed engine route and fail loudly on disagreement",
    )

    @field_validator("r")
    @classmethod
    def _r(cls, v):
        return _validate_ratio_syntax(v, allow_formal=True)

    @model_validator(mode="after")
    def _source(self):
        if (self.codebook is None) == (self.points is None):
            raise ValueError("provide exactly one of 'codebook' or 'points'")
        if self.r == "formal" and self.codebook is None:
            raise ValueError("formal distortion needs a structured codebook")
        return self


class DistortionReply(Reply):
    r: str
    exact: bool
    lo: Optional[ExactValue] = None
    hi: Optional[ExactValue] = None
    value: Optional[Union[ExactValue, FormalValue]] = None
    window: Optional[list[ExactValue]] = None


class EnumerateRequest(BaseModel):
    family: Literal["alpha", "delta"]
    n: int = Field(ge=2, le=32)
    r: RatioStr = "4/9"
    verify: bool = True
    depth: int = Field(default=40, ge=1, le=64)
    parallel: int = Field(default=1, ge=1, le=64)

    @field_validator("r")
    @classmethod
    def _r(cls, v):
        return _validate_ratio_syntax(v, allow_formal=False)


class EnumeratedCodebook(BaseModel):
    I: list[str]
    variants: list[int]
    points: list[str]
    status: Optional[str] = None


class EnumerateReply(Reply):
    family: str
    n: int
    count: int
    count_formula: int
    all_valid: Optional[bool] = None
    codebooks: list[EnumeratedCodebook]


class ThresholdsRequest(BaseModel):
    tol: str = "1e-12"

    @field_validator("tol")
    @classmethod
    def _tol(cls, v):
        if Fraction(v) <= 0:
            raise ValueError("tol must be positive")
        return v


class ThresholdRow(BaseModel):
    name: str
    value: str
    decimals: str
    bracket: list[str]
    binding: str
    defining: FormalValue


class ThresholdsReply(Reply):
    tol: str
    thresholds: list[ThresholdRow]


class CompareRequest(BaseModel):
    n: int = Field(default=3, ge=2, le=32)
    r: Optional[RatioStr] = None
    sweep: Optional[list[str]] = Field(
        default=None, description="[lo, hi, step] as exact rational strings"
    )
    depth: int = Field(default=40, ge=1, le=64)
    parallel: int = Field(default=1, ge=1, le=64)

    @field_validator("r")
    @classmethod
    def _r(cls, v):
        if v is None:
            return v
        return _validate_ratio_syntax(v, allow_formal=False)

    @model_validator(mode="after")
    def _source(self):
        if (self.r is None) == (self.sweep is None):
            raise ValueError("provide exactly one of 'r' or 'sweep'")
        if self.sweep is not None and len(self.sweep) != 3:
            raise ValueError("sweep must be [lo, hi, step]")
        return self


class CompareRow(BaseModel):
    r: str
    r_decimal: str
    V_alpha: ExactValue
    V_beta: ExactValue
    V_delta: ExactValue
    valid_alpha: str
    valid_beta: str
    valid_delta: str


class CompareReply(Reply):
    n: int
    rows: list[CompareRow]


class OracleRequest(BaseModel):
    method: Literal["dp", "lloyd"]
    r: RatioStr = "4/9"
    depth: int = Field(default=12, ge=1, le=20)
    n: int = Field(ge=1)
    mode: Literal["exact", "float"] = "exact"
    init: Optional[list[str]] = None
    max_iters: int = Field(default=1000, ge=1)
    tol: str = "0"

    @field_validator("r")
    @classmethod
    def _r(cls, v):
        return _validate_ratio_syntax(v, allow_formal=False)

    @model_validator(mode="after")
    def _init_needed(self):
        if self.method == "lloyd" and self.init is None:
            raise ValueError("lloyd needs an 'init' point list")
        return self


class OracleReply(Reply):
    method: str
    atoms: int
    points: list[str]
    distortion: ExactValue
    iterations: Optional[int] = None
