"""
Survey Configuration Schema
---------------------------

Pydantic models for validating YAML survey files. A survey names a
polytope, and optionally a probe scan, a numeric oracle cross-check and
a run of the reduction pipeline.

Rationals are written as ``"p/q"`` strings or integers and are stored
in lowest terms as ``"p/q"``.
"""
from __future__ import annotations

from fractions import Fraction
from pathlib import Path
from typing import List, Literal, Optional, Union

import yaml
from pydantic import BaseModel, Field, validator

from toricpy.polytope import (DelzantPolytope, blowup_face, double_blowup,
                              format_rational, hirzebruch, interval,
                              parse_rational, product, shifted_x0_blowup,
                              simplex_cpn)
from toricpy.potential import (ValuationVector, critical_valuations_cpn,
                               critical_valuations_interval,
                               critical_valuations_shifted_blowup,
                               critical_valuations_xk, product_valuations,
                               xk_symmetric_poly)
from toricpy.probes import MAX_DIR_BOUND

Rational = Union[int, str]


def _rational(v):
    """Validator body shared by every rational field."""
    if v is None:
        return v
    return format_rational(parse_rational(v))


class CPNSpec(BaseModel):
    """Simplex of CP^n with the given size"""
    type: Literal["cpn"] = "cpn"
    n: int = Field(..., ge=1)
    scale: Rational = "1/1"

    check_scale = validator("scale", allow_reuse=True)(_rational)

    @validator("scale")
    def validate_scale(cls, v):
        if parse_rational(v) <= 0:
            raise ValueError("scale must be positive")
        return v

    class Config:
        extra = "forbid"

    def build(self) -> DelzantPolytope:
        return simplex_cpn(self.n, parse_rational(self.scale))

    def critical_classes(self) -> Optional[List[ValuationVector]]:
        return critical_valuations_cpn(self.n, parse_rational(self.scale))


class BlowupSpec(BaseModel):
    """Blow-up of CP^n along a coordinate face"""
    type: Literal["blowup"] = "blowup"
    n: int = Field(..., ge=2)
    k: int = Field(0, ge=0)
    lam: Rational

    check_lam = validator("lam", allow_reuse=True)(_rational)

    @validator("k")
    def validate_k(cls, v, values):
        if "n" in values and v > values["n"] - 2:
            raise ValueError("k must be <= n-2")
        return v

    class Config:
        extra = "forbid"

    def build(self) -> DelzantPolytope:
        return blowup_face(self.n, self.k, parse_rational(self.lam))

    def critical_classes(self) -> Optional[List[ValuationVector]]:
        return critical_valuations_xk(self.n, self.k, parse_rational(self.lam))

    def critical_polynomial(self):
        return xk_symmetric_poly(self.n, self.k, parse_rational(self.lam))


class DoubleBlowupSpec(BaseModel):
    """CP^n blown up at a point and along a line"""
    type: Literal["double_blowup"] = "double_blowup"
    n: int = Field(..., ge=2)
    alpha: Rational

    check_alpha = validator("alpha", allow_reuse=True)(_rational)

    class Config:
        extra = "forbid"

    def build(self) -> DelzantPolytope:
        return double_blowup(self.n, parse_rational(self.alpha))

    def critical_classes(self) -> Optional[List[ValuationVector]]:
        return None


class HirzebruchSpec(BaseModel):
    """Hirzebruch surface H_k"""
    type: Literal["hirzebruch"] = "hirzebruch"
    k: int = Field(..., ge=0)
    a: Optional[Rational] = None
    b: Rational = "1/1"

    check_sizes = validator("a", "b", allow_reuse=True)(_rational)

    class Config:
        extra = "forbid"

    def build(self) -> DelzantPolytope:
        a = None if self.a is None else parse_rational(self.a)
        return hirzebruch(self.k, a, parse_rational(self.b))

    def critical_classes(self) -> Optional[List[ValuationVector]]:
        return None


class ShiftedBlowupSpec(BaseModel):
    """First factor of the reduction pipeline"""
    type: Literal["shifted_blowup"] = "shifted_blowup"
    n: int = Field(..., ge=2)
    alpha: Rational
    lam: Rational
    C: Rational = "2/1"

    check_values = validator("alpha", "lam", "C", allow_reuse=True)(_rational)

    class Config:
        extra = "forbid"

    def build(self) -> DelzantPolytope:
        return shifted_x0_blowup(self.n, parse_rational(self.alpha),
                                 parse_rational(self.lam),
                                 parse_rational(self.C))

    def critical_classes(self) -> Optional[List[ValuationVector]]:
        return critical_valuations_shifted_blowup(
            self.n, parse_rational(self.alpha), parse_rational(self.lam),
            parse_rational(self.C))


class IntervalSpec(BaseModel):
    type: Literal["interval"] = "interval"
    lo: Rational
    hi: Rational

    check_ends = validator("lo", "hi", allow_reuse=True)(_rational)

    @validator("hi")
    def validate_hi(cls, v, values):
        if "lo" in values and parse_rational(v) <= parse_rational(values["lo"]):
            raise ValueError("hi must be > lo")
        return v

    class Config:
        extra = "forbid"

    def build(self) -> DelzantPolytope:
        return interval(parse_rational(self.lo), parse_rational(self.hi))

    def critical_classes(self) -> Optional[List[ValuationVector]]:
        return critical_valuations_interval(parse_rational(self.lo),
                                            parse_rational(self.hi))


class FileSpec(BaseModel):
    """Polytope read from a JSON file"""
    type: Literal["file"] = "file"
    path: str

    class Config:
        extra = "forbid"

    def build(self) -> DelzantPolytope:
        return DelzantPolytope.from_json(Path(self.path).read_text())

    def critical_classes(self) -> Optional[List[ValuationVector]]:
        return None


class ProductSpec(BaseModel):
    """Cartesian product, factors in order"""
    type: Literal["product"] = "product"
    factors: List["PolytopeSpec"] = Field(..., min_items=2)

    class Config:
        extra = "forbid"

    def build(self) -> DelzantPolytope:
        result = self.factors[0].build()
        for factor in self.factors[1:]:
            result = product(result, factor.build())
        return result

    def critical_classes(self) -> Optional[List[ValuationVector]]:
        classes = self.factors[0].critical_classes()
        for factor in self.factors[1:]:
            other = factor.critical_classes()
            if classes is None or other is None:
                return None
            classes = product_valuations(classes, other)
        return classes


PolytopeSpec = Union[CPNSpec, BlowupSpec, DoubleBlowupSpec, HirzebruchSpec,
                     ShiftedBlowupSpec, IntervalSpec, ProductSpec, FileSpec]

ProductSpec.update_forward_refs()


class ProbeSettings(BaseModel):
    """Survivor scan parameters"""
    grid: int = Field(24, ge=2, description="Grid denominator q")
    dir_bound: int = Field(3, ge=1, le=MAX_DIR_BOUND)
    escalate_to: Optional[int] = Field(None, le=MAX_DIR_BOUND)
    workers: int = Field(1, ge=1)
    samples: int = Field(3, ge=0, description="Certificates to include")

    @validator("escalate_to")
    def validate_escalation(cls, v, values):
        if v is not None and "dir_bound" in values and v < values["dir_bound"]:
            raise ValueError("escalate_to must be >= dir_bound")
        return v

    class Config:
        extra = "forbid"


class OracleSettings(BaseModel):
    """Numeric cross-check of Newton polygon valuations"""
    eps1: Rational = format_rational(Fraction(1, 10**24))
    eps2: Rational = format_rational(Fraction(1, 10**48))
    tolerance: float = Field(1e-3, gt=0)
    dps: int = Field(100, ge=15, description="Working precision in digits")

    check_eps = validator("eps1", "eps2", allow_reuse=True)(_rational)

    @validator("eps2")
    def validate_eps(cls, v, values):
        eps2 = parse_rational(v)
        eps1 = parse_rational(values.get("eps1", "1/2"))
        if not 0 < eps2 < eps1 < 1:
            raise ValueError("need 0 < eps2 < eps1 < 1")
        return v

    class Config:
        extra = "forbid"


class PipelineSettings(BaseModel):
    """Reduction pipeline sweep"""
    n: int = Field(..., ge=2)
    alpha: Rational
    lambdas: List[Rational] = Field(..., min_items=1)
    C: Rational = "2/1"
    workers: int = Field(1, ge=1)

    check_alpha = validator("alpha", "C", allow_reuse=True)(_rational)

    @validator("lambdas", each_item=True)
    def validate_lambdas(cls, v):
        return _rational(v)

    class Config:
        extra = "forbid"


class SurveyConfig(BaseModel):
    """Complete survey configuration"""
    name: str = Field(..., description="Name of the survey, used for output files")
    description: Optional[str] = None

    polytope: PolytopeSpec
    probes: Optional[ProbeSettings] = None
    oracle: Optional[OracleSettings] = None
    pipeline: Optional[PipelineSettings] = None

    svg: bool = True
    project: Optional[List[int]] = Field(None, min_items=2, max_items=2)

    @validator("name")
    def validate_name(cls, v):
        if not v or "/" in v:
            raise ValueError("name must be a nonempty file stem")
        return v

    class Config:
        extra = "forbid"

    @classmethod
    def from_yaml(cls, yaml_path: str) -> 'SurveyConfig':
        """Load configuration from YAML file"""
        with open(yaml_path, 'r') as f:
            data = yaml.safe_load(f)
        return cls(**data)

    def to_yaml(self, yaml_path: str):
        """Save configuration to YAML file"""
        with open(yaml_path, 'w') as f:
            yaml.dump(
                self.dict(exclude_none=True),
                f,
                default_flow_style=False,
                sort_keys=False
            )
