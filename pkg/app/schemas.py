"""Request, configuration and output records shared by the CLI and the HTTP service."""

from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from app.config import K_MAX, OSC_TOL, THREADS, TIE_TOL
from app.services.weights import WeightSequence, parse_family


class ComplexValue(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    re: float
    im: float = 0.0

    @classmethod
    def of(cls, value: complex) -> "ComplexValue":
        value = complex(value)
        return cls(re=value.real, im=value.imag)

    def to_complex(self) -> complex:
        return complex(self.re, self.im)


class Window(BaseModel):
    """Axis-aligned rectangle in the complex plane."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    x_min: float = -0.99
    x_max: float = 0.99
    y_min: float = -0.99
    y_max: float = 0.99

    @model_validator(mode="after")
    def _check_order(self):
        if not (self.x_min < self.x_max and self.y_min < self.y_max):
            raise ValueError("window needs x_min < x_max and y_min < y_max")
        return self

    @classmethod
    def parse(cls, text: str) -> "Window":
        """`x_min,x_max,y_min,y_max`."""
        parts = [p.strip() for p in text.split(",")]
        if len(parts) != 4:
            raise ValueError(f"window needs four numbers, got {text!r}")
        x_min, x_max, y_min, y_max = (float(p) for p in parts)
        return cls(x_min=x_min, x_max=x_max, y_min=y_min, y_max=y_max)


class RunConfig(BaseModel):
    """Validated per-run settings; CLI flags and request bodies both land here."""

    model_config = ConfigDict(extra="forbid")

    family: str
    k_max: int = Field(default=K_MAX, ge=1, le=64)
    tie_tol: float = Field(default=TIE_TOL, gt=0.0, lt=1.0)
    osc_tol: float = Field(default=OSC_TOL, gt=0.0, lt=1.0)
    threads: int = Field(default=THREADS, ge=1)
    output_format: Optional[Literal["csv", "json", "ppm"]] = None
    output: Optional[str] = None

    @field_validator("family")
    @classmethod
    def _validate_family(cls, value: str) -> str:
        parse_family(value)
        return value

    def sequence(self) -> WeightSequence:
        return parse_family(self.family)


class EvalRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    family: str
    z: ComplexValue
    n: int = Field(ge=0, le=20_000)


class AsympRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    family: str
    z: ComplexValue
    n: int = Field(ge=1)
    k_max: int = Field(default=K_MAX, ge=1, le=64)
    tie_tol: float = Field(default=TIE_TOL, gt=0.0, lt=1.0)
    osc_tol: float = Field(default=OSC_TOL, gt=0.0, lt=1.0)


class ClassifyRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    family: str
    z: ComplexValue
    k_max: int = Field(default=K_MAX, ge=1, le=64)
    tie_tol: float = Field(default=TIE_TOL, gt=0.0, lt=1.0)


class ArcLabelRecord(BaseModel):
    h: int
    k: int


class EvalRecord(BaseModel):
    n: int
    re: float
    im: float


class ArcRecord(BaseModel):
    h: int
    k: int
    branch: Literal["analytic", "oscillatory"]
    omega: ComplexValue
    saddle: ComplexValue
    product: ComplexValue


class AsympRecord(BaseModel):
    family: str
    z: ComplexValue
    n: int
    value: ComplexValue
    arcs: list[ArcRecord]
    mu: float
    dominant: ArcLabelRecord
    alternate: Optional[ComplexValue] = None


class PhaseRecord(BaseModel):
    family: str
    z: ComplexValue
    dominant: ArcLabelRecord
    major_arcs: list[ArcLabelRecord]
    margin: float
    boundary: bool
    growth: float


class DirichletRecord(BaseModel):
    family: str
    k: int
    values_at_zero: list[ComplexValue]
    residues: list[ComplexValue]
    b: list[ComplexValue]
    c: list[ComplexValue]


class MeinardusRecord(BaseModel):
    family: str
    n: int
    value: float
    log_value: float
    residue: float
    d_zero: float
    d_prime_zero: float
    kappa: float
    constant: float


class CrossoverRecord(BaseModel):
    family: str
    crossover: float
