"""Request and response models for the HTTP service."""

from __future__ import annotations

from typing import Any, Optional

from pydantic import BaseModel, Field, model_validator


class BuildRequest(BaseModel):
    n: int = Field(ge=0)
    l: Optional[int] = None
    chromatic: bool = False
    iterated: Optional[int] = Field(default=None, ge=1)
    stats: bool = False

    @model_validator(mode="after")
    def one_mode(self):
        modes = sum([self.l is not None, self.chromatic, self.iterated is not None])
        if modes != 1:
            raise ValueError("specify exactly one of l, chromatic, iterated")
        return self


class ComplexResponse(BaseModel):
    complex: dict
    stats: Optional[dict] = None


class CollapseRequest(BaseModel):
    n: int = Field(ge=0)
    mode: str = Field(pattern="^(round|full|equivariant|void|horn|iterated)$")
    l: Optional[int] = None
    p: Optional[int] = None
    k: Optional[int] = None

    @model_validator(mode="after")
    def mode_options(self):
        if self.mode in ("round", "equivariant") and self.l is None:
            raise ValueError(f"mode {self.mode!r} needs l")
        if self.mode == "horn" and self.p is None:
            raise ValueError("mode 'horn' needs p")
        if self.mode == "iterated" and self.k is None:
            raise ValueError("mode 'iterated' needs k")
        return self


class TraceResponse(BaseModel):
    trace: dict
    steps: int


class VerifyRequest(BaseModel):
    trace: dict


class VerifyResponse(BaseModel):
    ok: bool
    steps: int
    detail: Optional[str] = None


class SchedulerSpec(BaseModel):
    kind: str = Field(pattern="^(exhaustive|random|scripted)$")
    seed: Optional[int] = None
    script: list[int] = Field(default_factory=list)


class SimulateRequest(BaseModel):
    n: int = Field(ge=0)
    scheduler: SchedulerSpec


class SimulateResponse(BaseModel):
    execution: dict
    profile: dict
    round_sizes: dict[str, list[int]]


class ExhaustiveRequest(BaseModel):
    n: int = Field(ge=0)


class ExhaustiveResponse(BaseModel):
    profiles: list[dict]


class FuzzRequest(BaseModel):
    n: int = Field(ge=0)
    runs: int = Field(gt=0)
    seed: int = 0


class FuzzResponse(BaseModel):
    runs: int
    violations: list[dict]
    covered: int
    total: int


class CountRequest(BaseModel):
    n: int = Field(ge=0)


class CountResponse(BaseModel):
    n: int
    profile_counts: list[int]
    censuses: list[dict[str, Any]]


class ExportRequest(BaseModel):
    format: str = Field(pattern="^(dot|off)$")
    complex: Optional[dict] = None
    build: Optional[BuildRequest] = None

    @model_validator(mode="after")
    def one_source(self):
        if (self.complex is None) == (self.build is None):
            raise ValueError("specify exactly one of complex, build")
        return self


class ErrorBody(BaseModel):
    code: str
    detail: str
