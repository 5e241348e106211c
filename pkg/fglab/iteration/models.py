from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional


class Scheme(str, Enum):
    PICARD = "picard"
    COINCIDENCE = "coincidence"
    MANN = "mann"
    ISHIKAWA = "ishikawa"
    MANN_PAIR = "mann_pair"
    ISHIKAWA_PAIR = "ishikawa_pair"


class StatusKind(str, Enum):
    CONVERGED = "converged"
    MAX_ITERATIONS = "max_iterations"
    SOLVE_FAILED = "solve_failed"


@dataclass(frozen=True)
class TraceStatus:
    kind: StatusKind
    at_iter: int
    limit: Optional[float] = None
    stage: Optional[str] = None
    message: Optional[str] = None

    @classmethod
    def converged(cls, limit: float, at_iter: int) -> TraceStatus:
        return cls(StatusKind.CONVERGED, at_iter, limit=limit)

    @classmethod
    def max_iterations(cls, at_iter: int) -> TraceStatus:
        return cls(StatusKind.MAX_ITERATIONS, at_iter)

    @classmethod
    def solve_failed(cls, at_iter: int, stage: str, message: str) -> TraceStatus:
        return cls(StatusKind.SOLVE_FAILED, at_iter, stage=stage, message=message)

    def to_dict(self) -> dict:
        out: dict = {"kind": self.kind.value, "at_iter": self.at_iter}
        if self.limit is not None:
            out["limit"] = self.limit
        if self.stage is not None:
            out["stage"] = self.stage
        if self.message is not None:
            out["message"] = self.message
        return out


@dataclass(frozen=True)
class RunConfig:
    x0: float
    max_iter: int = 10_000
    conv_tol: float = 1e-8
    solve_tol: float = 1e-10
    target: Optional[float] = None

    def __post_init__(self) -> None:
        if self.max_iter < 1:
            raise ValueError("max_iter must be at least 1")
        if self.conv_tol <= 0 or self.solve_tol <= 0:
            raise ValueError("tolerances must be positive")

    def to_dict(self) -> dict:
        return {
            "x0": self.x0,
            "max_iter": self.max_iter,
            "conv_tol": self.conv_tol,
            "solve_tol": self.solve_tol,
            "target": self.target,
        }


@dataclass(frozen=True)
class IterationTrace:
    """One run of a scheme.

    ``iterates_x`` holds x_0 .. x_N; every other per-step list holds N entries.
    ``outputs_z``/``aux_v`` are set for the Ishikawa schemes only, where z_n is the
    primary output and y_n the inner one.
    """

    scheme: Scheme
    iterates_x: tuple[float, ...]
    outputs_y: tuple[float, ...]
    residuals: tuple[float, ...]
    parities: tuple[Optional[str], ...]
    status: TraceStatus
    config: RunConfig
    alphas: tuple[float, ...] = ()
    betas: tuple[float, ...] = ()
    outputs_z: Optional[tuple[float, ...]] = None
    aux_v: Optional[tuple[float, ...]] = None
    warnings: tuple[str, ...] = field(default_factory=tuple)

    @property
    def steps(self) -> int:
        return len(self.outputs_y)

    @property
    def primary_outputs(self) -> tuple[float, ...]:
        return self.outputs_z if self.outputs_z is not None else self.outputs_y

    @property
    def converged(self) -> bool:
        return self.status.kind is StatusKind.CONVERGED

    def to_summary(self) -> dict:
        return {
            "scheme": self.scheme.value,
            "status": self.status.to_dict(),
            "iterations": self.steps,
            "final_x": self.iterates_x[-1],
            "final_residual": self.residuals[-1] if self.residuals else None,
            "config": self.config.to_dict(),
            "warnings": list(self.warnings),
        }
