"""Validated experiment configurations, one model per subcommand."""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, FilePath, model_validator

SEED_MAX = 2**64 - 1


class Base(BaseModel):
    model_config = ConfigDict(extra="forbid")

    seed: int = Field(0, ge=0, le=SEED_MAX)


class ChiConfig(Base):
    ensemble_file: Optional[FilePath] = None
    dim: int = Field(2, ge=1, le=64)
    size: int = Field(4, ge=1, le=256)
    rank: Optional[int] = Field(None, ge=1)


class MutualInfoConfig(Base):
    samples: int = Field(1000, ge=1, le=10**6)
    dims: list[int] = Field(default_factory=lambda: [2, 3, 4, 8, 16])
    ensemble_size: int = Field(4, ge=1, le=64)
    outcomes: int = Field(4, ge=1, le=64)
    commuting_samples: int = Field(100, ge=0, le=10**5)
    tolerance: float = Field(1e-9, gt=0)

    @model_validator(mode="after")
    def _dims(self):
        if not self.dims or any(d < 1 or d > 64 for d in self.dims):
            raise ValueError("dims must be non-empty with entries in [1, 64]")
        return self


class AsymmetryConfig(Base):
    group: Literal["u1", "so3"] = "u1"
    state: Literal["noon", "number", "random", "ket", "file", "spin-top", "singlet-one-sided", "singlet"] = "noon"
    state_file: Optional[FilePath] = None
    n: int = Field(1, ge=0, le=64)
    generator: Literal["arm", "total"] = "arm"
    two_j: int = Field(1, ge=0, le=16)
    spins: list[int] = Field(default_factory=lambda: [1, 1])
    dims: list[int] = Field(default_factory=lambda: [3, 3])
    amplitudes: Optional[list] = None
    tolerance: float = Field(1e-9, gt=0)


class PhaseSimConfig(Base):
    probe: Literal["plus", "noon", "number", "random", "ket", "file"] = "plus"
    state_file: Optional[FilePath] = None
    dim: int = Field(2, ge=1, le=256)
    n: int = Field(1, ge=0, le=64)
    amplitudes: Optional[list] = None
    prior: Literal["uniform", "gaussian"] = "uniform"
    sigma: float = Field(1.0, gt=0)
    grid: int = Field(256, ge=1, le=8192)
    outcomes: Optional[int] = Field(None, ge=1, le=8192)
    estimators: list[Literal["maximum-posterior", "posterior-mean-circular", "identity-of-outcome"]] = Field(
        default_factory=lambda: ["maximum-posterior", "posterior-mean-circular", "identity-of-outcome"]
    )
    tolerance: float = Field(1e-9, gt=0)


class RotationSimConfig(Base):
    two_j: int = Field(1, ge=0, le=2)
    grid: int = Field(8, ge=1, le=24)
    probe: Literal["top", "mixed", "random"] = "top"
    estimator: Literal["maximum-posterior", "identity-of-outcome"] = "maximum-posterior"


class RotationBoundsConfig(Base):
    two_j: int = Field(1, ge=0, le=40)
    spins: Optional[list[int]] = None
    probe: Literal["top", "mixed", "random"] = "top"
    mu: float = Field(1.0, gt=0)
    t_int: float = Field(1.0, gt=0)
    prior_radius: Optional[float] = Field(None, gt=0)
    scaling_max_m: int = Field(64, ge=2, le=4096)


class MmodeConfig(Base):
    mode_probs: Optional[list[list[float]]] = None
    copies: int = Field(64, ge=1, le=4096)
    single_mode: list[float] = Field(default_factory=lambda: [0.5, 0.5])
    state_dims: Optional[list[int]] = None


class EurSweepConfig(Base):
    pair: Literal["mub", "number-phase", "qp", "degenerate", "oscillator", "almost-periodic"] = "mub"
    dim: int = Field(8, ge=1, le=512)
    samples: int = Field(1000, ge=1, le=10**6)
    outcomes: list[int] = Field(default_factory=lambda: [32, 64, 128])
    aux_dim: int = Field(2, ge=1, le=16)
    omega: float = Field(1.0, gt=0)
    length: float = Field(2.5066282746310002, gt=0)
    energies: list[float] = Field(default_factory=lambda: [0.0, 1.0, 1.4142135623730951])
    window: float = Field(1000.0, gt=0)
    tolerance: Optional[float] = Field(None, gt=0)


class MowConfig(Base):
    family: Literal["point", "uniform", "binomial", "geometric", "explicit"] = "uniform"
    size: int = Field(16, ge=1, le=2**16)
    param: float = Field(0.5, gt=0, lt=1)
    probs: Optional[list[float]] = None
    tolerance: float = Field(1e-9, gt=0)


class RmsConfig(Base):
    truncation: int = Field(40, ge=0, le=60)
    sim_truncation: int = Field(10, ge=0, le=12)
    grid: Optional[int] = Field(None, ge=2, le=8192)
    estimators: list[Literal["maximum-posterior", "posterior-mean-circular", "identity-of-outcome"]] = Field(
        default_factory=lambda: ["maximum-posterior", "posterior-mean-circular", "identity-of-outcome"]
    )


CONFIG_MODELS: dict[str, type[Base]] = {
    "chi": ChiConfig,
    "mutual-info": MutualInfoConfig,
    "asymmetry": AsymmetryConfig,
    "phase-sim": PhaseSimConfig,
    "rotation-sim": RotationSimConfig,
    "rotation-bounds": RotationBoundsConfig,
    "mmode-bounds": MmodeConfig,
    "eur-sweep": EurSweepConfig,
    "mow-check": MowConfig,
    "rms-check": RmsConfig,
}
