from collections.abc import Callable
from typing import Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from src.config import Config
from src.errors import ContractViolation
from src.misc import Representation
from src.models.numerics import Grid, Grid2D
from src.models.types import ComplexArray, ComplexNumber, RealArray


class PhysicalParams(BaseModel):
    model_config = ConfigDict(frozen=True)

    hbar: float = Field(1.0, gt=0)
    mass: float = Field(1.0, gt=0)
    omega: float | None = Field(None, gt=0)
    k_b: float = Field(1.0, gt=0)

    def require_omega(self) -> float:
        if self.omega is None:
            raise ContractViolation("an oscillator frequency omega is required")
        return self.omega


class WaveFunction(BaseModel):
    """
    Complex samples of a state on a grid.

    Construction does not force unit norm so raw samples can be passed to
    ``QState.normalize``; estimators check the norm themselves.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    grid: Grid | Grid2D
    samples: ComplexArray
    params: PhysicalParams = PhysicalParams()
    representation: Representation = Representation.coordinate

    @model_validator(mode="after")
    def check_samples(self) -> "WaveFunction":
        if self.samples.shape != self.grid.shape:
            raise ValueError(
                f"samples of shape {self.samples.shape} do not match grid {self.grid.shape}"
            )
        if not np.all(np.isfinite(self.samples)):
            raise ValueError("wave function samples must be finite")
        return self

    @property
    def norm_squared(self) -> float:
        return float(np.sum(self.grid.weights * np.abs(self.samples) ** 2))

    @property
    def is_normalized(self) -> bool:
        return abs(self.norm_squared - 1.0) <= Config.normalization_tolerance

    def with_samples(self, samples: np.ndarray) -> "WaveFunction":
        return WaveFunction(
            grid=self.grid,
            samples=samples,
            params=self.params,
            representation=self.representation,
        )


class DensityCurrent(BaseModel):
    """
    Probability density and current. ``current`` has one leading entry per
    grid axis.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    grid: Grid | Grid2D
    rho: RealArray
    current: RealArray

    @model_validator(mode="after")
    def check_fields(self) -> "DensityCurrent":
        if self.rho.shape != self.grid.shape:
            raise ValueError("density does not match the grid")
        if self.current.shape != (self.grid.ndim, *self.grid.shape):
            raise ValueError("current needs one component per grid axis")
        if np.any(self.rho < 0):
            raise ValueError("density must be non-negative")
        total = float(np.sum(self.grid.weights * self.rho))
        if abs(total - 1.0) > Config.normalization_tolerance:
            raise ValueError(f"density integrates to {total}, not 1")
        return self

    @property
    def j(self) -> np.ndarray:
        return self.current[0]


class EstimatorReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    observable: str
    mean: ComplexNumber
    std: float = Field(..., ge=0)
    partner: str | None = None
    correlation: ComplexNumber | None = None


class OperatorSpec(BaseModel):
    """
    Linear operator expression. ``a @ b`` composes (``b`` acts first), ``a + b``
    adds, ``z * a`` scales.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    label: str = ""

    def __add__(self, other: "OperatorSpec") -> "OperatorSpec":
        return Sum(terms=(self, other), label=f"{self.label}+{other.label}")

    def __sub__(self, other: "OperatorSpec") -> "OperatorSpec":
        return Sum(terms=(self, -other), label=f"{self.label}-{other.label}")

    def __neg__(self) -> "OperatorSpec":
        return Scaled(factor=-1.0, operand=self, label=f"-{self.label}")

    def __rmul__(self, factor: complex) -> "OperatorSpec":
        return Scaled(factor=factor, operand=self, label=f"{factor}*{self.label}")

    __mul__ = __rmul__

    def __matmul__(self, other: "OperatorSpec") -> "OperatorSpec":
        return Product(factors=(self, other), label=f"{self.label}{other.label}")

    def relabel(self, label: str) -> "OperatorSpec":
        return self.model_copy(update={"label": label})


class Multiply(OperatorSpec):
    """
    Pointwise multiplication by a real function of the grid coordinates
    """

    function: Callable[..., np.ndarray]


class Derivative(OperatorSpec):
    axis: int = Field(0, ge=0)
    coefficient: ComplexNumber = 1.0
    order: Literal[1, 2] = 1


class Scaled(OperatorSpec):
    factor: ComplexNumber
    operand: OperatorSpec


class Sum(OperatorSpec):
    terms: tuple[OperatorSpec, ...] = Field(..., min_length=1)


class Product(OperatorSpec):
    factors: tuple[OperatorSpec, ...] = Field(..., min_length=1)
