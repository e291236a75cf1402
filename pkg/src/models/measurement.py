import numpy as np
from pydantic import BaseModel, ConfigDict, Field, computed_field, model_validator

from src.config import Config
from src.models.numerics import Grid, Grid2D, TransferKernel
from src.models.types import RealArray


class ClassicalDistribution(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    grid: Grid
    density: RealArray

    @model_validator(mode="after")
    def check_density(self) -> "ClassicalDistribution":
        if self.density.shape != self.grid.shape:
            raise ValueError("density does not match the grid")
        if np.any(self.density < 0):
            raise ValueError("density must be non-negative")
        total = float(self.grid.weights @ self.density)
        if abs(total - 1.0) > Config.normalization_tolerance:
            raise ValueError(f"density integrates to {total}, not 1")
        return self

    @classmethod
    def normalized(cls, grid: Grid, samples: np.ndarray) -> "ClassicalDistribution":
        samples = np.clip(np.asarray(samples, dtype=float), 0.0, None)
        return cls(grid=grid, density=samples / (grid.weights @ samples))


class ClassicalJoint(BaseModel):
    """
    Joint density w(a, b) over a 2D grid, a along the first axis
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    grid: Grid2D
    density: RealArray

    @model_validator(mode="after")
    def check_density(self) -> "ClassicalJoint":
        if self.density.shape != self.grid.shape:
            raise ValueError("density does not match the grid")
        if np.any(self.density < 0):
            raise ValueError("density must be non-negative")
        total = float(np.sum(self.grid.weights * self.density))
        if abs(total - 1.0) > Config.normalization_tolerance:
            raise ValueError(f"joint density integrates to {total}, not 1")
        return self

    @classmethod
    def normalized(cls, grid: Grid2D, samples: np.ndarray) -> "ClassicalJoint":
        samples = np.clip(np.asarray(samples, dtype=float), 0.0, None)
        return cls(grid=grid, density=samples / np.sum(grid.weights * samples))


class ClassicalMoments(BaseModel):
    model_config = ConfigDict(frozen=True)

    mean: float
    std: float = Field(..., ge=0)
    # central moments keyed by order, 2..6
    central: dict[int, float]


class MeasurementChannel(BaseModel):
    """
    Device model: ``gamma`` transfers the density, ``lam`` each current
    component
    """

    model_config = ConfigDict(frozen=True)

    gamma: TransferKernel
    lam: TransferKernel

    @model_validator(mode="after")
    def check_grids(self) -> "MeasurementChannel":
        if self.gamma.source != self.lam.source or self.gamma.target != self.lam.target:
            raise ValueError("density and current kernels must share their grids")
        return self


class ErrorEntry(BaseModel):
    model_config = ConfigDict(frozen=True)

    observable: str
    partner: str | None = None
    mean: float | None = Field(None, ge=0)
    std: float | None = Field(None, ge=0)
    correlation: float | None = Field(None, ge=0)
    # absolute differences of central moments of order >= 3
    higher: dict[int, float] = {}


class ErrorReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    entries: list[ErrorEntry]

    def entry(self, observable: str, partner: str | None = None) -> ErrorEntry:
        for candidate in self.entries:
            if candidate.observable == observable and candidate.partner == partner:
                return candidate
        raise KeyError(f"no error entry for {observable!r}")

    @computed_field  # type: ignore[prop-decorator]
    @property
    def ideal(self) -> bool:
        values = [
            value
            for entry in self.entries
            for value in (entry.mean, entry.std, entry.correlation, *entry.higher.values())
            if value is not None
        ]
        return all(value == 0.0 for value in values)


class SusceptibilitySpectrum(BaseModel):
    """
    Imaginary susceptibility on positive frequencies. Negative frequencies
    follow from the odd extension.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    frequencies: RealArray
    chi: RealArray

    @model_validator(mode="after")
    def check_samples(self) -> "SusceptibilitySpectrum":
        if self.frequencies.ndim != 1 or self.frequencies.shape != self.chi.shape:
            raise ValueError("frequencies and samples must be 1D arrays of one length")
        if len(self.frequencies) < 3:
            raise ValueError("a spectrum needs at least three frequencies")
        if np.any(self.frequencies <= 0) or np.any(np.diff(self.frequencies) <= 0):
            raise ValueError("frequencies must be positive and increasing")
        if not np.all(np.isfinite(self.chi)):
            raise ValueError("susceptibility samples must be finite")
        return self


class ThermoModel(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    gradient: RealArray
    hessian: RealArray
    k_b: float = Field(1.0, ge=0)

    @model_validator(mode="after")
    def check_shapes(self) -> "ThermoModel":
        size = self.gradient.shape[0] if self.gradient.ndim == 1 else -1
        if self.hessian.shape != (size, size):
            raise ValueError("entropy Hessian must be square and match the gradient")
        return self
