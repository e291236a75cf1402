import numpy as np
from pydantic import BaseModel, ConfigDict, Field, computed_field, model_validator

from src.config import Config
from src.misc import GridKind
from src.models.types import RealArray


class Grid(BaseModel):
    """
    Uniform one-dimensional grid.

    A line grid includes both bounds. A periodic grid identifies ``upper``
    with ``lower`` and holds ``n`` distinct nodes starting at ``lower``.
    """

    model_config = ConfigDict(frozen=True)

    kind: GridKind = GridKind.line
    lower: float
    upper: float
    n: int = Field(..., ge=8)

    @model_validator(mode="after")
    def check_bounds(self) -> "Grid":
        if not self.upper > self.lower:
            raise ValueError(f"upper bound {self.upper} must exceed {self.lower}")
        return self

    @classmethod
    def line(cls, center: float, half_width: float, n: int) -> "Grid":
        return cls(lower=center - half_width, upper=center + half_width, n=n)

    @classmethod
    def periodic(cls, lower: float, upper: float, n: int) -> "Grid":
        return cls(kind=GridKind.periodic, lower=lower, upper=upper, n=n)

    @computed_field  # type: ignore[prop-decorator]
    @property
    def spacing(self) -> float:
        if self.kind == GridKind.periodic:
            return (self.upper - self.lower) / self.n
        return (self.upper - self.lower) / (self.n - 1)

    @property
    def is_periodic(self) -> bool:
        return self.kind == GridKind.periodic

    @property
    def ndim(self) -> int:
        return 1

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.n,)

    @property
    def nodes(self) -> np.ndarray:
        return self.lower + self.spacing * np.arange(self.n)

    @property
    def coordinates(self) -> tuple[np.ndarray, ...]:
        return (self.nodes,)

    @property
    def axes(self) -> tuple["Grid", ...]:
        return (self,)

    @property
    def weights(self) -> np.ndarray:
        """
        Quadrature weights: rectangle on periodic grids, composite Simpson
        for an odd node count, trapezoid otherwise
        """
        h = self.spacing
        if self.is_periodic:
            return np.full(self.n, h)
        if self.n % 2 == 1:
            weights = np.ones(self.n)
            weights[1:-1:2] = 4.0
            weights[2:-1:2] = 2.0
            return weights * h / 3.0
        weights = np.full(self.n, h)
        weights[[0, -1]] = h / 2.0
        return weights


class Grid2D(BaseModel):
    model_config = ConfigDict(frozen=True)

    x: Grid
    y: Grid

    @model_validator(mode="after")
    def check_line_axes(self) -> "Grid2D":
        if self.x.is_periodic or self.y.is_periodic:
            raise ValueError("both axes of a 2D grid must be line grids")
        return self

    @property
    def is_periodic(self) -> bool:
        return False

    @property
    def ndim(self) -> int:
        return 2

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.x.n, self.y.n)

    @property
    def axes(self) -> tuple[Grid, ...]:
        return (self.x, self.y)

    @property
    def coordinates(self) -> tuple[np.ndarray, ...]:
        return tuple(np.meshgrid(self.x.nodes, self.y.nodes, indexing="ij"))

    @property
    def weights(self) -> np.ndarray:
        return np.outer(self.x.weights, self.y.weights)


class TransferKernel(BaseModel):
    """
    Dense stochastic kernel, ``matrix[i, j]`` being a probability density per
    unit source length. Both weighted marginals integrate to one.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    source: Grid
    target: Grid
    width: float = Field(..., ge=0)
    matrix: RealArray

    @model_validator(mode="after")
    def check_stochastic(self) -> "TransferKernel":
        if self.matrix.shape != (self.target.n, self.source.n):
            raise ValueError(
                f"kernel shape {self.matrix.shape} does not match grids "
                f"({self.target.n}, {self.source.n})"
            )
        if np.any(self.matrix < 0):
            raise ValueError("kernel entries must be non-negative")
        tolerance = Config.kernel_marginal_tolerance
        if np.max(np.abs(self.row_integrals() - 1.0)) > tolerance:
            raise ValueError("kernel rows do not integrate to one")
        if np.max(np.abs(self.column_integrals() - 1.0)) > tolerance:
            raise ValueError("kernel columns do not integrate to one")
        return self

    def row_integrals(self) -> np.ndarray:
        return self.matrix @ self.source.weights

    def column_integrals(self) -> np.ndarray:
        return self.target.weights @ self.matrix
