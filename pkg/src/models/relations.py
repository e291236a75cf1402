from pydantic import BaseModel, ConfigDict, Field, computed_field

from src.models.types import ComplexArray, ComplexNumber, RealArray


class RelationVerdict(BaseModel):
    """
    Two sides of a fluctuation inequality ``lhs >= rhs``
    """

    model_config = ConfigDict(frozen=True)

    lhs: float = Field(..., ge=0)
    rhs: float = Field(..., ge=0)
    applicable: bool | None = None
    defects: tuple[ComplexNumber, ...] | None = None

    @computed_field  # type: ignore[prop-decorator]
    @property
    def margin(self) -> float:
        return self.lhs - self.rhs


class GramReport(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    matrix: ComplexArray
    eigenvalues: RealArray
    determinant: float

    @computed_field  # type: ignore[prop-decorator]
    @property
    def scale(self) -> float:
        return float(max(self.matrix.diagonal().real.max(), 0.0))
