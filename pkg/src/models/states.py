from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, computed_field

from src.models.qstate import OperatorSpec, WaveFunction


class ClosedFormValue(BaseModel):
    model_config = ConfigDict(frozen=True)

    quantity: Literal["mean", "std", "corr"]
    observable: str
    partner: str | None = None
    value: float
    tolerance: float = Field(..., gt=0)
    relative: bool = False

    @property
    def key(self) -> str:
        if self.partner is None:
            return f"{self.quantity}({self.observable})"
        return f"{self.quantity}({self.observable},{self.partner})"


class OracleCheck(BaseModel):
    model_config = ConfigDict(frozen=True)

    key: str
    expected: float
    measured: float
    tolerance: float
    relative: bool

    @computed_field  # type: ignore[prop-decorator]
    @property
    def deviation(self) -> float:
        difference = abs(self.measured - self.expected)
        if self.relative and self.expected != 0.0:
            return difference / abs(self.expected)
        return difference

    @computed_field  # type: ignore[prop-decorator]
    @property
    def passed(self) -> bool:
        return self.deviation <= self.tolerance


class StateCatalogEntry(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    name: str
    kind: str
    parameters: dict[str, float]
    wavefunction: WaveFunction
    operators: dict[str, OperatorSpec]
    pairs: list[tuple[str, str]]
    closed_forms: list[ClosedFormValue] = []
