from pathlib import Path

from pydantic import BaseModel, ConfigDict, Field, computed_field, field_validator

from src.config import Config
from src.misc import MomentumBranch, OutputFormat, RelationName
from src.models.annex import AnnexScenario, OscillatorPrediction, PacketPrediction
from src.models.measurement import ErrorReport
from src.models.qstate import EstimatorReport


class RunConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    resolution: int = Field(Config.resolution, ge=256)
    well_resolution: int = Field(Config.well_resolution, ge=256)
    half_width_multiplier: float = Field(Config.half_width_multiplier, gt=0)
    tolerances: dict[str, float] = {}
    seed: int = Config.ensemble_seed
    output_format: OutputFormat = OutputFormat.csv
    output_path: Path | None = None
    workers: int = Field(1, ge=1)

    @field_validator("tolerances")
    @classmethod
    def check_tolerances(cls, value: dict[str, float]) -> dict[str, float]:
        if unknown := set(value) - Config.tolerance_names():
            raise ValueError(f"unknown tolerances: {sorted(unknown)}")
        if bad := [name for name, tolerance in value.items() if not tolerance > 0]:
            raise ValueError(f"tolerances must be positive: {sorted(bad)}")
        return value

    def tolerance(self, name: str) -> float:
        return self.tolerances.get(name, getattr(Config, name))


class CheckRow(BaseModel):
    model_config = ConfigDict(frozen=True, populate_by_name=True)

    name: str
    relation: RelationName
    ops: str = ""
    lhs: float
    rhs: float
    applicable: bool | None = None
    passed: bool = Field(..., alias="pass")
    note: str = ""

    @computed_field  # type: ignore[prop-decorator]
    @property
    def margin(self) -> float:
        return self.lhs - self.rhs


class MeasureRow(BaseModel):
    model_config = ConfigDict(frozen=True)

    quantity: str
    value: float
    oracle: float | None = None
    note: str = ""

    @computed_field  # type: ignore[prop-decorator]
    @property
    def deviation(self) -> float | None:
        if self.oracle is None:
            return None
        difference = abs(self.value - self.oracle)
        return difference / abs(self.oracle) if self.oracle != 0.0 else difference


class ScanRow(BaseModel):
    model_config = ConfigDict(frozen=True, populate_by_name=True)

    gamma: float
    lam: float = Field(..., alias="lambda")
    eps_mean_x: float | None = None
    eps_std_x: float | None = None
    eps_mean_p: float | None = None
    eps_std_p: float | None = None
    eps_corr_xp: float | None = None
    oracle_eps_std_x: float | None = None
    oracle_eps_std_p: float | None = None
    branch: MomentumBranch = MomentumBranch.none
    note: str = ""


class PacketMeasurement(BaseModel):
    """
    In and out estimators of one packet scenario with the matching closed forms
    """

    model_config = ConfigDict(frozen=True)

    scenario: AnnexScenario
    reports_in: list[EstimatorReport]
    reports_out: list[EstimatorReport]
    errors: ErrorReport
    prediction: PacketPrediction
    current_std: float | None = None
    branch: MomentumBranch


class OscillatorMeasurement(BaseModel):
    model_config = ConfigDict(frozen=True)

    scenario: AnnexScenario
    report_in: EstimatorReport
    report_out: EstimatorReport
    errors: ErrorReport
    prediction: OscillatorPrediction
