import math

from pydantic import BaseModel, ConfigDict, Field, computed_field

from src.models.qstate import PhysicalParams


class AnnexScenario(BaseModel):
    """
    Gaussian packet with linear phase kx observed through Gaussian density
    (gamma) and current (lambda) channels
    """

    model_config = ConfigDict(frozen=True, populate_by_name=True)

    x0: float = 0.0
    sigma: float = Field(..., gt=0)
    k: float = 0.0
    gamma: float = Field(0.0, ge=0)
    lam: float = Field(0.0, ge=0, alias="lambda")
    params: PhysicalParams = PhysicalParams()

    @property
    def density_width(self) -> float:
        return (self.sigma**2 + self.gamma**2) ** 0.5

    @property
    def current_width(self) -> float:
        return (self.sigma**2 + self.lam**2) ** 0.5

    @property
    def domain_margin(self) -> float:
        return self.sigma**2 + 2.0 * self.gamma**2 - self.lam**2

    @property
    def tail_width(self) -> float | None:
        """
        Standard deviation of the Gaussian J^2/rho profile of the out-state.
        Zero without a current, None when the profile does not decay.
        """
        if self.k == 0:
            return 0.0
        if self.domain_margin <= 0:
            return None
        return self.density_width * self.current_width / self.domain_margin**0.5


class PacketPrediction(BaseModel):
    model_config = ConfigDict(frozen=True)

    density_std: float
    current_std: float
    error_mean_x: float = 0.0
    error_mean_p: float = 0.0
    error_correlation_xp: float = 0.0
    error_std_x: float
    momentum_std_out: float
    # two readings of the momentum error, trailing term k or 1/(2 sigma)
    error_std_p_printed: float
    error_std_p_half_width: float


class OscillatorPrediction(BaseModel):
    model_config = ConfigDict(frozen=True)

    energy_in: float
    energy_std_in: float = 0.0
    energy_out: float
    energy_std_out: float
    error_energy: float
    error_energy_std: float


class MomentumRefinement(BaseModel):
    """
    Out-state momentum spread of a packet scenario on a grid and on its
    refinement
    """

    model_config = ConfigDict(frozen=True)

    scenario: AnnexScenario
    resolutions: tuple[int, int]
    half_widths: tuple[float, float]
    coarse: float
    fine: float

    @computed_field  # type: ignore[prop-decorator]
    @property
    def relative_change(self) -> float:
        if not (math.isfinite(self.coarse) and math.isfinite(self.fine)):
            return math.inf
        return abs(self.fine - self.coarse) / self.fine
