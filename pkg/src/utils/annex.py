import logging
import math

from src.config import Config
from src.errors import ContractViolation, OutOfDomainError
from src.misc import MomentumBranch
from src.models.annex import AnnexScenario, OscillatorPrediction, PacketPrediction

LOGGER = logging.getLogger(__name__)


class AnnexOracles:
    @staticmethod
    def annex_packet_predictions(scenario: AnnexScenario) -> PacketPrediction:
        hbar = scenario.params.hbar
        sigma, k = scenario.sigma, scenario.k
        s_gamma2 = scenario.density_width**2
        s_lam2 = scenario.current_width**2

        if k != 0 and scenario.domain_margin <= 0:
            raise OutOfDomainError(
                "out-state momentum spread needs sigma^2 + 2 gamma^2 - lambda^2 > 0, "
                f"got {scenario.domain_margin:.6g}"
            )
        drift = 0.0
        if k != 0:
            drift = k**2 * s_gamma2 / math.sqrt(s_lam2 * (2.0 * s_gamma2 - s_lam2)) - k**2
        root = math.sqrt(drift + 1.0 / (4.0 * s_gamma2))

        return PacketPrediction(
            density_std=scenario.density_width,
            current_std=scenario.current_width,
            error_std_x=scenario.density_width - sigma,
            momentum_std_out=hbar * root,
            error_std_p_printed=hbar * abs(root - k),
            error_std_p_half_width=hbar * abs(root - 1.0 / (2.0 * sigma)),
        )

    @staticmethod
    def annex_oscillator_predictions(scenario: AnnexScenario) -> OscillatorPrediction:
        params = scenario.params
        hbar, mass, omega = params.hbar, params.mass, params.require_omega()
        ground_width = math.sqrt(hbar / (2.0 * mass * omega))
        if abs(scenario.sigma - ground_width) > 1e-9:
            raise ContractViolation(
                f"sigma must equal the ground-state width {ground_width:.12g}, "
                f"got {scenario.sigma:.12g}"
            )
        if scenario.k != 0 or scenario.x0 != 0:
            raise ContractViolation("the oscillator scenario needs x0 = 0 and k = 0")

        spread = hbar + 2.0 * mass * omega * scenario.gamma**2
        energy_in = 0.5 * hbar * omega
        energy_out = omega * (hbar**2 + spread**2) / (4.0 * spread)
        energy_std_out = omega * math.sqrt(2.0) * (spread**2 - hbar**2) / (4.0 * spread)
        return OscillatorPrediction(
            energy_in=energy_in,
            energy_out=energy_out,
            energy_std_out=energy_std_out,
            error_energy=energy_out - energy_in,
            error_energy_std=energy_std_out,
        )

    @staticmethod
    def adjudicate_momentum_branch(
        measured: float,
        prediction: PacketPrediction,
        tolerance: float = Config.branch_tolerance,
    ) -> MomentumBranch:
        """
        Name the closed form a pipeline momentum error agrees with, or none
        when it matches neither or both
        """

        def agrees(expected: float) -> bool:
            scale = abs(expected) if expected != 0.0 else 1.0
            return abs(measured - expected) <= tolerance * scale

        printed = agrees(prediction.error_std_p_printed)
        half_width = agrees(prediction.error_std_p_half_width)
        if printed and not half_width:
            branch = MomentumBranch.printed
        elif half_width and not printed:
            branch = MomentumBranch.half_width
        else:
            branch = MomentumBranch.none
        LOGGER.debug(
            "momentum error %.8g: printed %.8g, half-width %.8g -> %s",
            measured,
            prediction.error_std_p_printed,
            prediction.error_std_p_half_width,
            branch.value,
        )
        return branch
