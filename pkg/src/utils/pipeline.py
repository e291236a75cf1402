import logging
import math
from concurrent.futures import ThreadPoolExecutor

import numpy as np
from tqdm import tqdm

from src.config import Config
from src.errors import DivergentEstimateError, OutOfDomainError
from src.misc import Observable
from src.models.annex import AnnexScenario, MomentumRefinement
from src.models.numerics import Grid
from src.models.qstate import DensityCurrent, PhysicalParams, WaveFunction
from src.models.report import OscillatorMeasurement, PacketMeasurement, ScanRow
from src.utils.annex import AnnexOracles
from src.utils.measurement import Measurement
from src.utils.numerics import Numerics
from src.utils.operators import Operators
from src.utils.qstate import QState
from src.utils.states import States

LOGGER = logging.getLogger(__name__)


class Pipeline:
    @staticmethod
    def packet_grid(
        scenario: AnnexScenario,
        resolution: int = Config.resolution,
        multiplier: float = Config.half_width_multiplier,
    ) -> Grid:
        """
        Line grid wide enough for the packet, both blurred profiles and the
        J^2/rho tail of the out-state
        """
        widths = [scenario.density_width, scenario.current_width]
        if tail := scenario.tail_width:
            widths.append(tail)
        return States.packet_grid(
            scenario.x0, scenario.sigma, resolution, multiplier, *widths
        )

    @staticmethod
    def _blurred_packet(
        scenario: AnnexScenario, grid: Grid
    ) -> tuple[WaveFunction, DensityCurrent]:
        wf = States.gaussian_packet(
            scenario.x0, scenario.sigma, scenario.k, scenario.params, grid
        )
        channel = Measurement.gaussian_channel(grid, scenario.gamma, scenario.lam)
        return wf, Measurement.qms_apply(channel, QState.density_current(wf))

    @staticmethod
    def momentum_refinement(
        scenario: AnnexScenario,
        resolution: int = Config.resolution,
        multiplier: float = Config.half_width_multiplier,
        tolerance: float = Config.convergence_tolerance,
    ) -> MomentumRefinement:
        """
        Out-state momentum spread on the measurement grid and on a refinement
        with twice the nodes over a half-width 1.5 times wider. Raises
        DivergentEstimateError when the two disagree, which is what the
        J^2/rho integral does outside sigma^2 + 2 gamma^2 - lambda^2 > 0.
        No closed form is consulted.
        """
        momentum = Operators.momentum(scenario.params)
        spreads, grids = [], []
        for level in range(2):
            grid = Pipeline.packet_grid(
                scenario, resolution * 2**level, multiplier * 1.5**level
            )
            _, dc_out = Pipeline._blurred_packet(scenario, grid)
            spreads.append(Measurement.out_estimate(dc_out, momentum, scenario.params).std)
            grids.append(grid)

        refinement = MomentumRefinement(
            scenario=scenario,
            resolutions=(grids[0].n, grids[1].n),
            half_widths=tuple(0.5 * (grid.upper - grid.lower) for grid in grids),
            coarse=spreads[0],
            fine=spreads[1],
        )
        LOGGER.debug(
            "momentum spread %.10g -> %.10g (relative change %.3g)",
            refinement.coarse,
            refinement.fine,
            refinement.relative_change,
        )
        if refinement.relative_change > tolerance:
            raise DivergentEstimateError(
                f"out-state momentum spread changes by {refinement.relative_change:.3g} "
                "under grid refinement; it needs sigma^2 + 2 gamma^2 - lambda^2 > 0, "
                f"got {scenario.domain_margin:.6g}"
            )
        return refinement

    @staticmethod
    def measure_packet(
        scenario: AnnexScenario,
        resolution: int = Config.resolution,
        multiplier: float = Config.half_width_multiplier,
    ) -> PacketMeasurement:
        """
        Send a Gaussian packet through the Gaussian channel and compare the
        error indicators with their closed forms
        """
        params = scenario.params
        prediction = AnnexOracles.annex_packet_predictions(scenario)
        grid = Pipeline.packet_grid(scenario, resolution, multiplier)
        wf, dc_out = Pipeline._blurred_packet(scenario, grid)

        x, p = Operators.position(), Operators.momentum(params)
        reports_in = [QState.estimate(wf, x, partner=p), QState.estimate(wf, p)]
        reports_out = [
            Measurement.out_estimate(dc_out, x, params, partner=p),
            Measurement.out_estimate(dc_out, p, params),
        ]
        errors = Measurement.error_indicators_quantum(reports_in, reports_out)

        current_std = None
        if flow := Numerics.integrate(grid, dc_out.j):
            profile = dc_out.j / flow
            center = Numerics.integrate(grid, grid.nodes * profile)
            current_std = math.sqrt(
                max(Numerics.integrate(grid, (grid.nodes - center) ** 2 * profile), 0.0)
            )

        branch = AnnexOracles.adjudicate_momentum_branch(
            errors.entry(Observable.momentum).std, prediction
        )
        return PacketMeasurement(
            scenario=scenario,
            reports_in=reports_in,
            reports_out=reports_out,
            errors=errors,
            prediction=prediction,
            current_std=current_std,
            branch=branch,
        )

    @staticmethod
    def measure_oscillator(
        gamma: float,
        params: PhysicalParams = PhysicalParams(omega=1.0),
        resolution: int = Config.resolution,
        multiplier: float = Config.half_width_multiplier,
    ) -> OscillatorMeasurement:
        omega = params.require_omega()
        sigma = math.sqrt(params.hbar / (2.0 * params.mass * omega))
        scenario = AnnexScenario(sigma=sigma, gamma=gamma, params=params)
        prediction = AnnexOracles.annex_oscillator_predictions(scenario)

        grid = States.packet_grid(0.0, sigma, resolution, multiplier, scenario.density_width)
        wf = States.qo_eigenstate(0, params, grid)
        channel = Measurement.gaussian_channel(grid, gamma, 0.0)
        dc_out = Measurement.qms_apply(channel, QState.density_current(wf))

        hamiltonian = Operators.oscillator_hamiltonian(params)
        report_in = QState.estimate(wf, hamiltonian)
        report_out = Measurement.out_estimate(dc_out, hamiltonian, params)
        return OscillatorMeasurement(
            scenario=scenario,
            report_in=report_in,
            report_out=report_out,
            errors=Measurement.error_indicators_quantum([report_in], [report_out]),
            prediction=prediction,
        )

    @staticmethod
    def scan_point(
        scenario: AnnexScenario, resolution: int, multiplier: float
    ) -> ScanRow:
        try:
            measurement = Pipeline.measure_packet(scenario, resolution, multiplier)
        except OutOfDomainError as err:
            LOGGER.info("gamma=%g lambda=%g skipped: %s", scenario.gamma, scenario.lam, err)
            return ScanRow(gamma=scenario.gamma, lam=scenario.lam, note=str(err))

        position = measurement.errors.entry(Observable.position, Observable.momentum)
        momentum = measurement.errors.entry(Observable.momentum)
        return ScanRow(
            gamma=scenario.gamma,
            lam=scenario.lam,
            eps_mean_x=position.mean,
            eps_std_x=position.std,
            eps_mean_p=momentum.mean,
            eps_std_p=momentum.std,
            eps_corr_xp=position.correlation,
            oracle_eps_std_x=measurement.prediction.error_std_x,
            oracle_eps_std_p=measurement.prediction.error_std_p_half_width,
            branch=measurement.branch,
        )

    @staticmethod
    def scan(
        base: AnnexScenario,
        gammas: list[float],
        lambdas: list[float],
        resolution: int = Config.resolution,
        multiplier: float = Config.half_width_multiplier,
        workers: int = 1,
        progress: bool = False,
    ) -> list[ScanRow]:
        """
        Error indicators over a (gamma, lambda) grid. Rows come back sorted by
        (gamma, lambda) whatever order the points finish in.
        """
        points = [
            AnnexScenario.model_validate(
                {**base.model_dump(), "gamma": float(gamma), "lam": float(lam)}
            )
            for gamma in np.unique(gammas)
            for lam in np.unique(lambdas)
        ]
        LOGGER.info("scanning %d device settings with %d worker(s)", len(points), workers)

        def run(scenario: AnnexScenario) -> ScanRow:
            return Pipeline.scan_point(scenario, resolution, multiplier)

        with ThreadPoolExecutor(max_workers=workers) as executor:
            rows = list(
                tqdm(
                    executor.map(run, points),
                    total=len(points),
                    desc="scan",
                    disable=not progress,
                )
            )
        return sorted(rows, key=lambda row: (row.gamma, row.lam))

