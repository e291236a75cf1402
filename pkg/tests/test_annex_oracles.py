import math

import pytest
from pydantic import ValidationError

from src.config import Config
from src.errors import ContractViolation, DivergentEstimateError, OutOfDomainError
from src.misc import MomentumBranch, Observable
from src.models.annex import AnnexScenario
from src.models.qstate import PhysicalParams
from src.utils.annex import AnnexOracles
from src.utils.pipeline import Pipeline


def test_packet_predictions_at_equal_widths() -> None:
    scenario = AnnexScenario(sigma=1.0, k=1.0, gamma=0.5, lam=0.5)
    prediction = AnnexOracles.annex_packet_predictions(scenario)
    assert prediction.density_std == pytest.approx(math.sqrt(1.25))
    assert prediction.current_std == pytest.approx(math.sqrt(1.25))
    assert prediction.error_std_x == pytest.approx(math.sqrt(1.25) - 1.0)
    assert prediction.momentum_std_out == pytest.approx(math.sqrt(0.2))
    assert prediction.error_std_p_half_width == pytest.approx(0.5 - math.sqrt(0.2))
    assert prediction.error_std_p_printed == pytest.approx(1.0 - math.sqrt(0.2))


def test_ideal_device_predicts_no_error() -> None:
    prediction = AnnexOracles.annex_packet_predictions(
        AnnexScenario(x0=1.0, sigma=2.0, k=3.0)
    )
    assert prediction.error_std_x == 0.0
    assert prediction.error_std_p_half_width == pytest.approx(0.0, abs=1e-12)


def test_scenario_accepts_lambda_alias() -> None:
    scenario = AnnexScenario.model_validate({"sigma": 1.0, "lambda": 0.3})
    assert scenario.lam == 0.3
    with pytest.raises(ValidationError):
        AnnexScenario(sigma=0.0)
    with pytest.raises(ValidationError):
        AnnexScenario(sigma=1.0, gamma=-1.0)


def test_packet_predictions_outside_domain() -> None:
    with pytest.raises(OutOfDomainError):
        AnnexOracles.annex_packet_predictions(AnnexScenario(sigma=1.0, k=1.0, lam=2.0))
    # without a phase the current vanishes and any lambda is fine
    prediction = AnnexOracles.annex_packet_predictions(AnnexScenario(sigma=1.0, lam=2.0))
    assert prediction.momentum_std_out == pytest.approx(0.5)


@pytest.mark.parametrize(
    ("gamma", "energy", "energy_std"),
    [(0.0, 0.5, 0.0), (1.0, 5.0 / 6.0, 2.0 * math.sqrt(2.0) / 3.0)],
)
def test_oscillator_predictions(gamma: float, energy: float, energy_std: float) -> None:
    params = PhysicalParams(omega=1.0)
    scenario = AnnexScenario(sigma=math.sqrt(0.5), gamma=gamma, params=params)
    prediction = AnnexOracles.annex_oscillator_predictions(scenario)
    assert prediction.energy_out == pytest.approx(energy)
    assert prediction.energy_std_out == pytest.approx(energy_std, abs=1e-12)
    assert prediction.error_energy == pytest.approx(energy - 0.5)


def test_oscillator_predictions_need_ground_width() -> None:
    params = PhysicalParams(omega=1.0)
    with pytest.raises(ContractViolation):
        AnnexOracles.annex_oscillator_predictions(AnnexScenario(sigma=1.0, params=params))
    with pytest.raises(ContractViolation):
        AnnexOracles.annex_oscillator_predictions(
            AnnexScenario(sigma=math.sqrt(0.5), k=1.0, params=params)
        )


def test_branch_adjudication() -> None:
    prediction = AnnexOracles.annex_packet_predictions(
        AnnexScenario(sigma=1.0, k=1.0, gamma=0.5, lam=0.5)
    )
    adjudicate = AnnexOracles.adjudicate_momentum_branch
    assert adjudicate(prediction.error_std_p_half_width, prediction) == MomentumBranch.half_width
    assert adjudicate(prediction.error_std_p_printed, prediction) == MomentumBranch.printed
    assert adjudicate(0.3, prediction) == MomentumBranch.none


def test_measured_packet_supports_half_width_branch() -> None:
    scenario = AnnexScenario(sigma=1.0, k=1.0, gamma=0.5, lam=0.5)
    measurement = Pipeline.measure_packet(scenario, resolution=4096)
    assert measurement.branch == MomentumBranch.half_width

    position = measurement.errors.entry(Observable.position, Observable.momentum)
    momentum = measurement.errors.entry(Observable.momentum)
    assert position.std == pytest.approx(math.sqrt(1.25) - 1.0, abs=1e-8)
    assert position.mean == pytest.approx(0.0, abs=1e-10)
    assert position.correlation == pytest.approx(0.0, abs=1e-6)
    assert momentum.std == pytest.approx(0.5 - math.sqrt(0.2), rel=1e-4)
    assert measurement.current_std == pytest.approx(math.sqrt(1.25), rel=1e-8)


def test_measured_oscillator() -> None:
    measurement = Pipeline.measure_oscillator(1.0, resolution=4096)
    assert measurement.report_out.mean.real == pytest.approx(5.0 / 6.0, rel=1e-5)
    assert measurement.errors.entry(Observable.hamiltonian).std == pytest.approx(
        2.0 * math.sqrt(2.0) / 3.0, rel=1e-4
    )


def test_vanishing_device_width_is_ideal() -> None:
    scenario = AnnexScenario(sigma=1.0, k=1.0, gamma=1e-4, lam=1e-4)
    measurement = Pipeline.measure_packet(scenario, resolution=4096)
    assert measurement.errors.entry(Observable.position, Observable.momentum).std < 1e-6
    assert measurement.errors.entry(Observable.momentum).std < 1e-5


def test_scan_grid() -> None:
    base = AnnexScenario(sigma=1.0, k=1.0)
    gammas, lambdas = [0.0, 0.5, 1.0], [0.0, 0.5, 1.0, 2.0]
    rows = Pipeline.scan(base, gammas, lambdas, resolution=2048, workers=2)

    assert [(row.gamma, row.lam) for row in rows] == [
        (gamma, lam) for gamma in gammas for lam in lambdas
    ]
    for row in rows:
        if 1.0 + 2.0 * row.gamma**2 - row.lam**2 > 0:
            assert row.eps_std_x is not None, row
            assert row.branch == MomentumBranch.half_width, row
        else:
            assert row.eps_std_x is None, row
            assert "sigma^2 + 2 gamma^2 - lambda^2" in row.note

    # the position error grows with the density width
    by_gamma = [row.eps_std_x for row in rows if row.lam == 0.0]
    assert by_gamma == sorted(by_gamma)
    assert by_gamma[0] == pytest.approx(0.0, abs=1e-10)


near_edge = [(1.0, 0.5, 1.0, 1.0), (1.0, 0.25, 1.0, 1.0), (0.5, 0.25, 0.5, 2.0)]


@pytest.mark.parametrize(("sigma", "gamma", "lam", "k"), near_edge)
def test_measure_packet_near_domain_edge(
    sigma: float, gamma: float, lam: float, k: float
) -> None:
    scenario = AnnexScenario(sigma=sigma, k=k, gamma=gamma, lam=lam)
    measurement = Pipeline.measure_packet(scenario, resolution=2048)
    momentum = measurement.errors.entry(Observable.momentum)
    assert momentum.std == pytest.approx(
        measurement.prediction.error_std_p_half_width, rel=1e-3
    )
    assert measurement.branch == MomentumBranch.half_width


@pytest.mark.parametrize(("sigma", "gamma", "lam", "k"), near_edge)
def test_momentum_spread_converges_inside_domain(
    sigma: float, gamma: float, lam: float, k: float
) -> None:
    scenario = AnnexScenario(sigma=sigma, k=k, gamma=gamma, lam=lam)
    refinement = Pipeline.momentum_refinement(scenario)
    prediction = AnnexOracles.annex_packet_predictions(scenario)
    assert refinement.relative_change < Config.convergence_tolerance
    assert refinement.resolutions == (Config.resolution, 2 * Config.resolution)
    assert refinement.fine == pytest.approx(prediction.momentum_std_out, rel=1e-4)


@pytest.mark.parametrize(
    ("sigma", "gamma", "lam", "k"),
    [(1.0, 0.0, 1.0, 1.0), (1.0, 0.0, 1.5, 1.0), (0.5, 0.25, 1.0, 2.0)],
)
def test_momentum_spread_diverges_outside_domain(
    sigma: float, gamma: float, lam: float, k: float
) -> None:
    scenario = AnnexScenario(sigma=sigma, k=k, gamma=gamma, lam=lam)
    assert scenario.domain_margin <= 0
    assert scenario.tail_width is None
    with pytest.raises(DivergentEstimateError, match="grid refinement"):
        Pipeline.momentum_refinement(scenario)


def test_tail_width() -> None:
    assert AnnexScenario(sigma=1.0).tail_width == 0.0
    # s_gamma^2 = s_lambda^2 = 2, margin 2
    scenario = AnnexScenario(sigma=1.0, k=1.0, gamma=1.0, lam=1.0)
    assert scenario.tail_width == pytest.approx(math.sqrt(2.0))


sweep_widths = [0.0, 0.25, 0.5, 1.0]


def check_sweep(sigma: float, k: float, resolution: int, rel: float, workers: int) -> None:
    rows = Pipeline.scan(
        AnnexScenario(sigma=sigma, k=k),
        sweep_widths,
        sweep_widths,
        resolution=resolution,
        workers=workers,
    )
    assert len(rows) == len(sweep_widths) ** 2
    for row in rows:
        if k != 0 and sigma**2 + 2.0 * row.gamma**2 - row.lam**2 <= 0:
            assert row.eps_std_x is None, row
            assert "sigma^2 + 2 gamma^2 - lambda^2" in row.note
            continue
        assert row.eps_std_x == pytest.approx(
            row.oracle_eps_std_x, rel=rel, abs=rel * 1e-3
        ), row
        assert row.eps_std_p == pytest.approx(
            row.oracle_eps_std_p, rel=rel, abs=rel * 1e-3
        ), row


@pytest.mark.parametrize(("k"), [0.0, 1.0, 2.0])
@pytest.mark.parametrize(("sigma"), [0.5, 1.0, 2.0])
def test_sweep_matches_closed_forms(sigma: float, k: float) -> None:
    check_sweep(sigma, k, 2048, 1e-3, workers=4)


@pytest.mark.parametrize(("sigma"), [0.5, 1.0, 2.0])
def test_refined_sweep_matches_closed_forms(sigma: float) -> None:
    check_sweep(sigma, 1.0, 4096, 1e-4, workers=2)


@pytest.mark.parametrize(("gamma"), [0.0, 1e-4])
def test_oscillator_without_blur_stays_in_ground_state(gamma: float) -> None:
    measurement = Pipeline.measure_oscillator(gamma)
    assert measurement.report_out.mean.real == pytest.approx(0.5, abs=1e-6)
    assert measurement.report_out.std == pytest.approx(0.0, abs=1e-6)
