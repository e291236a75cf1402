import numpy as np
import pytest
from pydantic import ValidationError

from src.errors import ContractViolation, DegenerateStateError
from src.models.numerics import Grid
from src.models.qstate import Multiply, PhysicalParams, WaveFunction
from src.utils.operators import Operators
from src.utils.qstate import QState
from src.utils.states import States

params = PhysicalParams()
packet_grid = Grid.line(0.0, 8.0, 4096)


def packet(k: float = 1.0) -> WaveFunction:
    return States.gaussian_packet(0.0, 1.0, k, params, packet_grid)


def test_normalize_rescales() -> None:
    grid = Grid.line(0.0, 8.0, 1024)
    raw = WaveFunction(grid=grid, samples=3.0 * np.exp(-(grid.nodes**2)))
    assert not raw.is_normalized
    assert QState.normalize(raw).norm_squared == pytest.approx(1.0, abs=1e-12)


def test_normalize_zero_state() -> None:
    grid = Grid.line(0.0, 1.0, 64)
    with pytest.raises(DegenerateStateError):
        QState.normalize(WaveFunction(grid=grid, samples=np.zeros(64)))


def test_wavefunction_rejects_bad_samples() -> None:
    grid = Grid.line(0.0, 1.0, 64)
    with pytest.raises(ValidationError):
        WaveFunction(grid=grid, samples=np.ones(63))
    with pytest.raises(ValidationError):
        WaveFunction(grid=grid, samples=np.full(64, np.nan))


def test_estimate_requires_normalized_state() -> None:
    grid = Grid.line(0.0, 8.0, 256)
    raw = WaveFunction(grid=grid, samples=np.exp(-(grid.nodes**2)))
    with pytest.raises(ContractViolation):
        QState.estimate(raw, Operators.position())


def test_density_current_of_plane_wave_packet() -> None:
    dc = QState.density_current(packet(k=1.0))
    # J = (hbar k / m) rho for a linear phase
    assert np.max(np.abs(dc.j - dc.rho)) < 1e-10
    assert np.sum(packet_grid.weights * dc.rho) == pytest.approx(1.0, abs=1e-10)


def test_density_current_keeps_the_tail() -> None:
    grid = Grid.line(0.0, 14.0, 4096)
    dc = QState.density_current(States.gaussian_packet(0.0, 1.0, 1.0, params, grid))
    tail = (dc.rho > 1e-200) & (dc.rho < 1e-20)
    assert np.any(tail)
    assert np.allclose(dc.j[tail], dc.rho[tail], rtol=1e-4, atol=0.0)


def test_density_current_of_real_state_is_zero() -> None:
    dc = QState.density_current(packet(k=0.0))
    assert np.max(np.abs(dc.j)) == 0.0


@pytest.mark.parametrize(
    ("k", "mean_p"),
    [(0.0, 0.0), (2.0, 2.0), (-1.5, -1.5)],
)
def test_packet_estimates(k: float, mean_p: float) -> None:
    wf = packet(k)
    position = QState.estimate(wf, Operators.position())
    momentum = QState.estimate(wf, Operators.momentum(params))
    assert position.mean.real == pytest.approx(0.0, abs=1e-8)
    assert position.std == pytest.approx(1.0, abs=1e-8)
    assert momentum.mean.real == pytest.approx(mean_p, abs=1e-8)
    assert momentum.std == pytest.approx(0.5, abs=1e-8)


def test_apply_position() -> None:
    wf = packet()
    applied = QState.apply_operator(Operators.position(), wf)
    assert np.array_equal(applied, packet_grid.nodes * wf.samples)


def test_correlation_of_packet() -> None:
    wf = packet(k=2.0)
    report = QState.estimate(
        wf, Operators.position(), partner=Operators.momentum(params)
    )
    # (dx psi, dp psi) = i hbar / 2 for a minimum-uncertainty packet
    assert report.correlation == pytest.approx(0.5j, abs=1e-8)


def test_central_moment_first_orders() -> None:
    wf = packet()
    x, p = Operators.position(), Operators.momentum(params)
    report = QState.estimate(wf, x, partner=p)
    assert QState.central_moment(wf, x, p, 1, 1) == pytest.approx(
        report.correlation, abs=1e-12
    )
    assert QState.central_moment(wf, x, x, 1, 0) == pytest.approx(0.0, abs=1e-12)
    # fourth central moment of a Gaussian position distribution
    assert QState.central_moment(wf, x, x, 2, 2).real == pytest.approx(3.0, abs=1e-8)


@pytest.mark.parametrize(("r", "expected"), [(2, 1.0), (3, 0.0), (4, 3.0)])
def test_position_central_moments_of_gaussian(r: int, expected: float) -> None:
    x = Operators.position()
    moment = QState.central_moment(packet(), x, x, r, 0)
    assert moment.real == pytest.approx(expected, abs=1e-8)
    assert moment.imag == pytest.approx(0.0, abs=1e-12)


@pytest.mark.parametrize(("kind", "values"), States.default_specs())
def test_catalog_means_are_real_and_variances_agree(
    kind: str, values: dict[str, float]
) -> None:
    entry = States.from_spec(kind, values)
    wf = entry.wavefunction
    for name, op in entry.operators.items():
        report = QState.estimate(wf, op)
        assert abs(report.mean.imag) < 1e-9, name
        variance = QState.central_moment(wf, op, op, 2, 0)
        assert variance.real == pytest.approx(report.std**2, rel=1e-9, abs=1e-12), name


@pytest.mark.parametrize(("r", "s"), [(0, 0), (-1, 2), (2, -1)])
def test_central_moment_rejects_orders(r: int, s: int) -> None:
    x = Operators.position()
    with pytest.raises(ContractViolation):
        QState.central_moment(packet(), x, x, r, s)


def test_operator_needs_axis_on_grid() -> None:
    with pytest.raises(ContractViolation):
        QState.apply_operator(Operators.momentum(params, axis=1), packet())


def test_multiplier_must_be_real() -> None:
    complex_potential = Multiply(function=lambda x: 1j * x, label="ix")
    with pytest.raises(ContractViolation):
        QState.apply_operator(complex_potential, packet())


def test_operator_algebra() -> None:
    x, p = Operators.position(), Operators.momentum(params)
    wf = packet(k=0.0)
    commutator = QState.expectation(wf, x @ p) - QState.expectation(wf, p @ x)
    assert commutator == pytest.approx(1j, abs=1e-8)
    doubled = QState.expectation(wf, 2.0 * (x @ x))
    assert doubled.real == pytest.approx(2.0, abs=1e-10)
    assert QState.expectation(wf, x @ x - x @ x) == pytest.approx(0.0, abs=1e-14)
