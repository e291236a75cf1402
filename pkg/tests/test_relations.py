import numpy as np
import pytest

from src.errors import ContractViolation
from src.models.numerics import Grid
from src.models.qstate import PhysicalParams
from src.utils.operators import Operators
from src.utils.qstate import QState
from src.utils.relations import Relations
from src.utils.states import States

oscillator = PhysicalParams(omega=1.0)
phase_grid = Grid.periodic(0.0, 2.0 * np.pi, 2048)


@pytest.mark.parametrize(("n"), [0, 1, 2, 3])
def test_phase_state_breaks_rsur(n: int) -> None:
    wf = States.qo_phase_state(n, phase_grid)
    number, phase = Operators.number(), Operators.phase()

    assert QState.estimate(wf, number).std == pytest.approx(0.0, abs=1e-8)
    assert QState.estimate(wf, phase).std == pytest.approx(np.pi / np.sqrt(3.0), abs=1e-6)

    verdict = Relations.rsur_margin(wf, number, phase)
    assert not verdict.applicable
    assert verdict.lhs < verdict.rhs
    assert verdict.rhs == pytest.approx(0.5, abs=1e-6)
    assert Relations.csf_margin(wf, number, phase).margin >= -1e-10


def test_number_phase_defect_scale() -> None:
    wf = States.qo_phase_state(1, phase_grid)
    d1, d2 = Relations.hermiticity_defect(wf, Operators.number(), Operators.phase())
    assert abs(d1) == pytest.approx(1.0, abs=1e-6)
    # phi is a multiplication, so the second defect vanishes
    assert abs(d2) == pytest.approx(0.0, abs=1e-10)


@pytest.mark.parametrize(("hbar"), [1.0, 1.5])
def test_energy_time_defect_scale(hbar: float) -> None:
    params = PhysicalParams(hbar=hbar)
    wf = States.time_phase_state(1, phase_grid, params)
    d1, _ = Relations.hermiticity_defect(wf, Operators.energy(params), Operators.time())
    assert abs(d1) == pytest.approx(hbar, abs=1e-6)


def test_position_momentum_defect_vanishes() -> None:
    params = PhysicalParams()
    grid = States.packet_grid(0.0, 1.0, 4096)
    wf = States.gaussian_packet(0.0, 1.0, 2.0, params, grid)
    d1, d2 = Relations.hermiticity_defect(
        wf, Operators.position(), Operators.momentum(params)
    )
    assert max(abs(d1), abs(d2)) < 1e-8

    verdict = Relations.rsur_margin(wf, Operators.position(), Operators.momentum(params))
    assert verdict.applicable
    # minimum-uncertainty packet saturates the bound
    assert verdict.margin == pytest.approx(0.0, abs=1e-8)


@pytest.mark.parametrize(("n"), [0, 1, 2, 3, 4])
def test_csf_on_oscillator_levels(n: int) -> None:
    grid = States.oscillator_grid(oscillator, n)
    wf = States.qo_eigenstate(n, oscillator, grid)
    verdict = Relations.csf_margin(
        wf, Operators.position(), Operators.momentum(oscillator)
    )
    assert verdict.margin >= -1e-10
    assert verdict.lhs == pytest.approx(n + 0.5, abs=1e-6)


def test_csf_equality_for_equal_operators() -> None:
    grid = States.oscillator_grid(oscillator, 2)
    wf = States.qo_eigenstate(2, oscillator, grid)
    x = Operators.position()
    assert Relations.csf_margin(wf, x, x).margin == pytest.approx(0.0, abs=1e-10)


@pytest.mark.parametrize(("n"), [0, 1, 2, 3])
def test_gram_determinant_of_oscillator_levels(n: int) -> None:
    grid = States.oscillator_grid(oscillator, n)
    wf = States.qo_eigenstate(n, oscillator, grid)
    report = Relations.gram_determinant(
        wf,
        [
            Operators.momentum(oscillator),
            Operators.position(),
            Operators.oscillator_hamiltonian(oscillator),
        ],
    )
    assert np.max(np.abs(report.matrix - report.matrix.conj().T)) < 1e-10
    assert report.determinant >= -1e-9 * report.scale**3


def test_gram_determinant_needs_two_operators() -> None:
    grid = States.oscillator_grid(oscillator, 0)
    wf = States.qo_eigenstate(0, oscillator, grid)
    with pytest.raises(ContractViolation):
        Relations.gram_determinant(wf, [Operators.position()])


@pytest.mark.parametrize(
    ("level", "rhs"),
    [
        # odd overlap of x psi_0 with x psi_1 vanishes by parity
        (1, 0.0),
        (2, np.sqrt(2.0) / 2.0),
    ],
)
def test_multi_temporal_csf(level: int, rhs: float) -> None:
    grid = States.oscillator_grid(oscillator, 2)
    ground = States.qo_eigenstate(0, oscillator, grid)
    excited = States.qo_eigenstate(level, oscillator, grid)
    x = Operators.position()
    verdict = Relations.multi_temporal_csf(ground, excited, x, x)
    assert verdict.rhs == pytest.approx(rhs, abs=1e-8)
    assert verdict.lhs == pytest.approx(np.sqrt(0.5 * (level + 0.5)), abs=1e-8)
    assert verdict.margin >= -1e-10


def test_multi_temporal_needs_shared_grid() -> None:
    ground = States.qo_eigenstate(0, oscillator, States.oscillator_grid(oscillator, 0))
    excited = States.qo_eigenstate(1, oscillator, States.oscillator_grid(oscillator, 1))
    x = Operators.position()
    with pytest.raises(ContractViolation):
        Relations.multi_temporal_csf(ground, excited, x, x)
