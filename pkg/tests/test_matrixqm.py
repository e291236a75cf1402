import numpy as np
import pytest
from pydantic import ValidationError

from src.config import Config
from src.errors import ContractViolation
from src.models.matrixqm import DensityMatrix, FiniteOperator
from src.utils.matrixqm import MatrixQM


def diagonal(values: list[float], label: str = "") -> FiniteOperator:
    return FiniteOperator(matrix=np.diag(values).astype(complex), hermitian=True, label=label)


def test_fock_ladder() -> None:
    lowering, raising, number = MatrixQM.fock_ladder(5)
    assert np.allclose(np.diag(number.matrix).real, np.arange(5))
    commutator = MatrixQM.commutator(lowering, raising).matrix
    # truncation spoils [a, a+] = 1 only in the last Fock state
    assert np.allclose(np.diag(commutator)[:-1], 1.0)
    assert commutator[-1, -1] == pytest.approx(-4.0)


def test_fock_ladder_needs_two_states() -> None:
    with pytest.raises(ContractViolation):
        MatrixQM.fock_ladder(1)


@pytest.mark.parametrize(("n_spins"), [1, 2, 3, 4])
def test_spin_commutator(n_spins: int) -> None:
    mx, my, mz = MatrixQM.spin_magnetization(n_spins, hbar=1.0)
    commutator = MatrixQM.commutator(mx, my).matrix
    assert np.max(np.abs(commutator - 1j * mz.matrix)) < 1e-12


def test_spin_magnetization_spectrum() -> None:
    _, _, mz = MatrixQM.spin_magnetization(3, hbar=2.0)
    assert np.allclose(
        np.sort(np.linalg.eigvalsh(mz.matrix)), [-3, -1, -1, -1, 1, 1, 1, 3]
    )


@pytest.mark.parametrize(("n_spins"), [0, 9])
def test_spin_count_is_bounded(n_spins: int) -> None:
    with pytest.raises(ContractViolation):
        MatrixQM.spin_magnetization(n_spins)


def test_thermal_state_limits() -> None:
    hamiltonian = diagonal([0.0, 1.0, 3.0], "H")
    cold = MatrixQM.thermal_state(hamiltonian, 1e-3)
    hot = MatrixQM.thermal_state(hamiltonian, 1e6)
    assert np.allclose(np.diag(cold.matrix).real, [1.0, 0.0, 0.0])
    assert np.allclose(np.diag(hot.matrix).real, 1.0 / 3.0, atol=1e-5)


def test_thermal_state_needs_positive_temperature() -> None:
    with pytest.raises(ContractViolation):
        MatrixQM.thermal_state(diagonal([0.0, 1.0]), 0.0)


def test_density_matrix_validation() -> None:
    with pytest.raises(ValidationError):
        DensityMatrix(matrix=np.diag([0.6, 0.6]).astype(complex))
    with pytest.raises(ValidationError):
        DensityMatrix(matrix=np.diag([1.5, -0.5]).astype(complex))
    with pytest.raises(ValidationError):
        DensityMatrix(matrix=np.array([[0.5, 0.1], [0.2, 0.5]], dtype=complex))


def test_rho_estimate_pure_state() -> None:
    rho = DensityMatrix(matrix=np.diag([0.0, 1.0, 0.0]).astype(complex))
    report = MatrixQM.rho_estimate(rho, diagonal([1.0, 2.0, 3.0], "A"))
    assert report.mean == pytest.approx(2.0)
    assert report.std == pytest.approx(0.0, abs=1e-12)


def test_rho_estimate_needs_hermitian_operator() -> None:
    lowering, _, _ = MatrixQM.fock_ladder(3)
    rho = DensityMatrix(matrix=np.eye(3, dtype=complex) / 3)
    with pytest.raises(ContractViolation):
        MatrixQM.rho_estimate(rho, lowering)


def test_commuting_observables_have_a_lower_bound() -> None:
    rho = DensityMatrix(matrix=np.diag([0.4, 0.1, 0.1, 0.4]).astype(complex))
    report = MatrixQM.rho_relation_margins(
        rho, diagonal([1, 2, 3, 4], "A"), diagonal([2, 1, 1, 3], "B")
    )
    assert report.commuting
    assert report.rsur.rhs == pytest.approx(0.0, abs=1e-14)
    assert report.csf.rhs == pytest.approx(0.6, abs=1e-12)
    assert report.csf.margin >= 0
    assert report.nontrivial_commuting_bound


def test_equal_observables_saturate_csf() -> None:
    rng = np.random.default_rng(Config.ensemble_seed)
    rho = MatrixQM.random_density_matrix(rng, 4)
    op = MatrixQM.random_hermitian(rng, 4, "A")
    report = MatrixQM.rho_relation_margins(rho, op, op)
    assert report.csf.margin == pytest.approx(0.0, abs=1e-12)


@pytest.mark.parametrize(("d"), Config.ensemble_dimensions)
def test_random_ensemble_obeys_relations(d: int) -> None:
    rng = np.random.default_rng(Config.ensemble_seed)
    for _ in range(Config.ensemble_size):
        rho = MatrixQM.random_density_matrix(rng, d)
        report = MatrixQM.rho_relation_margins(
            rho, MatrixQM.random_hermitian(rng, d, "A"), MatrixQM.random_hermitian(rng, d, "B")
        )
        assert report.csf.margin >= -Config.csf_tolerance
        assert report.rsur.margin >= -Config.rsur_tolerance
        # CSF is the sharper of the two
        assert report.csf.rhs >= report.rsur.rhs - 1e-12


def test_dimension_mismatch() -> None:
    rho = DensityMatrix(matrix=np.eye(2, dtype=complex) / 2)
    with pytest.raises(ContractViolation):
        MatrixQM.rho_estimate(rho, diagonal([1.0, 2.0, 3.0]))
    with pytest.raises(ContractViolation):
        MatrixQM.commutator(diagonal([1.0, 2.0]), diagonal([1.0, 2.0, 3.0]))
