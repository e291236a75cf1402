import logging
from functools import reduce

import numpy as np
from scipy.linalg import eigh

from src.config import Config
from src.errors import ContractViolation
from src.models.matrixqm import DensityMatrix, FiniteOperator, RhoRelationReport
from src.models.qstate import EstimatorReport
from src.models.relations import RelationVerdict

LOGGER = logging.getLogger(__name__)

_PAULI = {
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "z": np.array([[1, 0], [0, -1]], dtype=complex),
}
_MAX_SPINS = 8


class MatrixQM:
    @staticmethod
    def fock_ladder(d: int) -> tuple[FiniteOperator, FiniteOperator, FiniteOperator]:
        """
        Truncated annihilation, creation and number operators on d Fock states
        """
        if d < 2:
            raise ContractViolation(f"Fock space dimension must be at least 2, got {d}")
        lowering = np.diag(np.sqrt(np.arange(1, d)), k=1).astype(complex)
        raising = lowering.conj().T
        return (
            FiniteOperator(matrix=lowering, label="a"),
            FiniteOperator(matrix=raising, label="a+"),
            FiniteOperator(matrix=raising @ lowering, hermitian=True, label="N"),
        )

    @staticmethod
    def spin_magnetization(
        n_spins: int, gamma: float = 1.0, hbar: float = 1.0
    ) -> tuple[FiniteOperator, FiniteOperator, FiniteOperator]:
        if not 1 <= n_spins <= _MAX_SPINS:
            raise ContractViolation(
                f"number of spins must lie in 1..{_MAX_SPINS}, got {n_spins}"
            )
        identity = np.eye(2, dtype=complex)
        scale = 0.5 * gamma * hbar

        def total(pauli: np.ndarray) -> np.ndarray:
            return sum(
                reduce(
                    np.kron,
                    [pauli if site == spin else identity for site in range(n_spins)],
                )
                for spin in range(n_spins)
            )

        return tuple(
            FiniteOperator(matrix=scale * total(pauli), hermitian=True, label=f"M{axis}")
            for axis, pauli in _PAULI.items()
        )

    @staticmethod
    def commutator(op_a: FiniteOperator, op_b: FiniteOperator) -> FiniteOperator:
        MatrixQM._check_dimensions(op_a, op_b)
        a, b = op_a.matrix, op_b.matrix
        return FiniteOperator(matrix=a @ b - b @ a, label=f"[{op_a.label},{op_b.label}]")

    @staticmethod
    def thermal_state(
        hamiltonian: FiniteOperator, temperature: float, k_b: float = 1.0
    ) -> DensityMatrix:
        if not hamiltonian.hermitian:
            raise ContractViolation("a thermal state needs a Hermitian Hamiltonian")
        if temperature <= 0:
            raise ContractViolation(f"temperature must be positive, got {temperature}")
        energies, vectors = eigh(hamiltonian.matrix)
        # shifted by the ground energy so the weights cannot overflow
        weights = np.exp(-(energies - energies.min()) / (k_b * temperature))
        weights /= weights.sum()
        matrix = (vectors * weights) @ vectors.conj().T
        return DensityMatrix(matrix=0.5 * (matrix + matrix.conj().T))

    @staticmethod
    def random_density_matrix(rng: np.random.Generator, d: int) -> DensityMatrix:
        g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
        matrix = g @ g.conj().T
        matrix = matrix / np.trace(matrix).real
        return DensityMatrix(matrix=0.5 * (matrix + matrix.conj().T))

    @staticmethod
    def random_hermitian(rng: np.random.Generator, d: int, label: str = "") -> FiniteOperator:
        g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
        return FiniteOperator.hermitian_from(g, label=label)

    @staticmethod
    def rho_estimate(rho: DensityMatrix, op: FiniteOperator) -> EstimatorReport:
        MatrixQM._check_dimensions(rho, op)
        if not op.hermitian:
            raise ContractViolation(f"operator {op.label!r} must be Hermitian")
        mean, deviation = MatrixQM._deviation(rho, op)
        # Tr(dA rho dA) stays non-negative for any ordering of round-off
        variance = np.trace(deviation @ rho.matrix @ deviation).real
        return EstimatorReport(
            observable=op.label, mean=mean, std=float(np.sqrt(max(variance, 0.0)))
        )

    @staticmethod
    def rho_relation_margins(
        rho: DensityMatrix, op_a: FiniteOperator, op_b: FiniteOperator
    ) -> RhoRelationReport:
        MatrixQM._check_dimensions(rho, op_a)
        MatrixQM._check_dimensions(op_a, op_b)
        std_a = MatrixQM.rho_estimate(rho, op_a).std
        std_b = MatrixQM.rho_estimate(rho, op_b).std
        _, deviation_a = MatrixQM._deviation(rho, op_a)
        _, deviation_b = MatrixQM._deviation(rho, op_b)
        correlation = np.trace(rho.matrix @ deviation_a @ deviation_b)
        commutator = MatrixQM.commutator(op_a, op_b).matrix
        commutator_mean = np.trace(rho.matrix @ commutator)

        report = RhoRelationReport(
            csf=RelationVerdict(lhs=std_a * std_b, rhs=abs(correlation)),
            rsur=RelationVerdict(
                lhs=std_a * std_b, rhs=0.5 * abs(commutator_mean), applicable=True
            ),
            commuting=bool(np.max(np.abs(commutator)) < Config.hermitian_tolerance),
        )
        LOGGER.debug(
            "rho relations %s,%s: csf margin %.3g, rsur margin %.3g",
            op_a.label,
            op_b.label,
            report.csf.margin,
            report.rsur.margin,
        )
        return report

    @staticmethod
    def _deviation(rho: DensityMatrix, op: FiniteOperator) -> tuple[float, np.ndarray]:
        mean = float(np.trace(op.matrix @ rho.matrix).real)
        return mean, op.matrix - mean * np.eye(op.dimension)

    @staticmethod
    def _check_dimensions(
        left: FiniteOperator | DensityMatrix, right: FiniteOperator | DensityMatrix
    ) -> None:
        if left.dimension != right.dimension:
            raise ContractViolation(
                f"dimension mismatch: {left.dimension} vs {right.dimension}"
            )
