import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator

from src.config import Config
from src.models.relations import RelationVerdict
from src.models.types import ComplexArray


def _hermitian_defect(matrix: np.ndarray) -> float:
    return float(np.max(np.abs(matrix - matrix.conj().T)))


class FiniteOperator(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    matrix: ComplexArray
    hermitian: bool = False
    label: str = ""

    @model_validator(mode="after")
    def check_matrix(self) -> "FiniteOperator":
        if self.matrix.ndim != 2 or self.matrix.shape[0] != self.matrix.shape[1]:
            raise ValueError(f"operator matrix must be square, got {self.matrix.shape}")
        if self.hermitian and _hermitian_defect(self.matrix) >= Config.hermitian_tolerance:
            raise ValueError(f"operator {self.label!r} is flagged Hermitian but is not")
        return self

    @property
    def dimension(self) -> int:
        return self.matrix.shape[0]

    @classmethod
    def hermitian_from(cls, matrix: np.ndarray, label: str = "") -> "FiniteOperator":
        """
        Symmetrize round-off before flagging the operator Hermitian
        """
        matrix = np.asarray(matrix, dtype=complex)
        return cls(matrix=0.5 * (matrix + matrix.conj().T), hermitian=True, label=label)


class DensityMatrix(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    matrix: ComplexArray

    @model_validator(mode="after")
    def check_state(self) -> "DensityMatrix":
        tolerance = Config.hermitian_tolerance
        if self.matrix.ndim != 2 or self.matrix.shape[0] != self.matrix.shape[1]:
            raise ValueError(f"density matrix must be square, got {self.matrix.shape}")
        if _hermitian_defect(self.matrix) >= tolerance:
            raise ValueError("density matrix is not Hermitian")
        trace = np.trace(self.matrix)
        if abs(trace - 1.0) > tolerance:
            raise ValueError(f"density matrix has trace {trace}, not 1")
        if np.min(np.linalg.eigvalsh(self.matrix)) < -tolerance:
            raise ValueError("density matrix has a negative eigenvalue")
        return self

    @property
    def dimension(self) -> int:
        return self.matrix.shape[0]


class RhoRelationReport(BaseModel):
    """
    Both density-matrix relations for one (rho, A, B) triple. The commuting
    flag with a positive correlation marks the non-trivial lower bound for
    commuting observables.
    """

    model_config = ConfigDict(frozen=True)

    csf: RelationVerdict
    rsur: RelationVerdict
    commuting: bool

    @property
    def nontrivial_commuting_bound(self) -> bool:
        return self.commuting and self.csf.rhs > Config.csf_tolerance
