import logging

import numpy as np
from scipy.linalg import eigvalsh

from src.config import Config
from src.errors import ContractViolation
from src.models.qstate import OperatorSpec, WaveFunction
from src.models.relations import GramReport, RelationVerdict
from src.utils.numerics import Numerics
from src.utils.qstate import QState

LOGGER = logging.getLogger(__name__)


class Relations:
    @staticmethod
    def csf_margin(
        wf: WaveFunction, op_a: OperatorSpec, op_b: OperatorSpec
    ) -> RelationVerdict:
        report = QState.estimate(wf, op_a, partner=op_b)
        partner = QState.estimate(wf, op_b)
        verdict = RelationVerdict(
            lhs=report.std * partner.std, rhs=abs(report.correlation)
        )
        LOGGER.debug(
            "CSF %s,%s: lhs=%.6g rhs=%.6g", op_a.label, op_b.label, verdict.lhs, verdict.rhs
        )
        return verdict

    @staticmethod
    def hermiticity_defect(
        wf: WaveFunction, op_a: OperatorSpec, op_b: OperatorSpec
    ) -> tuple[complex, complex]:
        """
        d1 = (A psi, B psi) - (psi, AB psi), d2 = (B psi, A psi) - (psi, BA psi)
        """
        QState.require_normalized(wf)
        a_psi = QState.apply_operator(op_a, wf)
        b_psi = QState.apply_operator(op_b, wf)
        ab = QState.expectation(wf, op_a @ op_b)
        ba = QState.expectation(wf, op_b @ op_a)
        d1 = Numerics.inner(wf.grid, a_psi, b_psi) - ab
        d2 = Numerics.inner(wf.grid, b_psi, a_psi) - ba
        return d1, d2

    @staticmethod
    def rsur_margin(
        wf: WaveFunction, op_a: OperatorSpec, op_b: OperatorSpec
    ) -> RelationVerdict:
        d1, d2 = Relations.hermiticity_defect(wf, op_a, op_b)
        std_a = QState.estimate(wf, op_a).std
        std_b = QState.estimate(wf, op_b).std
        commutator = QState.expectation(wf, op_a @ op_b) - QState.expectation(
            wf, op_b @ op_a
        )
        applicable = max(abs(d1), abs(d2)) < Config.applicability_tolerance
        if not applicable:
            LOGGER.info(
                "RSUR %s,%s not applicable: |d1|=%.3g |d2|=%.3g",
                op_a.label,
                op_b.label,
                abs(d1),
                abs(d2),
            )
        return RelationVerdict(
            lhs=std_a * std_b,
            rhs=0.5 * abs(commutator),
            applicable=applicable,
            defects=(d1, d2),
        )

    @staticmethod
    def gram_determinant(wf: WaveFunction, ops: list[OperatorSpec]) -> GramReport:
        if len(ops) < 2:
            raise ContractViolation("a Gram determinant needs at least two operators")
        QState.require_normalized(wf)
        deviations = [QState.deviation(wf, op)[1] for op in ops]
        size = len(ops)
        matrix = np.empty((size, size), dtype=complex)
        for j in range(size):
            for k in range(size):
                matrix[j, k] = Numerics.inner(wf.grid, deviations[j], deviations[k])
        # eigenvalues of the Hermitian part; the product is the determinant
        eigenvalues = eigvalsh(0.5 * (matrix + matrix.conj().T))
        return GramReport(
            matrix=matrix,
            eigenvalues=eigenvalues,
            determinant=float(np.prod(eigenvalues)),
        )

    @staticmethod
    def multi_temporal_csf(
        wf1: WaveFunction,
        wf2: WaveFunction,
        op_a: OperatorSpec,
        op_b: OperatorSpec,
    ) -> RelationVerdict:
        if wf1.grid != wf2.grid:
            raise ContractViolation("both states must share one grid")
        QState.require_normalized(wf1)
        QState.require_normalized(wf2)
        _, deviation_a = QState.deviation(wf1, op_a)
        _, deviation_b = QState.deviation(wf2, op_b)
        std_a = np.sqrt(max(Numerics.inner(wf1.grid, deviation_a, deviation_a).real, 0.0))
        std_b = np.sqrt(max(Numerics.inner(wf2.grid, deviation_b, deviation_b).real, 0.0))
        return RelationVerdict(
            lhs=std_a * std_b,
            rhs=abs(Numerics.inner(wf1.grid, deviation_a, deviation_b)),
        )
