import logging

import numpy as np

from src.errors import ContractViolation, DegenerateStateError
from src.models.numerics import Grid, Grid2D
from src.models.qstate import (
    DensityCurrent,
    Derivative,
    EstimatorReport,
    Multiply,
    OperatorSpec,
    Product,
    Scaled,
    Sum,
    WaveFunction,
)
from src.utils.numerics import Numerics

LOGGER = logging.getLogger(__name__)


class QState:
    @staticmethod
    def require_normalized(wf: WaveFunction) -> None:
        if not wf.is_normalized:
            raise ContractViolation(
                f"wave function is not normalized (norm squared {wf.norm_squared:.12g})"
            )

    @staticmethod
    def normalize(wf: WaveFunction) -> WaveFunction:
        norm_squared = wf.norm_squared
        if not np.isfinite(norm_squared) or norm_squared <= 0.0:
            raise DegenerateStateError("cannot normalize a zero-norm wave function")
        return wf.with_samples(wf.samples / np.sqrt(norm_squared))

    @staticmethod
    def density_current(wf: WaveFunction) -> DensityCurrent:
        QState.require_normalized(wf)
        psi = wf.samples
        rho = np.abs(psi) ** 2
        scale = wf.params.hbar / wf.params.mass
        current = np.stack(
            [
                scale
                * np.imag(
                    np.conj(psi) * Numerics.differentiate(wf.grid, psi, 1, axis=axis)
                )
                for axis in range(wf.grid.ndim)
            ]
        )
        return DensityCurrent(grid=wf.grid, rho=rho, current=current)

    @staticmethod
    def apply_operator(op: OperatorSpec, wf: WaveFunction) -> np.ndarray:
        result, _ = QState.evaluate(op, wf.grid, wf.samples, wf.grid.is_periodic)
        return result

    @staticmethod
    def evaluate(
        op: OperatorSpec,
        grid: Grid | Grid2D,
        samples: np.ndarray,
        periodic: bool,
    ) -> tuple[np.ndarray, bool]:
        """
        Apply ``op`` to samples. The flag tracks whether the samples are still
        continuous across the seam of a periodic grid.
        """
        match op:
            case Multiply():
                values = QState._multiplier(op, grid)
                periodic = periodic and QState._continuous_across_seam(op, grid)
                return values * samples, periodic
            case Derivative():
                if op.axis >= grid.ndim:
                    raise ContractViolation(
                        f"operator {op.label!r} acts on axis {op.axis} of a {grid.ndim}D grid"
                    )
                derivative = Numerics.differentiate(
                    grid, samples, op.order, op.axis, periodic
                )
                return op.coefficient * derivative, periodic
            case Scaled():
                result, periodic = QState.evaluate(op.operand, grid, samples, periodic)
                return op.factor * result, periodic
            case Sum():
                results = [
                    QState.evaluate(term, grid, samples, periodic) for term in op.terms
                ]
                total = sum(result for result, _ in results)
                return total, all(flag for _, flag in results)
            case Product():
                for factor in reversed(op.factors):
                    samples, periodic = QState.evaluate(factor, grid, samples, periodic)
                return samples, periodic
        raise ContractViolation(f"unknown operator node {type(op).__name__}")

    @staticmethod
    def _multiplier(op: Multiply, grid: Grid | Grid2D) -> np.ndarray:
        try:
            values = np.asarray(op.function(*grid.coordinates))
        except IndexError as err:
            raise ContractViolation(
                f"operator {op.label!r} needs more axes than the grid has"
            ) from err
        if np.iscomplexobj(values):
            if np.max(np.abs(values.imag)) > 0.0:
                raise ContractViolation(
                    f"multiplier {op.label!r} must be real-valued"
                )
            values = values.real
        return np.broadcast_to(values, grid.shape)

    @staticmethod
    def _continuous_across_seam(op: Multiply, grid: Grid | Grid2D) -> bool:
        if not grid.is_periodic:
            return False
        lower, upper = (
            np.asarray(op.function(np.array([bound])), dtype=float)
            for bound in (grid.lower, grid.upper)
        )
        return bool(np.allclose(lower, upper, rtol=1e-12, atol=1e-12))

    @staticmethod
    def estimate(
        wf: WaveFunction, op: OperatorSpec, partner: OperatorSpec | None = None
    ) -> EstimatorReport:
        QState.require_normalized(wf)
        mean, deviation = QState.deviation(wf, op)
        std = np.sqrt(max(Numerics.inner(wf.grid, deviation, deviation).real, 0.0))

        correlation = None
        if partner is not None:
            _, partner_deviation = QState.deviation(wf, partner)
            correlation = Numerics.inner(wf.grid, deviation, partner_deviation)

        return EstimatorReport(
            observable=op.label,
            mean=mean,
            std=std,
            partner=partner.label if partner is not None else None,
            correlation=correlation,
        )

    @staticmethod
    def expectation(wf: WaveFunction, op: OperatorSpec) -> complex:
        return Numerics.inner(wf.grid, wf.samples, QState.apply_operator(op, wf))

    @staticmethod
    def deviation(wf: WaveFunction, op: OperatorSpec) -> tuple[complex, np.ndarray]:
        applied = QState.apply_operator(op, wf)
        mean = Numerics.inner(wf.grid, wf.samples, applied)
        return mean, applied - mean * wf.samples

    @staticmethod
    def central_moment(
        wf: WaveFunction, op_a: OperatorSpec, op_b: OperatorSpec, r: int, s: int
    ) -> complex:
        if r < 0 or s < 0 or r + s < 1:
            raise ContractViolation("moment orders must satisfy r, s >= 0 and r + s >= 1")
        QState.require_normalized(wf)
        left = QState._deviation_power(wf, op_a, r)
        right = QState._deviation_power(wf, op_b, s)
        return Numerics.inner(wf.grid, left, right)

    @staticmethod
    def _deviation_power(wf: WaveFunction, op: OperatorSpec, power: int) -> np.ndarray:
        samples = wf.samples
        if power == 0:
            return samples
        mean = QState.expectation(wf, op)
        periodic = wf.grid.is_periodic
        for _ in range(power):
            applied, periodic = QState.evaluate(op, wf.grid, samples, periodic)
            samples = applied - mean * samples
        return samples
