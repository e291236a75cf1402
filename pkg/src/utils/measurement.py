import logging
from collections.abc import Callable

import numpy as np
from scipy.integrate import simpson
from scipy.linalg import eigvalsh, solve

from src.config import Config
from src.errors import (
    ContractViolation,
    NonIntegrableSpectrumError,
    UnsupportedOperatorError,
)
from src.models.measurement import (
    ClassicalDistribution,
    ClassicalJoint,
    ClassicalMoments,
    ErrorEntry,
    ErrorReport,
    MeasurementChannel,
    SusceptibilitySpectrum,
    ThermoModel,
)
from src.models.numerics import Grid, TransferKernel
from src.models.qstate import DensityCurrent, EstimatorReport, OperatorSpec, PhysicalParams
from src.models.relations import RelationVerdict
from src.utils.numerics import Numerics
from src.utils.operators import NormalTerm, Operators

LOGGER = logging.getLogger(__name__)

_MAX_CLASSICAL_ORDER = 6


class Measurement:
    @staticmethod
    def classical_transform(
        w_in: ClassicalDistribution, kernel: TransferKernel
    ) -> ClassicalDistribution:
        if kernel.source != w_in.grid:
            raise ContractViolation("kernel source grid does not match the distribution")
        return ClassicalDistribution.normalized(
            kernel.target, Numerics.apply_kernel(kernel, w_in.density)
        )

    @staticmethod
    def classical_estimate(
        w: ClassicalDistribution, max_order: int = _MAX_CLASSICAL_ORDER
    ) -> ClassicalMoments:
        a = w.grid.nodes
        mean = Numerics.integrate(w.grid, a * w.density)
        central = {
            order: Numerics.integrate(w.grid, (a - mean) ** order * w.density)
            for order in range(2, max(max_order, 2) + 1)
        }
        return ClassicalMoments(
            mean=mean, std=float(np.sqrt(max(central[2], 0.0))), central=central
        )

    @staticmethod
    def error_indicators_classical(
        w_in: ClassicalDistribution, w_out: ClassicalDistribution, max_order: int = 2
    ) -> ErrorReport:
        if max_order < 2:
            raise ContractViolation(f"max_order must be at least 2, got {max_order}")
        if w_in.grid != w_out.grid:
            raise ContractViolation("in and out distributions must share one grid")
        moments_in = Measurement.classical_estimate(w_in, max_order)
        moments_out = Measurement.classical_estimate(w_out, max_order)
        entry = ErrorEntry(
            observable="a",
            mean=abs(moments_out.mean - moments_in.mean),
            std=abs(moments_out.std - moments_in.std),
            higher={
                order: abs(moments_out.central[order] - moments_in.central[order])
                for order in range(3, max_order + 1)
            },
        )
        return ErrorReport(entries=[entry])

    @staticmethod
    def classical_joint_csf(
        joint: ClassicalJoint,
        f_a: Callable[..., np.ndarray] | None = None,
        f_b: Callable[..., np.ndarray] | None = None,
    ) -> RelationVerdict:
        """
        Classical Cauchy-Schwarz check for two random variables on a joint
        density. By default A and B are the two coordinates.
        """
        a, b = joint.grid.coordinates
        values_a = f_a(a, b) if f_a is not None else a
        values_b = f_b(a, b) if f_b is not None else b

        def moment(values: np.ndarray) -> float:
            return float(np.sum(joint.grid.weights * values * joint.density))

        delta_a = values_a - moment(values_a)
        delta_b = values_b - moment(values_b)
        std_a = np.sqrt(max(moment(delta_a**2), 0.0))
        std_b = np.sqrt(max(moment(delta_b**2), 0.0))
        return RelationVerdict(lhs=std_a * std_b, rhs=abs(moment(delta_a * delta_b)))

    @staticmethod
    def gaussian_channel(grid: Grid, gamma: float, lam: float) -> MeasurementChannel:
        return MeasurementChannel(
            gamma=Numerics.gaussian_kernel(grid, gamma),
            lam=Numerics.gaussian_kernel(grid, lam),
        )

    @staticmethod
    def qms_apply(channel: MeasurementChannel, dc_in: DensityCurrent) -> DensityCurrent:
        if channel.gamma.source != dc_in.grid:
            raise ContractViolation("channel grid does not match the density grid")
        rho = np.clip(Numerics.apply_kernel(channel.gamma, dc_in.rho), 0.0, None)
        rho /= Numerics.integrate(channel.gamma.target, rho)
        current = np.stack(
            [Numerics.apply_kernel(channel.lam, component) for component in dc_in.current]
        )
        LOGGER.debug(
            "channel gamma=%g lambda=%g applied", channel.gamma.width, channel.lam.width
        )
        return DensityCurrent(grid=channel.gamma.target, rho=rho, current=current)

    @staticmethod
    def out_estimate(
        dc_out: DensityCurrent,
        op: OperatorSpec,
        params: PhysicalParams,
        partner: OperatorSpec | None = None,
    ) -> EstimatorReport:
        """
        Estimate an observable from density and current alone.

        Each operator reduces to a sum of c f(x) d^k terms, k <= 2, and
        rho times the local value Psi* d^k Psi / rho is expressed through rho
        and J. The mean integrates that product; the variance and the
        correlation integrate products of its deviations divided by rho.
        """
        mean, weighted = Measurement._local_estimate(dc_out, op, params)
        deviation = weighted - mean * dc_out.rho
        std = np.sqrt(
            max(
                Numerics.integrate(
                    dc_out.grid, Measurement._per_density(dc_out, np.abs(deviation) ** 2)
                ),
                0.0,
            )
        )

        correlation = None
        if partner is not None:
            partner_mean, partner_weighted = Measurement._local_estimate(
                dc_out, partner, params
            )
            partner_deviation = partner_weighted - partner_mean * dc_out.rho
            correlation = complex(
                Numerics.integrate(
                    dc_out.grid,
                    Measurement._per_density(
                        dc_out, np.conj(deviation) * partner_deviation
                    ),
                )
            )

        return EstimatorReport(
            observable=op.label,
            mean=mean,
            std=std,
            partner=partner.label if partner is not None else None,
            correlation=correlation,
        )

    @staticmethod
    def _per_density(dc: DensityCurrent, values: np.ndarray) -> np.ndarray:
        result = np.zeros(dc.grid.shape, dtype=values.dtype)
        resolved = dc.rho >= Config.density_floor
        result[resolved] = values[resolved] / dc.rho[resolved]
        return result

    @staticmethod
    def _local_estimate(
        dc: DensityCurrent, op: OperatorSpec, params: PhysicalParams
    ) -> tuple[complex, np.ndarray]:
        if dc.grid.ndim != 1:
            raise UnsupportedOperatorError(
                "out-state estimators support one-dimensional states only"
            )
        terms = Operators.normal_form(op)
        grid, rho, j = dc.grid, dc.rho, dc.j
        resolved = rho >= Config.density_floor
        scale = params.mass / params.hbar

        # rho times the local values of d and d^2
        weighted = {0: rho.astype(complex)}
        if any(term.order >= 1 for term in terms):
            drift = 0.5 * Numerics.differentiate(grid, rho, 1)
            weighted[1] = drift + 1j * scale * j
        if any(term.order == 2 for term in terms):
            root = np.sqrt(rho)
            flux = Numerics.differentiate(grid, j, 1)
            kinetic = np.zeros_like(rho)
            kinetic[resolved] = j[resolved] ** 2 / rho[resolved]
            weighted[2] = (
                root * Numerics.differentiate(grid, root, 2)
                + 1j * scale * flux
                - scale**2 * kinetic
            )
            divergence = abs(Numerics.integrate(grid, flux))
            if divergence >= Config.applicability_tolerance:
                LOGGER.warning("current divergence integrates to %.3g, not 0", divergence)

        mean = 0j
        rho_local = np.zeros(grid.shape, dtype=complex)
        for term in terms:
            factor = Measurement._factor(term, grid)
            contribution = term.coefficient * factor * weighted[term.order]
            rho_local[resolved] += contribution[resolved]
            if term.order == 1 and term.function is None:
                # the density-gradient part integrates to zero on decaying densities
                contribution = term.coefficient * (1j * scale * j)
            mean += Numerics.integrate(grid, contribution)
        return complex(mean), rho_local

    @staticmethod
    def _factor(term: NormalTerm, grid: Grid) -> np.ndarray | float:
        if term.function is None:
            return 1.0
        return np.asarray(term.function(*grid.coordinates), dtype=float)

    @staticmethod
    def out_central_moment(
        dc_out: DensityCurrent, op_a: OperatorSpec, op_b: OperatorSpec, r: int, s: int
    ) -> float:
        """
        Joint central moment <dA^r dB^s> of multiplicative observables from the
        out-density
        """
        if r < 0 or s < 0 or r + s < 1:
            raise ContractViolation("moment orders must satisfy r, s >= 0 and r + s >= 1")
        values = []
        for op in (op_a, op_b):
            terms = Operators.normal_form(op)
            if any(term.order > 0 for term in terms):
                raise UnsupportedOperatorError(
                    f"higher out-state moments need multiplicative operators, not {op.label!r}"
                )
            values.append(
                sum(
                    (term.coefficient * Measurement._factor(term, dc_out.grid)).real
                    * np.ones(dc_out.grid.shape)
                    for term in terms
                )
            )
        deviations = [
            value - Numerics.integrate(dc_out.grid, value * dc_out.rho) for value in values
        ]
        return float(
            Numerics.integrate(
                dc_out.grid, deviations[0] ** r * deviations[1] ** s * dc_out.rho
            )
        )

    @staticmethod
    def error_indicators_quantum(
        reports_in: list[EstimatorReport], reports_out: list[EstimatorReport]
    ) -> ErrorReport:
        keys_in = [(report.observable, report.partner) for report in reports_in]
        keys_out = [(report.observable, report.partner) for report in reports_out]
        if keys_in != keys_out:
            raise ContractViolation(
                f"observable lists differ: {keys_in} vs {keys_out}"
            )
        entries = []
        for report_in, report_out in zip(reports_in, reports_out):
            correlation = None
            if report_in.correlation is not None and report_out.correlation is not None:
                correlation = abs(report_out.correlation - report_in.correlation)
            entries.append(
                ErrorEntry(
                    observable=report_in.observable,
                    partner=report_in.partner,
                    mean=abs(report_out.mean - report_in.mean),
                    std=abs(report_out.std - report_in.std),
                    correlation=correlation,
                )
            )
        return ErrorReport(entries=entries)

    @staticmethod
    def fdt_dispersion(
        spectrum: SusceptibilitySpectrum, temperature: float, params: PhysicalParams
    ) -> float:
        """
        Variance from the imaginary susceptibility, integrated over the odd
        extension to negative frequencies
        """
        if temperature <= 0:
            raise ContractViolation(f"temperature must be positive, got {temperature}")
        tail = abs(spectrum.chi[-1])
        if tail >= Config.spectrum_tail_tolerance:
            raise NonIntegrableSpectrumError(
                f"susceptibility does not decay: |chi''| = {tail:.3g} at the last frequency"
            )
        omega = np.concatenate([-spectrum.frequencies[::-1], spectrum.frequencies])
        chi = np.concatenate([-spectrum.chi[::-1], spectrum.chi])
        occupation = 1.0 / np.tanh(params.hbar * omega / (2.0 * params.k_b * temperature))
        return float(params.hbar / (2.0 * np.pi) * simpson(occupation * chi, x=omega))

    @staticmethod
    def thermo_dispersion(model: ThermoModel) -> float:
        hessian = model.hessian
        if not np.allclose(hessian, hessian.T, rtol=0.0, atol=Config.hermitian_tolerance):
            raise ContractViolation("entropy Hessian must be symmetric")
        if np.max(eigvalsh(hessian)) >= 0:
            raise ContractViolation("entropy Hessian must be negative definite")
        # sign flipped so the dispersion is non-negative
        response = solve(-hessian, model.gradient, assume_a="pos")
        return float(model.k_b * model.gradient @ response)
