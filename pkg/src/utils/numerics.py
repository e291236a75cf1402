import logging

import numpy as np
from scipy.linalg import circulant, toeplitz

from src.config import Config
from src.errors import ContractViolation
from src.models.numerics import Grid, Grid2D, TransferKernel

LOGGER = logging.getLogger(__name__)

# Interior stencils on offsets -2..2
_CENTRAL = {
    1: np.array([1.0, -8.0, 0.0, 8.0, -1.0]) / 12.0,
    2: np.array([-1.0, 16.0, -30.0, 16.0, -1.0]) / 12.0,
}


class Numerics:
    @staticmethod
    def check_shape(grid: Grid | Grid2D, samples: np.ndarray) -> None:
        if np.shape(samples) != grid.shape:
            raise ContractViolation(
                f"samples of shape {np.shape(samples)} do not match grid shape {grid.shape}"
            )

    @staticmethod
    def integrate(grid: Grid | Grid2D, samples: np.ndarray) -> complex | float:
        samples = np.asarray(samples)
        Numerics.check_shape(grid, samples)
        total = np.sum(grid.weights * samples)
        if np.iscomplexobj(total):
            return complex(total)
        return float(total)

    @staticmethod
    def inner(grid: Grid | Grid2D, left: np.ndarray, right: np.ndarray) -> complex:
        """
        Scalar product (left, right), antilinear in the first argument
        """
        return complex(Numerics.integrate(grid, np.conj(left) * right))

    @staticmethod
    def differentiate(
        grid: Grid | Grid2D,
        samples: np.ndarray,
        order: int = 1,
        axis: int = 0,
        periodic: bool | None = None,
    ) -> np.ndarray:
        """
        Fourth-order central differences in the interior.

        Line axes fall back to second-order stencils on the two outermost
        nodes at each end. Periodic axes wrap around unless ``periodic`` is
        False, which marks samples that jump across the seam.
        """
        if order not in _CENTRAL:
            raise ContractViolation(f"unsupported derivative order {order}")
        if not 0 <= axis < grid.ndim:
            raise ContractViolation(f"axis {axis} is invalid for a {grid.ndim}D grid")
        samples = np.asarray(samples)
        Numerics.check_shape(grid, samples)

        axis_grid = grid.axes[axis]
        wrap = axis_grid.is_periodic and periodic is not False
        f = np.moveaxis(samples, axis, 0)

        if wrap:
            result = sum(
                coefficient * np.roll(f, -offset, axis=0)
                for offset, coefficient in zip(range(-2, 3), _CENTRAL[order])
                if coefficient != 0.0
            )
        else:
            result = Numerics._line_stencil(f, order)

        return np.moveaxis(result, 0, axis) / axis_grid.spacing**order

    @staticmethod
    def _line_stencil(f: np.ndarray, order: int) -> np.ndarray:
        c = _CENTRAL[order]
        result = np.empty_like(f, dtype=np.result_type(f, float))
        result[2:-2] = (
            c[0] * f[:-4] + c[1] * f[1:-3] + c[2] * f[2:-2] + c[3] * f[3:-1] + c[4] * f[4:]
        )
        if order == 1:
            result[1] = (f[2] - f[0]) / 2.0
            result[-2] = (f[-1] - f[-3]) / 2.0
            result[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / 2.0
            result[-1] = (3.0 * f[-1] - 4.0 * f[-2] + f[-3]) / 2.0
        else:
            result[1] = f[2] - 2.0 * f[1] + f[0]
            result[-2] = f[-1] - 2.0 * f[-2] + f[-3]
            result[0] = 2.0 * f[0] - 5.0 * f[1] + 4.0 * f[2] - f[3]
            result[-1] = 2.0 * f[-1] - 5.0 * f[-2] + 4.0 * f[-3] - f[-4]
        return result

    @staticmethod
    def gaussian_kernel(grid: Grid, width: float) -> TransferKernel:
        if width < 0:
            raise ContractViolation(f"kernel width must be non-negative, got {width}")
        weights = grid.weights

        if width == 0:
            matrix = np.diag(1.0 / weights)
        else:
            offsets = grid.spacing * np.arange(grid.n)
            if grid.is_periodic:
                period = grid.upper - grid.lower
                offsets = np.minimum(offsets, period - offsets)
                matrix = circulant(np.exp(-(offsets**2) / (2.0 * width**2)))
            else:
                matrix = toeplitz(np.exp(-(offsets**2) / (2.0 * width**2)))
            matrix = Numerics._balance(matrix, weights)

        return TransferKernel(source=grid, target=grid, width=width, matrix=matrix)

    @staticmethod
    def _balance(matrix: np.ndarray, weights: np.ndarray) -> np.ndarray:
        """
        Scale a symmetric profile so no weighted row exceeds one, then fold each
        row's deficit onto the diagonal. The matrix stays symmetric, so the
        weighted columns follow the rows.

        On line grids the rows within a kernel width of either end lose the
        part of the profile outside the grid, up to half of it at the end
        nodes. That mass returns on the diagonal, so those nodes keep part of
        their input unblurred. Grids must extend well past the kernel width
        where the input is not negligible.
        """
        matrix = matrix / np.max(matrix @ weights)
        diagonal = np.diag_indices_from(matrix)
        for iteration in range(Config.kernel_balance_iterations):
            deficit = 1.0 - matrix @ weights
            residual = np.max(np.abs(deficit))
            LOGGER.debug("kernel balancing pass %d: residual %.3e", iteration, residual)
            if residual < Config.kernel_marginal_tolerance / 100:
                break
            matrix[diagonal] += deficit / weights
        return matrix

    @staticmethod
    def apply_kernel(kernel: TransferKernel, samples: np.ndarray) -> np.ndarray:
        samples = np.asarray(samples, dtype=float)
        if samples.shape != (kernel.source.n,):
            raise ContractViolation(
                f"samples of shape {samples.shape} do not match the kernel source grid"
            )
        return kernel.matrix @ (kernel.source.weights * samples)
