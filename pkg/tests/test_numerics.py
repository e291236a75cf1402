import numpy as np
import pytest
from pydantic import ValidationError

from src.errors import ContractViolation
from src.models.numerics import Grid, Grid2D, TransferKernel
from src.utils.numerics import Numerics


def gaussian(x: np.ndarray, mean: float, std: float) -> np.ndarray:
    return np.exp(-((x - mean) ** 2) / (2.0 * std**2)) / (np.sqrt(2.0 * np.pi) * std)


@pytest.mark.parametrize(("n"), [2049, 2048])
def test_integrate_gaussian(n: int) -> None:
    grid = Grid.line(0.0, 10.0, n)
    assert Numerics.integrate(grid, gaussian(grid.nodes, 0.0, 1.0)) == pytest.approx(
        1.0, abs=1e-12
    )


def test_integrate_periodic_uniform() -> None:
    grid = Grid.periodic(0.0, 2.0 * np.pi, 256)
    assert Numerics.integrate(grid, np.full(256, 1.0 / (2.0 * np.pi))) == pytest.approx(
        1.0, abs=1e-14
    )


def test_integrate_complex() -> None:
    grid = Grid.line(0.0, 10.0, 1001)
    value = Numerics.integrate(grid, (1.0 + 2.0j) * gaussian(grid.nodes, 0.0, 1.0))
    assert isinstance(value, complex)
    assert value == pytest.approx(1.0 + 2.0j, abs=1e-12)


def test_integrate_shape_mismatch() -> None:
    with pytest.raises(ContractViolation):
        Numerics.integrate(Grid.line(0.0, 1.0, 101), np.ones(100))


def test_grid_bounds_are_validated() -> None:
    with pytest.raises(ValidationError):
        Grid(lower=1.0, upper=0.0, n=16)
    with pytest.raises(ValidationError):
        Grid.line(0.0, 1.0, 4)


def test_simpson_and_trapezoid_weights() -> None:
    odd = Grid(lower=0.0, upper=2.0, n=9)
    even = Grid(lower=0.0, upper=2.0, n=10)
    assert odd.weights[:3] == pytest.approx(np.array([1.0, 4.0, 2.0]) * odd.spacing / 3)
    assert even.weights[0] == pytest.approx(even.spacing / 2)
    assert odd.weights.sum() == pytest.approx(2.0)
    assert even.weights.sum() == pytest.approx(2.0)


def test_grid2d_needs_line_axes() -> None:
    with pytest.raises(ValidationError):
        Grid2D(x=Grid.periodic(0.0, 1.0, 16), y=Grid.line(0.0, 1.0, 16))


def test_differentiate_periodic_exponential() -> None:
    grid = Grid.periodic(0.0, 2.0 * np.pi, 512)
    samples = np.exp(3j * grid.nodes)
    derivative = Numerics.differentiate(grid, samples, 1)
    assert np.max(np.abs(derivative - 3j * samples)) < 1e-6


def test_differentiate_line_interior() -> None:
    grid = Grid.line(np.pi, np.pi, 1001)
    first = Numerics.differentiate(grid, np.sin(grid.nodes), 1)
    second = Numerics.differentiate(grid, np.sin(grid.nodes), 2)
    assert np.max(np.abs(first - np.cos(grid.nodes))[2:-2]) < 1e-8
    assert np.max(np.abs(second + np.sin(grid.nodes))[2:-2]) < 1e-8
    # second-order closures at the ends
    assert np.max(np.abs(first - np.cos(grid.nodes))) < 1e-4


@pytest.mark.parametrize(("order", "factor"), [(1, 3j), (2, -9.0)])
def test_differentiate_periodic_is_fourth_order(order: int, factor: complex) -> None:
    errors = []
    for n in (64, 128):
        grid = Grid.periodic(0.0, 2.0 * np.pi, n)
        samples = np.exp(3j * grid.nodes)
        derivative = Numerics.differentiate(grid, samples, order)
        errors.append(np.max(np.abs(derivative - factor * samples)))
    assert errors[0] / errors[1] >= 12.0


def test_differentiate_line_is_fourth_order() -> None:
    errors = []
    for n in (101, 201):
        grid = Grid.line(0.0, 8.0, n)
        samples = gaussian(grid.nodes, 0.0, 1.0)
        derivative = Numerics.differentiate(grid, samples, 1)
        errors.append(np.max(np.abs(derivative + grid.nodes * samples)))
    assert errors[0] / errors[1] >= 12.0


def test_differentiate_along_second_axis() -> None:
    grid = Grid2D(x=Grid.line(0.0, 1.0, 101), y=Grid.line(0.0, 1.0, 201))
    x, y = grid.coordinates
    derivative = Numerics.differentiate(grid, x * y**2, 1, axis=1)
    assert np.max(np.abs(derivative - 2.0 * x * y)) < 1e-10


def test_differentiate_rejects_order_three() -> None:
    grid = Grid.line(0.0, 1.0, 101)
    with pytest.raises(ContractViolation):
        Numerics.differentiate(grid, grid.nodes, 3)


@pytest.mark.parametrize(("width"), [0.0, 0.05, 0.5, 2.0])
def test_gaussian_kernel_marginals(width: float) -> None:
    grid = Grid.line(0.0, 10.0, 1025)
    kernel = Numerics.gaussian_kernel(grid, width)
    assert np.max(np.abs(kernel.row_integrals() - 1.0)) < 1e-10
    assert np.max(np.abs(kernel.column_integrals() - 1.0)) < 1e-10
    assert np.all(kernel.matrix >= 0)


def test_gaussian_kernel_end_rows_keep_lost_mass() -> None:
    grid = Grid.line(0.0, 10.0, 1025)
    kernel = Numerics.gaussian_kernel(grid, 0.5)
    kept = np.diag(kernel.matrix) * grid.weights
    assert kept[0] == pytest.approx(0.5, abs=0.02)
    assert kept[-1] == pytest.approx(0.5, abs=0.02)
    assert kept[grid.n // 2] < 0.02


def test_gaussian_kernel_periodic_marginals() -> None:
    grid = Grid.periodic(0.0, 2.0 * np.pi, 512)
    kernel = Numerics.gaussian_kernel(grid, 0.3)
    assert np.max(np.abs(kernel.row_integrals() - 1.0)) < 1e-10


def test_gaussian_kernel_rejects_negative_width() -> None:
    with pytest.raises(ContractViolation):
        Numerics.gaussian_kernel(Grid.line(0.0, 1.0, 101), -0.1)


def test_kernel_validator_rejects_unbalanced_matrix() -> None:
    grid = Grid.line(0.0, 1.0, 11)
    with pytest.raises(ValidationError):
        TransferKernel(source=grid, target=grid, width=0.1, matrix=np.ones((11, 11)))


def test_ideal_kernel_is_identity() -> None:
    grid = Grid.line(0.0, 8.0, 513)
    samples = gaussian(grid.nodes, 0.5, 1.0)
    kernel = Numerics.gaussian_kernel(grid, 0.0)
    assert np.max(np.abs(Numerics.apply_kernel(kernel, samples) - samples)) < 1e-12


def test_apply_kernel_adds_variances() -> None:
    grid = Grid.line(0.0, 12.0, 2049)
    kernel = Numerics.gaussian_kernel(grid, 0.5)
    out = Numerics.apply_kernel(kernel, gaussian(grid.nodes, 0.0, 1.0))
    variance = Numerics.integrate(grid, grid.nodes**2 * out)
    assert Numerics.integrate(grid, out) == pytest.approx(1.0, abs=1e-10)
    assert np.sqrt(variance) == pytest.approx(np.sqrt(1.25), rel=1e-6)


def test_apply_kernel_shape_mismatch() -> None:
    kernel = Numerics.gaussian_kernel(Grid.line(0.0, 1.0, 101), 0.1)
    with pytest.raises(ContractViolation):
        Numerics.apply_kernel(kernel, np.ones(100))
