import logging
import math

import numpy as np

from src.config import Config
from src.errors import ContractViolation, TruncationError, UnsupportedOrderError, UsageError
from src.misc import Observable, Representation
from src.models.numerics import Grid, Grid2D
from src.models.qstate import PhysicalParams, WaveFunction
from src.models.states import ClosedFormValue, OracleCheck, StateCatalogEntry
from src.utils.operators import Operators
from src.utils.qstate import QState

LOGGER = logging.getLogger(__name__)

_SQRT2 = math.sqrt(2.0)
_WELL_PADDING = (4, 5)


class States:
    @staticmethod
    def hermite_functions(n_max: int, xi: np.ndarray) -> np.ndarray:
        """
        Normalized Hermite functions psi_0..psi_n_max of xi via the three-term
        recurrence
        """
        functions = np.empty((n_max + 1, *np.shape(xi)))
        functions[0] = np.pi**-0.25 * np.exp(-0.5 * xi**2)
        if n_max >= 1:
            functions[1] = _SQRT2 * xi * functions[0]
        for n in range(1, n_max):
            functions[n + 1] = (
                np.sqrt(2.0 / (n + 1)) * xi * functions[n]
                - np.sqrt(n / (n + 1)) * functions[n - 1]
            )
        return functions

    @staticmethod
    def oscillator_length(params: PhysicalParams) -> float:
        return math.sqrt(params.hbar / (params.mass * params.require_omega()))

    @staticmethod
    def oscillator_grid(
        params: PhysicalParams,
        n: int,
        nodes: int = Config.resolution,
        multiplier: float = Config.half_width_multiplier,
    ) -> Grid:
        # classical turning point plus the ground-state margin
        length = States.oscillator_length(params)
        half_width = length * math.sqrt(2 * n + 1) + multiplier * length / _SQRT2
        return Grid.line(0.0, half_width, nodes)

    @staticmethod
    def qo_eigenstate(n: int, params: PhysicalParams, grid: Grid) -> WaveFunction:
        if n < 0:
            raise ContractViolation(f"oscillator level must be non-negative, got {n}")
        if n > Config.max_hermite_order:
            raise UnsupportedOrderError(
                f"oscillator level {n} exceeds the supported order {Config.max_hermite_order}"
            )
        length = States.oscillator_length(params)
        psi = States.hermite_functions(n, grid.nodes / length)[n] / math.sqrt(length)
        return QState.normalize(WaveFunction(grid=grid, samples=psi, params=params))

    @staticmethod
    def qo_phase_state(
        n: int, grid: Grid, params: PhysicalParams = PhysicalParams()
    ) -> WaveFunction:
        if not grid.is_periodic:
            raise ContractViolation("phase states live on a periodic grid")
        period = grid.upper - grid.lower
        psi = np.exp(-1j * n * grid.nodes) / math.sqrt(period)
        return QState.normalize(
            WaveFunction(
                grid=grid,
                samples=psi,
                params=params,
                representation=Representation.phase,
            )
        )

    @staticmethod
    def time_phase_state(
        n: int, grid: Grid, params: PhysicalParams = PhysicalParams()
    ) -> WaveFunction:
        if not grid.is_periodic:
            raise ContractViolation("time states live on a periodic grid")
        period = grid.upper - grid.lower
        psi = np.exp(-2j * np.pi * n * grid.nodes / period) / math.sqrt(period)
        return QState.normalize(
            WaveFunction(
                grid=grid,
                samples=psi,
                params=params,
                representation=Representation.time,
            )
        )

    @staticmethod
    def packet_grid(
        x0: float,
        sigma: float,
        nodes: int = Config.resolution,
        multiplier: float = Config.half_width_multiplier,
        *widths: float,
    ) -> Grid:
        return Grid.line(x0, multiplier * max((sigma, *widths)), nodes)

    @staticmethod
    def _check_span(grid: Grid, center: float, width: float) -> None:
        extent = Config.half_width_multiplier * width * (1.0 - 1e-9)
        if grid.lower > center - extent or grid.upper < center + extent:
            raise TruncationError(
                f"grid [{grid.lower}, {grid.upper}] does not span {center} +- {extent}"
            )

    @staticmethod
    def gaussian_packet(
        x0: float, sigma: float, k: float, params: PhysicalParams, grid: Grid
    ) -> WaveFunction:
        if sigma <= 0:
            raise ContractViolation(f"packet width must be positive, got {sigma}")
        States._check_span(grid, x0, sigma)
        x = grid.nodes
        psi = np.exp(-((x - x0) ** 2) / (4.0 * sigma**2) + 1j * k * x)
        return QState.normalize(WaveFunction(grid=grid, samples=psi, params=params))

    @staticmethod
    def free_spread(sigma: float, t: float, params: PhysicalParams) -> complex:
        return 1.0 + 1j * params.hbar * t / (2.0 * params.mass * sigma**2)

    @staticmethod
    def free_packet_at(
        x0: float,
        sigma: float,
        k: float,
        t: float,
        params: PhysicalParams,
        grid: Grid,
    ) -> WaveFunction:
        if sigma <= 0:
            raise ContractViolation(f"packet width must be positive, got {sigma}")
        spread = States.free_spread(sigma, t, params)
        center = x0 + params.hbar * k * t / params.mass
        States._check_span(grid, center, sigma * abs(spread))
        x = grid.nodes
        psi = np.exp(
            -((x - center) ** 2) / (4.0 * sigma**2 * spread)
            + 1j * k * x
            - 1j * params.hbar * k**2 * t / (2.0 * params.mass)
        ) / np.sqrt(spread)
        return QState.normalize(WaveFunction(grid=grid, samples=psi, params=params))

    @staticmethod
    def well2d_grid(a: float, b: float, nodes: int = Config.well_resolution) -> Grid2D:
        """
        Square-spacing grid over the rotated rectangle's bounding box. For
        integer sides the spacing puts every edge of the rectangle on nodes.
        """
        before, after = _WELL_PADDING
        inner = nodes - 1 - before - after
        if float(a).is_integer() and float(b).is_integer():
            step = math.lcm(2, int(a + b))
            inner = max(inner // step, 1) * step
        elif inner % 2 == 1:
            inner -= 1
        n = inner + 1 + before + after
        h = (a + b) / (_SQRT2 * inner)
        x = Grid(lower=-b / _SQRT2 - before * h, upper=a / _SQRT2 + after * h, n=n)
        y = Grid(lower=-before * h, upper=(a + b) / _SQRT2 + after * h, n=n)
        return Grid2D(x=x, y=y)

    @staticmethod
    def well2d_ground(
        a: float, b: float, grid: Grid2D, params: PhysicalParams = PhysicalParams()
    ) -> WaveFunction:
        if not 0 < a < b:
            raise ContractViolation(f"the well needs 0 < a < b, got a={a}, b={b}")
        slack = 1e-9 * (a + b)
        if (
            grid.x.lower > -b / _SQRT2 + slack
            or grid.x.upper < a / _SQRT2 - slack
            or grid.y.lower > slack
            or grid.y.upper < (a + b) / _SQRT2 - slack
        ):
            raise TruncationError("grid does not cover the rotated rectangle")
        x, y = grid.coordinates
        x1 = (x + y) / _SQRT2
        y1 = (y - x) / _SQRT2
        inside = (x1 > 0) & (x1 < a) & (y1 > 0) & (y1 < b)
        psi = np.where(inside, np.sin(np.pi * x1 / a) * np.sin(np.pi * y1 / b), 0.0)
        return QState.normalize(WaveFunction(grid=grid, samples=psi, params=params))

    @staticmethod
    def entry_name(kind: str, values: dict[str, float]) -> str:
        def fmt(value: float) -> str:
            return str(int(value)) if float(value).is_integer() else f"{value:g}"

        if not values:
            return kind
        return f"{kind}:" + ",".join(f"{key}={fmt(value)}" for key, value in values.items())

    @staticmethod
    def default_specs() -> list[tuple[str, dict[str, float]]]:
        return [
            *(("qo", {"n": n}) for n in range(5)),
            *(("qo_phase", {"n": n}) for n in range(4)),
            ("packet", {"x0": 0, "sigma": 1, "k": 0}),
            ("packet", {"x0": 0, "sigma": 1, "k": 2}),
            ("packet", {"x0": 2, "sigma": 0.5, "k": 1}),
            ("well2d", {"a": 1, "b": 2}),
            ("well2d", {"a": 1, "b": 3}),
            ("free", {"x0": 0, "sigma": 1, "k": 0, "t": 1}),
            ("free", {"x0": 0, "sigma": 1, "k": 1, "t": 2}),
            ("time", {"n": 1}),
        ]

    @staticmethod
    def catalog(
        resolution: int = Config.resolution,
        multiplier: float = Config.half_width_multiplier,
        well_resolution: int = Config.well_resolution,
    ) -> list[StateCatalogEntry]:
        return [
            States.from_spec(kind, values, resolution, multiplier, well_resolution)
            for kind, values in States.default_specs()
        ]

    @staticmethod
    def from_spec(
        kind: str,
        values: dict[str, float],
        resolution: int = Config.resolution,
        multiplier: float = Config.half_width_multiplier,
        well_resolution: int = Config.well_resolution,
    ) -> StateCatalogEntry:
        builders = {
            "qo": States._qo_entry,
            "qo_phase": States._phase_entry,
            "time": States._time_entry,
            "packet": States._packet_entry,
            "free": States._free_entry,
            "well2d": States._well_entry,
        }
        if kind not in builders:
            raise UsageError(f"unknown state {kind!r}; choose from {sorted(builders)}")

        values = dict(values)
        params = PhysicalParams(
            hbar=values.pop("hbar", 1.0),
            mass=values.pop("mass", 1.0),
            omega=values.pop("omega", 1.0 if kind == "qo" else None),
        )
        size = well_resolution if kind == "well2d" else resolution
        try:
            wavefunction, operators, pairs, closed_forms = builders[kind](
                dict(values), params, size, multiplier
            )
        except KeyError as err:
            raise UsageError(f"state {kind!r} needs parameter {err.args[0]!r}") from err

        return StateCatalogEntry(
            name=States.entry_name(kind, values),
            kind=kind,
            parameters=values,
            wavefunction=wavefunction,
            operators=operators,
            pairs=pairs,
            closed_forms=closed_forms,
        )

    @staticmethod
    def _level(values: dict[str, float]) -> int:
        n = values.pop("n")
        if not float(n).is_integer():
            raise UsageError(f"level n must be an integer, got {n}")
        return int(n)

    @staticmethod
    def _qo_entry(values, params, resolution, multiplier):
        n = States._level(values)
        grid = States.oscillator_grid(params, n, resolution, multiplier)
        wf = States.qo_eigenstate(n, params, grid)
        omega = params.require_omega()
        level = n + 0.5
        operators = {
            "x": Operators.position(),
            "p": Operators.momentum(params),
            "H": Operators.oscillator_hamiltonian(params),
        }
        closed_forms = [
            ClosedFormValue(quantity="mean", observable="x", value=0.0, tolerance=1e-9),
            ClosedFormValue(
                quantity="std",
                observable="x",
                value=math.sqrt(params.hbar / (params.mass * omega) * level),
                tolerance=1e-6,
            ),
            ClosedFormValue(
                quantity="std",
                observable="p",
                value=math.sqrt(params.hbar * params.mass * omega * level),
                tolerance=1e-6,
            ),
            ClosedFormValue(
                quantity="mean",
                observable="H",
                value=params.hbar * omega * level,
                tolerance=1e-6,
            ),
            ClosedFormValue(quantity="std", observable="H", value=0.0, tolerance=1e-6),
        ]
        return wf, operators, [("x", "p"), ("x", "H"), ("p", "H")], closed_forms

    @staticmethod
    def _phase_entry(values, params, resolution, multiplier):
        n = States._level(values)
        wf = States.qo_phase_state(n, Grid.periodic(0.0, 2.0 * np.pi, resolution), params)
        operators = {"N": Operators.number(), "phi": Operators.phase()}
        closed_forms = [
            ClosedFormValue(quantity="mean", observable="N", value=n, tolerance=1e-8),
            ClosedFormValue(quantity="std", observable="N", value=0.0, tolerance=1e-8),
            ClosedFormValue(
                quantity="std", observable="phi", value=np.pi / math.sqrt(3.0), tolerance=1e-6
            ),
        ]
        return wf, operators, [("N", "phi")], closed_forms

    @staticmethod
    def _time_entry(values, params, resolution, multiplier):
        n = States._level(values)
        period = values.pop("period", 2.0 * np.pi)
        wf = States.time_phase_state(n, Grid.periodic(0.0, period, resolution), params)
        operators = {"E": Operators.energy(params), "t": Operators.time()}
        closed_forms = [
            ClosedFormValue(
                quantity="mean",
                observable="E",
                value=params.hbar * 2.0 * np.pi * n / period,
                tolerance=1e-6,
            ),
            ClosedFormValue(quantity="std", observable="E", value=0.0, tolerance=1e-8),
            ClosedFormValue(
                quantity="std",
                observable="t",
                value=period / math.sqrt(12.0),
                tolerance=1e-6,
                relative=True,
            ),
        ]
        return wf, operators, [("E", "t")], closed_forms

    @staticmethod
    def _packet_closed_forms(center, sigma, spread_width, k, params, tolerance):
        return [
            ClosedFormValue(quantity="mean", observable="x", value=center, tolerance=tolerance),
            ClosedFormValue(
                quantity="std", observable="x", value=spread_width, tolerance=tolerance
            ),
            ClosedFormValue(
                quantity="mean", observable="p", value=params.hbar * k, tolerance=tolerance
            ),
            ClosedFormValue(
                quantity="std",
                observable="p",
                value=params.hbar / (2.0 * sigma),
                tolerance=tolerance,
            ),
        ]

    @staticmethod
    def _packet_entry(values, params, resolution, multiplier):
        x0, sigma, k = values["x0"], values["sigma"], values.get("k", 0.0)
        grid = States.packet_grid(x0, sigma, resolution, multiplier)
        wf = States.gaussian_packet(x0, sigma, k, params, grid)
        operators = {
            "x": Operators.position(),
            "p": Operators.momentum(params),
            "p2": Operators.momentum_squared(params),
        }
        closed_forms = States._packet_closed_forms(x0, sigma, sigma, k, params, 1e-7)
        return wf, operators, [("x", "p"), ("x", "p2")], closed_forms

    @staticmethod
    def _free_entry(values, params, resolution, multiplier):
        x0, sigma = values["x0"], values["sigma"]
        k, t = values.get("k", 0.0), values.get("t", 0.0)
        spread = States.free_spread(sigma, t, params)
        center = x0 + params.hbar * k * t / params.mass
        grid = States.packet_grid(center, sigma * abs(spread), resolution, multiplier)
        wf = States.free_packet_at(x0, sigma, k, t, params, grid)
        operators = {"x": Operators.position(), "p": Operators.momentum(params)}
        closed_forms = States._packet_closed_forms(
            center, sigma, sigma * abs(spread), k, params, 1e-7
        )
        return wf, operators, [("x", "p")], closed_forms

    @staticmethod
    def _well_entry(values, params, resolution, multiplier):
        a, b = values["a"], values["b"]
        wf = States.well2d_ground(a, b, States.well2d_grid(a, b, resolution), params)
        operators = {
            "px": Operators.momentum(params, axis=0, label="px"),
            "py": Operators.momentum(params, axis=1, label="py"),
            "H": Operators.free_hamiltonian_2d(params),
        }
        scale = params.hbar * np.pi / (a * b)
        momentum_std = scale * math.sqrt((a**2 + b**2) / 2.0)
        closed_forms = [
            ClosedFormValue(
                quantity="std", observable="px", value=momentum_std, tolerance=1e-3, relative=True
            ),
            ClosedFormValue(
                quantity="std", observable="py", value=momentum_std, tolerance=1e-3, relative=True
            ),
            ClosedFormValue(
                quantity="corr",
                observable="px",
                partner="py",
                value=scale**2 * (b**2 - a**2) / 2.0,
                tolerance=1e-3,
                relative=True,
            ),
            ClosedFormValue(
                quantity="mean",
                observable="H",
                value=(params.hbar * np.pi) ** 2
                / (2.0 * params.mass)
                * (1.0 / a**2 + 1.0 / b**2),
                tolerance=1e-3,
                relative=True,
            ),
        ]
        return wf, operators, [("px", "py")], closed_forms

    @staticmethod
    def check_entry(entry: StateCatalogEntry) -> list[OracleCheck]:
        checks = []
        for closed_form in entry.closed_forms:
            op = entry.operators[closed_form.observable]
            partner = (
                entry.operators[closed_form.partner] if closed_form.partner else None
            )
            report = QState.estimate(entry.wavefunction, op, partner=partner)
            if closed_form.quantity == "mean":
                measured = report.mean.real
            elif closed_form.quantity == "std":
                measured = report.std
            else:
                measured = abs(report.correlation)
            check = OracleCheck(
                key=closed_form.key,
                expected=closed_form.value,
                measured=measured,
                tolerance=closed_form.tolerance,
                relative=closed_form.relative,
            )
            if not check.passed:
                LOGGER.warning(
                    "%s: closed form %s=%.10g disagrees with quadrature %.10g",
                    entry.name,
                    check.key,
                    check.expected,
                    check.measured,
                )
            checks.append(check)
        return checks
