import argparse
import logging
import sys
from pathlib import Path

from pydantic import BaseModel, ValidationError

from src.config import Config
from src.errors import ContractViolation, OutOfDomainError, UsageError
from src.misc import ExitCode, Observable, OutputFormat, RelationName
from src.models.annex import AnnexScenario
from src.models.qstate import PhysicalParams
from src.models.report import (
    CheckRow,
    MeasureRow,
    OscillatorMeasurement,
    PacketMeasurement,
    RunConfig,
    ScanRow,
)
from src.utils.parse import Parse
from src.utils.pipeline import Pipeline
from src.utils.utils import Utils
from src.utils.verify import Verify

LOGGER = logging.getLogger(__name__)


class ArgumentParser(argparse.ArgumentParser):
    def error(self, message: str):
        raise UsageError(message)


def build_parser() -> ArgumentParser:
    common = ArgumentParser(add_help=False)
    common.add_argument("--resolution", type=int, default=Config.resolution)
    common.add_argument("--well-resolution", type=int, default=Config.well_resolution)
    common.add_argument(
        "--multiplier",
        type=float,
        default=Config.half_width_multiplier,
        help="domain half-width in units of the widest packet",
    )
    common.add_argument(
        "--tolerance",
        action="append",
        default=[],
        metavar="NAME=VALUE",
        help="override a tolerance, e.g. csf_tolerance=1e-9",
    )
    common.add_argument("--seed", type=int, default=Config.ensemble_seed)
    common.add_argument(
        "--format",
        dest="output_format",
        choices=[fmt.value for fmt in OutputFormat],
        default=OutputFormat.csv.value,
    )
    common.add_argument("--output", type=Path, help="report file path")
    common.add_argument("-v", "--verbose", action="count", default=0)

    parser = ArgumentParser(
        prog="qfluct", description="Verify quantum fluctuation relations"
    )
    commands = parser.add_subparsers(dest="command", required=True)

    verify = commands.add_parser(
        "verify", parents=[common], help="run the relation checks"
    )
    verify.add_argument("--state", help="single state, e.g. qo:n=3")
    verify.add_argument(
        "--relation",
        choices=["csf", "rsur", "gram", "oracle"],
        default="csf",
    )
    verify.add_argument("--ops", default="", help="comma separated operator names")

    measure = commands.add_parser(
        "measure", parents=[common], help="send a state through a measuring channel"
    )
    measure.add_argument("--oscillator", action="store_true")
    measure.add_argument("--x0", type=float, default=0.0)
    measure.add_argument("--sigma", type=float, default=1.0)
    measure.add_argument("--k", type=float, default=0.0)
    measure.add_argument("--gamma", type=float, default=0.0)
    measure.add_argument("--lambda", dest="lam", type=float, default=0.0)
    _add_physical_arguments(measure)

    scan = commands.add_parser(
        "scan", parents=[common], help="error indicators over device widths"
    )
    scan.add_argument("--x0", type=float, default=0.0)
    scan.add_argument("--sigma", type=float, default=1.0)
    scan.add_argument("--k", type=float, default=0.0)
    scan.add_argument("--gamma", dest="gammas", default="0", help="list or start:stop:count")
    scan.add_argument("--lambda", dest="lambdas", default="0", help="list or start:stop:count")
    scan.add_argument("--workers", type=int, default=1)
    _add_physical_arguments(scan)
    return parser


def _add_physical_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--hbar", type=float, default=1.0)
    parser.add_argument("--mass", type=float, default=1.0)
    parser.add_argument("--omega", type=float, default=None)


def _run_config(args: argparse.Namespace) -> RunConfig:
    return RunConfig(
        resolution=args.resolution,
        well_resolution=args.well_resolution,
        half_width_multiplier=args.multiplier,
        tolerances=Parse.tolerances(args.tolerance),
        seed=args.seed,
        output_format=args.output_format,
        output_path=args.output,
        workers=getattr(args, "workers", 1),
    )


def _params(args: argparse.Namespace) -> PhysicalParams:
    return PhysicalParams(hbar=args.hbar, mass=args.mass, omega=args.omega)


def cmd_verify(
    args: argparse.Namespace, config: RunConfig
) -> tuple[list[CheckRow], str, ExitCode]:
    if args.state:
        state, values = Parse.state_spec(args.state)
        ops = Parse.op_list(args.ops) if args.ops or args.relation != "oracle" else []
        rows = Verify.single(state, values, RelationName[args.relation], ops, config)
        qualifiers = f"{args.state} {args.relation} {args.ops}"
    else:
        rows = Verify.suite(config, progress=sys.stderr.isatty())
        qualifiers = "catalog"

    failed = sum(not row.passed for row in rows)
    LOGGER.warning("%d of %d checks passed", len(rows) - failed, len(rows))
    return rows, qualifiers, ExitCode.check_failed if failed else ExitCode.ok


def cmd_measure(args: argparse.Namespace, config: RunConfig) -> tuple[list[MeasureRow], str]:
    params = _params(args)
    if args.oscillator:
        params = params.model_copy(update={"omega": args.omega or 1.0})
        measurement = Pipeline.measure_oscillator(
            args.gamma, params, config.resolution, config.half_width_multiplier
        )
        return oscillator_rows(measurement), f"oscillator gamma={args.gamma}"

    scenario = AnnexScenario(
        x0=args.x0, sigma=args.sigma, k=args.k, gamma=args.gamma, lam=args.lam, params=params
    )
    measurement = Pipeline.measure_packet(
        scenario, config.resolution, config.half_width_multiplier
    )
    qualifiers = (
        f"packet x0={args.x0} sigma={args.sigma} k={args.k} "
        f"gamma={args.gamma} lambda={args.lam}"
    )
    return packet_rows(measurement), qualifiers


def packet_rows(measurement: PacketMeasurement) -> list[MeasureRow]:
    scenario, prediction = measurement.scenario, measurement.prediction
    hbar = scenario.params.hbar
    x, p = Observable.position, Observable.momentum
    oracles = {
        "in": {
            f"mean({x})": scenario.x0,
            f"std({x})": scenario.sigma,
            f"mean({p})": hbar * scenario.k,
            f"std({p})": hbar / (2.0 * scenario.sigma),
            f"corr({x},{p})": hbar / 2.0,
        },
        "out": {
            f"mean({x})": scenario.x0,
            f"std({x})": prediction.density_std,
            f"mean({p})": hbar * scenario.k,
            f"std({p})": prediction.momentum_std_out,
            f"corr({x},{p})": hbar / 2.0,
        },
    }

    rows = []
    for stage, reports in (("in", measurement.reports_in), ("out", measurement.reports_out)):
        for report in reports:
            for quantity, value in _report_values(report):
                rows.append(
                    MeasureRow(
                        quantity=f"{stage}:{quantity}",
                        value=value,
                        oracle=oracles[stage].get(quantity),
                    )
                )
    if measurement.current_std is not None:
        rows.append(
            MeasureRow(
                quantity="out:current_std",
                value=measurement.current_std,
                oracle=prediction.current_std,
            )
        )

    position = measurement.errors.entry(x, p)
    momentum = measurement.errors.entry(p)
    branch = measurement.branch.value
    rows.extend(
        [
            MeasureRow(quantity=f"eps:mean({x})", value=position.mean, oracle=0.0),
            MeasureRow(
                quantity=f"eps:std({x})", value=position.std, oracle=prediction.error_std_x
            ),
            MeasureRow(
                quantity=f"eps:corr({x},{p})", value=position.correlation, oracle=0.0
            ),
            MeasureRow(quantity=f"eps:mean({p})", value=momentum.mean, oracle=0.0),
            MeasureRow(
                quantity=f"eps:std({p})",
                value=momentum.std,
                oracle=prediction.error_std_p_half_width,
                note=f"branch={branch}",
            ),
            MeasureRow(
                quantity=f"oracle:eps:std({p}):printed",
                value=prediction.error_std_p_printed,
                note=f"branch={branch}",
            ),
        ]
    )
    return rows


def oscillator_rows(measurement: OscillatorMeasurement) -> list[MeasureRow]:
    prediction = measurement.prediction
    h = Observable.hamiltonian
    entry = measurement.errors.entry(h)
    return [
        MeasureRow(
            quantity=f"in:mean({h})",
            value=measurement.report_in.mean.real,
            oracle=prediction.energy_in,
        ),
        MeasureRow(
            quantity=f"in:std({h})",
            value=measurement.report_in.std,
            oracle=prediction.energy_std_in,
        ),
        MeasureRow(
            quantity=f"out:mean({h})",
            value=measurement.report_out.mean.real,
            oracle=prediction.energy_out,
        ),
        MeasureRow(
            quantity=f"out:std({h})",
            value=measurement.report_out.std,
            oracle=prediction.energy_std_out,
        ),
        MeasureRow(quantity=f"eps:mean({h})", value=entry.mean, oracle=prediction.error_energy),
        MeasureRow(
            quantity=f"eps:std({h})", value=entry.std, oracle=prediction.error_energy_std
        ),
    ]


def _report_values(report) -> list[tuple[str, float]]:
    values = [
        (f"mean({report.observable})", report.mean.real),
        (f"std({report.observable})", report.std),
    ]
    if report.correlation is not None:
        values.append((f"corr({report.observable},{report.partner})", abs(report.correlation)))
    return values


def cmd_scan(args: argparse.Namespace, config: RunConfig) -> tuple[list[ScanRow], str]:
    base = AnnexScenario(x0=args.x0, sigma=args.sigma, k=args.k, params=_params(args))
    rows = Pipeline.scan(
        base,
        Parse.value_range(args.gammas, "gamma"),
        Parse.value_range(args.lambdas, "lambda"),
        config.resolution,
        config.half_width_multiplier,
        config.workers,
        progress=sys.stderr.isatty(),
    )
    return rows, f"scan x0={args.x0} sigma={args.sigma} k={args.k}"


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except UsageError as err:
        print(f"qfluct: {err}", file=sys.stderr)
        return ExitCode.usage

    logging.basicConfig(
        level={0: logging.WARNING, 1: logging.INFO}.get(args.verbose, logging.DEBUG),
        format="%(levelname)s %(name)s: %(message)s",
    )

    exit_code = ExitCode.ok
    row_type: type[BaseModel]
    try:
        config = _run_config(args)
        if args.command == "verify":
            rows, qualifiers, exit_code = cmd_verify(args, config)
            row_type = CheckRow
        elif args.command == "measure":
            rows, qualifiers = cmd_measure(args, config)
            row_type = MeasureRow
        else:
            rows, qualifiers = cmd_scan(args, config)
            row_type = ScanRow
    except (UsageError, ValidationError, ContractViolation) as err:
        LOGGER.error("%s", err)
        return ExitCode.usage
    except OutOfDomainError as err:
        LOGGER.error("%s", err)
        return ExitCode.domain
    except Exception:
        LOGGER.exception("%s failed unexpectedly", args.command)
        return ExitCode.internal

    output_path = config.output_path or Utils.default_report_path(
        args.command, qualifiers, config.output_format
    )
    try:
        Utils.write_report(output_path, args.command, rows, row_type, config.output_format)
    except OSError as err:
        LOGGER.error("cannot write the report to %s: %s", output_path, err)
        return ExitCode.io

    LOGGER.info("report written to %s", output_path)
    return exit_code


if __name__ == "__main__":
    sys.exit(main())
