import logging

import numpy as np
from tqdm import tqdm

from src.config import Config
from src.errors import UsageError
from src.misc import RelationName
from src.models.matrixqm import DensityMatrix, FiniteOperator
from src.models.qstate import PhysicalParams
from src.models.report import CheckRow, RunConfig
from src.models.relations import GramReport, RelationVerdict
from src.models.states import StateCatalogEntry
from src.utils.matrixqm import MatrixQM
from src.utils.operators import Operators
from src.utils.relations import Relations
from src.utils.states import States

LOGGER = logging.getLogger(__name__)

_GRAM_LEVELS = range(4)
_SPIN_COUNTS = range(1, 5)


class Verify:
    @staticmethod
    def suite(config: RunConfig, progress: bool = False) -> list[CheckRow]:
        """
        Every relation check over the state catalog and the density-matrix
        ensemble
        """
        catalog = States.catalog(
            config.resolution, config.half_width_multiplier, config.well_resolution
        )
        rows: list[CheckRow] = []
        for entry in tqdm(catalog, desc="catalog", disable=not progress):
            LOGGER.info("checking %s", entry.name)
            rows.extend(Verify.oracle_rows(entry))
            for name_a, name_b in entry.pairs:
                for relation in (RelationName.csf, RelationName.rsur):
                    rows.append(
                        Verify.pair_row(entry, relation, name_a, name_b, config)
                    )

        rows.extend(Verify.gram_rows(config))
        rows.extend(Verify.multi_temporal_rows(config))
        rows.extend(Verify.identity_rows(config))
        rows.extend(Verify.density_matrix_rows(config))

        failed = [row.name for row in rows if not row.passed]
        LOGGER.info("%d checks, %d failed", len(rows), len(failed))
        for name in failed:
            LOGGER.warning("check failed: %s", name)
        return rows

    @staticmethod
    def single(
        state: str,
        values: dict[str, float],
        relation: RelationName,
        ops: list[str],
        config: RunConfig,
    ) -> list[CheckRow]:
        entry = States.from_spec(
            state,
            values,
            config.resolution,
            config.half_width_multiplier,
            config.well_resolution,
        )
        if unknown := [op for op in ops if op not in entry.operators]:
            raise UsageError(
                f"{entry.name} has no operators {unknown}; "
                f"choose from {sorted(entry.operators)}"
            )
        match relation:
            case RelationName.csf | RelationName.rsur:
                if len(ops) != 2:
                    raise UsageError(f"{relation.value} needs exactly two operators")
                return [Verify.pair_row(entry, relation, ops[0], ops[1], config)]
            case RelationName.gram:
                if len(ops) < 2:
                    raise UsageError("a Gram check needs at least two operators")
                report = Relations.gram_determinant(
                    entry.wavefunction, [entry.operators[op] for op in ops]
                )
                return [Verify._gram_row(entry.name, ",".join(ops), report, config)]
            case RelationName.oracle:
                return Verify.oracle_rows(entry)
        raise UsageError(f"relation {relation.value} cannot be run on a single state")

    @staticmethod
    def oracle_rows(entry: StateCatalogEntry) -> list[CheckRow]:
        return [
            CheckRow(
                name=f"{entry.name} {RelationName.oracle.value}",
                relation=RelationName.oracle,
                ops=check.key,
                lhs=check.measured,
                rhs=check.expected,
                passed=check.passed,
                note=f"deviation {check.deviation:.3g} <= {check.tolerance:g}"
                + (" relative" if check.relative else ""),
            )
            for check in States.check_entry(entry)
        ]

    @staticmethod
    def pair_row(
        entry: StateCatalogEntry,
        relation: RelationName,
        name_a: str,
        name_b: str,
        config: RunConfig,
    ) -> CheckRow:
        op_a, op_b = entry.operators[name_a], entry.operators[name_b]
        wf = entry.wavefunction
        if relation == RelationName.csf:
            verdict = Relations.csf_margin(wf, op_a, op_b)
            passed = verdict.margin >= -config.tolerance("csf_tolerance")
            nontrivial = verdict.rhs > config.tolerance("csf_tolerance")
            note = "nontrivial bound" if nontrivial else ""
        else:
            verdict = Relations.rsur_margin(wf, op_a, op_b)
            # outside its applicability the relation makes no claim to check
            passed = not verdict.applicable or verdict.margin >= -config.tolerance(
                "rsur_tolerance"
            )
            d1, d2 = verdict.defects
            note = f"|d1|={abs(d1):.3g} |d2|={abs(d2):.3g}"
        return CheckRow(
            name=f"{entry.name} {relation.value}",
            relation=relation,
            ops=f"{name_a},{name_b}",
            lhs=verdict.lhs,
            rhs=verdict.rhs,
            applicable=verdict.applicable,
            passed=passed,
            note=note,
        )

    @staticmethod
    def _gram_row(
        name: str, ops: str, report: GramReport, config: RunConfig
    ) -> CheckRow:
        matrix = report.matrix
        hermitian = np.max(np.abs(matrix - matrix.conj().T)) <= 1e-10
        floor = -config.tolerance("gram_tolerance") * report.scale ** matrix.shape[0]
        return CheckRow(
            name=f"{name} {RelationName.gram.value}",
            relation=RelationName.gram,
            ops=ops,
            lhs=report.determinant,
            rhs=0.0,
            passed=bool(hermitian and report.determinant >= floor),
            note=f"min eigenvalue {report.eigenvalues.min():.3g}",
        )

    @staticmethod
    def gram_rows(config: RunConfig) -> list[CheckRow]:
        params = PhysicalParams(omega=1.0)
        operators = [
            Operators.momentum(params),
            Operators.position(),
            Operators.oscillator_hamiltonian(params),
        ]
        rows = []
        for n in _GRAM_LEVELS:
            grid = States.oscillator_grid(
                params, n, config.resolution, config.half_width_multiplier
            )
            report = Relations.gram_determinant(
                States.qo_eigenstate(n, params, grid), operators
            )
            name = States.entry_name("qo", {"n": n})
            rows.append(Verify._gram_row(name, "p,x,H", report, config))
        return rows

    @staticmethod
    def multi_temporal_rows(config: RunConfig) -> list[CheckRow]:
        """
        Deviations taken in two different states: orthogonal oscillator levels
        and a free packet at two instants
        """
        params = PhysicalParams(omega=1.0)
        grid = States.oscillator_grid(
            params, 2, config.resolution, config.half_width_multiplier
        )
        levels = [States.qo_eigenstate(n, params, grid) for n in range(3)]
        pairs = [
            ("qo:n=0 | qo:n=1", levels[0], levels[1]),
            ("qo:n=0 | qo:n=2", levels[0], levels[2]),
        ]

        free = PhysicalParams()
        spread = abs(States.free_spread(1.0, 1.0, free))
        free_grid = States.packet_grid(
            0.0, spread, config.resolution, config.half_width_multiplier
        )
        pairs.append(
            (
                "free:t=0 | free:t=1",
                States.free_packet_at(0.0, 1.0, 0.0, 0.0, free, free_grid),
                States.free_packet_at(0.0, 1.0, 0.0, 1.0, free, free_grid),
            )
        )

        x = Operators.position()
        return [
            Verify._verdict_row(
                name,
                RelationName.multi_temporal,
                "x,x",
                Relations.multi_temporal_csf(first, second, x, x),
                config,
            )
            for name, first, second in pairs
        ]

    @staticmethod
    def identity_rows(config: RunConfig) -> list[CheckRow]:
        """
        Exact algebraic identities: the magnetization commutators and the
        truncated ladder commutator
        """
        tolerance = config.tolerance("hermitian_tolerance")
        rows = []
        for count in _SPIN_COUNTS:
            magnetization = MatrixQM.spin_magnetization(count)
            residual = 0.0
            for alpha in range(3):
                first, second, third = (
                    magnetization[(alpha + shift) % 3] for shift in range(3)
                )
                commutator = MatrixQM.commutator(first, second).matrix
                residual = max(
                    residual, float(np.max(np.abs(commutator - 1j * third.matrix)))
                )
            rows.append(
                CheckRow(
                    name=f"spin:n={count} {RelationName.identity.value}",
                    relation=RelationName.identity,
                    ops="[Mx,My]=iMz",
                    lhs=residual,
                    rhs=0.0,
                    passed=residual <= tolerance,
                )
            )

        d = 5
        lowering, raising, _ = MatrixQM.fock_ladder(d)
        expected = np.diag([1.0] * (d - 1) + [-(d - 1.0)])
        commutator = MatrixQM.commutator(lowering, raising).matrix
        residual = float(np.max(np.abs(commutator - expected)))
        rows.append(
            CheckRow(
                name=f"fock:d={d} {RelationName.identity.value}",
                relation=RelationName.identity,
                ops="[a,a+]",
                lhs=residual,
                rhs=0.0,
                passed=residual <= tolerance,
                note="truncation leaves -(d-1) in the last entry",
            )
        )
        return rows

    @staticmethod
    def density_matrix_rows(config: RunConfig) -> list[CheckRow]:
        rng = np.random.default_rng(config.seed)
        rows = []
        for d in Config.ensemble_dimensions:
            reports = [
                MatrixQM.rho_relation_margins(
                    MatrixQM.random_density_matrix(rng, d),
                    MatrixQM.random_hermitian(rng, d, "A"),
                    MatrixQM.random_hermitian(rng, d, "B"),
                )
                for _ in range(Config.ensemble_size)
            ]
            note = f"worst of {Config.ensemble_size} random triples"
            worst_csf = min((report.csf for report in reports), key=lambda v: v.margin)
            worst_rsur = min((report.rsur for report in reports), key=lambda v: v.margin)
            name = f"random:d={d}"
            rows.append(
                Verify._verdict_row(
                    name, RelationName.rho_csf, "A,B", worst_csf, config, note
                )
            )
            rows.append(
                Verify._verdict_row(
                    name, RelationName.rho_rsur, "A,B", worst_rsur, config, note
                )
            )

        rho, op_a, op_b = Verify.commuting_example()
        report = MatrixQM.rho_relation_margins(rho, op_a, op_b)
        note = "commuting pair, nontrivial bound" if report.nontrivial_commuting_bound else ""
        rows.append(
            Verify._verdict_row(
                "diagonal:d=4", RelationName.rho_csf, "A,B", report.csf, config, note
            )
        )

        mx, my, mz = MatrixQM.spin_magnetization(2)
        report = MatrixQM.rho_relation_margins(MatrixQM.thermal_state(mz, 1.0), mx, my)
        for relation, verdict in (
            (RelationName.rho_csf, report.csf),
            (RelationName.rho_rsur, report.rsur),
        ):
            rows.append(
                Verify._verdict_row("spin:n=2 thermal", relation, "Mx,My", verdict, config)
            )
        return rows

    @staticmethod
    def commuting_example() -> tuple[DensityMatrix, FiniteOperator, FiniteOperator]:
        """
        Commuting diagonal observables whose correlation still bounds the
        product of deviations from below
        """
        rho = DensityMatrix(matrix=np.diag([0.4, 0.1, 0.1, 0.4]))
        op_a = FiniteOperator.hermitian_from(np.diag([1.0, 2.0, 3.0, 4.0]), label="A")
        op_b = FiniteOperator.hermitian_from(np.diag([2.0, 1.0, 1.0, 3.0]), label="B")
        return rho, op_a, op_b

    @staticmethod
    def _verdict_row(
        name: str,
        relation: RelationName,
        ops: str,
        verdict: RelationVerdict,
        config: RunConfig,
        note: str = "",
    ) -> CheckRow:
        tolerance = config.tolerance(
            "rsur_tolerance" if relation == RelationName.rsur else "csf_tolerance"
        )
        return CheckRow(
            name=f"{name} {relation.value}",
            relation=relation,
            ops=ops,
            lhs=verdict.lhs,
            rhs=verdict.rhs,
            applicable=verdict.applicable,
            passed=verdict.margin >= -tolerance,
            note=note,
        )
