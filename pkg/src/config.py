import logging
import os
from pathlib import Path

from dotenv import load_dotenv

LOGGER = logging.getLogger(__name__)


class Config:
    project_root = Path(__file__).resolve().parents[1]
    reports_path = Path(f"{project_root}/data/reports")
    output_dir_variable = "QFLUCT_OUTPUT_DIR"

    # Numerical tolerances, natural units
    normalization_tolerance = 1e-10
    applicability_tolerance = 1e-8
    csf_tolerance = 1e-10
    rsur_tolerance = 1e-9
    gram_tolerance = 1e-9
    # just above the subnormal range
    density_floor = 1e-280
    kernel_marginal_tolerance = 1e-10
    kernel_balance_iterations = 50
    hermitian_tolerance = 1e-12
    spectrum_tail_tolerance = 1e-8
    convergence_tolerance = 1e-4
    branch_tolerance = 1e-3

    # Grid defaults
    half_width_multiplier = 8.0
    resolution = 2048
    well_resolution = 1024
    max_hermite_order = 12

    # Density-matrix ensemble
    ensemble_seed = 20240614
    ensemble_size = 100
    ensemble_dimensions = (2, 3, 4, 8)

    @classmethod
    def tolerance_names(cls) -> set[str]:
        return {name for name in vars(cls) if name.endswith("_tolerance")}

    @classmethod
    def output_dir(cls) -> Path:
        dotenv_exists = load_dotenv(cls.project_root / ".env")
        if (directory := os.getenv(cls.output_dir_variable)) and not dotenv_exists:
            LOGGER.info(
                "Using %s from the process environment: %s",
                cls.output_dir_variable,
                directory,
            )
            return Path(directory)
        elif directory is None:
            return cls.reports_path
        return Path(directory)
