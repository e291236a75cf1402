from enum import Enum, IntEnum


class GridKind(Enum):
    line = "line"
    periodic = "periodic"


class Representation(Enum):
    coordinate = "coordinate"
    phase = "phase"
    time = "time"


class OutputFormat(Enum):
    csv = "csv"
    json = "json"


class RelationName(Enum):
    csf = "CSF"
    rsur = "RSUR"
    gram = "GRAM"
    multi_temporal = "MULTI_CSF"
    oracle = "ORACLE"
    rho_csf = "RHO_CSF"
    rho_rsur = "RHO_RSUR"
    identity = "IDENTITY"


class ExitCode(IntEnum):
    ok = 0
    usage = 1
    io = 2
    domain = 3
    check_failed = 4
    internal = 5


class MomentumBranch(Enum):
    """
    Which closed form for the out-state momentum error the numbers support
    """

    printed = "printed"
    half_width = "half-width"
    none = "none"


class Observable:
    # Labels shared by estimator reports, error reports and report rows
    position = "x"
    momentum = "p"
    hamiltonian = "H"
    number = "N"
    phase = "phi"
    energy = "E"
    time = "t"
