"""Resource-bounded algorithmic information on a small prefix machine, and
Monte Carlo studies of the information carried by quantum measurements."""

from .bits import pair, self_delimit
from .info import Channel, FiniteProbability, conservation_slack, prob_info, random_channel, transform
from .machine import (
    DEFAULT_BUDGET,
    INFINITE,
    BudgetError,
    ComplexityTable,
    HaltingRecord,
    MachineBudget,
    NonHalting,
    UndefinedInformation,
    algorithmic_probability,
    build_table,
    complexity,
    complexity_table,
    enumerate_programs,
    joint_complexity,
    kraft_sum,
    run,
    string_info,
)
from .quantum import (
    DensityMatrix,
    Povm,
    PovmValidationError,
    PureState,
    basis_povm,
    haar_sample,
    measure,
    random_povm,
    second_moment_estimate,
    symmetric_projector,
    validate_povm,
)

__version__ = "0.1.0"
