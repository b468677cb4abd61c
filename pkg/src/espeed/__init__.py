"""Energy-budgeted speed-scaling scheduling of rigid, moldable and dedicated multiprocessor jobs."""

from .duropt import DurationSolution, WeightedProgram, solve_weighted, solve_weighted_numeric
from .model import (
    EspeedError,
    Instance,
    InstanceError,
    Job,
    Piece,
    PreconditionError,
    Schedule,
    ScheduleError,
    energy_of,
    total_completion,
    validate_instance,
)

__version__ = "0.1.0"
