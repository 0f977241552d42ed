from .driver import RunConfig, RunReport, readout, run_amplification, run_trials
from .naive import (DEFAULT_NAIVE_CAP, EquivalenceReport, FullState, apply_gt4, compare_engines,
                    gt4_cascade, naive_run)
from .structured import (DegenerateMeasurement, PartialNegation, StructuredState, apply_mx,
                         forced_iterations, measure_aux, prepare)

__all__ = [
    "DEFAULT_NAIVE_CAP", "DegenerateMeasurement", "EquivalenceReport", "FullState",
    "PartialNegation", "RunConfig", "RunReport", "StructuredState", "apply_gt4", "apply_mx",
    "compare_engines", "forced_iterations", "gt4_cascade", "measure_aux", "naive_run",
    "prepare", "readout", "run_amplification", "run_trials",
]
