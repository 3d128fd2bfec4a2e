"""Lower and upper bounds on the concurrence of multipartite quantum states."""

from .bounds import (
    BoundReport,
    ToleranceConfig,
    b1,
    b2,
    b3,
    decomposition_upper,
    full_report,
    gpt_tripartite_bound,
    purity_lower,
    purity_upper,
    tau_n,
    theorem3_bound,
    theorem6_bound,
    theorem7_wclass_bound,
)
from .tensor import Bipartition, DensityMatrix, GptSpec, NumericalFailure, PureState, ValidationError

__version__ = "0.1.0"

__all__ = [
    "Bipartition", "BoundReport", "DensityMatrix", "GptSpec", "NumericalFailure", "PureState",
    "ToleranceConfig", "ValidationError", "b1", "b2", "b3", "decomposition_upper", "full_report",
    "gpt_tripartite_bound", "purity_lower", "purity_upper", "tau_n", "theorem3_bound",
    "theorem6_bound", "theorem7_wclass_bound",
]
