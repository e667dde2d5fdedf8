"""Simulation of quantum systems on closed timelike curves.

Deutsch (density-operator) and post-selected (path-integral) boundary
conditions, the teleportation time machine, and the supporting
Unruh/Hawking/Rindler/wormhole formulas.
"""

from .ctc import (
    CtcSolution,
    CtcWiring,
    apply_pctc,
    deutsch_map,
    extend_to_entangled,
    pctc_operator,
    solve_deutsch_iterative,
    solve_deutsch_nullspace,
)
from .exceptions import ConvergenceError, DimensionError, InvalidStateError, ParadoxError
from .quantum import (
    DensityOperator,
    PureState,
    UnitaryGate,
    bell_state,
    fidelity,
    negativity,
    purity,
    standard_gate,
    trace_distance,
    von_neumann_entropy,
)
from .scenarios import ScenarioResult, run_scenario

__version__ = "0.1.0"

__all__ = [
    "ConvergenceError",
    "CtcSolution",
    "CtcWiring",
    "DensityOperator",
    "DimensionError",
    "InvalidStateError",
    "ParadoxError",
    "PureState",
    "ScenarioResult",
    "UnitaryGate",
    "apply_pctc",
    "bell_state",
    "deutsch_map",
    "extend_to_entangled",
    "fidelity",
    "negativity",
    "pctc_operator",
    "purity",
    "run_scenario",
    "solve_deutsch_iterative",
    "solve_deutsch_nullspace",
    "standard_gate",
    "trace_distance",
    "von_neumann_entropy",
]
