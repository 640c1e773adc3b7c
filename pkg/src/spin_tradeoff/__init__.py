"""Optimal information-disturbance tradeoff for spin-j coherent state estimation.

Typical use::

    from spin_tradeoff import solve_for_G
    pt = solve_for_G(4, 0.5)      # two_j = 4, target estimation fidelity
    pt.F, pt.a, pt.trace_xi
"""

from .angular import GroupElement, SpinJ, cg_table, rotation_matrix
from .coherent import Direction, coherent_state, make_rng
from .errors import DomainError, NumericError
from .instrument import (
    CovariantInstrument,
    DensityMatrix,
    fidelities_bilinear,
    fidelities_monte_carlo,
    fidelities_quadrature,
)
from .tradeoff import (
    TradeoffPoint,
    XiDiagonal,
    build_matrices,
    ho_tradeoff,
    normalize,
    solve_for_G,
    sweep_curve,
    tradeoff_point,
)

__version__ = "0.1.0"

__all__ = [
    "CovariantInstrument",
    "DensityMatrix",
    "Direction",
    "DomainError",
    "GroupElement",
    "NumericError",
    "SpinJ",
    "TradeoffPoint",
    "XiDiagonal",
    "build_matrices",
    "cg_table",
    "coherent_state",
    "fidelities_bilinear",
    "fidelities_monte_carlo",
    "fidelities_quadrature",
    "ho_tradeoff",
    "make_rng",
    "normalize",
    "rotation_matrix",
    "solve_for_G",
    "sweep_curve",
    "tradeoff_point",
]
