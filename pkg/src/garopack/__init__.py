"""garopack: exact oscillation-norm calculus on grids.

Computes decreasing rearrangements, weak-Lorentz and weak-Linf functionals,
BMO and packing norms (John-Nirenberg JN_p, Garsia-Rodemich GaRo_p) exactly
for piecewise-constant functions on uniform grids, and mechanically checks
the quantitative inequalities linking them, including the Poincare-Sobolev
self-improvement chains driven by upper gradients.
"""

from garopack.grid import (
    Cube,
    GridFunction,
    Packing,
    cell_measure,
    enumerate_subcubes,
    integrate,
    mean,
    read_grid_csv,
    validate_packing,
    write_grid_csv,
)
from garopack.oscillation import (
    bmo_norm_classic,
    bmo_norm_star,
    double_oscillation,
    hl_maximal,
    mean_oscillation,
    sharp_maximal,
)
from garopack.packing import (
    NormResult,
    PackingObjective,
    ParetoFrontier,
    exhaustive_packings,
    garo_norm,
    jn_norm,
    packing_sum,
    pareto_frontier,
)
from garopack.rearrange import (
    StepRearrangement,
    eval_avg,
    eval_star,
    k_functional,
    rearrangement,
    reconstruct_avg,
    weak_lorentz_norm,
    weak_oscillation_norm,
)
from garopack.sobolev import (
    GradientPair,
    fit_upper_gradient_constant,
    gradient_rearrangement_check,
    poincare_chain_critical,
    poincare_chain_subcritical,
    qp_rearrangement_check,
    weak_gn_check,
)

__version__ = "0.1.0"
