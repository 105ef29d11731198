"""pvreflect: reflected differential equations driven by bounded p-variation paths.

The library is organised in five layers:

* :mod:`pvreflect.pathcore`  — cadlag step paths, p-variation, running maxima,
  oscillation, jump-adapted coarsening, alignment, CSV I/O;
* :mod:`pvreflect.skorokhod` — the reflection map at a time-dependent lower
  barrier and its Lipschitz stability report;
* :mod:`pvreflect.young`     — left-point Riemann-Stieltjes integration and
  the zeta-constant variation bound;
* :mod:`pvreflect.drivers`   — fractional Brownian motion (circulant
  embedding / Cholesky), integrated noise drivers, deterministic fixtures;
* :mod:`pvreflect.sde`       — uniform and jump-adaptive Euler schemes with
  refinement-based convergence control.

:mod:`pvreflect.cli` exposes the same functionality as a command line; the
randomized verification campaigns behind ``pvreflect verify`` live in
:mod:`pvreflect.campaigns`.
"""

from . import errors
from .pathcore import (
    Interval,
    MatrixStepPath,
    StepPath,
    TimeGrid,
    align,
    coarsen_jump_adapted,
    make_matrix_path,
    make_path,
    oscillation,
    p_variation,
    p_variation_brute,
    read_path_csv,
    running_max,
    sup_distance,
    sup_norm,
    variation_norm,
    write_path_csv,
)
from .skorokhod import EstimateReport, Reflection, check_estimates, solve_sp
from .young import (
    YoungBound,
    YoungBoundReport,
    grid_riemann_sum,
    rs_integral,
    young_bound_check,
    zeta,
)
from .drivers import (
    FbmSpec,
    VolatilitySpec,
    build_zh,
    empirical_pvar_profile,
    make_barrier,
    make_fv_driver,
    philox_stream,
    sample_fbm,
)
from .sde import (
    AprioriReport,
    Coefficients,
    Problem,
    Solution,
    a_priori_check,
    euler_adaptive,
    euler_uniform,
    solve,
)

__version__ = "0.1.0"

__all__ = [
    "errors",
    "Interval",
    "MatrixStepPath",
    "StepPath",
    "TimeGrid",
    "align",
    "coarsen_jump_adapted",
    "make_matrix_path",
    "make_path",
    "oscillation",
    "p_variation",
    "p_variation_brute",
    "read_path_csv",
    "running_max",
    "sup_distance",
    "sup_norm",
    "variation_norm",
    "write_path_csv",
    "EstimateReport",
    "Reflection",
    "check_estimates",
    "solve_sp",
    "YoungBound",
    "YoungBoundReport",
    "grid_riemann_sum",
    "rs_integral",
    "young_bound_check",
    "zeta",
    "FbmSpec",
    "VolatilitySpec",
    "build_zh",
    "empirical_pvar_profile",
    "make_barrier",
    "make_fv_driver",
    "philox_stream",
    "sample_fbm",
    "AprioriReport",
    "Coefficients",
    "Problem",
    "Solution",
    "a_priori_check",
    "euler_adaptive",
    "euler_uniform",
    "solve",
    "__version__",
]
