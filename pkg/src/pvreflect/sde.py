"""Euler schemes for reflected equations driven by step paths.

The equation solved is

    x_t = x_0 + int_0^t f(x_{s-}) da_s + int_0^t g(x_{s-}) dz_s + k_t,

with componentwise reflection at a lower barrier ``l``.  One Euler step over
a partition ``{t_k}`` reads

    dy_{k+1} = f(x_k) * (a_{t_{k+1}} - a_{t_k}) + g(x_k) @ (z_{t_{k+1}} - z_{t_k})
    x_{k+1}  = max(x_k + dy_{k+1}, l_{t_{k+1}})          (componentwise)
    k_{k+1}  = k_k + (x_{k+1} - x_k) - dy_{k+1},

i.e. the discrete reflection recursion; the regulator is stored as
``k = x - y`` with ``y`` the accumulated drift+noise sums, which is the same
quantity with exact additivity in floating point.

Two partitions are provided: the uniform mesh-1/n grid and the jump-adaptive
partition that additionally stops at every driver/barrier jump larger than
1/n.  `solve` drives the adaptive scheme through dyadic refinements until the
sup-distance between successive iterates (evaluated on the coarser grid)
drops below a tolerance; no convergence rate is assumed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .checks import InequalityCheck, check
from .errors import (
    CoefficientEvaluationFailure,
    DimensionMismatch,
    InadmissibleStart,
    InvalidP,
    InvalidParameter,
    NoConvergence,
    PartitionOverflow,
)
from .pathcore import StepPath, TimeGrid, sup_norm, variation_norm
from .skorokhod import Reflection

__all__ = [
    "Coefficients",
    "Problem",
    "Solution",
    "AprioriReport",
    "euler_uniform",
    "euler_adaptive",
    "solve",
    "solution_gap",
    "a_priori_check",
]


@dataclass(frozen=True)
class Coefficients:
    """Drift ``f: R^d -> R^d`` and noise ``g: R^d -> R^(d x d)``.

    The optional constants describe the regularity the caller believes the
    functions have (linear-growth constant, Holder order of g, local
    Lipschitz constants of f).  They are metadata only; nothing is verified
    symbolically and the solver simply reports non-convergence when the
    functions are too rough.
    """

    f: Callable[[np.ndarray], np.ndarray]
    g: Callable[[np.ndarray], np.ndarray]
    linear_growth: float | None = None
    holder_order: float | None = None
    local_lipschitz: dict[int, float] | None = None


@dataclass(frozen=True)
class Problem:
    """Reflected equation instance: start point, drivers, barrier, exponent."""

    x0: np.ndarray
    a: StepPath
    z: StepPath
    l: StepPath
    coeffs: Coefficients
    p: float
    horizon: float | None = None

    def __post_init__(self) -> None:
        x0 = np.atleast_1d(np.asarray(self.x0, dtype=float))
        object.__setattr__(self, "x0", x0)
        if self.p < 1.0:
            raise InvalidP(f"p must be >= 1, got {self.p}")
        if self.a.dim != 1:
            raise DimensionMismatch("finite-variation driver a must be scalar")
        d = x0.size
        if self.z.dim != d or self.l.dim != d:
            raise DimensionMismatch(
                f"x0 has dim {d}, z dim {self.z.dim}, l dim {self.l.dim}"
            )
        if np.any(x0 < self.l.eval(0.0)):
            raise InadmissibleStart("x0 must start at or above the barrier")
        horizon = self.horizon
        if horizon is None:
            horizon = max(self.a.end_time, self.z.end_time, self.l.end_time)
        horizon = float(horizon)
        if horizon <= 0.0:
            raise InvalidParameter(
                "no positive horizon: pass horizon= or use drivers with end_time > 0"
            )
        object.__setattr__(self, "horizon", horizon)

    @property
    def dim(self) -> int:
        return int(self.x0.size)


@dataclass(frozen=True)
class Solution:
    """Scheme output: the reflected pair on the scheme grid plus diagnostics."""

    reflection: Reflection
    scheme: str
    n: int
    diagnostics: dict[str, float] = field(default_factory=dict)

    @property
    def x(self) -> StepPath:
        return self.reflection.x

    @property
    def k(self) -> StepPath:
        return self.reflection.k


def _uniform_partition(horizon: float, n: int) -> np.ndarray:
    # mesh exactly 1/n: points k/n up to the horizon, then the horizon itself
    last = math.floor(horizon * n)
    times = np.arange(last + 1, dtype=float) / n
    if times[-1] < horizon:
        times = np.append(times, horizon)
    return times


def _big_jump_times(problem: Problem, threshold: float) -> np.ndarray:
    cut = []
    for path in (problem.a, problem.z, problem.l):
        times, incr = path.jumps()
        sizes = np.sqrt(np.einsum("ij,ij->i", incr, incr))
        cut.append(times[(sizes > threshold) & (times <= problem.horizon)])
    merged = np.unique(np.concatenate(cut)) if cut else np.empty(0)
    return merged


def _adaptive_partition(problem: Problem, n: int, step_cap: int) -> np.ndarray:
    """Stop at every driver/barrier jump > 1/n, else advance by mesh 1/n.

    Mesh candidates are computed as ``base + j/n`` from the most recent jump
    time ``base`` (integer multiples, not accumulated sums), so that with no
    large jumps the partition reproduces the uniform grid bit for bit.
    """
    horizon = problem.horizon
    big = _big_jump_times(problem, 1.0 / n)
    out = [0.0]
    t = 0.0
    base = 0.0
    mesh_count = 0
    ptr = 0
    while True:
        while ptr < big.size and big[ptr] <= t:
            ptr += 1
        next_jump = big[ptr] if ptr < big.size else np.inf
        mesh_t = base + (mesh_count + 1) / n
        if next_jump <= mesh_t:
            t = float(next_jump)
            base = t
            mesh_count = 0
        else:
            if mesh_t >= horizon:
                break
            t = mesh_t
            mesh_count += 1
        out.append(t)
        if len(out) > step_cap:
            raise PartitionOverflow(
                f"adaptive partition exceeded {step_cap} points"
            )
    if out[-1] < horizon:
        out.append(horizon)
    return np.asarray(out)


def _eval_coefficient(func, point: np.ndarray, shape: tuple[int, ...], label: str):
    value = np.asarray(func(point), dtype=float)
    if value.shape != shape:
        raise CoefficientEvaluationFailure(
            f"{label}({point}) returned shape {value.shape}, expected {shape}"
        )
    if not np.isfinite(value).all():
        raise CoefficientEvaluationFailure(f"{label}({point}) is not finite")
    return value


def _run_recursion(problem: Problem, times: np.ndarray, scheme: str, n: int) -> Solution:
    d = problem.dim
    a_s = problem.a.eval(times)[:, 0]
    z_s = problem.z.eval(times)
    l_s = problem.l.eval(times)
    m = times.size
    x = np.empty((m, d))
    y = np.empty((m, d))
    x[0] = problem.x0
    y[0] = problem.x0
    f, g = problem.coeffs.f, problem.coeffs.g
    for j in range(1, m):
        prev = x[j - 1]
        fv = _eval_coefficient(f, prev, (d,), "f")
        gv = _eval_coefficient(g, prev, (d, d), "g")
        dy = fv * (a_s[j] - a_s[j - 1]) + gv @ (z_s[j] - z_s[j - 1])
        x[j] = np.maximum(prev + dy, l_s[j])
        y[j] = y[j - 1] + dy
    grid = TimeGrid(times)
    reflection = Reflection(
        x=StepPath(grid, x),
        k=StepPath(grid, x - y),
        y=StepPath(grid, y),
        l=StepPath(grid, l_s),
    )
    diagnostics = {
        "vbar_p_x": variation_norm(reflection.x, problem.p),
        "sup_k": sup_norm(reflection.k),
        "steps": float(m),
    }
    return Solution(reflection=reflection, scheme=scheme, n=n, diagnostics=diagnostics)


def euler_uniform(problem: Problem, n: int) -> Solution:
    """Euler scheme on the uniform mesh-1/n partition of [0, horizon]."""
    if n < 1:
        raise InvalidParameter("n must be >= 1")
    return _run_recursion(problem, _uniform_partition(problem.horizon, n), "uniform", n)


def euler_adaptive(problem: Problem, n: int, step_cap: int = 10_000_000) -> Solution:
    """Euler scheme on the jump-adaptive partition.

    The partition advances by mesh 1/n but stops exactly at every jump of
    ``a``, ``z`` or ``l`` whose size exceeds 1/n, so large jumps are applied
    in a single step.  With no such jumps it coincides with the uniform grid.
    """
    if n < 1:
        raise InvalidParameter("n must be >= 1")
    times = _adaptive_partition(problem, n, step_cap)
    return _run_recursion(problem, times, "adaptive", n)


def solution_gap(fine: Solution, coarse: Solution) -> float:
    """Sup distance of (x, k) between refinement levels, on the coarser grid."""
    ts = coarse.reflection.times
    gaps = []
    for attr in ("x", "k"):
        fine_vals = getattr(fine.reflection, attr).eval(ts)
        coarse_vals = getattr(coarse.reflection, attr).values
        diff = fine_vals - coarse_vals
        gaps.append(float(np.sqrt(np.einsum("ij,ij->i", diff, diff)).max()))
    return max(gaps)


def solve(problem: Problem, tol: float, n0: int,
          max_doublings: int = 14, step_cap: int = 10_000_000) -> Solution:
    """Adaptive scheme with a posteriori refinement control.

    Runs ``euler_adaptive`` at n0, 2*n0, 4*n0, ... and stops once the
    sup-distance between successive iterates falls below ``tol``, returning
    the finest solution with the achieved gap recorded in ``diagnostics``.
    Raises :class:`NoConvergence` after ``max_doublings`` refinements, which
    signals non-regular coefficients or an unreachable tolerance.
    """
    if tol < 0.0:
        raise InvalidParameter("tol must be >= 0")
    if n0 < 1:
        raise InvalidParameter("n0 must be >= 1")
    prev = euler_adaptive(problem, n0, step_cap)
    n = n0
    for _ in range(max_doublings):
        n *= 2
        cur = euler_adaptive(problem, n, step_cap)
        gap = solution_gap(cur, prev)
        if gap < tol:
            diagnostics = dict(cur.diagnostics)
            diagnostics["cauchy_gap"] = gap
            return Solution(cur.reflection, cur.scheme, cur.n, diagnostics)
        prev = cur
    raise NoConvergence(
        f"no Cauchy gap below {tol} within {max_doublings} doublings from n0={n0}"
    )


@dataclass(frozen=True)
class AprioriReport:
    """A-priori size bounds evaluated on a scheme output."""

    checks: tuple[InequalityCheck, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


def a_priori_check(solution: Solution, problem: Problem) -> AprioriReport:
    """Verify the regulator and state bounds implied by the reflection map.

    With ``y`` the accumulated drift+noise path of the scheme:

    * ``Vbar_p(k) <= d * (sup|y| + sup|l|)``
    * ``Vbar_p(x) <= (d+1) * Vbar_p(y) + d * sup|l|``
    """
    d = problem.dim
    p = problem.p
    r = solution.reflection
    sup_l = sup_norm(problem.l)
    sup_y = sup_norm(r.y)
    rows = (
        check("regulator_vbar_bound", variation_norm(r.k, p), d * (sup_y + sup_l)),
        check("state_vbar_bound", variation_norm(r.x, p),
              (d + 1) * variation_norm(r.y, p) + d * sup_l),
    )
    return AprioriReport(checks=rows)
