import math

import numpy as np
import pytest

from pvreflect import (
    Coefficients,
    FbmSpec,
    Problem,
    VolatilitySpec,
    a_priori_check,
    build_zh,
    euler_adaptive,
    euler_uniform,
    make_barrier,
    make_fv_driver,
    make_path,
    sample_fbm,
    solve,
    solve_sp,
    sup_distance,
)
from pvreflect.errors import (
    CoefficientEvaluationFailure,
    DimensionMismatch,
    InadmissibleStart,
    InvalidParameter,
    NoConvergence,
    PartitionOverflow,
)
from pvreflect.presets import coefficient_preset
from pvreflect.sde import solution_gap
from pvreflect.drivers import philox_stream
from conftest import random_step_path


def zero_a(horizon=1.0):
    return make_fv_driver("constant", value=0.0, horizon=horizon)


def identity_coeffs(d=1):
    return coefficient_preset("identity", d)


def fbm_problem(seed, d=1, coeffs="tanh", n_driver=256, barrier_level=0.0):
    spec = FbmSpec(hurst=0.75, horizon=1.0, steps=n_driver, seed=seed)
    comps = [sample_fbm(spec, path_index=i) for i in range(d)]
    z = build_zh(comps, VolatilitySpec(np.ones((d, n_driver + 1))))
    return Problem(
        x0=np.full(d, 0.5),
        a=make_fv_driver("linear", horizon=1.0, steps=n_driver),
        z=z,
        l=make_barrier("constant", dim=d, level=barrier_level, horizon=1.0),
        coeffs=coefficient_preset(coeffs, d),
        p=2.0,
    )


# ---------------------------------------------------------------------------
# problem validation
# ---------------------------------------------------------------------------

def test_problem_validation():
    z = make_path([0, 1], [0, 1])
    l = make_barrier("constant", dim=1, level=0.0, horizon=1.0)
    with pytest.raises(InadmissibleStart):
        Problem(x0=[-1.0], a=zero_a(), z=z, l=l, coeffs=identity_coeffs(), p=2.0)
    with pytest.raises(DimensionMismatch):
        Problem(x0=[0.0, 0.0], a=zero_a(), z=z, l=l, coeffs=identity_coeffs(), p=2.0)
    with pytest.raises(DimensionMismatch):
        Problem(x0=[0.0], a=make_path([0, 1], [(0, 0), (1, 1)]), z=z, l=l,
                coeffs=identity_coeffs(), p=2.0)
    # horizon inferred from driver end times
    prob = Problem(x0=[1.0], a=zero_a(2.0), z=z, l=l, coeffs=identity_coeffs(), p=2.0)
    assert prob.horizon == 2.0
    with pytest.raises(InvalidParameter):
        Problem(x0=[1.0], a=make_path([0.0], [0.0]), z=make_path([0.0], [0.0]),
                l=make_path([0.0], [0.0]), coeffs=identity_coeffs(), p=2.0)


# ---------------------------------------------------------------------------
# the uniform scheme
# ---------------------------------------------------------------------------

def test_additive_case_with_remote_barrier_reproduces_driver():
    rng = philox_stream(10)
    z = random_step_path(rng, max_points=30, horizon=1.0)
    prob = Problem(x0=[0.0], a=zero_a(), z=z,
                   l=make_barrier("constant", level=-1e9, horizon=1.0),
                   coeffs=identity_coeffs(), p=2.0)
    sol = euler_uniform(prob, 64)
    grid = sol.x.times
    assert np.allclose(sol.x.values, z.eval(grid) - z.eval(0.0), atol=1e-12)
    assert np.all(sol.k.values == 0.0)


def test_scheme_equals_reflection_of_sampled_input():
    # with f=0, g=I the recursion is the running-max reflection of the
    # sampled input: no discretization error at any resolution
    for case in range(10):
        rng = philox_stream(11, case)
        z = random_step_path(rng, max_points=40, horizon=1.0)
        x0 = abs(float(rng.normal())) + 0.1
        prob = Problem(x0=[x0], a=zero_a(), z=z,
                       l=make_barrier("constant", level=0.0, horizon=1.0),
                       coeffs=identity_coeffs(), p=2.0)
        sol = euler_uniform(prob, 37)
        grid = sol.x.times
        sampled = make_path(grid, x0 + z.eval(grid) - z.eval(0.0))
        ref = solve_sp(sampled, make_path([0.0], [0.0]))
        assert np.abs(sol.x.values - ref.x.values).max() <= 1e-12
        assert np.abs(sol.k.values - ref.k.values).max() <= 1e-12


def test_geometric_growth_oracle():
    n = 1024
    prob = Problem(
        x0=[1.0], a=zero_a(),
        z=make_fv_driver("linear", horizon=1.0, steps=n),
        l=make_barrier("constant", level=-1e6, horizon=1.0),
        coeffs=coefficient_preset("geometric", 1), p=2.0,
    )
    sol = euler_uniform(prob, n)
    assert abs(sol.x.eval(1.0)[0] - math.e) < 5e-3
    assert abs(sol.x.eval(1.0)[0] - (1 + 1 / n) ** n) < 1e-10
    assert np.all(sol.k.values == 0.0)


def test_scheme_invariants_on_random_problems():
    for case in range(15):
        rng = philox_stream(12, case)
        d = int(rng.integers(1, 3))
        z = random_step_path(rng, max_points=30, d=d)
        l = random_step_path(rng, max_points=10, d=d, jump_scale=0.3)
        l = make_path(l.times, l.values - l.values[0] - 1.0)  # starts at -1
        prob = Problem(x0=np.zeros(d), a=make_fv_driver("linear", steps=8),
                       z=z, l=l, coeffs=coefficient_preset("tanh", d), p=2.0)
        sol = euler_adaptive(prob, 25)
        r = sol.reflection
        assert r.max_defect() <= 1e-12
        # regulator moves only while touching the barrier
        dk = np.diff(r.k.values, axis=0)
        gap = (r.x.values - r.l.values)[1:]
        assert np.all(gap[dk > 1e-12] <= 1e-9)


def test_coefficient_failure_is_reported():
    prob = Problem(
        x0=[1.0], a=zero_a(), z=make_path([0, 1], [0, 1]),
        l=make_barrier("constant", level=0.0, horizon=1.0),
        coeffs=Coefficients(f=lambda x: np.zeros(1), g=lambda x: np.full((1, 1), np.nan)),
        p=2.0,
    )
    with pytest.raises(CoefficientEvaluationFailure):
        euler_uniform(prob, 8)


# ---------------------------------------------------------------------------
# the adaptive scheme
# ---------------------------------------------------------------------------

def test_adaptive_partition_hits_large_jump_exactly():
    z = make_path([0.0, 0.37, 1.0], [0.0, 1.0, 1.0])
    prob = Problem(x0=[0.0], a=zero_a(), z=z,
                   l=make_barrier("constant", level=-1e6, horizon=1.0),
                   coeffs=identity_coeffs(), p=2.0)
    sol = euler_adaptive(prob, 10)
    times = sol.x.times.tolist()
    assert 0.37 in times
    i = times.index(0.37)
    # the whole jump lands in a single step
    assert sol.x.values[i, 0] - sol.x.values[i - 1, 0] == pytest.approx(1.0, abs=1e-12)


def test_adaptive_ignores_small_jumps():
    z = make_path([0.0, 0.37, 1.0], [0.0, 0.05, 0.05])  # jump below 1/n
    prob = Problem(x0=[0.0], a=zero_a(), z=z,
                   l=make_barrier("constant", level=-1e6, horizon=1.0),
                   coeffs=identity_coeffs(), p=2.0)
    sol = euler_adaptive(prob, 10)
    assert 0.37 not in sol.x.times.tolist()
    uniform = euler_uniform(prob, 10)
    assert np.array_equal(sol.x.times, uniform.x.times)
    assert np.abs(sol.x.values - uniform.x.values).max() <= 1e-12


def test_adaptive_collapses_to_uniform_without_jumps():
    z = make_fv_driver("linear", horizon=1.0, steps=1000)
    prob = Problem(x0=[0.0], a=zero_a(), z=z,
                   l=make_barrier("constant", level=-1.0, horizon=1.0),
                   coeffs=identity_coeffs(), p=2.0)
    sa, su = euler_adaptive(prob, 10), euler_uniform(prob, 10)
    assert np.array_equal(sa.x.times, su.x.times)
    assert np.array_equal(sa.x.values, su.x.values)
    assert np.array_equal(sa.k.values, su.k.values)


def test_partition_overflow_guard():
    prob = fbm_problem(1, n_driver=64)
    with pytest.raises(PartitionOverflow):
        euler_adaptive(prob, 1024, step_cap=100)


# ---------------------------------------------------------------------------
# refinement control
# ---------------------------------------------------------------------------

def test_solve_exact_case_stops_immediately():
    rng = philox_stream(13)
    z = random_step_path(rng, max_points=17, horizon=1.0)  # jumps exceed 1/16
    prob = Problem(x0=[1.0], a=zero_a(), z=z,
                   l=make_barrier("constant", level=0.0, horizon=1.0),
                   coeffs=identity_coeffs(), p=2.0)
    sol = solve(prob, tol=1e-9, n0=16)
    assert sol.n <= 32
    assert sol.diagnostics["cauchy_gap"] <= 1e-12


def test_solve_geometric_converges():
    prob = Problem(
        x0=[1.0], a=zero_a(),
        z=make_fv_driver("linear", horizon=1.0, steps=8192),
        l=make_barrier("constant", level=-1e6, horizon=1.0),
        coeffs=coefficient_preset("geometric", 1), p=2.0,
    )
    sol = solve(prob, tol=1e-2, n0=16)
    assert sol.n <= 16 * 2 ** 10
    assert sol.diagnostics["cauchy_gap"] < 1e-2
    assert abs(sol.x.eval(1.0)[0] - math.e) < 1e-2


def test_solve_unreachable_tolerance():
    prob = Problem(x0=[1.0], a=zero_a(), z=make_path([0, 1], [0, 1]),
                   l=make_barrier("constant", level=0.0, horizon=1.0),
                   coeffs=identity_coeffs(), p=2.0)
    with pytest.raises(NoConvergence):
        solve(prob, tol=0.0, n0=1, max_doublings=6)


def test_refinement_gaps_shrink_monotonically_beyond_burn_in():
    for s in range(20):
        prob = fbm_problem(3000 + s)
        sols = [euler_adaptive(prob, n) for n in (16, 32, 64, 128, 256)]
        gaps = [solution_gap(b, a) for a, b in zip(sols, sols[1:])]
        assert all(g2 <= g1 + 1e-12 for g1, g2 in zip(gaps[1:], gaps[2:])), (s, gaps)


def test_perturbation_stability_linear_response():
    prob = fbm_problem(42)
    base = solve(prob, tol=1e-4, n0=64)
    wiggle = np.where(np.arange(len(prob.z.times)) % 2 == 0, 1.0, -1.0)[:, None]
    ratios = []
    for eps in (1e-2, 1e-3, 1e-4):
        z2 = make_path(prob.z.times, prob.z.values + eps * wiggle)
        prob2 = Problem(x0=prob.x0, a=prob.a, z=z2, l=prob.l,
                        coeffs=prob.coeffs, p=2.0)
        pert = solve(prob2, tol=1e-4, n0=64)
        diff = max(sup_distance(pert.x, base.x), sup_distance(pert.k, base.k))
        assert diff <= 10.0 * eps
        ratios.append(diff / eps)
    assert ratios[-1] <= 2.0 * ratios[0] + 1.0


def test_dimension_decoupling_block_diagonal():
    # block-diagonal noise and a componentwise barrier make the 2-d solve the
    # product of its scalar solves
    rng = philox_stream(14)
    z = random_step_path(rng, max_points=25, d=2)
    a = make_fv_driver("linear", horizon=1.0, steps=16)

    def g2(x):
        return np.diag([np.cos(x[0]), 1.0 + 0.5 * np.tanh(x[1])])

    def f2(x):
        return np.array([0.3 * np.tanh(x[0]), -0.2 * np.tanh(x[1])])

    coeffs2 = Coefficients(f=f2, g=g2)
    l2 = make_barrier("constant", dim=2, level=(-0.5, -0.25), horizon=1.0)
    prob2 = Problem(x0=[0.2, 0.4], a=a, z=z, l=l2, coeffs=coeffs2, p=2.0)
    # uniform partitions match between the joint and per-component problems
    # (the adaptive ones would not: jump sizes are measured jointly)
    joint = euler_uniform(prob2, 32)

    for i in range(2):
        gi = [lambda x: np.array([[np.cos(x[0])]]),
              lambda x: np.array([[1.0 + 0.5 * np.tanh(x[0])]])][i]
        fi = [lambda x: np.array([0.3 * np.tanh(x[0])]),
              lambda x: np.array([-0.2 * np.tanh(x[0])])][i]
        prob1 = Problem(
            x0=[[0.2, 0.4][i]], a=a, z=z.component(i),
            l=make_barrier("constant", dim=1, level=[-0.5, -0.25][i], horizon=1.0),
            coeffs=Coefficients(f=fi, g=gi), p=2.0,
        )
        single = euler_uniform(prob1, 32)
        assert np.abs(joint.x.eval(single.x.times)[:, i]
                      - single.x.values[:, 0]).max() <= 1e-12


# ---------------------------------------------------------------------------
# a-priori bounds
# ---------------------------------------------------------------------------

def test_a_priori_trivial_regulator():
    prob = Problem(x0=[0.0], a=zero_a(), z=make_path([0, 1], [0, 1]),
                   l=make_barrier("constant", level=-1e9, horizon=1.0),
                   coeffs=identity_coeffs(), p=2.0)
    sol = euler_uniform(prob, 16)
    assert np.all(sol.k.values == 0.0)
    assert a_priori_check(sol, prob).passed


def test_a_priori_reflected_and_random_cases():
    prob = fbm_problem(33, d=1, coeffs="identity")
    sol = euler_adaptive(prob, 128)
    assert sol.diagnostics["sup_k"] > 0.0  # the barrier actually binds
    report = a_priori_check(sol, prob)
    assert report.passed
    for chk in report.checks:
        assert chk.margin >= 0.0

    prob2 = fbm_problem(22, d=2, coeffs="rotation2d")
    sol2 = euler_adaptive(prob2, 128)
    assert a_priori_check(sol2, prob2).passed
