"""Randomized verification campaigns for the core inequalities.

Each campaign draws seeded random step-path fixtures (Philox stream per
case), evaluates one family of inequalities exactly, and returns one row per
check.  The inequalities are theorems, so any violation beyond floating-point
slack is an implementation bug; the ``corrupt`` switch deliberately inflates
the left sides to provide a negative control for the harness itself.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .checks import holds_with_slack
from .drivers import philox_stream
from .pathcore import (
    MatrixStepPath,
    StepPath,
    align,
    make_matrix_path,
    make_path,
    p_variation,
    running_max,
)
from .skorokhod import check_estimates
from .young import young_bound_check

__all__ = [
    "CampaignRow",
    "running_max_contraction_campaign",
    "reflection_estimates_campaign",
    "stieltjes_bound_campaign",
    "run_all_campaigns",
    "CAMPAIGN_CSV_HEADER",
]

CAMPAIGN_CSV_HEADER = ["campaign", "case", "check", "lhs", "rhs", "margin", "pass"]

# distinct Philox stream blocks per campaign so case streams never collide
_STREAM_BLOCK = 1 << 32
_BLOCK_RUNNING_MAX = 0
_BLOCK_REFLECTION = 1
_BLOCK_STIELTJES = 2


@dataclass(frozen=True)
class CampaignRow:
    campaign: str
    case: int
    name: str
    lhs: float
    rhs: float
    passed: bool

    @property
    def margin(self) -> float:
        return self.rhs - self.lhs

    def csv_row(self) -> list[str]:
        return [
            self.campaign,
            str(self.case),
            self.name,
            "%.17g" % self.lhs,
            "%.17g" % self.rhs,
            "%.17g" % self.margin,
            "1" if self.passed else "0",
        ]


def _random_times(rng: np.random.Generator, max_points: int, horizon: float = 1.0) -> np.ndarray:
    n = int(rng.integers(2, max_points + 1))
    gaps = rng.uniform(0.05, 1.0, size=n - 1)
    times = np.concatenate([[0.0], np.cumsum(gaps)])
    return times * (horizon / times[-1])


def _random_values(rng: np.random.Generator, n: int, d: int) -> np.ndarray:
    steps = rng.normal(scale=0.5, size=(n, d))
    # sprinkle occasional large jumps so campaigns exercise the jump regime
    spikes = rng.random(size=(n, d)) < 0.1
    steps = steps + spikes * rng.normal(scale=2.5, size=(n, d))
    steps[0] = rng.normal(scale=1.0, size=d)
    return np.cumsum(steps, axis=0)


def _random_path(rng: np.random.Generator, max_points: int, d: int = 1) -> StepPath:
    times = _random_times(rng, max_points)
    return make_path(times, _random_values(rng, times.size, d))


def _maybe_corrupt(lhs: float, corrupt: bool) -> float:
    return lhs + 1.0 + abs(lhs) if corrupt else lhs


def running_max_contraction_campaign(
    cases: int,
    seed: int,
    p_values: tuple[float, ...] = (1.0, 1.5, 2.0, 3.0),
    max_points: int = 60,
    corrupt: bool = False,
) -> list[CampaignRow]:
    """v_p of a running-max difference never exceeds v_p of the difference.

    Each case draws two scalar step paths on independent grids, aligns them,
    and compares the two p-variations at one exponent from ``p_values``.
    """
    rows = []
    for case in range(cases):
        rng = philox_stream(seed, _BLOCK_RUNNING_MAX * _STREAM_BLOCK + case)
        p = p_values[case % len(p_values)]
        y1 = _random_path(rng, max_points)
        y2 = _random_path(rng, max_points)
        y1, y2 = align([y1, y2])
        lhs = p_variation(running_max(y1) - running_max(y2), p)
        rhs = p_variation(y1 - y2, p)
        lhs = _maybe_corrupt(lhs, corrupt)
        rows.append(
            CampaignRow(
                campaign="running_max_contraction",
                case=case,
                name=f"vp_contraction_p{p:g}",
                lhs=lhs,
                rhs=rhs,
                passed=holds_with_slack(lhs, rhs),
            )
        )
    return rows


def _admissible_pair(rng: np.random.Generator, max_points: int, d: int) -> tuple[StepPath, StepPath]:
    y = _random_path(rng, max_points, d)
    l = _random_path(rng, max_points, d)
    # drop the barrier so it starts at or below the input
    shift = np.maximum(l.values[0] - y.eval(0.0), 0.0) + rng.uniform(0.0, 0.5, size=d)
    return y, make_path(l.times, l.values - shift)


def reflection_estimates_campaign(
    cases: int,
    seed: int,
    dims: tuple[int, ...] = (1, 2, 3),
    p_values: tuple[float, ...] = (1.0, 1.5, 2.0, 3.0),
    max_points: int = 60,
    corrupt: bool = False,
) -> list[CampaignRow]:
    """Lipschitz estimates of the reflection map on random problem pairs."""
    rows = []
    for case in range(cases):
        rng = philox_stream(seed, _BLOCK_REFLECTION * _STREAM_BLOCK + case)
        d = dims[case % len(dims)]
        p = p_values[(case // len(dims)) % len(p_values)]
        y, l = _admissible_pair(rng, max_points, d)
        y2, l2 = _admissible_pair(rng, max_points, d)
        report = check_estimates(y, l, y2, l2, p)
        for chk in report.checks:
            lhs = _maybe_corrupt(chk.lhs, corrupt)
            rows.append(
                CampaignRow(
                    campaign="reflection_estimates",
                    case=case,
                    name=f"{chk.name}_d{d}_p{p:g}",
                    lhs=lhs,
                    rhs=chk.rhs,
                    passed=holds_with_slack(lhs, chk.rhs),
                )
            )
    return rows


def _random_matrix_path(rng: np.random.Generator, max_points: int, d: int) -> MatrixStepPath:
    times = _random_times(rng, max_points)
    steps = rng.normal(scale=0.4, size=(times.size, d, d))
    return make_matrix_path(times, np.cumsum(steps, axis=0))


def stieltjes_bound_campaign(
    cases: int,
    seed: int,
    pq_pairs: tuple[tuple[float, float], ...] = ((1.5, 1.5), (2.0, 1.2), (1.2, 2.0), (3.0, 1.1)),
    max_points: int = 40,
    corrupt: bool = False,
) -> list[CampaignRow]:
    """zeta-constant bound for random (matrix integrand, vector driver) pairs."""
    rows = []
    for case in range(cases):
        rng = philox_stream(seed, _BLOCK_STIELTJES * _STREAM_BLOCK + case)
        p, q = pq_pairs[case % len(pq_pairs)]
        d = int(rng.integers(1, 3))
        integrand = _random_matrix_path(rng, max_points, d)
        driver = _random_path(rng, max_points, d)
        report = young_bound_check(integrand, driver, p, q)
        lhs = _maybe_corrupt(report.lhs, corrupt)
        rows.append(
            CampaignRow(
                campaign="stieltjes_bound",
                case=case,
                name=f"zeta_bound_p{p:g}_q{q:g}",
                lhs=lhs,
                rhs=report.rhs,
                passed=holds_with_slack(lhs, report.rhs),
            )
        )
    return rows


def run_all_campaigns(cases: int, seed: int, corrupt: bool = False) -> list[CampaignRow]:
    """All three campaigns with ``cases`` cases each, in a fixed order."""
    rows = []
    rows += running_max_contraction_campaign(cases, seed, corrupt=corrupt)
    rows += reflection_estimates_campaign(cases, seed, corrupt=corrupt)
    rows += stieltjes_bound_campaign(cases, seed, corrupt=corrupt)
    return rows
