"""Exhaustive minimum-distance analysis of the derived constellations.

The level-count and power-matrix design claims are verified numerically:
every pairwise Euclidean distance of a joint constellation is computed
outright rather than reasoned about symbolically, so the reports double as
test oracles for the closed-form distance expressions.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .constellation import (
    JointConstellation,
    PamConstellation,
    RotatedPowerMatrix,
    build_joint_constellation,
    build_power_matrix,
)
from .errors import ParameterError, ShapeError


@dataclass(frozen=True, eq=False)
class DistanceReport:
    """Full pairwise Euclidean distance table of a constellation."""

    d_min: float
    arg_pair: tuple[int, int]  # first pair achieving d_min, row-major order
    per_point_min: np.ndarray  # nearest-neighbor distance per point
    table: np.ndarray  # symmetric, zero diagonal
    degenerate: bool  # True when two points coincide


def joint_dmin(joint: JointConstellation) -> DistanceReport:
    """Exhaustive minimum-distance report for a joint constellation.

    Coincident points yield a zero-distance report flagged degenerate rather
    than an error, so callers can inspect which rows collided.
    """
    pts = joint.points
    if pts.size < 2:
        raise ParameterError("need at least two points for a distance report")
    table = np.abs(pts[:, None] - pts[None, :])
    off = table + np.diag(np.full(pts.size, np.inf))
    i, j = np.unravel_index(int(np.argmin(off)), off.shape)
    d_min = float(off[i, j])
    return DistanceReport(
        d_min=d_min,
        arg_pair=(int(i), int(j)),
        per_point_min=off.min(axis=1),
        table=table,
        degenerate=d_min == 0.0,
    )


def da_min(g: RotatedPowerMatrix, sa: PamConstellation) -> float:
    """Minimum distance of the near-user grid across power levels."""
    return float(2.0 * sa.half_distance * np.min(np.abs(g.alpha_a)))


@dataclass(frozen=True)
class LevelComparison:
    """Joint minimum distance per candidate level count at equal power split."""

    p: float
    d_min_by_n: tuple[tuple[int, float], ...]
    two_is_optimal: bool | None  # None when 2 was not among the candidates


def compare_levels(
    p: float, n_list: Sequence[int], sb: PamConstellation
) -> LevelComparison:
    """Compare joint minimum distances across level counts at one power split.

    Every candidate uses the equal-magnitude matrix with near-user fraction
    ``p`` on all levels, isolating the effect of the level count.
    """
    entries = []
    for n in n_list:
        g = build_power_matrix([p] * n, n)
        entries.append((int(n), joint_dmin(build_joint_constellation(g, sb)).d_min))
    by_n = dict(entries)
    two_best = None
    if 2 in by_n:
        two_best = all(by_n[2] >= d for n, d in entries if n != 2)
    return LevelComparison(p=p, d_min_by_n=tuple(entries), two_is_optimal=two_best)


@dataclass(frozen=True)
class ConstellationDistances:
    """Minimum distances relevant to each user for one power matrix."""

    da_min: float
    joint_d_min: float


@dataclass(frozen=True)
class PowerMatrixComparison:
    equal_magnitude: ConstellationDistances
    alternative: ConstellationDistances


def compare_power_matrix_designs(
    g_equal: RotatedPowerMatrix,
    g_unequal: RotatedPowerMatrix,
    sa: PamConstellation,
    sb: PamConstellation,
) -> PowerMatrixComparison:
    """Distance-level comparison of an equal-magnitude design against another."""
    if g_equal.n_levels != g_unequal.n_levels:
        raise ShapeError(
            f"matrices must share a level count, got {g_equal.n_levels} and {g_unequal.n_levels}"
        )

    def distances(g: RotatedPowerMatrix) -> ConstellationDistances:
        return ConstellationDistances(
            da_min=da_min(g, sa),
            joint_d_min=joint_dmin(build_joint_constellation(g, sb)).d_min,
        )

    return PowerMatrixComparison(
        equal_magnitude=distances(g_equal),
        alternative=distances(g_unequal),
    )


def pair_table_csv(report: DistanceReport) -> str:
    """Render the upper-triangle pair distances as CSV text."""
    lines = ["i,j,distance"]
    n = report.table.shape[0]
    for i in range(n):
        for j in range(i + 1, n):
            lines.append(f"{i},{j},{report.table[i, j]:.12g}")
    return "\n".join(lines) + "\n"
