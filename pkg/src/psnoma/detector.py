"""Maximum-likelihood detection with successive interference cancellation.

Both users first resolve the joint (far-user symbol, power level) point by
nearest-neighbor search over the joint constellation; the near user then
cancels the detected far-user component and resolves its own symbol on the
grid of the detected level. Detection is a total function: after a wrong
joint decision the residual no longer sits on the symbol grid, but the
nearest grid point is still returned so error propagation can be simulated.

Ties break toward the lowest point index, making every decision
deterministic; under continuous noise ties occur with probability zero.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .constellation import JointConstellation, PamConstellation, RotatedPowerMatrix
from .errors import DegenerateChannelError


@dataclass(frozen=True)
class JointDecision:
    """Outcome of the joint far-symbol / power-level search."""

    point_index: int
    level_hat: int  # 1-based detected power level
    sb_hat: int  # 0-based far-user symbol index
    point: complex  # detected joint point, i.e. alpha_b(level_hat) * sb_value
    metric: float  # minimum squared distance achieved


@dataclass(frozen=True)
class FullDecision:
    """Joint decision plus the near user's own symbol estimate."""

    joint: JointDecision
    sa_hat: int  # 0-based near-user symbol index


def detect_joint_indices(y, h, joint: JointConstellation) -> np.ndarray:
    """Vectorized argmin of ``|y - h * point|^2`` over the joint constellation."""
    d = np.asarray(y)[..., None] - np.asarray(h)[..., None] * joint.points
    m = d.real**2 + d.imag**2
    return np.argmin(m, axis=-1)


def detect_joint(y: complex, h: complex, joint: JointConstellation) -> JointDecision:
    """Resolve the (far-user symbol, power level) pair from one observation."""
    if h == 0:
        raise DegenerateChannelError("zero channel gain leaves the ML metric constant")
    d = y - h * joint.points
    m = d.real**2 + d.imag**2
    i = int(np.argmin(m))
    return JointDecision(
        point_index=i,
        level_hat=int(joint.level_index[i]) + 1,
        sb_hat=int(joint.symbol_index[i]),
        point=complex(joint.points[i]),
        metric=float(m[i]),
    )


def detect_user_b(y: complex, h: complex, joint: JointConstellation) -> JointDecision:
    """Far user's detection: the identical joint rule run with its own channel."""
    return detect_joint(y, h, joint)


def sic_detect_sa(
    y: complex,
    h: complex,
    decision: JointDecision,
    g: RotatedPowerMatrix,
    sa: PamConstellation,
) -> int:
    """Cancel the detected far-user component and resolve the near-user symbol.

    Returns the 0-based index into ``sa.points``; total even when the joint
    decision was wrong.
    """
    if h == 0:
        raise DegenerateChannelError("zero channel gain leaves the ML metric constant")
    residual = y - h * decision.point
    d = residual - h * g.alpha_a[decision.level_hat - 1] * sa.points
    m = d.real**2 + d.imag**2
    return int(np.argmin(m))


def sic_detect_sa_indices(
    y,
    h,
    joint_indices: np.ndarray,
    joint: JointConstellation,
    g: RotatedPowerMatrix,
    sa: PamConstellation,
) -> np.ndarray:
    """Vectorized near-user symbol detection after cancelling the joint decision."""
    y = np.asarray(y)
    h = np.asarray(h)
    residual = y - h * joint.points[joint_indices]
    levels = joint.level_index[joint_indices]
    d = residual[..., None] - (h * g.alpha_a[levels])[..., None] * sa.points
    m = d.real**2 + d.imag**2
    return np.argmin(m, axis=-1)


def detect_full(
    y: complex,
    h: complex,
    joint: JointConstellation,
    g: RotatedPowerMatrix,
    sa: PamConstellation,
) -> FullDecision:
    """Run the complete near-user chain: joint detection, SIC, own symbol."""
    jd = detect_joint(y, h, joint)
    return FullDecision(joint=jd, sa_hat=sic_detect_sa(y, h, jd, g, sa))
