"""Closed-form error-rate approximations and their Monte Carlo cross-checks.

The pairwise error probability between two joint-constellation points folds
the untreated near-user interference into an equivalent noise variance, then
averages the resulting Gaussian tail over the Rayleigh gain in closed form.
Union-bound sums of those terms give the far user's BER and the joint-symbol
error ratio that drives error propagation through SIC at the near user; a
standard Gray-coded PAM bit-error expression over Rayleigh fading covers the
post-cancellation stage.

``pep_oracle_mc`` estimates the same pairwise probability by sampling the
decision variable directly and is the independent reference the closed form
is validated against.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channel import draw_channel, draw_noise
from .constellation import (
    JointConstellation,
    PamConstellation,
    RotatedPowerMatrix,
    build_pam,
    is_power_of_two,
)
from .errors import InvalidOrderError, InvalidPairError, ParameterError


def equivalent_noise(delta_x_b: complex, x_a: complex, n0: float) -> float:
    """Equivalent noise variance of a pairwise decision with interference.

    ``delta_x_b`` is the difference between the true and the competing
    faded-free far-user components; ``x_a`` is the superimposed near-user
    component sharing the true point's power level. Returns ``inf`` when the
    interference exactly cancels the pair separation (the pairwise error
    probability then saturates at one half).
    """
    d2 = abs(delta_x_b) ** 2
    if d2 == 0.0:
        raise InvalidPairError("identical pair has no pairwise error event")
    gap = d2 + 2.0 * (np.conjugate(x_a) * delta_x_b).real
    if gap == 0.0:
        return math.inf
    return n0 * d2 / (gap * gap)


def rayleigh_pep(n0_equal: float, beta: float) -> float:
    """Rayleigh-averaged pairwise error probability for one interference term."""
    if math.isinf(n0_equal):
        return 0.5
    return 0.5 * (1.0 - math.sqrt(beta / (4.0 * n0_equal + beta)))


def pep_pair(
    i: int,
    j: int,
    joint: JointConstellation,
    sa: PamConstellation,
    g: RotatedPowerMatrix,
    beta: float,
    n0: float,
) -> float:
    """Closed-form probability of detecting joint point ``i`` as ``j``.

    Averaged uniformly over the near-user interferer symbols, which carry the
    same power level as the true point ``i``.
    """
    if i == j:
        raise InvalidPairError("pairwise error probability needs distinct points")
    if beta <= 0.0:
        raise ParameterError(f"channel variance must be positive, got {beta}")
    delta = complex(joint.points[i] - joint.points[j])
    alpha = g.alpha_a[joint.level_index[i]]
    total = 0.0
    for s in sa.points:
        total += rayleigh_pep(equivalent_noise(delta, alpha * s, n0), beta)
    return total / sa.order


def pep_oracle_mc(
    i: int,
    j: int,
    joint: JointConstellation,
    sa: PamConstellation,
    g: RotatedPowerMatrix,
    beta: float,
    n0: float,
    trials: int,
    rng: np.random.Generator,
) -> float:
    """Brute-force estimate of the pairwise error probability.

    Samples the fading, the interferer symbol, and the noise, and counts how
    often the pairwise metric difference favors the wrong point. Standard
    error is roughly ``sqrt(p * (1 - p) / trials)``.
    """
    if i == j:
        raise InvalidPairError("pairwise error probability needs distinct points")
    if trials < 10_000:
        raise ParameterError(f"need at least 1e4 trials for a usable estimate, got {trials}")
    delta = complex(joint.points[i] - joint.points[j])
    alpha = g.alpha_a[joint.level_index[i]]
    h = draw_channel(beta, rng, size=trials)
    x_a = alpha * sa.points[rng.integers(0, sa.order, size=trials)]
    noise = draw_noise(n0, rng, size=trials) if n0 > 0 else 0.0
    w = h * x_a + noise
    hd = h * delta
    d_stat = -(hd.real**2 + hd.imag**2) - 2.0 * (np.conjugate(w) * hd).real
    return float(np.mean(d_stat > 0.0))


def bit_error_table(joint: JointConstellation) -> np.ndarray:
    """Pairwise Hamming distances between joint-point bit labels."""
    codes = joint.bit_codes
    return np.bitwise_count(codes[:, None] ^ codes[None, :]).astype(np.int64)


@dataclass(frozen=True)
class UnionBound:
    """Union-bound sum, clamped to its meaningful output range plus the raw value."""

    value: float
    raw: float


def ber_ub(
    joint: JointConstellation,
    sa: PamConstellation,
    g: RotatedPowerMatrix,
    beta_b: float,
    n0: float,
) -> UnionBound:
    """Approximate far-user BER over its level and symbol bits.

    Union bound of pairwise error probabilities weighted by label Hamming
    distances; the sum can exceed the probability range at low SNR, so the
    value is clamped to [0, 0.5] and the raw sum reported alongside.
    """
    table = bit_error_table(joint)
    size = joint.size
    total = 0.0
    for i in range(size):
        for j in range(size):
            if i == j:
                continue
            total += pep_pair(i, j, joint, sa, g, beta_b, n0) * table[i, j]
    raw = total / (size * joint.bits_per_point)
    return UnionBound(value=min(max(raw, 0.0), 0.5), raw=raw)


def ser_sb_at_ua(
    joint: JointConstellation,
    sa: PamConstellation,
    g: RotatedPowerMatrix,
    beta_a: float,
    n0: float,
    use_equivalent_noise: bool = True,
) -> UnionBound:
    """Approximate joint-symbol error ratio seen by the near user.

    ``use_equivalent_noise=False`` switches to the simplified
    interference-free tail ``(1 - sqrt(beta_a / (4 n0 + beta_a))) / 2`` for
    every pair, kept for comparison; the interference-aware variant is the
    default. Clamped to [0, 1] with the raw sum reported alongside.
    """
    size = joint.size
    total = 0.0
    if use_equivalent_noise:
        for i in range(size):
            for j in range(size):
                if i != j:
                    total += pep_pair(i, j, joint, sa, g, beta_a, n0)
    else:
        total = size * (size - 1) * rayleigh_pep(n0, beta_a)
    raw = total / size
    return UnionBound(value=min(max(raw, 0.0), 1.0), raw=raw)


def pam_ber_level(
    level: int,
    g: RotatedPowerMatrix,
    ma: int,
    beta_a: float,
    n0: float,
) -> float:
    """BER of Gray-coded PAM over Rayleigh fading at one power level.

    ``level`` is 1-based. The per-bit error terms are the classic closed form
    for Gray-labeled PAM with the fading average folded into each Gaussian
    tail; the effective symbol energy is scaled by the level's near-user
    power coefficient.
    """
    if ma < 2 or not is_power_of_two(ma):
        raise InvalidOrderError(f"PAM order must be a power of two >= 2, got {ma}")
    d = math.sqrt(3.0 / (ma**2 - 1))
    a2 = abs(g.alpha_a[level - 1]) ** 2
    n_bits = ma.bit_length() - 1
    total = 0.0
    for m in range(1, n_bits + 1):
        terms = 0.0
        for i in range(int((1 - 2.0**-m) * ma)):
            sign = -1.0 if ((i * 2 ** (m - 1)) // ma) % 2 else 1.0
            weight = 2 ** (m - 1) - math.floor(i * 2 ** (m - 1) / ma + 0.5)
            c = a2 * beta_a * ((2 * i + 1) * d) ** 2
            q_fade = 0.5 * (1.0 - math.sqrt(c / (n0 + c)))
            terms += sign * weight * q_fade
        total += (2.0 / ma) * terms
    return total / n_bits


def ber_ua(
    joint: JointConstellation,
    g: RotatedPowerMatrix,
    ma: int,
    beta_a: float,
    n0: float,
    use_equivalent_noise: bool = True,
) -> float:
    """Approximate near-user BER including SIC error propagation.

    Splits on whether the joint far-symbol/level detection succeeded: the
    success branch is plain Gray-PAM demodulation averaged over levels, the
    failure branch is charged one half.
    """
    sa = build_pam(ma)
    ser = ser_sb_at_ua(
        joint, sa, g, beta_a, n0, use_equivalent_noise=use_equivalent_noise
    ).value
    per_level = sum(
        pam_ber_level(level, g, ma, beta_a, n0) for level in range(1, g.n_levels + 1)
    )
    return (1.0 - ser) * (per_level / g.n_levels) + ser / 2.0
