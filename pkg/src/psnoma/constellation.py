"""Constellation construction for power-selection NOMA.

Builds the per-user PAM alphabets, the rotated power-allocation matrix whose
rows act as selectable power levels, and the two derived alphabets the rest
of the package works with: the joint (far-user symbol, power level)
constellation used for detection and the full superimposed transmit
constellation.

Bit-label conventions used throughout: power-level bits come first and use
natural binary over the level index, symbol bits follow and use reflected
Gray code over the ascending PAM points. All structures are immutable after
construction and safe to share across workers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import InvalidOrderError, PowerConstraintError, ShapeError


def is_power_of_two(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


def gray_code(index: int) -> int:
    """Reflected Gray code of a symbol index."""
    return index ^ (index >> 1)


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class PamConstellation:
    """Normalized M-ary PAM alphabet with Gray-coded bit labels.

    Points are ascending with spacing ``2 * half_distance`` and unit average
    power; ``gray_labels[k]`` labels ``points[k]``.
    """

    order: int
    half_distance: float
    points: np.ndarray
    gray_labels: np.ndarray

    @property
    def bits_per_symbol(self) -> int:
        return self.order.bit_length() - 1


def build_pam(order: int) -> PamConstellation:
    """Build the normalized ``order``-point PAM alphabet.

    The half minimum distance is ``sqrt(3 / (order^2 - 1))``, which makes the
    mean squared point magnitude exactly one.
    """
    if order < 2 or not is_power_of_two(order):
        raise InvalidOrderError(f"PAM order must be a power of two >= 2, got {order}")
    d = math.sqrt(3.0 / (order**2 - 1))
    points = d * (2.0 * np.arange(order, dtype=np.float64) - (order - 1))
    labels = np.array([gray_code(k) for k in range(order)], dtype=np.int64)
    return PamConstellation(
        order=order,
        half_distance=d,
        points=_frozen(points),
        gray_labels=_frozen(labels),
    )


@dataclass(frozen=True, eq=False)
class RotatedPowerMatrix:
    """Per-level power-allocation coefficients with distinguishing rotation.

    Row ``l`` (0-based here) carries the complex coefficients applied to the
    near-user and far-user symbols when power level ``l + 1`` is selected.
    Level ``l`` is rotated by ``l * pi / n_levels``, so squared magnitudes
    recover the allocation split: ``|alpha_a|^2 = p_a`` and
    ``|alpha_b|^2 = 1 - p_a``.
    """

    n_levels: int
    p_a: np.ndarray
    alpha_a: np.ndarray
    alpha_b: np.ndarray

    @property
    def bits_per_level(self) -> int:
        return self.n_levels.bit_length() - 1


def build_power_matrix(p_values: Sequence[float], n_levels: int) -> RotatedPowerMatrix:
    """Build the rotated power matrix from near-user power fractions.

    ``n_levels == 1`` yields the degenerate no-rotation matrix used as the
    conventional-NOMA baseline.
    """
    if n_levels < 1 or not is_power_of_two(n_levels):
        raise InvalidOrderError(f"level count must be a power of two >= 1, got {n_levels}")
    p = np.asarray(p_values, dtype=np.float64)
    if p.shape != (n_levels,):
        raise ShapeError(f"expected {n_levels} power values, got {p.shape}")
    if np.any(p <= 0.0) or np.any(p >= 0.5):
        raise PowerConstraintError(
            f"near-user power fractions must lie strictly inside (0, 0.5), got {p.tolist()}"
        )
    phases = np.exp(1j * np.pi * np.arange(n_levels) / n_levels)
    return RotatedPowerMatrix(
        n_levels=n_levels,
        p_a=_frozen(p),
        alpha_a=_frozen(phases * np.sqrt(p)),
        alpha_b=_frozen(phases * np.sqrt(1.0 - p)),
    )


@dataclass(frozen=True, eq=False)
class JointConstellation:
    """Labeled alphabet of far-user symbol / power level combinations.

    Point ``i`` is ``alpha_b[level] * sb_point[symbol]`` with
    ``i = level * symbol_order + symbol`` (level-major). ``bit_codes[i]``
    packs the natural-binary level bits above the Gray symbol bits.
    """

    points: np.ndarray
    level_index: np.ndarray
    symbol_index: np.ndarray
    bit_codes: np.ndarray
    n_levels: int
    symbol_order: int

    @property
    def size(self) -> int:
        return self.points.size

    @property
    def bits_per_point(self) -> int:
        return (self.n_levels.bit_length() - 1) + (self.symbol_order.bit_length() - 1)

    def index_of(self, level: int, symbol: int) -> int:
        """Point index for a 0-based (level, far-user symbol) pair."""
        if not (0 <= level < self.n_levels and 0 <= symbol < self.symbol_order):
            raise ShapeError(f"label ({level}, {symbol}) out of range")
        return level * self.symbol_order + symbol

    def label_of(self, index: int) -> tuple[int, int]:
        """0-based (level, far-user symbol) pair of a point index."""
        return int(self.level_index[index]), int(self.symbol_index[index])


def build_joint_constellation(
    g: RotatedPowerMatrix, sb: PamConstellation
) -> JointConstellation:
    """Enumerate every far-user symbol under every power level."""
    n, m = g.n_levels, sb.order
    levels = np.repeat(np.arange(n), m)
    symbols = np.tile(np.arange(m), n)
    points = g.alpha_b[levels] * sb.points[symbols]
    codes = (levels.astype(np.int64) << sb.bits_per_symbol) | sb.gray_labels[symbols]
    return JointConstellation(
        points=_frozen(points),
        level_index=_frozen(levels),
        symbol_index=_frozen(symbols),
        bit_codes=_frozen(codes),
        n_levels=n,
        symbol_order=m,
    )


@dataclass(frozen=True, eq=False)
class SuperConstellation:
    """Full transmit alphabet of superimposed near/far symbols per level.

    Index layout is level-major, then far-user symbol, then near-user symbol,
    matching the joint constellation and the frame bit order.
    """

    points: np.ndarray
    level_index: np.ndarray
    symbol_a_index: np.ndarray
    symbol_b_index: np.ndarray

    @property
    def size(self) -> int:
        return self.points.size


def build_super_constellation(
    g: RotatedPowerMatrix, sa: PamConstellation, sb: PamConstellation
) -> SuperConstellation:
    n, mb, ma = g.n_levels, sb.order, sa.order
    levels = np.repeat(np.arange(n), mb * ma)
    kb = np.tile(np.repeat(np.arange(mb), ma), n)
    ka = np.tile(np.arange(ma), n * mb)
    points = g.alpha_a[levels] * sa.points[ka] + g.alpha_b[levels] * sb.points[kb]
    return SuperConstellation(
        points=_frozen(points),
        level_index=_frozen(levels),
        symbol_a_index=_frozen(ka),
        symbol_b_index=_frozen(kb),
    )


@dataclass(frozen=True)
class TransmitFrame:
    """One codeword: level bits, far-user bits, near-user bits, resolved symbols."""

    level_bits: tuple[int, ...]
    symbol_bits_b: tuple[int, ...]
    symbol_bits_a: tuple[int, ...]
    level: int  # 1-based selected power level
    symbol_b_index: int
    symbol_a_index: int
    symbol_b: float
    symbol_a: float


def _bits_to_int(bits: Sequence[int]) -> int:
    value = 0
    for b in bits:
        value = (value << 1) | int(b)
    return value


def _int_to_bits(value: int, width: int) -> tuple[int, ...]:
    return tuple((value >> (width - 1 - i)) & 1 for i in range(width))


def _gray_to_index(code: int, order: int) -> int:
    # Inverse reflected Gray code: cumulative xor of the bits.
    index = code
    shift = 1
    while (1 << shift) <= order:
        index ^= code >> shift
        shift += 1
    return index


def map_bits(
    bits: Sequence[int],
    g: RotatedPowerMatrix,
    sa: PamConstellation,
    sb: PamConstellation,
) -> TransmitFrame:
    """Map a codeword bit sequence onto (power level, far symbol, near symbol).

    Bit order is level bits first (natural binary over the level index),
    then the far-user symbol bits, then the near-user symbol bits.
    """
    nl = g.bits_per_level
    nb = sb.bits_per_symbol
    na = sa.bits_per_symbol
    bits = tuple(int(b) for b in bits)
    if len(bits) != nl + nb + na or any(b not in (0, 1) for b in bits):
        raise ShapeError(f"expected {nl + nb + na} bits, got {bits!r}")
    level_bits = bits[:nl]
    b_bits = bits[nl : nl + nb]
    a_bits = bits[nl + nb :]
    level0 = _bits_to_int(level_bits)
    kb = _gray_to_index(_bits_to_int(b_bits), sb.order)
    ka = _gray_to_index(_bits_to_int(a_bits), sa.order)
    return TransmitFrame(
        level_bits=level_bits,
        symbol_bits_b=b_bits,
        symbol_bits_a=a_bits,
        level=level0 + 1,
        symbol_b_index=kb,
        symbol_a_index=ka,
        symbol_b=float(sb.points[kb]),
        symbol_a=float(sa.points[ka]),
    )


def demap_frame(frame: TransmitFrame) -> tuple[int, ...]:
    """Inverse of :func:`map_bits`."""
    return frame.level_bits + frame.symbol_bits_b + frame.symbol_bits_a
