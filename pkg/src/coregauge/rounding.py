"""Geometric weight rounding and the offset breakpoints it induces.

Every positive weight is snapped up to base**(i + 1 + b) where i is the
unique integer with base**(i + b) <= w < base**(i + 1 + b). As the offset
b sweeps [0, 1] each edge changes exponent exactly once, at the
fractional part of log_base(w); between consecutive such breakpoints the
whole rounded vector scales by a common factor base**b.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

BREAKPOINT_TOL = 1e-12


def _check_base(base: float) -> None:
    if not 1.0 < base <= 2.0:
        raise ValueError(f"base must lie in (1, 2], got {base}")


def _check_offset(b: float) -> None:
    if not 0.0 <= b <= 1.0:
        raise ValueError(f"offset must lie in [0, 1], got {b}")


def rounding_exponent(w: float, b: float, base: float) -> int:
    """The unique integer i with base**(i+b) <= w < base**(i+1+b)."""
    i = math.floor(math.log(w, base) - b)
    # float log can land one off at exact powers; repair to the defining inequality
    while base ** (i + b) > w:
        i -= 1
    while base ** (i + 1 + b) <= w:
        i += 1
    return i


@dataclass(frozen=True)
class RoundedWeights:
    """Rounded weight vector for one (base, offset) pair.

    ``exponents[e]`` is None exactly when the input weight is zero, in
    which case the rounded weight is zero as well.
    """

    base: float
    offset: float
    exponents: tuple[int | None, ...]
    rounded: tuple[float, ...]


def round_weights(weights: Sequence[float], b: float, base: float) -> RoundedWeights:
    """Snap each positive weight up to the next base**(i+1+b) level."""
    _check_base(base)
    _check_offset(b)
    exponents: list[int | None] = []
    rounded: list[float] = []
    for w in weights:
        if w < 0:
            raise ValueError(f"negative weight {w}")
        if w == 0:
            exponents.append(None)
            rounded.append(0.0)
        else:
            i = rounding_exponent(w, b, base)
            exponents.append(i)
            rounded.append(base ** (i + 1 + b))
    return RoundedWeights(base, b, tuple(exponents), tuple(rounded))


@dataclass(frozen=True)
class BreakpointDecomposition:
    """Sorted offsets 0 = t_0 < ... < t_{k+1} = 1 between which every
    rounding exponent is constant in b."""

    points: tuple[float, ...]

    def intervals(self) -> list[tuple[float, float]]:
        return list(zip(self.points, self.points[1:]))

    def midpoints(self) -> list[float]:
        return [(lo + hi) / 2.0 for lo, hi in self.intervals()]


def breakpoints(weights: Sequence[float], base: float) -> BreakpointDecomposition:
    """Offsets at which some edge's rounding exponent changes.

    Zero weights contribute nothing; values within BREAKPOINT_TOL of each
    other or of the endpoints are merged.
    """
    _check_base(base)
    interior = set()
    for w in weights:
        if w > 0:
            c = math.log(w, base)
            frac = c - math.floor(c)
            if BREAKPOINT_TOL < frac < 1.0 - BREAKPOINT_TOL:
                interior.add(frac)
    points = [0.0]
    for t in sorted(interior):
        if t - points[-1] > BREAKPOINT_TOL:
            points.append(t)
    if 1.0 - points[-1] <= BREAKPOINT_TOL:
        points[-1] = 1.0
    else:
        points.append(1.0)
    return BreakpointDecomposition(tuple(points))


def merged_breakpoints(
    weights_a: Sequence[float], weights_b: Sequence[float], base: float
) -> BreakpointDecomposition:
    """Common refinement of the decompositions of two weight vectors."""
    pts = sorted(set(breakpoints(weights_a, base).points) | set(breakpoints(weights_b, base).points))
    merged = [0.0]
    for t in pts[1:]:
        if t - merged[-1] > BREAKPOINT_TOL:
            merged.append(t)
    if merged[-1] != 1.0:
        merged[-1] = 1.0
    return BreakpointDecomposition(tuple(merged))


def differing_offset_measure(w_before: float, w_after: float, base: float) -> float:
    """Total length of offsets b at which the two weights round differently.

    Computed from the merged breakpoint decomposition by comparing the
    exponents at each sub-interval midpoint.
    """
    _check_base(base)
    if w_before < 0 or w_after < 0:
        raise ValueError("weights must be nonnegative")
    if w_before == w_after:
        return 0.0
    if (w_before == 0) != (w_after == 0):
        return 1.0
    decomp = merged_breakpoints([w_before], [w_after], base)
    total = 0.0
    for lo, hi in decomp.intervals():
        mid = (lo + hi) / 2.0
        if rounding_exponent(w_before, mid, base) != rounding_exponent(w_after, mid, base):
            total += hi - lo
    return total
