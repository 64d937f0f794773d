"""Chaotic maps on [0, 1] that drive the movement selector p.

Four deterministic maps (circular, logistic, piecewise, tent) plus a
``uniform-random`` source used for the plain-WOA ablation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .model import CHAOS_MAPS

DEFAULT_PARAMS = {
    "circular": {"a": 0.5, "b": 0.2},
    "logistic": {"a": 4.0},
    "piecewise": {"a": 0.4},
    "tent": {},
    "uniform-random": {},
}

# Table-order names used for the ECWSA-1..4 variants.
VARIANT_MAPS = ("circular", "logistic", "piecewise", "tent")


class ChaosStateError(ValueError):
    pass


@dataclass(frozen=True)
class ChaosState:
    map_id: str
    p: float = 0.3
    a: float | None = None
    b: float | None = None

    def __post_init__(self):
        if self.map_id not in CHAOS_MAPS:
            raise ValueError(f"unknown chaos map {self.map_id!r}; expected one of {CHAOS_MAPS}")
        defaults = DEFAULT_PARAMS[self.map_id]
        if self.a is None and "a" in defaults:
            object.__setattr__(self, "a", defaults["a"])
        if self.b is None and "b" in defaults:
            object.__setattr__(self, "b", defaults["b"])


def circular(p: float, a: float = 0.5, b: float = 0.2) -> float:
    # Python's % already maps negatives onto [0, 1).
    return (p + b - (a / (2.0 * math.pi)) * math.sin(2.0 * math.pi * p)) % 1.0


def logistic(p: float, a: float = 4.0) -> float:
    return a * p * (1.0 - p)


def piecewise(p: float, a: float = 0.4) -> float:
    if p < a:
        return p / a
    if p < 0.5:
        return (p - a) / (0.5 - a)
    if p < 1.0 - a:
        return (1.0 - a - p) / (0.5 - a)
    return (1.0 - p) / a


def tent(p: float) -> float:
    # The second branch covers p >= 0.7; the printed condition for it is a typo.
    if p < 0.7:
        return p / 0.7
    return 10.0 * (1.0 - p) / 3.0


def _clamp(p: float) -> float:
    return min(1.0, max(0.0, p))


def next_p(state: ChaosState, rng: np.random.Generator | None = None) -> tuple[ChaosState, float]:
    """Advance ``state`` one step and return ``(new_state, p)``.

    The chaotic maps are pure; ``uniform-random`` draws from ``rng``.
    """
    p = state.p
    if not 0.0 <= p <= 1.0 or math.isnan(p):
        raise ChaosStateError(f"chaos state p={p!r} outside [0, 1]")
    if state.map_id == "circular":
        q = circular(p, state.a, state.b)
    elif state.map_id == "logistic":
        q = logistic(p, state.a)
    elif state.map_id == "piecewise":
        q = piecewise(p, state.a)
    elif state.map_id == "tent":
        q = tent(p)
    else:
        if rng is None:
            raise ValueError("uniform-random chaos source needs an rng")
        q = float(rng.random())
    q = _clamp(q)
    return replace(state, p=q), q


def orbit(state: ChaosState, steps: int, rng: np.random.Generator | None = None) -> list[float]:
    """The sequence of p values produced over ``steps`` iterations from ``state``."""
    if steps < 1:
        raise ValueError("steps must be >= 1")
    out = []
    for _ in range(steps):
        state, p = next_p(state, rng)
        out.append(p)
    return out
