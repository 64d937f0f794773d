"""Whale position-update kernels and the movement dispatcher."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import POSITION_BOUND, Whale, new_whale

SPIRAL = "spiral"
EXPLOIT = "encircle-prey"
EXPLORE = "encircle-random"


def decay_a(t: int, max_iter: int) -> float:
    """Linearly decay the coefficient ``a`` from 2 (t=0) to 0 (t=max_iter)."""
    if max_iter <= 0:
        raise ValueError("max_iter must be positive")
    if not 0 <= t <= max_iter:
        raise ValueError(f"iteration {t} outside [0, {max_iter}]")
    return 2.0 - t * 2.0 / max_iter


def _check_lengths(*vectors):
    n = vectors[0].shape[0]
    if any(v.shape[0] != n for v in vectors[1:]):
        raise ValueError("vector length mismatch: " + ", ".join(str(v.shape[0]) for v in vectors))


def spiral_move(x, prey, b: float, l) -> np.ndarray:
    """Logarithmic spiral toward ``prey``; ``l`` holds one entry in [-1, 1] per dimension."""
    x, prey, l = (np.asarray(v, dtype=float).reshape(-1) for v in (x, prey, l))
    _check_lengths(x, prey, l)
    out = np.abs(prey - x) * np.exp(b * l) * np.cos(2.0 * np.pi * l) + prey
    return np.clip(out, -POSITION_BOUND, POSITION_BOUND)


def encircle_move(x, target, A: float, C) -> np.ndarray:
    """Shrinking-encircling step toward ``target`` (the prey, or a random whale)."""
    x, target, C = (np.asarray(v, dtype=float).reshape(-1) for v in (x, target, C))
    _check_lengths(x, target, C)
    D = np.abs(C * target - x)
    return np.clip(target - A * D, -POSITION_BOUND, POSITION_BOUND)


@dataclass(frozen=True)
class DynamicsParams:
    a: float
    A: float
    C: np.ndarray
    l: np.ndarray
    b: float
    p: float


def draw_params(a: float, n: int, b: float, p: float, rng: np.random.Generator) -> DynamicsParams:
    """Draw the per-whale random coefficients for one move.

    ``A`` is a single scalar per whale (the branch test is per whale), while
    ``C`` and ``l`` are drawn per dimension.
    """
    A = 2.0 * a * rng.random() - a
    C = 2.0 * rng.random(n)
    l = rng.uniform(-1.0, 1.0, n)
    return DynamicsParams(a=a, A=A, C=C, l=l, b=b, p=p)


def select_branch(p: float, A: float) -> str:
    if p >= 0.5:
        return SPIRAL
    return EXPLOIT if abs(A) < 1.0 else EXPLORE


def dispatch_move(
    whale: Whale,
    prey: Whale,
    population: list[Whale],
    params: DynamicsParams,
    rng: np.random.Generator,
) -> Whale:
    """Move ``whale`` according to ``params`` and return the rebinarized result.

    ``p < 0.5`` selects shrinking encircling (toward the prey when |A| < 1,
    toward a uniformly random population member otherwise); ``p >= 0.5``
    selects the spiral. The returned whale carries no fitness.
    """
    branch = select_branch(params.p, params.A)
    if branch == SPIRAL:
        pos = spiral_move(whale.position, prey.position, params.b, params.l)
    elif branch == EXPLOIT:
        pos = encircle_move(whale.position, prey.position, params.A, params.C)
    else:
        target = population[int(rng.integers(len(population)))]
        pos = encircle_move(whale.position, target.position, params.A, params.C)
    return new_whale(pos, rng)


def initial_positions(m: int, n: int, rng: np.random.Generator) -> np.ndarray:
    return rng.uniform(-1.0, 1.0, size=(m, n))
