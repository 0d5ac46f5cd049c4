"""Spring-supported rigid beam: the elastic regularization of the statics problem.

Replacing the rigid supports by springs adds a compatibility condition: the
beam stays straight, so support displacements are collinear,
``d_i = h + t * position_i``. That fixes the reactions uniquely::

         W
    =====v=====================
      ≷        ≷          ≷      springs k1, k2, k3
     x        y          z       displacements (x + z = 2y)

Displacements are measured from the unloaded spring lengths. Two routes are
provided and cross-check each other: :func:`solve_elastic` solves the N x N
system of balance plus compatibility equations in the displacements, and
:func:`minimize_energy` minimizes the potential energy over the two rigid
degrees of freedom (height ``h`` and tilt ``t``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidSpringError, InvalidSweepError, SingularSystemError
from .statics import BeamProblem

__all__ = [
    "SpringArray",
    "ElasticSolution",
    "SweepPoint",
    "StiffSweep",
    "solve_elastic",
    "elastic_energy",
    "minimize_energy",
    "stiff_limit_sweep",
    "geometric_grid",
]


@dataclass(frozen=True)
class SpringArray:
    constants: tuple[float, ...]

    def __post_init__(self):
        ks = tuple(float(k) for k in np.atleast_1d(self.constants))
        if not ks:
            raise InvalidSpringError("at least one spring constant is required")
        for k in ks:
            if not (math.isfinite(k) and k > 0):
                raise InvalidSpringError(f"spring constants must be positive and finite, got {k}")
        object.__setattr__(self, "constants", ks)

    @classmethod
    def identical(cls, k: float, n: int) -> "SpringArray":
        return cls((k,) * n)

    def scaled(self, factor: float) -> "SpringArray":
        return SpringArray(tuple(factor * k for k in self.constants))

    def __len__(self):
        return len(self.constants)


@dataclass(frozen=True)
class ElasticSolution:
    displacements: np.ndarray
    forces: np.ndarray
    rigid_dofs: tuple[float, float]  # (centre height h, tilt t)


def _check(problem: BeamProblem, springs: SpringArray):
    if len(springs) != problem.n_supports:
        raise InvalidSpringError(
            f"{len(springs)} springs for {problem.n_supports} supports")
    return np.array(springs.constants), np.array(problem.support_positions)


def solve_elastic(problem: BeamProblem, springs: SpringArray) -> ElasticSolution:
    """Unique displacements from force balance, torque balance and straightness.

    Unknowns are the N displacements. Rows: sum k_i d_i = W, sum k_i p_i d_i = 0,
    and one collinearity row per support other than the two outermost
    (for three symmetric supports this is ``x + z = 2y``).
    """
    k, p = _check(problem, springs)
    n = p.size
    a, b = int(np.argmin(p)), int(np.argmax(p))
    rows = [k, k * p]
    rhs = [problem.weight, 0.0]
    for i in range(n):
        if i in (a, b):
            continue
        # d_i - d_a - (p_i - p_a)/(p_b - p_a) * (d_b - d_a) = 0
        lam = (p[i] - p[a]) / (p[b] - p[a])
        row = np.zeros(n)
        row[i] = 1.0
        row[a] = -(1.0 - lam)
        row[b] = -lam
        rows.append(row)
        rhs.append(0.0)
    M = np.vstack(rows)
    if np.linalg.cond(M) > 1e14:
        raise SingularSystemError("compatibility system is singular")
    d = np.linalg.solve(M, np.array(rhs))
    tilt = (d[b] - d[a]) / (p[b] - p[a])
    height = d[a] - tilt * p[a]
    # report exactly collinear displacements
    d = height + tilt * p
    return ElasticSolution(d, k * d, (float(height), float(tilt)))


def elastic_energy(springs: SpringArray, problem: BeamProblem, h: float, t: float) -> float:
    """Spring energy minus work done by the weight: ``½ Σ k_i (h + t p_i)² − W h``."""
    k, p = _check(problem, springs)
    d = h + t * p
    return 0.5 * float(np.sum(k * d * d)) - problem.weight * h


def minimize_energy(problem: BeamProblem, springs: SpringArray) -> ElasticSolution:
    """Stationary point of :func:`elastic_energy` via the 2x2 normal equations."""
    k, p = _check(problem, springs)
    k0 = float(np.sum(k))
    k1 = float(np.sum(k * p))
    k2 = float(np.sum(k * p * p))
    det = k0 * k2 - k1 * k1
    if not det > 1e-14 * max(k0 * k2, 1e-300):
        raise SingularSystemError("rigid-body normal equations are singular")
    height = problem.weight * k2 / det
    tilt = -problem.weight * k1 / det
    d = height + tilt * p
    return ElasticSolution(d, k * d, (height, tilt))


@dataclass(frozen=True)
class SweepPoint:
    kappa: float
    displacements: np.ndarray
    forces: np.ndarray


@dataclass(frozen=True)
class StiffSweep:
    """Sweep results ordered by stiffness scale.

    ``limit_forces`` is the value at the largest scale; ``extrapolated_forces``
    is a linear extrapolation in ``1/kappa`` from the last two points.
    ``self_consistent`` is true when the two agree to ``1e-10`` relative.
    """

    points: tuple[SweepPoint, ...]
    limit_forces: np.ndarray
    extrapolated_forces: np.ndarray
    self_consistent: bool


def stiff_limit_sweep(problem: BeamProblem, ratios, kappa_grid) -> StiffSweep:
    grid = [float(x) for x in kappa_grid]
    if not grid:
        raise InvalidSweepError("kappa grid is empty")
    if any(not (math.isfinite(x) and x > 0) for x in grid):
        raise InvalidSweepError("kappa values must be positive and finite")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise InvalidSweepError("kappa grid must be strictly increasing")
    base = SpringArray(tuple(ratios))
    points = []
    for kappa in grid:
        sol = solve_elastic(problem, base.scaled(kappa))
        points.append(SweepPoint(kappa, sol.displacements, sol.forces))
    last = points[-1].forces
    if len(points) > 1:
        x1, x2 = 1.0 / points[-2].kappa, 1.0 / points[-1].kappa
        f1 = points[-2].forces
        extrapolated = last + (last - f1) * x2 / (x1 - x2)
    else:
        extrapolated = last.copy()
    scale = max(1.0, float(np.max(np.abs(last))))
    consistent = bool(np.max(np.abs(extrapolated - last)) <= 1e-10 * scale)
    return StiffSweep(tuple(points), last, extrapolated, consistent)


def geometric_grid(start: float, stop: float, factor: float) -> list[float]:
    """``start, start*factor, ...`` up to ``stop`` inclusive (relative slack 1e-12)."""
    if not (start > 0 and stop >= start and factor > 1):
        raise InvalidSweepError("grid needs 0 < start <= stop and factor > 1")
    out = []
    i = 0
    while True:
        value = start * factor**i
        if value > stop * (1 + 1e-12):
            break
        out.append(value)
        i += 1
    return out
