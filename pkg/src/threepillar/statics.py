"""Rigid beam on N rigid supports: force and torque balance.

Two balance equations (vertical forces, torque about the beam centre) for N
unknown support reactions. For N > 2 the system is underdetermined and the
solver returns the whole family of equilibrium force assignments::

         W
         |
    =====v=====================  rigid beam
      |        |          |
     F1       F2         F3      three rigid pillars
    -L         0         +L

For the symmetric three-support beam the family is
``F1 = F3 = (W - f)/2, F2 = f`` with ``f`` free.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionError, InfeasibleError, InvalidProblemError
from .numerics import rank_solve

__all__ = [
    "BeamProblem",
    "EquilibriumSystem",
    "ForceFamily",
    "RANK_TOL",
    "build_equilibrium",
    "solve_family",
    "family_member",
    "redundant_member",
    "is_determinate",
]

RANK_TOL = 1e-10


@dataclass(frozen=True)
class BeamProblem:
    """Beam weight and support positions measured from the beam centre.

    ``half_length`` is informational only; positions are authoritative.
    Supports are bilateral, so negative reactions are allowed.
    """

    weight: float
    support_positions: tuple[float, ...]
    half_length: float | None = None

    def __post_init__(self):
        positions = tuple(float(p) for p in self.support_positions)
        object.__setattr__(self, "support_positions", positions)
        object.__setattr__(self, "weight", float(self.weight))
        if len(positions) < 2:
            raise InvalidProblemError(f"need at least 2 supports, got {len(positions)}")
        if not all(math.isfinite(p) for p in positions):
            raise InvalidProblemError("support positions must be finite")
        if len(set(positions)) != len(positions):
            raise InvalidProblemError(f"support positions must be distinct: {positions}")
        if not math.isfinite(self.weight):
            raise InvalidProblemError("weight must be finite")

    @property
    def n_supports(self) -> int:
        return len(self.support_positions)

    @classmethod
    def symmetric_three(cls, weight: float, half_length: float = 1.0) -> "BeamProblem":
        return cls(weight, (-half_length, 0.0, half_length), half_length)


@dataclass(frozen=True)
class EquilibriumSystem:
    """``coefficient_matrix @ forces == rhs``; row 0 is force balance, row 1 torque."""

    coefficient_matrix: np.ndarray
    rhs: np.ndarray
    problem: BeamProblem

    @property
    def n_supports(self) -> int:
        return self.coefficient_matrix.shape[1]

    def residual(self, forces) -> float:
        """Infinity norm of ``A @ forces - rhs``."""
        return float(np.max(np.abs(self.coefficient_matrix @ np.asarray(forces, float) - self.rhs)))


@dataclass(frozen=True)
class ForceFamily:
    """All equilibrium force vectors: ``particular + basis.T @ params``.

    ``particular`` is the minimum-norm member; ``nullspace_basis`` rows are
    orthonormal. ``free_parameter_names`` label the redundant reactions used
    by :func:`redundant_member` (for three supports, the single label ``f``
    is the middle reaction).
    """

    particular: np.ndarray
    nullspace_basis: np.ndarray
    free_parameter_names: tuple[str, ...]
    system: EquilibriumSystem = field(repr=False)

    @property
    def nullity(self) -> int:
        return self.nullspace_basis.shape[0]


def build_equilibrium(problem: BeamProblem) -> EquilibriumSystem:
    positions = np.array(problem.support_positions)
    if positions.size < 2:
        raise InvalidProblemError("need at least 2 supports")
    if np.unique(positions).size != positions.size:
        raise InvalidProblemError("support positions must be distinct")
    matrix = np.vstack([np.ones_like(positions), positions])
    rhs = np.array([problem.weight, 0.0])
    return EquilibriumSystem(matrix, rhs, problem)


def _redundant_indices(positions: np.ndarray) -> list[int]:
    ends = {int(np.argmin(positions)), int(np.argmax(positions))}
    return [i for i in range(positions.size) if i not in ends]


def solve_family(system: EquilibriumSystem) -> ForceFamily:
    try:
        particular, basis, rank = rank_solve(system.coefficient_matrix, system.rhs, RANK_TOL)
    except InfeasibleError as exc:
        raise InfeasibleError(f"equilibrium equations are inconsistent: {exc}", exc.residual) from exc
    n_free = system.n_supports - rank
    if n_free == 1:
        names: tuple[str, ...] = ("f",)
    else:
        names = tuple(f"f{i + 1}" for i in range(n_free))
    return ForceFamily(particular, basis, names, system)


def family_member(family: ForceFamily, params) -> np.ndarray:
    """Family member at coefficients ``params`` along the orthonormal nullspace basis."""
    p = np.atleast_1d(np.asarray(params, dtype=float))
    if p.shape != (family.nullity,):
        raise DimensionError(f"expected {family.nullity} parameter(s), got {p.size}")
    if family.nullity == 0:
        return family.particular.copy()
    return family.particular + family.nullspace_basis.T @ p


def redundant_member(family: ForceFamily, redundant_forces) -> np.ndarray:
    """Family member with the interior (redundant) reactions prescribed.

    The reactions at the two outermost supports are then fixed by the
    balance equations. For the symmetric three-support beam, passing
    ``f`` gives ``((W - f)/2, f, (W - f)/2)``.
    """
    system = family.system
    positions = system.coefficient_matrix[1]
    idx = _redundant_indices(positions)
    values = np.atleast_1d(np.asarray(redundant_forces, dtype=float))
    if values.shape != (len(idx),):
        raise DimensionError(f"expected {len(idx)} redundant force(s), got {values.size}")
    forces = np.zeros(positions.size)
    forces[idx] = values
    ends = [i for i in range(positions.size) if i not in idx]
    A = system.coefficient_matrix
    remaining = system.rhs - A[:, idx] @ values
    forces[ends] = np.linalg.solve(A[:, ends], remaining)
    return forces


def is_determinate(system: EquilibriumSystem) -> bool:
    s = np.linalg.svd(system.coefficient_matrix, compute_uv=False)
    rank = int(np.sum(s > RANK_TOL * s[0])) if s[0] > 0 else 0
    return rank == system.n_supports
