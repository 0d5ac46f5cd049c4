"""One-shot reproduction table for the analytic results of the three-pillar problem."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import anomaly, elastic, quantum, statics

__all__ = ["Check", "reproduce_paper"]


@dataclass(frozen=True)
class Check:
    check: str
    computed: str
    expected: str
    error: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return bool(self.error <= self.tolerance)


def _vec(v) -> str:
    return ";".join(format(float(x), ".17g") for x in np.atleast_1d(v))


def _row(name, computed, expected, tol, relative=False) -> Check:
    c = np.atleast_1d(np.asarray(computed, dtype=float))
    e = np.atleast_1d(np.asarray(expected, dtype=float))
    err = float(np.max(np.abs(c - e)))
    if relative:
        err /= float(np.max(np.abs(e)))
    return Check(name, _vec(c), _vec(e), err, tol)


def reproduce_paper(weight: float = 12.0) -> list[Check]:
    W = weight
    rows = []

    problem = statics.BeamProblem.symmetric_three(W)
    family = statics.solve_family(statics.build_equilibrium(problem))
    for f in (-6.0, 0.0, 4.0, 12.0):
        member = statics.redundant_member(family, [f])
        rows.append(_row(f"rigid family f={f:g}", member, [(W - f) / 2, f, (W - f) / 2], 1e-12))
    rows.append(_row("rigid nullity", family.nullity, 1, 0.0))

    k = 1.0
    sol = elastic.solve_elastic(problem, elastic.SpringArray.identical(k, 3))
    rows.append(_row("identical springs forces", sol.forces, [W / 3] * 3, 1e-12))
    rows.append(_row("identical springs displacements", sol.displacements, [W / (3 * k)] * 3, 1e-12, relative=True))
    stiff = elastic.solve_elastic(problem, elastic.SpringArray.identical(1e12, 3))
    rows.append(_row("stiff limit x+y+z", np.sum(stiff.displacements), 0.0, 1e-10))
    ratio = elastic.stiff_limit_sweep(problem, (1, 2, 1), [1, 10, 100, 1e3])
    rows.append(_row("stiff limit path dependence k~(1,2,1)", ratio.limit_forces, [W / 4, W / 2, W / 4], 1e-10))

    red = quantum.reduce_hamiltonian(quantum.QuadraticHamiltonian(1.0, 1.0))
    rows.append(_row("reduced Hamiltonian coefficients", red.kinetic_coeffs + red.potential_coeffs,
                     [1.5, 1.0, 0.375, 0.25], 0.0))
    rows.append(_row("reduced Hamiltonian cross terms", [red.kinetic_cross, red.potential_cross], [0, 0], 0.0))
    gs16 = quantum.ground_state(quantum.reduce_hamiltonian(quantum.QuadraticHamiltonian(1.0, 16.0)))
    rows.append(_row("Gaussian coefficients (m=1,k=16)",
                     [gs16.gaussian_coefficient_r, gs16.gaussian_coefficient_s], [1.0, 1.0], 1e-15))
    fd = quantum.fd_ground_state(red)
    rows.append(_row("ground energy (finite difference)", fd.energy, 1.25, 1e-6, relative=True))
    rows.append(_row("ground-state overlap", fd.overlap, 1.0, 1e-6))

    for kk in (1.0, 100.0):
        gs = quantum.ground_state(quantum.reduce_hamiltonian(quantum.QuadraticHamiltonian(1.0, kk)))
        rows.append(_row(f"symmetry <r>=0 (k={kk:g})", quantum.expectation_r(gs), 0.0, 1e-12))
        force = quantum.central_force_expectation(quantum.QuadraticHamiltonian(1.0, kk), W)
        rows.append(_row(f"central force W/3 (k={kk:g})", force, W / 3, 1e-12))

    for a in (0.5, 1.0, 2.0):
        closed = anomaly.regulated_product_closed(1e3, a).value
        quad = anomaly.regulated_product_quadrature(1e3, a, 1e-10).value
        rows.append(_row(f"regulated product closed (a={a:g})", closed, -a, 0.0))
        rows.append(_row(f"regulated product quadrature (a={a:g})", quad, -a, 1e-10))

    model = quantum.QuadraticHamiltonian(1.0, 1.0)
    for c in (-2.0, -1.0, 0.5, 3.0):
        fl = anomaly.force_limit(anomaly.design_scheme(c, model), model, [1e4, 1e6, 1e8])
        rows.append(_row(f"designed scheme force at k=1e8 (target {c:g})", fl.forces[-1], c, 1e-3))
    return rows


def all_passed(rows) -> bool:
    return all(r.passed for r in rows) and not any(math.isnan(r.error) for r in rows)
