"""Cutoff regularization of the ambiguous stiff-limit force.

The central-spring force in the ground state is ``W/3 - (k/2) <r>``. At any
finite ``k`` the mean vanishes by reflection symmetry, while the prefactor
diverges as ``k -> inf``. Writing ``u = (m k)^{1/4} r / sqrt(2)`` the
ground-state density becomes ``exp(-u²)`` and, with the full-line
normalization ``sqrt(pi)``, the force offset reads::

    force - W/3 = -Lambda * int u exp(-u²) du,
    Lambda(k, m) = k^{3/4} m^{-1/4} / sqrt(2 pi)

so the physical limit has exactly the shape of the abstract product
``Lambda * int u exp(-u²) du``. Truncating the ``u`` integral at
``sqrt(log(Lambda / 2a))`` gives ``-a`` for every ``Lambda``; moving the
truncation to the other side flips the sign. :func:`design_scheme` uses that
cutoff to steer the stiff-limit force to any prescribed value.

Only the ``r`` integral is ever truncated; the ``s`` integral cancels.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (CutoffUndefinedError, InvalidCutoffError, InvalidParameterError,
                     InvalidSweepError, NumericError)
from .numerics import QuadratureSpec, integrate
from .quantum import (CutoffInterval, QuadraticHamiltonian, central_force_expectation,
                      dimensionless_scale)

__all__ = [
    "RegulatedProduct",
    "CutoffScheme",
    "ForceLimit",
    "SCHEME_KINDS",
    "cutoff_scale",
    "regulated_cutoff",
    "regulated_product_closed",
    "regulated_product_quadrature",
    "regulated_integral",
    "symmetric_scheme",
    "upper_shifted_scheme",
    "lower_shifted_scheme",
    "design_scheme",
    "force_limit",
    "extrapolate_limit",
]

SCHEME_KINDS = ("symmetric", "upper-shifted", "lower-shifted", "designed")

# |u| exp(-u²) <= _AMPLITUDE * exp(-_DECAY u²) for all u
_DECAY = 0.9
_AMPLITUDE = math.sqrt(5.0) * math.exp(-0.5) * 1.01


@dataclass(frozen=True)
class RegulatedProduct:
    cutoff_scale: float
    scheme_parameter: float
    value: float
    cutoff: float  # upper integration limit sqrt(log(Lambda / 2a))


def _validate(lam: float, a: float) -> None:
    if not (math.isfinite(a) and a > 0):
        raise InvalidParameterError(f"scheme parameter a must be positive, got {a}")
    if not math.isfinite(lam) or lam < 2.0 * a:
        raise CutoffUndefinedError(f"cutoff scale {lam} is below 2a = {2.0 * a}")


def regulated_cutoff(lam: float, a: float) -> float:
    """Upper limit ``sqrt(log(Lambda / 2a))``; zero at the boundary ``Lambda = 2a``."""
    _validate(lam, a)
    return math.sqrt(max(math.log(lam / (2.0 * a)), 0.0))


def regulated_product_closed(lam: float, a: float) -> RegulatedProduct:
    """``Lambda * int_{-inf}^{R} u exp(-u²) du`` from the antiderivative ``-exp(-u²)/2``.

    At the cutoff ``exp(-R²) = 2a / Lambda``, so the value is ``-a`` for
    every admissible ``Lambda``.
    """
    R = regulated_cutoff(lam, a)
    boundary = 2.0 * a / lam  # exp(-R²)
    return RegulatedProduct(lam, a, -0.5 * boundary * lam, R)


def regulated_integral(lam: float, lower: float, upper: float, tol: float = 1e-10) -> float:
    """``Lambda * int_lower^upper u exp(-u²) du`` by adaptive quadrature.

    The integrand is odd, so the symmetric core ``[-c, c]`` with
    ``c = min(|lower|, |upper|)`` contributes nothing and only the one-sided
    remainder is integrated. ``tol`` is absolute on the returned product.
    """
    if not lower < upper:
        raise InvalidCutoffError(f"empty interval [{lower}, {upper}]")
    if lower < 0.0 < upper:
        core = min(-lower, upper)
        if -lower > upper:
            lo, hi = lower, -core
        else:
            lo, hi = core, upper
    else:
        lo, hi = lower, upper
    if lo == hi:
        return 0.0
    spec = QuadratureSpec(absolute_tol=tol / (10.0 * max(abs(lam), 1.0)),
                          tail_decay_coefficient=_DECAY, tail_amplitude=_AMPLITUDE)
    value, err = integrate(lambda u: u * np.exp(-u * u), lo, hi, spec)
    if abs(lam) * err > tol:
        raise NumericError(f"quadrature error {abs(lam) * err:.3e} exceeds tol {tol:.3e}",
                           partial=lam * value, error_estimate=abs(lam) * err)
    return lam * value


def regulated_product_quadrature(lam: float, a: float, tol: float = 1e-10) -> RegulatedProduct:
    if not tol > 0:
        raise InvalidParameterError("tol must be positive")
    R = regulated_cutoff(lam, a)
    return RegulatedProduct(lam, a, regulated_integral(lam, -math.inf, R, tol), R)


def cutoff_scale(model: QuadraticHamiltonian) -> float:
    """Diverging prefactor ``Lambda = k^{3/4} m^{-1/4} / sqrt(2 pi)``."""
    return model.stiffness**0.75 * model.mass**-0.25 / math.sqrt(2.0 * math.pi)


@dataclass(frozen=True)
class CutoffScheme:
    """A k-dependent truncation of the ``r`` integration domain.

    ``parameters`` depends on ``kind``: ``halfwidth`` (in ``u`` units) for
    symmetric schemes, ``a`` for shifted ones, ``target`` for designed ones.
    """

    kind: str
    parameters: dict = field(default_factory=dict)
    mass: float = 1.0

    def __post_init__(self):
        if self.kind not in SCHEME_KINDS:
            raise InvalidParameterError(f"unknown scheme kind {self.kind!r}")
        if not self.mass > 0:
            raise InvalidParameterError("mass must be positive")

    @property
    def shift(self) -> float:
        """Signed force offset the scheme produces as k -> inf."""
        if self.kind == "designed":
            return float(self.parameters["target"])
        if self.kind == "upper-shifted":
            return float(self.parameters["a"])
        if self.kind == "lower-shifted":
            return -float(self.parameters["a"])
        return 0.0

    @property
    def min_stiffness(self) -> float:
        """Smallest k for which the cutoff is real (``Lambda >= 2|shift|``)."""
        c = abs(self.shift)
        if c == 0.0:
            return 0.0
        # Lambda(k) = 2c  <=>  k = (2c sqrt(2 pi) m^{1/4})^{4/3}
        return (2.0 * c * math.sqrt(2.0 * math.pi) * self.mass**0.25) ** (4.0 / 3.0)

    def interval_of(self, k: float) -> CutoffInterval:
        model = QuadraticHamiltonian(self.mass, k)
        scale = dimensionless_scale(model)
        if self.kind == "symmetric":
            H = float(self.parameters.get("halfwidth", math.inf))
            return CutoffInterval(-H / scale, H / scale)
        c = self.shift
        if c == 0.0:
            return CutoffInterval()
        lam = cutoff_scale(model)
        if lam < 2.0 * abs(c):
            raise InvalidCutoffError(
                f"k = {k} is below the scheme domain (k >= {self.min_stiffness:.6g})")
        U = regulated_cutoff(lam, abs(c))
        if c > 0:
            return CutoffInterval(-math.inf, U / scale)
        return CutoffInterval(-U / scale, math.inf)


def symmetric_scheme(halfwidth: float = math.inf, mass: float = 1.0) -> CutoffScheme:
    if not halfwidth > 0:
        raise InvalidParameterError("halfwidth must be positive")
    return CutoffScheme("symmetric", {"halfwidth": halfwidth}, mass)


def upper_shifted_scheme(a: float, mass: float = 1.0) -> CutoffScheme:
    """Truncate above at ``sqrt(log(Lambda/2a))``; the force offset tends to ``+a``."""
    if not a > 0:
        raise InvalidParameterError("a must be positive")
    return CutoffScheme("upper-shifted", {"a": a}, mass)


def lower_shifted_scheme(a: float, mass: float = 1.0) -> CutoffScheme:
    """Mirror image of :func:`upper_shifted_scheme`; the offset tends to ``-a``."""
    if not a > 0:
        raise InvalidParameterError("a must be positive")
    return CutoffScheme("lower-shifted", {"a": a}, mass)


def design_scheme(target: float, model: QuadraticHamiltonian) -> CutoffScheme:
    """One-sided truncation whose stiff-limit force (at W = 0) is ``target``.

    With cutoff ``U = sqrt(log(Lambda/2|c|))`` on the dimensionless variable,
    the truncated-Gaussian mean gives an offset of
    ``2c / (1 + erf U)``, which tends to ``c`` as ``k -> inf``; the error
    falls like ``c² / (Lambda U)``. Positive targets truncate from above,
    negative from below, and ``target == 0`` returns the symmetric scheme.
    """
    c = float(target)
    if not math.isfinite(c):
        raise InvalidParameterError("target must be finite")
    if c == 0.0:
        return symmetric_scheme(mass=model.mass)
    return CutoffScheme("designed", {"target": c}, model.mass)


@dataclass(frozen=True)
class ForceLimit:
    """Force sequence over a stiffness grid and its extrapolated limit.

    ``status`` is ``"converged"``, ``"warning"`` (step sizes not shrinking
    monotonically) or ``"insufficient"`` (fewer than two points).
    """

    k_values: tuple[float, ...]
    forces: tuple[float, ...]
    limit: float
    error_estimate: float
    status: str


def force_limit(scheme: CutoffScheme | None, model: QuadraticHamiltonian, k_grid,
                weight: float = 0.0) -> ForceLimit:
    """Central force under ``scheme`` for each k, plus an extrapolated limit.

    ``scheme=None`` integrates over the whole line. The limit adds the
    geometric tail ``d ρ/(1-ρ)`` to the last value, where ``d`` is the last
    step and ``ρ`` the ratio of the last two steps.
    """
    ks = [float(k) for k in k_grid]
    if not ks:
        raise InvalidSweepError("k grid is empty")
    if any(b <= a for a, b in zip(ks, ks[1:])):
        raise InvalidSweepError("k grid must be strictly increasing")
    forces = []
    for k in ks:
        m = QuadraticHamiltonian(model.mass, k)
        cutoff = scheme.interval_of(k) if scheme is not None else None
        forces.append(central_force_expectation(m, weight, cutoff))

    limit, err, status = extrapolate_limit(forces)
    return ForceLimit(tuple(ks), tuple(forces), limit, err, status)


def extrapolate_limit(values) -> tuple[float, float, str]:
    """Limit, error estimate and status for a sequence converging geometrically or faster."""
    values = [float(v) for v in values]
    if len(values) < 2:
        return values[-1], math.inf, "insufficient"
    steps = [b - a for a, b in zip(values, values[1:])]
    scale = max(1.0, max(abs(v) for v in values))
    monotone = all(abs(s2) <= abs(s1) + 1e-12 * scale for s1, s2 in zip(steps, steps[1:]))
    last = steps[-1]
    limit, err = values[-1], abs(last)
    if last == 0.0:
        err = 0.0
    elif len(steps) >= 2 and steps[-2] != 0.0:
        ratio = last / steps[-2]
        if 0.0 < ratio < 1.0:
            tail = last * ratio / (1.0 - ratio)
            limit, err = values[-1] + tail, abs(tail)
    return limit, err, "converged" if monotone else "warning"
