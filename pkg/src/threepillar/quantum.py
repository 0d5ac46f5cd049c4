"""Quantized three-spring beam under the rigid-beam constraint.

Natural units with ħ = 1 throughout.

Three identical oscillators ``(x, y, z)`` with mass ``m`` and stiffness ``k``
(coordinates measured from the static rest position ``W/(3k)``) are reduced
by eliminating the middle coordinate, ``y = (x + z)/2`` and
``p_y = (p_x + p_z)/2``. In the mode coordinates ``r = x + z`` (vertical
motion of the centre) and ``s = x - z`` (rocking) the operator is diagonal::

    H = -(1/2m) (3 d²/dr² + 2 d²/ds²) + (k/8) (3 r² + 2 s²)

Each mode ``-c d²/dq² + v q²`` has frequency ``2 sqrt(c v)`` and ground
state ``exp(-sqrt(v/c)/2 * q²)``; for this system both exponents equal
``sqrt(k m)/4``.

Note: the kinetic term of the reduced Cartesian Hamiltonian carries
``(1/4)(p_x + p_z)²``, which is what the diagonal form above requires.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy import special

from .errors import ConfigurationError, InvalidCutoffError, InvalidModelError
from .numerics import QuadratureSpec, discretize_mode, eigenpair, integrate

__all__ = [
    "QuadraticHamiltonian",
    "ReducedHamiltonian",
    "NormalModes",
    "GroundState",
    "CutoffInterval",
    "FDResult",
    "reduce_hamiltonian",
    "normal_modes",
    "ground_state",
    "expectation_r",
    "truncated_mean",
    "central_force_expectation",
    "fd_ground_state",
    "fd_excitation_gaps",
]

# y = (x + z)/2 written as (x, y, z) = C (x, z)
_CONSTRAINT = ((Fraction(1), Fraction(0)),
               (Fraction(1, 2), Fraction(1, 2)),
               (Fraction(0), Fraction(1)))
# momenta: p_x = p_r + p_s, p_z = p_r - p_s
_MOMENTUM_TO_MODES = ((Fraction(1), Fraction(1)), (Fraction(1), Fraction(-1)))
# coordinates: x = (r + s)/2, z = (r - s)/2
_COORD_TO_MODES = ((Fraction(1, 2), Fraction(1, 2)), (Fraction(1, 2), Fraction(-1, 2)))


def _matmul(a, b):
    return tuple(tuple(sum((a[i][l] * b[l][j] for l in range(len(b))), Fraction(0))
                       for j in range(len(b[0]))) for i in range(len(a)))


def _transpose(a):
    return tuple(zip(*a))


def _pullback(form, transform):
    """Quadratic form ``T^T Q T`` with exact rational entries."""
    return _matmul(_transpose(transform), _matmul(form, transform))


@dataclass(frozen=True)
class QuadraticHamiltonian:
    """Three uncoupled oscillators of mass ``mass`` and stiffness ``stiffness``."""

    mass: float
    stiffness: float
    coordinate_labels: tuple[str, str, str] = ("x", "y", "z")
    momentum_labels: tuple[str, str, str] = ("p_x", "p_y", "p_z")

    def __post_init__(self):
        for name in ("mass", "stiffness"):
            value = getattr(self, name)
            if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
                raise InvalidModelError(f"{name} must be positive and finite, got {value!r}")


@dataclass(frozen=True)
class ReducedHamiltonian:
    """``-c_r d²/dr² - c_s d²/ds² + v_r r² + v_s s²`` plus (zero) cross terms.

    ``kinetic_form`` and ``potential_form`` hold the exact rational
    bookkeeping; multiply by ``1/m`` and ``k`` respectively for the numbers.
    """

    kinetic_coeffs: tuple[float, float]
    potential_coeffs: tuple[float, float]
    kinetic_cross: float = 0.0
    potential_cross: float = 0.0
    kinetic_form: tuple | None = None
    potential_form: tuple | None = None

    def __post_init__(self):
        if not all(c > 0 for c in self.kinetic_coeffs + self.potential_coeffs):
            raise InvalidModelError("reduced Hamiltonian coefficients must be positive")


@dataclass(frozen=True)
class NormalModes:
    omega_r: float
    omega_s: float
    effective_mass_r: float
    effective_mass_s: float


@dataclass(frozen=True)
class GroundState:
    """Gaussian ground state ``exp(-a_r r² - a_s s²)`` and its energy."""

    gaussian_coefficient_r: float
    gaussian_coefficient_s: float
    energy: float

    def __post_init__(self):
        if not (self.gaussian_coefficient_r > 0 and self.gaussian_coefficient_s > 0):
            raise InvalidModelError("Gaussian coefficients must be positive")

    def density_width(self, mode: str = "r") -> float:
        """Standard deviation of ``|psi|²`` along ``mode``."""
        a = self.gaussian_coefficient_r if mode == "r" else self.gaussian_coefficient_s
        return 0.5 / math.sqrt(a)


@dataclass(frozen=True)
class CutoffInterval:
    """Integration interval for ``r``; either end may be infinite."""

    lower: float = -math.inf
    upper: float = math.inf

    def __post_init__(self):
        if math.isnan(self.lower) or math.isnan(self.upper) or not self.lower < self.upper:
            raise InvalidCutoffError(f"empty cutoff interval [{self.lower}, {self.upper}]")

    @property
    def is_full_line(self) -> bool:
        return self.lower == -math.inf and self.upper == math.inf


def reduce_hamiltonian(h: QuadraticHamiltonian) -> ReducedHamiltonian:
    identity_half = tuple(tuple(Fraction(1, 2) if i == j else Fraction(0) for j in range(3))
                          for i in range(3))
    # kinetic: (1/m) * [½ p·p] with p_y = (p_x + p_z)/2, then to (p_r, p_s)
    kin = _pullback(_pullback(identity_half, _CONSTRAINT), _MOMENTUM_TO_MODES)
    # potential: k * [½ q·q] with y = (x + z)/2, then to (r, s)
    pot = _pullback(_pullback(identity_half, _CONSTRAINT), _COORD_TO_MODES)
    m, k = h.mass, h.stiffness
    return ReducedHamiltonian(
        kinetic_coeffs=(float(kin[0][0]) / m, float(kin[1][1]) / m),
        potential_coeffs=(float(pot[0][0]) * k, float(pot[1][1]) * k),
        kinetic_cross=float(2 * kin[0][1]) / m,
        potential_cross=float(2 * pot[0][1]) * k,
        kinetic_form=kin,
        potential_form=pot,
    )


def normal_modes(red: ReducedHamiltonian) -> NormalModes:
    (cr, cs), (vr, vs) = red.kinetic_coeffs, red.potential_coeffs
    return NormalModes(2.0 * math.sqrt(cr * vr), 2.0 * math.sqrt(cs * vs),
                       0.5 / cr, 0.5 / cs)


def ground_state(red: ReducedHamiltonian) -> GroundState:
    (cr, cs), (vr, vs) = red.kinetic_coeffs, red.potential_coeffs
    return GroundState(0.5 * math.sqrt(vr / cr), 0.5 * math.sqrt(vs / cs),
                       math.sqrt(cr * vr) + math.sqrt(cs * vs))


def expectation_r(state: GroundState, quadrature_tol: float = 1e-12, excitation: int = 0) -> float:
    """``<r>`` by quadrature over the whole line.

    ``excitation`` selects the Hermite level ``n`` of the r-mode (the s-mode
    stays in its ground state and divides out). Every level has an even
    density, so the result vanishes up to quadrature error.
    """
    a = state.gaussian_coefficient_r
    # xi = sqrt(2a) r; density H_n(xi)² exp(-xi²)
    coeffs = np.zeros(excitation + 1)
    coeffs[-1] = 1.0
    norm = math.sqrt(math.pi) * 2.0**excitation * math.factorial(excitation)

    def density(xi):
        return np.polynomial.hermite.hermval(xi, coeffs) ** 2 * np.exp(-xi * xi)

    def first_moment(xi):
        return xi * density(xi)

    # envelope |xi H_n² e^{-xi²}| <= A e^{-xi²/2}
    probe = np.linspace(0.0, 40.0, 4001)
    envelope_ratio = (probe * np.polynomial.hermite.hermval(probe, coeffs) ** 2
                      * np.exp(-0.5 * probe**2))
    amplitude = 1.5 * float(np.max(envelope_ratio)) + 1e-300
    spec = QuadratureSpec(absolute_tol=quadrature_tol * norm * math.sqrt(2 * a),
                          tail_decay_coefficient=0.5, tail_amplitude=amplitude)
    moment, _ = integrate(first_moment, -math.inf, math.inf, spec)
    return moment / norm / math.sqrt(2.0 * a)


def _gauss_mass(lo: float, hi: float) -> float:
    """``int_lo^hi exp(-u²) du`` without cancellation in the tails."""
    if lo >= 0.0:
        return 0.5 * math.sqrt(math.pi) * (math.erfc(lo) - math.erfc(hi))
    if hi <= 0.0:
        return 0.5 * math.sqrt(math.pi) * (math.erfc(-hi) - math.erfc(-lo))
    return 0.5 * math.sqrt(math.pi) * (math.erf(hi) - math.erf(lo))


def truncated_mean(lo: float, hi: float) -> float:
    """Mean of the density ``exp(-u²)`` restricted to ``[lo, hi]``.

    Closed form ``(e^{-lo²} - e^{-hi²}) / (2 int_lo^hi e^{-u²})``. Intervals
    far out in one tail are rescaled by ``e^{lo²}`` (scaled complementary
    error function) to avoid underflow. Symmetric intervals give exactly 0.
    """
    if lo == -hi:
        return 0.0
    if lo < 0.0 and hi <= -lo:
        # mirror so that the interval leans right
        return -truncated_mean(-hi, -lo)
    if lo > 3.0:
        # both ends in the right tail; divide numerator and denominator by e^{-lo²}
        if math.isfinite(hi):
            gap = math.exp(lo * lo - hi * hi)
            denom = special.erfcx(lo) - gap * special.erfcx(hi)
        else:
            gap, denom = 0.0, special.erfcx(lo)
        return (1.0 - gap) / (math.sqrt(math.pi) * denom)
    num = 0.5 * ((math.exp(-lo * lo) if math.isfinite(lo) else 0.0)
                 - (math.exp(-hi * hi) if math.isfinite(hi) else 0.0))
    return num / _gauss_mass(lo, hi)


def dimensionless_scale(model: QuadraticHamiltonian) -> float:
    """Factor mapping ``r`` to ``u`` with ground-state density ``exp(-u²)``."""
    return (model.mass * model.stiffness) ** 0.25 / math.sqrt(2.0)


def central_force_expectation(model: QuadraticHamiltonian, W: float,
                              cutoff: CutoffInterval | None = None) -> float:
    """Ground-state expectation of the force supplied by the middle spring.

    ``W/3 - (k/2) <r>``, with ``<r>`` taken over the ground-state density
    restricted to ``cutoff`` (whole line when ``None``). The s-mode factor is
    identical in numerator and denominator and cancels.
    """
    if cutoff is None:
        cutoff = CutoffInterval()
    elif not isinstance(cutoff, CutoffInterval):
        cutoff = CutoffInterval(*cutoff)
    scale = dimensionless_scale(model)
    mean_u = truncated_mean(cutoff.lower * scale, cutoff.upper * scale)
    mean_r = mean_u / scale
    return W / 3.0 - 0.5 * model.stiffness * mean_r


@dataclass(frozen=True)
class FDResult:
    """Finite-difference ground state of the reduced operator.

    ``energy_raw`` is the second-order eigenvalue sum on the requested grid;
    ``energy`` is its Richardson extrapolation against the every-other-point
    subgrid (same box), which removes the O(h²) error. ``overlap`` is the
    squared overlap of the discrete eigenvector with the sampled analytic
    Gaussian, per mode.
    """

    energy: float
    energy_raw: float
    mode_energies: tuple[float, float]
    grid_r: np.ndarray
    grid_s: np.ndarray
    vector_r: np.ndarray
    vector_s: np.ndarray
    overlap_r: float
    overlap_s: float

    @property
    def overlap(self) -> float:
        return min(self.overlap_r, self.overlap_s)


def _check_grid(grid_points: int):
    if grid_points < 101 or grid_points % 2 == 0:
        raise ConfigurationError(f"grid_points must be odd and >= 101, got {grid_points}")


def _mode_halfwidth(a: float, box_halfwidth: float | None) -> float:
    sigma = 0.5 / math.sqrt(a)
    L = 8.0 * sigma if box_halfwidth is None else float(box_halfwidth)
    outside = math.erfc(L * math.sqrt(2.0 * a))
    if outside > 1e-10:
        raise ConfigurationError(
            f"box halfwidth {L} leaves {outside:.2e} of the Gaussian density outside (limit 1e-10)")
    return L


def _mode_fd(c, v, a, grid_points, halfwidth):
    q, op = discretize_mode(c, v, grid_points, halfwidth)
    lam, vec = eigenpair(op, 0)
    _, op_coarse = discretize_mode(c, v, (grid_points + 1) // 2, halfwidth)
    lam_coarse, _ = eigenpair(op_coarse, 0)
    gauss = np.exp(-a * q * q)
    gauss /= np.linalg.norm(gauss)
    overlap = float(vec @ gauss) ** 2
    return q, vec, lam, (4.0 * lam - lam_coarse) / 3.0, overlap


def fd_ground_state(red: ReducedHamiltonian, grid_points: int = 2001,
                    box_halfwidth: float | None = None) -> FDResult:
    """Independent numerical ground state of the reduced operator.

    Each mode is discretized with second-order central differences on
    ``grid_points`` points. ``box_halfwidth`` defaults to 8 standard
    deviations of each mode's ground-state density; an explicit value is
    used for both modes.
    """
    _check_grid(grid_points)
    gs = ground_state(red)
    (cr, cs), (vr, vs) = red.kinetic_coeffs, red.potential_coeffs
    Lr = _mode_halfwidth(gs.gaussian_coefficient_r, box_halfwidth)
    Ls = _mode_halfwidth(gs.gaussian_coefficient_s, box_halfwidth)
    qr, vec_r, lr, er, ovr = _mode_fd(cr, vr, gs.gaussian_coefficient_r, grid_points, Lr)
    qs, vec_s, ls, es, ovs = _mode_fd(cs, vs, gs.gaussian_coefficient_s, grid_points, Ls)
    return FDResult(er + es, lr + ls, (er, es), qr, qs, vec_r, vec_s, ovr, ovs)


def fd_excitation_gaps(red: ReducedHamiltonian, grid_points: int = 2001,
                       box_halfwidth: float | None = None) -> tuple[float, float]:
    """Lowest excitation gap of each mode from the discretized operator.

    The box defaults to 8 ground-state standard deviations plus a margin so
    the first excited state is also contained.
    """
    _check_grid(grid_points)
    gs = ground_state(red)
    gaps = []
    for c, v, a in zip(red.kinetic_coeffs, red.potential_coeffs,
                       (gs.gaussian_coefficient_r, gs.gaussian_coefficient_s)):
        L = _mode_halfwidth(a, box_halfwidth) * (1.25 if box_halfwidth is None else 1.0)
        _, op = discretize_mode(c, v, grid_points, L)
        _, op_coarse = discretize_mode(c, v, (grid_points + 1) // 2, L)
        fine = eigenpair(op, 1)[0] - eigenpair(op, 0)[0]
        coarse = eigenpair(op_coarse, 1)[0] - eigenpair(op_coarse, 0)[0]
        gaps.append((4.0 * fine - coarse) / 3.0)
    return gaps[0], gaps[1]
