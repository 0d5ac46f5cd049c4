"""Small numerical kernels: adaptive quadrature, rank-revealing solves of
2xN systems, and eigenpairs of symmetric tridiagonal matrices.

Everything here is deterministic; no randomized algorithms are used, so any
output built on these kernels is bit-reproducible for fixed inputs.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import InfeasibleError, NumericError, InvalidParameterError

__all__ = [
    "QuadratureSpec",
    "TridiagonalOperator",
    "integrate",
    "rank_solve",
    "sturm_count",
    "eigenpair",
    "smallest_eigenpair",
    "discretize_mode",
]

_EPS = np.finfo(float).eps

# Gauss-Kronrod 7/15 abscissae (non-negative half) and weights.
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
# Gauss weights on _XGK[1], _XGK[3], _XGK[5], _XGK[7]
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

# Full symmetric node set: -x_0..-x_6, 0, x_6..x_0
_NODES = np.concatenate([-_XGK[:-1], [0.0], _XGK[-2::-1]])
_KRONROD = np.concatenate([_WGK[:-1], [_WGK[-1]], _WGK[-2::-1]])
_GAUSS = np.zeros(15)
_GAUSS[[1, 3, 5, 7, 9, 11, 13]] = [_WG[0], _WG[1], _WG[2], _WG[3], _WG[2], _WG[1], _WG[0]]


@dataclass(frozen=True)
class QuadratureSpec:
    """Tolerances for :func:`integrate`.

    For infinite limits the integrand must satisfy
    ``|f(x)| <= tail_amplitude * exp(-tail_decay_coefficient * x**2)``
    beyond some moderate radius; the domain is truncated where that envelope
    leaves less than ``absolute_tol / 10`` of mass outside.
    """

    absolute_tol: float = 1e-12
    max_subdivisions: int = 500
    tail_decay_coefficient: float | None = None
    tail_amplitude: float = 1.0

    def __post_init__(self):
        if not self.absolute_tol > 0:
            raise InvalidParameterError("absolute_tol must be positive")
        if self.max_subdivisions < 1:
            raise InvalidParameterError("max_subdivisions must be >= 1")
        if self.tail_decay_coefficient is not None and not self.tail_decay_coefficient > 0:
            raise InvalidParameterError("tail_decay_coefficient must be positive")


def _gk15(f, a, b):
    half = 0.5 * (b - a)
    centre = 0.5 * (a + b)
    fx = np.asarray(f(centre + half * _NODES), dtype=float)
    if not np.all(np.isfinite(fx)):
        raise NumericError(f"integrand not finite on [{a}, {b}]")
    kronrod = half * float(_KRONROD @ fx)
    gauss = half * float(_GAUSS @ fx)
    resabs = abs(half) * float(_KRONROD @ np.abs(fx))
    err = abs(kronrod - gauss) + 50.0 * _EPS * resabs
    return kronrod, err


def _gaussian_tail(amplitude, alpha, cut):
    """Upper bound on amplitude * int_cut^inf exp(-alpha x^2) dx."""
    return amplitude * 0.5 * math.sqrt(math.pi / alpha) * math.erfc(math.sqrt(alpha) * cut)


def _truncation_radius(amplitude, alpha, budget):
    # smallest cut >= 0 (to a few percent) with tail bound <= budget
    if _gaussian_tail(amplitude, alpha, 0.0) <= budget:
        return 0.0
    hi = 1.0 / math.sqrt(alpha)
    while _gaussian_tail(amplitude, alpha, hi) > budget:
        hi *= 2.0
    lo = 0.0
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if _gaussian_tail(amplitude, alpha, mid) > budget:
            lo = mid
        else:
            hi = mid
    return hi


def integrate(f: Callable[[np.ndarray], np.ndarray], lower: float, upper: float,
              spec: QuadratureSpec | None = None) -> tuple[float, float]:
    """Adaptive Gauss-Kronrod (7/15) quadrature of a vectorized integrand.

    Parameters
    ----------
    f : callable
        Vectorized integrand, evaluated on numpy arrays of abscissae.
    lower, upper : float
        Limits; either may be infinite, in which case ``spec`` must declare a
        Gaussian envelope via ``tail_decay_coefficient``.
    spec : QuadratureSpec, optional

    Returns
    -------
    value, error_estimate : float
        The error estimate includes the truncation bound for infinite limits.

    Raises
    ------
    NumericError
        If the subdivision budget is exhausted; the exception carries the
        partial result.
    """
    spec = spec or QuadratureSpec()
    if lower == upper:
        return 0.0, 0.0
    if lower > upper:
        value, err = integrate(f, upper, lower, spec)
        return -value, err

    tail_err = 0.0
    n_inf = int(math.isinf(lower)) + int(math.isinf(upper))
    if n_inf:
        if spec.tail_decay_coefficient is None:
            raise InvalidParameterError("infinite limit requires a declared Gaussian tail_decay_coefficient")
        budget = spec.absolute_tol / 10.0 / n_inf
        cut = _truncation_radius(spec.tail_amplitude, spec.tail_decay_coefficient, budget)
        tail = _gaussian_tail(spec.tail_amplitude, spec.tail_decay_coefficient, cut)
        if math.isinf(lower):
            lower = min(-cut, upper - cut) if math.isfinite(upper) else -cut
            # if upper sits far left of -cut the envelope tail beyond |upper| is already counted
            tail_err += tail
        if math.isinf(upper):
            upper = max(cut, lower + cut)
            tail_err += tail
        if lower >= upper:
            return 0.0, tail_err

    value, err = _gk15(f, lower, upper)
    heap = [(-err, lower, upper, value, err)]
    total_val, total_err = value, err
    splits = 0
    while total_err > spec.absolute_tol - tail_err:
        if splits >= spec.max_subdivisions:
            raise NumericError(
                f"quadrature did not converge within {spec.max_subdivisions} subdivisions "
                f"(value={total_val!r}, error={total_err + tail_err:.3e})",
                partial=total_val, error_estimate=total_err + tail_err)
        _, a, b, v, e = heapq.heappop(heap)
        mid = 0.5 * (a + b)
        if not (a < mid < b):
            raise NumericError("interval cannot be subdivided further",
                               partial=total_val, error_estimate=total_err + tail_err)
        v1, e1 = _gk15(f, a, mid)
        v2, e2 = _gk15(f, mid, b)
        heapq.heappush(heap, (-e1, a, mid, v1, e1))
        heapq.heappush(heap, (-e2, mid, b, v2, e2))
        total_err += e1 + e2 - e
        splits += 1
        # re-sum from the pieces so the running total does not drift
        total_val = math.fsum(item[3] for item in heap)
    total_err = math.fsum(item[4] for item in heap)
    return total_val, total_err + tail_err


def rank_solve(matrix, rhs, tol: float = 1e-10):
    """Minimum-norm solution and nullspace of a small dense system.

    Returns ``(particular, basis, rank)`` where ``basis`` has orthonormal
    rows spanning the nullspace. Rank uses singular values relative to the
    largest one. Basis vectors are sign-normalized so the first entry with
    non-negligible magnitude is positive.
    """
    A = np.atleast_2d(np.asarray(matrix, dtype=float))
    b = np.asarray(rhs, dtype=float)
    if not (np.all(np.isfinite(A)) and np.all(np.isfinite(b))):
        raise InvalidParameterError("matrix and rhs must be finite")
    if b.shape != (A.shape[0],):
        raise InvalidParameterError(f"rhs shape {b.shape} does not match matrix {A.shape}")
    n = A.shape[1]
    U, s, Vt = np.linalg.svd(A, full_matrices=True)
    smax = s[0] if s.size else 0.0
    rank = int(np.sum(s > tol * smax)) if smax > 0 else 0
    coeffs = (U[:, :rank].T @ b) / s[:rank]
    particular = Vt[:rank].T @ coeffs if rank else np.zeros(n)
    residual = float(np.linalg.norm(A @ particular - b))
    if residual > tol * max(float(np.linalg.norm(b)), 1.0):
        raise InfeasibleError(f"system is inconsistent (least-squares residual {residual:.3e})",
                              residual=residual)
    basis = Vt[rank:].copy()
    for row in basis:
        lead = np.flatnonzero(np.abs(row) > 1e-12)
        if lead.size and row[lead[0]] < 0:
            row *= -1.0
    return particular, basis, rank


@dataclass(frozen=True)
class TridiagonalOperator:
    """Symmetric tridiagonal matrix, typically a discretized 1-D Hamiltonian."""

    diagonal: np.ndarray
    off_diagonal: np.ndarray
    grid_spacing: float = 1.0

    def __post_init__(self):
        d = np.asarray(self.diagonal, dtype=float)
        e = np.asarray(self.off_diagonal, dtype=float)
        if d.ndim != 1 or d.size < 3:
            raise InvalidParameterError("tridiagonal operator needs dimension >= 3")
        if e.shape != (d.size - 1,):
            raise InvalidParameterError("off_diagonal must be one shorter than diagonal")
        object.__setattr__(self, "diagonal", d)
        object.__setattr__(self, "off_diagonal", e)

    @property
    def size(self) -> int:
        return self.diagonal.size

    def matvec(self, v: np.ndarray) -> np.ndarray:
        out = self.diagonal * v
        out[:-1] += self.off_diagonal * v[1:]
        out[1:] += self.off_diagonal * v[:-1]
        return out

    def norm(self) -> float:
        """Infinity norm (max absolute row sum)."""
        row = np.abs(self.diagonal).copy()
        row[:-1] += np.abs(self.off_diagonal)
        row[1:] += np.abs(self.off_diagonal)
        return float(row.max())

    def gershgorin(self) -> tuple[float, float]:
        radius = np.zeros_like(self.diagonal)
        radius[:-1] += np.abs(self.off_diagonal)
        radius[1:] += np.abs(self.off_diagonal)
        return float(np.min(self.diagonal - radius)), float(np.max(self.diagonal + radius))


def discretize_mode(kinetic_coeff: float, potential_coeff: float, grid_points: int,
                    halfwidth: float) -> tuple[np.ndarray, TridiagonalOperator]:
    """Second-order central differences for ``-c d^2/dq^2 + v q^2``.

    The grid is ``linspace(-halfwidth, halfwidth, grid_points)`` with
    homogeneous Dirichlet conditions one step outside either end.
    """
    q = np.linspace(-halfwidth, halfwidth, grid_points)
    h = q[1] - q[0]
    diag = 2.0 * kinetic_coeff / h**2 + potential_coeff * q**2
    off = np.full(grid_points - 1, -kinetic_coeff / h**2)
    return q, TridiagonalOperator(diag, off, h)


def sturm_count(op: TridiagonalOperator, shifts) -> np.ndarray:
    """Number of eigenvalues strictly below each shift (Sturm sequence)."""
    x = np.atleast_1d(np.asarray(shifts, dtype=float))
    d = op.diagonal
    e2 = op.off_diagonal ** 2
    tiny = _EPS * max(op.norm(), 1e-300)
    count = np.zeros(x.shape, dtype=int)
    pivot = d[0] - x
    for i in range(op.size):
        if i:
            pivot = d[i] - x - e2[i - 1] / pivot
        pivot = np.where(pivot == 0.0, -tiny, pivot)
        count += pivot < 0
    return count


def _thomas(op: TridiagonalOperator, shift: float, rhs: np.ndarray) -> np.ndarray:
    # Gaussian elimination without pivoting on (op - shift I)
    n = op.size
    d = (op.diagonal - shift).tolist()
    e = op.off_diagonal.tolist()
    r = rhs.tolist()
    tiny = _EPS * op.norm()
    for i in range(1, n):
        if d[i - 1] == 0.0:
            d[i - 1] = tiny
        w = e[i - 1] / d[i - 1]
        d[i] -= w * e[i - 1]
        r[i] -= w * r[i - 1]
    if d[-1] == 0.0:
        d[-1] = tiny
    x = [0.0] * n
    x[-1] = r[-1] / d[-1]
    for i in range(n - 2, -1, -1):
        x[i] = (r[i] - e[i] * x[i + 1]) / d[i]
    return np.array(x)


def eigenpair(op: TridiagonalOperator, index: int = 0, tol: float = 1e-12,
              max_iter: int = 20) -> tuple[float, np.ndarray]:
    """The ``index``-th smallest eigenpair of a symmetric tridiagonal matrix.

    The eigenvalue is bracketed by Sturm-sequence multisection; the
    eigenvector comes from shifted inverse iteration at the lower end of the
    bracket. The returned eigenvalue is the Rayleigh quotient of the
    normalized eigenvector.
    """
    n = op.size
    if not 0 <= index < n:
        raise InvalidParameterError(f"eigenvalue index {index} out of range for size {n}")
    lo, hi = op.gershgorin()
    scale = max(op.norm(), 1e-300)
    lo -= _EPS * scale
    hi += _EPS * scale
    # multisection: 31 interior shifts per sweep
    for _ in range(40):
        if hi - lo <= 4.0 * _EPS * max(abs(lo), abs(hi), _EPS * scale):
            break
        shifts = np.linspace(lo, hi, 33)[1:-1]
        below = sturm_count(op, shifts)
        # first shift with more than `index` eigenvalues below it brackets from above
        above = np.flatnonzero(below > index)
        j = above[0] if above.size else shifts.size
        new_hi = shifts[j] if j < shifts.size else hi
        new_lo = shifts[j - 1] if j > 0 else lo
        lo, hi = new_lo, new_hi

    # deterministic start vector with both even and odd components
    v = np.linspace(1.0, 2.0, n)
    v /= np.linalg.norm(v)
    shift = lo
    lam = 0.5 * (lo + hi)
    for _ in range(max_iter):
        w = _thomas(op, shift, v)
        nw = np.linalg.norm(w)
        if not np.isfinite(nw) or nw == 0.0:
            raise NumericError("inverse iteration broke down")
        v = w / nw
        Av = op.matvec(v)
        lam = float(v @ Av)
        residual = float(np.linalg.norm(Av - lam * v))
        if residual <= tol * scale:
            break
    else:
        raise NumericError(f"inverse iteration did not converge (residual {residual:.3e})",
                           partial=lam, error_estimate=residual)
    # fix the sign so the component of largest magnitude is positive
    if v[np.argmax(np.abs(v))] < 0:
        v = -v
    return lam, v


def smallest_eigenpair(op: TridiagonalOperator, tol: float = 1e-12) -> tuple[float, np.ndarray]:
    """Lowest eigenvalue and unit-norm eigenvector of ``op``."""
    return eigenpair(op, 0, tol)
