"""Three-pillar problem: static indeterminacy, its elastic regularization,
and the scheme-dependent force that reappears in the quantized stiff limit."""

__version__ = "0.1.0"

from .errors import ThreePillarError  # noqa: E402
from .statics import BeamProblem, build_equilibrium, solve_family, family_member  # noqa: E402
from .elastic import SpringArray, solve_elastic, minimize_energy  # noqa: E402
from .quantum import QuadraticHamiltonian, reduce_hamiltonian, ground_state  # noqa: E402
from .anomaly import design_scheme, force_limit, regulated_product_closed  # noqa: E402

__all__ = [
    "ThreePillarError",
    "BeamProblem",
    "build_equilibrium",
    "solve_family",
    "family_member",
    "SpringArray",
    "solve_elastic",
    "minimize_energy",
    "QuadraticHamiltonian",
    "reduce_hamiltonian",
    "ground_state",
    "design_scheme",
    "force_limit",
    "regulated_product_closed",
]
