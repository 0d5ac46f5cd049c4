import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from threepillar.errors import DimensionError, InvalidProblemError
from threepillar.statics import (BeamProblem, build_equilibrium, family_member,
                                 is_determinate, redundant_member, solve_family)


def family_of(weight, positions):
    return solve_family(build_equilibrium(BeamProblem(weight, tuple(positions))))


def test_build_equilibrium_three_supports():
    L = 2.5
    system = build_equilibrium(BeamProblem(12, (-L, 0, L)))
    np.testing.assert_array_equal(system.coefficient_matrix, [[1, 1, 1], [-L, 0, L]])
    np.testing.assert_array_equal(system.rhs, [12, 0])


def test_zero_weight_rhs():
    system = build_equilibrium(BeamProblem(0, (-1, 1)))
    np.testing.assert_array_equal(system.rhs, [0, 0])


def test_four_supports_rank(rank_oracle):
    system = build_equilibrium(BeamProblem(8, (-3, -1, 1, 3)))
    assert system.coefficient_matrix.shape == (2, 4)
    assert rank_oracle(system.coefficient_matrix.tolist()) == 2
    assert np.linalg.matrix_rank(system.coefficient_matrix) == 2


@pytest.mark.parametrize("positions", [(0.0,), (1.0, 1.0), (-1.0, 0.0, -1.0), (0.0, float("nan"))])
def test_invalid_problems(positions):
    with pytest.raises(InvalidProblemError):
        build_equilibrium(BeamProblem(1.0, positions))


@pytest.mark.parametrize("f, expected", [
    (4.0, (4, 4, 4)),
    (0.0, (6, 0, 6)),
    (12.0, (0, 12, 0)),
    (-6.0, (9, -6, 9)),
])
def test_family_matches_one_parameter_form(f, expected):
    family = family_of(12.0, (-1, 0, 1))
    forces = redundant_member(family, [f])
    np.testing.assert_allclose(forces, expected, atol=1e-12)
    assert family.system.residual(forces) <= 1e-12 * 12


def test_two_supports_determinate():
    family = family_of(10.0, (-1.5, 1.5))
    assert family.nullity == 0
    np.testing.assert_allclose(family.particular, [5, 5], atol=1e-14)
    np.testing.assert_allclose(family_member(family, []), [5, 5], atol=1e-14)


def test_family_member_coefficients():
    family = family_of(12.0, (-1, 0, 1))
    np.testing.assert_array_equal(family_member(family, [0.0]), family.particular)
    # coefficient along (1,-2,1)/sqrt(6) giving F2 = 12
    coeff = -(12 - 4) * np.sqrt(6) / 2
    np.testing.assert_allclose(family_member(family, [coeff]), [0, 12, 0], atol=1e-12)
    with pytest.raises(DimensionError):
        family_member(family, [1.0, 2.0])
    with pytest.raises(DimensionError):
        redundant_member(family, [])


def test_free_parameter_labels():
    assert family_of(1, (-1, 0, 1)).free_parameter_names == ("f",)
    assert family_of(1, (-2, -1, 1, 2)).free_parameter_names == ("f1", "f2")


def test_is_determinate(rank_oracle):
    assert not is_determinate(build_equilibrium(BeamProblem(1, (-1, 0, 1))))
    assert is_determinate(build_equilibrium(BeamProblem(1, (-1, 1))))
    system = build_equilibrium(BeamProblem(1, (-2, -1, 0, 1, 2)))
    assert not is_determinate(system)
    assert system.n_supports - rank_oracle(system.coefficient_matrix.tolist()) == 3
    assert solve_family(system).nullity == 3


def test_torque_pivot_adds_no_information(rank_oracle):
    # torque about any other point is a combination of force and centre-torque rows
    positions = np.array([-1.0, 0.0, 1.0])
    base = np.vstack([np.ones(3), positions])
    for pivot in (-3.0, -1.0, 0.7, 5.0):
        extra = positions - pivot
        assert rank_oracle(np.vstack([base, extra]).tolist()) == 2
        assert rank_oracle(np.vstack([np.ones(3), extra]).tolist()) == 2


distinct_positions = st.lists(st.floats(-5, 5, allow_nan=False), min_size=2, max_size=7,
                              unique=True).filter(
    lambda ps: min(abs(a - b) for i, a in enumerate(ps) for b in ps[i + 1:]) > 1e-2)


@settings(max_examples=80, deadline=None)
@given(st.floats(-10, 10), distinct_positions, st.integers(0, 2**31 - 1))
def test_residual_and_nullity_properties(weight, positions, seed):
    family = family_of(weight, positions)
    n = len(positions)
    assert family.nullity == n - 2
    params = np.random.default_rng(seed).normal(scale=5.0, size=n - 2)
    forces = family_member(family, params)
    assert family.system.residual(forces) <= 1e-12 * max(1.0, abs(weight)) * max([1.0, *np.abs(params)])
    other = family_member(family, np.zeros(n - 2))
    # difference lies in the nullspace span
    diff = forces - other
    projected = family.nullspace_basis.T @ (family.nullspace_basis @ diff)
    np.testing.assert_allclose(projected, diff, atol=1e-10)


@settings(max_examples=40, deadline=None)
@given(st.floats(-10, 10), st.floats(0.1, 5), st.floats(-20, 20))
def test_symmetric_supports_keep_outer_forces_equal(weight, half, param):
    family = family_of(weight, (-half, 0.0, half))
    forces = family_member(family, [param])
    assert forces[0] == pytest.approx(forces[2], abs=1e-12 * max(1.0, abs(weight), abs(param)))
