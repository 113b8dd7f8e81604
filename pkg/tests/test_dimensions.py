from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from foldrel.dimensions import (
    DIMENSIONLESS,
    FOLD_VARIABLE_DIM,
    KNOWN_QUANTITIES,
    Dim,
    Quantity,
    as_rational,
    control_parameter_exponent,
    dim_mul,
    dim_pow,
    fold_variable_exponents,
    standard_basis,
    parse_dim,
    product_dim,
    solve_exponent_system,
)
from foldrel.exceptions import InconsistentSystem, NonLengthVariable

rationals = st.fractions(min_value=-20, max_value=20, max_denominator=50)
dims = st.builds(Dim, rationals, rationals, rationals)

M = Dim(0, 0, 1)
HBAR = Dim(2, -1, 1)
C = Dim(1, -1, 0)
OMEGA = Dim(0, -1, 0)


def test_dim_mul_mass_squared():
    assert dim_mul(M, M) == Dim(0, 0, 2)


def test_dim_mul_action_times_frequency_is_energy():
    # (2, -1, 1) + (0, -1, 0) by hand
    assert dim_mul(HBAR, OMEGA) == Dim(2, -2, 1)


def test_dim_mul_inverse_cancels():
    assert dim_mul(C, dim_pow(C, -1)) == DIMENSIONLESS
    assert (C / C).is_dimensionless


def test_dim_pow():
    assert dim_pow(C, F(-2, 3)) == Dim(F(-2, 3), F(2, 3), 0)
    assert dim_pow(HBAR, 0) == DIMENSIONLESS
    assert dim_pow(M, 1) == M
    assert C ** F(1, 2) == Dim(F(1, 2), F(-1, 2), 0)


def test_floats_rejected():
    with pytest.raises(TypeError):
        as_rational(0.5)
    with pytest.raises(TypeError):
        Dim(0.5, 0, 0)


def test_standard_basis():
    basis = standard_basis()
    assert [q.name for q in basis] == ["m", "hbar", "c", "omega"]
    assert [q.dim for q in basis] == [M, HBAR, C, OMEGA]


def test_standard_system_family():
    sol = solve_exponent_system(standard_basis(), FOLD_VARIABLE_DIM)
    assert sol.basis_names == ("m", "hbar", "c", "omega")
    assert sol.free_names == ("alpha4",)
    assert sol.particular == (F(2, 3), F(-2, 3), F(2, 3), 0)
    assert sol.free_directions[0][1] == (-1, 1, -2, 1)
    for a4 in (F(0), F(2, 3), F(-7, 5), F(3)):
        assert sol.evaluate({"alpha4": a4}) == (F(2, 3) - a4, a4 - F(2, 3), F(2, 3) - 2 * a4, a4)


def test_mass_alone_dimensionless_is_zero():
    sol = solve_exponent_system([Quantity("m", M)], DIMENSIONLESS)
    assert sol.is_unique
    assert sol.particular == (0,)


def test_length_from_c_and_omega():
    basis = [Quantity("c", C), Quantity("omega", OMEGA)]
    sol = solve_exponent_system(basis, Dim(1, 0, 0))
    assert sol.is_unique
    assert sol.particular == (1, -1)
    # oracle: product of powers, computed independently of the solver
    assert dim_mul(dim_pow(C, 1), dim_pow(OMEGA, -1)) == Dim(1, 0, 0)


def test_inconsistent_system():
    with pytest.raises(InconsistentSystem) as info:
        solve_exponent_system([Quantity("m", M)], Dim(1, 0, 0))
    assert info.value.residual_rows


def test_empty_basis_rejected():
    with pytest.raises(ValueError):
        solve_exponent_system([], DIMENSIONLESS)


def test_free_direction_named_after_unpivoted_quantity():
    # omega first: it is pivoted first, so a later column becomes free
    basis = [Quantity("omega", OMEGA), Quantity("m", M), Quantity("hbar", HBAR), Quantity("c", C)]
    sol = solve_exponent_system(basis, FOLD_VARIABLE_DIM)
    assert sol.free_names == ("alpha4",)
    assert product_dim(basis, sol.evaluate({"alpha4": F(5, 7)})) == FOLD_VARIABLE_DIM


def test_two_free_parameters():
    basis = [Quantity(n, KNOWN_QUANTITIES[n]) for n in ("m", "hbar", "c", "omega", "E")]
    sol = solve_exponent_system(basis, Dim(2, -2, 1))
    assert sol.free_names == ("alpha4", "alpha5")
    assert product_dim(basis, sol.evaluate({"alpha4": 1, "alpha5": F(-1, 2)})) == Dim(2, -2, 1)


@pytest.mark.parametrize(
    "a4, expected",
    [(F(2, 3), (0, 0, F(-2, 3))), (F(0), (F(2, 3), F(-2, 3), F(2, 3)))],
)
def test_fold_variable_exponents(a4, expected):
    got = fold_variable_exponents(a4)
    assert got == expected
    assert product_dim(standard_basis(), (*got, a4)) == FOLD_VARIABLE_DIM


def test_alpha4_two_thirds_gives_omega_over_c():
    a1, a2, a3 = fold_variable_exponents(F(2, 3))
    assert (a1, a2) == (0, 0)
    assert a3 == -F(2, 3)  # x ~ (omega/c)^(2/3)


@pytest.mark.parametrize("L, expected", [(F(-2, 3), F(-4, 3)), (F(-2), F(0)), (F(0), F(-2))])
def test_control_parameter_exponent(L, expected):
    assert control_parameter_exponent(Dim(L, 0, 0)) == expected


def test_control_parameter_exponent_rejects_non_length():
    with pytest.raises(NonLengthVariable):
        control_parameter_exponent(Dim(1, -1, 0))


def test_parse_dim():
    assert parse_dim("dimensionless") == DIMENSIONLESS
    assert parse_dim("L=-2/3") == FOLD_VARIABLE_DIM
    assert parse_dim("L=2, T=-1, M=1") == HBAR
    with pytest.raises(ValueError):
        parse_dim("Q=1")


def test_describe_standard_family():
    lines = solve_exponent_system(standard_basis(), FOLD_VARIABLE_DIM).describe()
    assert lines[0] == "alpha1 (m) = 2/3 - alpha4"
    assert lines[1] == "alpha2 (hbar) = -2/3 + alpha4"
    assert lines[2] == "alpha3 (c) = 2/3 - 2*alpha4"


@given(a=dims, b=dims, p=rationals)
def test_dim_algebra_laws(a, b, p):
    assert dim_mul(a, b) == dim_mul(b, a)
    assert dim_pow(dim_mul(a, b), p) == dim_mul(dim_pow(a, p), dim_pow(b, p))


@given(lam=rationals)
def test_family_members_exact(lam):
    basis = standard_basis()
    sol = solve_exponent_system(basis, FOLD_VARIABLE_DIM)
    assert product_dim(basis, sol.evaluate({"alpha4": lam})) == FOLD_VARIABLE_DIM


@settings(max_examples=100)
@given(a4=rationals)
def test_closed_form_round_trip(a4):
    sol = solve_exponent_system(standard_basis(), FOLD_VARIABLE_DIM)
    assert sol.evaluate({"alpha4": a4})[:3] == fold_variable_exponents(a4)


@given(
    basis_dims=st.lists(dims, min_size=1, max_size=5),
    weights=st.lists(rationals, min_size=5, max_size=5),
    free=st.lists(rationals, min_size=5, max_size=5),
)
def test_random_systems_exact(basis_dims, weights, free):
    basis = [Quantity(f"q{i}", d) for i, d in enumerate(basis_dims)]
    # target in the span by construction
    target = product_dim(basis, weights[: len(basis)])
    sol = solve_exponent_system(basis, target)
    values = dict(zip(sol.free_names, free))
    assert product_dim(basis, sol.evaluate(values)) == target
    assert len(sol.free_directions) == len(basis) - _rank(basis_dims)
    assert solve_exponent_system(basis, target) == sol


def _rank(vectors):
    # independent rank oracle: fraction-exact elimination on row vectors
    rows = [list(v.as_vector()) for v in vectors]
    rank = 0
    for col in range(3):
        piv = next((r for r in range(rank, len(rows)) if rows[r][col] != 0), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        for r in range(len(rows)):
            if r != rank and rows[r][col] != 0:
                f = rows[r][col] / rows[rank][col]
                rows[r] = [x - f * y for x, y in zip(rows[r], rows[rank])]
        rank += 1
    return rank
