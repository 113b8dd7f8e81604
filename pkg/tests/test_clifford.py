import itertools

import numpy as np
import pytest

from foldrel.clifford import (
    GaussianMatrix,
    anticommutator,
    check_clifford,
    commutator,
    dirac_hamiltonian,
    dirac_set,
    hamiltonian_square_check,
    levi_civita,
    pauli,
    spin_algebra_reports,
    spin_generators,
    spin_operators,
    su2_numeric_deviation,
)


def matmul_oracle(a, b):
    """Plain nested-loop product on lists of Python complex numbers."""
    n = len(a)
    return [[sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n)] for i in range(n)]


def as_lists(m):
    return np.asarray(m, dtype=complex).tolist()


def test_pauli_entries_and_identities():
    assert pauli(1) == GaussianMatrix([[0, 1], [1, 0]])
    assert np.array_equal(pauli(2).to_complex(), np.array([[0, -1j], [1j, 0]]))
    assert pauli(3) == GaussianMatrix([[1, 0], [0, -1]])
    assert pauli(1) @ pauli(1) == GaussianMatrix.identity(2)
    assert pauli(1) @ pauli(2) == pauli(3) * 1j
    for j in (1, 2, 3):
        assert pauli(j).trace() == 0


@pytest.mark.parametrize("bad", [0, 4, "x"])
def test_pauli_index_out_of_range(bad):
    with pytest.raises(IndexError):
        pauli(bad)


def test_dirac_set_structure():
    ds = dirac_set()
    assert np.array_equal(ds.s0.to_complex(), np.diag([1, 1, -1, -1]))
    # off-diagonal sigma blocks: S_1 has its ones on the anti-diagonal
    s1 = ds.s1.to_complex()
    assert [(i, j) for i, j in zip(*np.nonzero(s1))] == [(0, 3), (1, 2), (2, 1), (3, 0)]
    assert ds.s3.to_complex()[0, 2] == 1
    allowed = {0, 1, -1, 1j, -1j}
    for m in ds:
        assert set(m.to_complex().ravel().tolist()) <= allowed
        assert m == m.H


def test_anticommutator_examples():
    ds = dirac_set()
    eye = GaussianMatrix.identity(4)
    assert anticommutator(ds.s1, ds.s2) == GaussianMatrix.zeros(4)
    assert anticommutator(ds.s1, ds.s1) == eye * 2
    assert anticommutator(ds.s0, ds.s3) == GaussianMatrix.zeros(4)


def test_anticommutator_matches_oracle():
    ds = dirac_set()
    for a, b in itertools.product(ds, repeat=2):
        ab = matmul_oracle(as_lists(a), as_lists(b))
        ba = matmul_oracle(as_lists(b), as_lists(a))
        expected = np.array(ab) + np.array(ba)
        assert np.array_equal(anticommutator(a, b).to_complex(), expected)


def test_check_clifford_passes():
    rep = check_clifford(dirac_set())
    assert rep.passed
    assert all(v == 0 for v in rep.max_deviation.values())
    assert len(rep.spatial) == 9 and len(rep.mixed) == 3


def test_check_clifford_detects_identity_substitution():
    rep = check_clifford(dirac_set().replace(1, GaussianMatrix.identity(4)))
    assert not rep.passed
    # {I, S_2} = 2 S_2, max entry magnitude 2
    assert rep.spatial[(1, 2)] == 2
    assert rep.spatial[(2, 3)] == 0
    assert any(f.startswith("anticommute_spatial(1, 2)") for f in rep.failures())


def test_check_clifford_detects_scaled_s0():
    rep = check_clifford(dirac_set().replace(0, dirac_set().s0 * 2))
    assert rep.squares[0] == 3  # |4I - I|_max
    assert rep.spatial[(1, 1)] == 0
    assert not rep.passed


def test_check_clifford_accepts_complex_arrays():
    ds = dirac_set()
    from foldrel.clifford import DiracSet

    rep = check_clifford(DiracSet(*(m.to_complex() for m in ds)))
    assert rep.passed


def test_hamiltonian_at_rest(natural, si):
    for p in (natural, si):
        h = dirac_hamiltonian([0, 0, 0], p)
        assert np.array_equal(h, p.rest_energy * dirac_set().s0.to_complex())
        assert np.allclose(np.linalg.eigvalsh(h), p.rest_energy * np.array([-1, -1, 1, 1]), rtol=1e-15)


def test_hamiltonian_square_integer_k(natural):
    h = dirac_hamiltonian([1, 2, 3], natural)
    sq = np.array(matmul_oracle(as_lists(h), as_lists(h)))
    assert np.array_equal(sq, 15 * np.eye(4))
    assert hamiltonian_square_check([1, 2, 3], natural) == 0.0
    assert hamiltonian_square_check([0, 0, 0], natural) == 0.0


def test_hamiltonian_linear_in_k(natural):
    k = np.array([0.3, -1.2, 2.5])
    s0 = dirac_set().s0.to_complex()
    assert np.allclose(dirac_hamiltonian(-k, natural), 2 * s0 - dirac_hamiltonian(k, natural), atol=1e-15)


def test_hamiltonian_hermitian_and_square_random(any_units):
    p = any_units
    rng = np.random.default_rng(11)
    kc = p.m * p.c / p.hbar
    for _ in range(200):
        k = rng.normal(size=3) * kc * 10 ** rng.uniform(-3, 3)
        h = dirac_hamiltonian(k, p)
        assert np.max(np.abs(h - h.conj().T)) <= 1e-14 * np.max(np.abs(h))
        assert hamiltonian_square_check(k, p) <= 1e-12


def test_hamiltonian_rejects_bad_shape(natural):
    with pytest.raises(ValueError):
        dirac_hamiltonian([1, 2], natural)


def test_levi_civita():
    assert levi_civita(1, 2, 3) == 1
    assert levi_civita(2, 1, 3) == -1
    assert levi_civita(3, 1, 2) == 1
    assert levi_civita(1, 1, 2) == 0


def test_spin_generators_square_to_identity():
    for s in spin_generators():
        assert s @ s == GaussianMatrix.identity(4)


def test_su2_sigma_convention_exact():
    sigma_rep, _ = spin_algebra_reports()
    assert sigma_rep.passed
    assert all(v == 0 for v in sigma_rep.deviations.values())


def test_su2_literal_s_convention_fails():
    ds = dirac_set()
    _, literal = spin_algebra_reports()
    assert not literal.passed
    sigma3 = spin_generators()[2]
    # [S1, S2] = 2i Sigma_3: block diagonal, not proportional to S_3
    assert commutator(ds.s1, ds.s2) == sigma3 * 2j
    assert literal.commutators[(1, 2)] == sigma3 * 2j
    assert literal.deviations[(1, 2)] == 2


def test_spin_operators_numeric(si, natural):
    for p in (natural, si):
        sigma, J = spin_operators(p)
        assert np.allclose(J[0], 0.5 * p.hbar * sigma[0].to_complex(), rtol=0, atol=0)
        assert su2_numeric_deviation(J, p) <= 1e-15 * p.hbar**2
    _, J = spin_operators(natural)
    assert su2_numeric_deviation(J, natural) == 0.0
    literal = tuple(0.5 * m.to_complex() for m in list(dirac_set())[1:])
    # mismatch (i/2)(Sigma_3 - S_3): disjoint supports, so max entry 1/2
    assert su2_numeric_deviation(literal, natural) == 0.5
