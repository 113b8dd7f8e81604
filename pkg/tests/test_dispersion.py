import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from foldrel.dispersion import (
    DispersionConfig,
    dirac_spectrum,
    fixed_beta_modes,
    group_velocity,
    kg_energy,
    nonrel_limit_gap,
    self_consistent_energy,
)
from foldrel.exceptions import BracketFailure, EigensolverFailure, EvanescentMode, NoConvergence
from foldrel.potential import beta_kg, bracket_residual
from foldrel.units import NATURAL


def test_kg_energy_values(natural):
    assert kg_energy(0.0, natural) == 1.0
    assert kg_energy(1.0, natural) == pytest.approx(1.4142135624, abs=1e-10)
    E = kg_energy(100.0, natural)
    assert (E - 100.0) / E < 1e-4


def test_kg_energy_vectorised(natural):
    ks = np.array([0.0, 1.0, 2.0])
    assert np.allclose(kg_energy(ks, natural), np.sqrt(1 + ks**2), rtol=1e-15)


@given(a=st.floats(0, 1e6), b=st.floats(0, 1e6))
def test_kg_energy_monotone(a, b):
    if a < b:
        assert kg_energy(a, NATURAL) <= kg_energy(b, NATURAL)
        # below k ~ 1e-4 the k^2/2 increment is under one ulp of mc^2
        if b > 1e-4 and b - a > 1e-6 * b:
            assert kg_energy(a, NATURAL) < kg_energy(b, NATURAL)


def test_fixed_beta_zero_is_schrodinger(any_units):
    p = any_units
    for k in (0.1, 1.0, 5.0):
        k = k * p.compton_wavenumber
        (mode,) = fixed_beta_modes(k, 0.0, p)
        assert mode.E == pytest.approx(p.hbar**2 * k**2 / (2 * p.m), rel=1e-14)
        assert mode.branch == "positive"


def test_fixed_beta_rest_roots(natural):
    modes = fixed_beta_modes(0.0, 0.5, natural)
    assert [m.E for m in modes] == [2.0, 0.0]


def test_fixed_beta_contains_kg_energy(any_units):
    p = any_units
    for q in (1e-3, 0.5, 1.0, 7.0, 300.0):
        k = q * p.compton_wavenumber
        E = kg_energy(k, p)
        modes = fixed_beta_modes(k, beta_kg(E, p), p)
        best = min(modes, key=lambda m: abs(m.E - E))
        assert best.E == pytest.approx(E, rel=1e-12)
        assert best.residual <= 1e-12


def test_fixed_beta_negative_beta_reports_both_roots(natural):
    modes = fixed_beta_modes(2.0, -0.3, natural)
    assert len(modes) == 2
    assert {m.branch for m in modes} == {"positive", "negative"}
    assert modes[0].E > modes[1].E
    for m in modes:
        assert m.residual <= 1e-14


def test_fixed_beta_evanescent(natural):
    with pytest.raises(EvanescentMode):
        fixed_beta_modes(1.0, 1.0, natural)


def test_self_consistent_values(natural):
    assert self_consistent_energy(0.0, natural).E == pytest.approx(1.0, rel=1e-12)
    mode = self_consistent_energy(1.0, natural)
    assert mode.E == pytest.approx(math.sqrt(2), rel=1e-10)
    assert mode.branch == "positive"
    assert abs(bracket_residual(beta_kg(mode.E, natural), mode.E, natural)) / mode.E**2 <= 1e-12


def test_self_consistent_si(si):
    for q in (1e-4, 1.0, 1e4):
        k = q * si.compton_wavenumber
        assert self_consistent_energy(k, si).E == pytest.approx(kg_energy(k, si), rel=1e-10)


def test_self_consistent_bracket_failure(natural, monkeypatch):
    from foldrel import dispersion

    # a residual that never changes sign cannot be bracketed
    monkeypatch.setattr(dispersion, "_self_consistent_residual", lambda E, k, p: 1.0)
    with pytest.raises(BracketFailure):
        dispersion.self_consistent_energy(1.0, natural)


def test_self_consistent_no_convergence(natural):
    with pytest.raises(NoConvergence):
        self_consistent_energy(1.0, natural, DispersionConfig(max_iter=3))


def test_config_validation():
    with pytest.raises(ValueError):
        DispersionConfig(abs_tol=0)
    with pytest.raises(ValueError):
        DispersionConfig(max_iter=0)
    with pytest.raises(ValueError):
        DispersionConfig(bracket_factor=1.0)


def test_dirac_spectrum_rest(natural):
    assert np.array_equal(dirac_spectrum([0, 0, 0], natural), [1, 1, -1, -1])


def test_dirac_spectrum_unit_k(natural):
    r2 = math.sqrt(2)
    assert np.allclose(dirac_spectrum([1, 0, 0], natural), [r2, r2, -r2, -r2], rtol=1e-14)


def test_dirac_spectrum_random(any_units):
    p = any_units
    rng = np.random.default_rng(5)
    for _ in range(100):
        k = rng.normal(size=3) * p.compton_wavenumber * 10 ** rng.uniform(-2, 2)
        E = kg_energy(np.linalg.norm(k), p)
        eigs = dirac_spectrum(k, p)
        assert np.allclose(eigs, [E, E, -E, -E], rtol=1e-10, atol=0)
        assert abs(eigs.sum()) <= 1e-10 * p.rest_energy
        assert np.allclose(eigs**2, (p.hbar * p.c) ** 2 * (k @ k) + p.rest_energy**2, rtol=1e-10)


def test_dirac_spectrum_rejects_nonfinite(natural):
    with pytest.raises(EigensolverFailure):
        dirac_spectrum([np.nan, 0, 0], natural)


def naive_gap(k, p):
    E = kg_energy(k, p)
    return abs(E - p.rest_energy - p.hbar**2 * k**2 / (2 * p.m)) / (p.hbar**4 * k**4 / (8 * p.m**3 * p.c**2))


def test_nonrel_limit_gap(natural):
    assert abs(nonrel_limit_gap(0.01, natural) - 1) < 1e-3
    assert nonrel_limit_gap(0.0, natural) == 1.0
    assert 0.8 < nonrel_limit_gap(0.5, natural) < 1.0
    for k in (0.1, 0.3, 0.5, 0.9):
        assert nonrel_limit_gap(k, natural) == pytest.approx(naive_gap(k, natural), rel=1e-9)


def test_group_velocity(natural, si):
    assert group_velocity(1.0, natural) == pytest.approx(1 / math.sqrt(2), rel=1e-15)
    assert group_velocity(1e-3 * si.compton_wavenumber, si) < si.c
    for k in (0.5, 2.0, 40.0):
        h = 1e-6
        fd = (kg_energy(k + h, natural) - kg_energy(k - h, natural)) / (2 * h)
        assert group_velocity(k, natural) == pytest.approx(fd, rel=1e-8)
