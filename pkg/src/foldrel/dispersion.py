"""Energy-wavenumber relations for plane-wave modes.

Three routes to the mode energy are provided and cross-checked:

* :func:`kg_energy` - closed-form Klein-Gordon dispersion (the oracle).
* :func:`fixed_beta_modes` - roots of ``2 beta E^2 - 2 mc^2 E + (hbar c k)^2 = 0``
  for a prescribed beta.
* :func:`self_consistent_energy` - bisection on the same equation with beta
  tied to E through :func:`foldrel.potential.beta_kg`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

from foldrel.clifford import dirac_hamiltonian
from foldrel.exceptions import BracketFailure, EigensolverFailure, EvanescentMode, NoConvergence
from foldrel.potential import beta_kg
from foldrel.units import PhysParams

Branch = Literal["positive", "negative"]


@dataclass(frozen=True)
class ModeEnergy:
    """Energy of one plane-wave mode.

    ``residual`` is the mode equation's value at ``E`` divided by the sum of
    the magnitudes of its terms, so it is dimensionless.
    """

    k: float
    E: float
    branch: Branch
    residual: float


@dataclass(frozen=True)
class DispersionConfig:
    abs_tol: float = 1e-12
    max_iter: int = 200
    bracket_factor: float = 10.0
    # Lower bracket is mc^2 * (1 - bracket_margin).
    bracket_margin: float = 1e-6

    def __post_init__(self):
        if not self.abs_tol > 0:
            raise ValueError("abs_tol must be positive")
        if self.max_iter < 1:
            raise ValueError("max_iter must be at least 1")
        if not self.bracket_factor > 1:
            raise ValueError("bracket_factor must exceed 1")
        if not 0 < self.bracket_margin < 1:
            raise ValueError("bracket_margin must lie in (0, 1)")


def kg_energy(k, params: PhysParams):
    """Positive Klein-Gordon energy sqrt((hbar c k)^2 + (m c^2)^2)."""
    return np.hypot(params.hbar * params.c * np.asarray(k, dtype=float), params.m * params.c**2)[()]


def _branch(E: float) -> Branch:
    return "positive" if E >= 0 else "negative"


def _mode_residual(E: float, k: float, beta: float, params: PhysParams) -> float:
    mc2 = params.m * params.c**2
    hck2 = (params.hbar * params.c * k) ** 2
    terms = (2 * beta * E * E, -2 * mc2 * E, hck2)
    scale = sum(abs(t) for t in terms)
    return abs(sum(terms)) / scale if scale else 0.0


def fixed_beta_modes(k: float, beta: float, params: PhysParams) -> list[ModeEnergy]:
    """Real roots of the plane-wave equation at fixed beta, largest first.

    beta == 0 leaves a linear equation with the single root hbar^2 k^2 / (2m).
    """
    mc2 = params.m * params.c**2
    hck2 = (params.hbar * params.c * k) ** 2
    disc = mc2 * mc2 - 2 * beta * hck2
    if disc < 0:
        raise EvanescentMode(f"no real mode at k={k!r}, beta={beta!r} (discriminant {disc:.3e})")
    s = math.sqrt(disc)
    # mc^2 + s > 0, so this form of the small root never cancels.
    small = hck2 / (mc2 + s)
    roots = [small] if beta == 0 else [(mc2 + s) / (2 * beta), small]
    roots.sort(reverse=True)
    return [ModeEnergy(k, E, _branch(E), _mode_residual(E, k, beta, params)) for E in roots]


def _self_consistent_residual(E: float, k: float, params: PhysParams) -> float:
    mc2 = params.m * params.c**2
    return 2 * beta_kg(E, params) * E * E - 2 * mc2 * E + (params.hbar * params.c * k) ** 2


def self_consistent_energy(k: float, params: PhysParams, cfg: DispersionConfig = DispersionConfig()) -> ModeEnergy:
    """Positive mode energy with beta fixed by the mode's own energy.

    Bisection on ``F(E) = 2 beta_kg(E) E^2 - 2 mc^2 E + (hbar c k)^2``; stops
    once the bracket is narrower than ``cfg.abs_tol`` times its midpoint.
    """
    mc2 = params.m * params.c**2
    lo = mc2 * (1 - cfg.bracket_margin)
    hi = cfg.bracket_factor * (mc2 + params.hbar * params.c * abs(k))
    f_lo = _self_consistent_residual(lo, k, params)
    f_hi = _self_consistent_residual(hi, k, params)
    if f_lo == 0:
        return _accept(lo, k, params)
    if f_hi == 0:
        return _accept(hi, k, params)
    if (f_lo > 0) == (f_hi > 0):
        raise BracketFailure(f"F does not change sign on [{lo!r}, {hi!r}] at k={k!r}")

    for _ in range(cfg.max_iter):
        mid = 0.5 * (lo + hi)
        if hi - lo <= cfg.abs_tol * mid:
            return _accept(mid, k, params)
        f_mid = _self_consistent_residual(mid, k, params)
        if f_mid == 0:
            return _accept(mid, k, params)
        if (f_mid > 0) == (f_lo > 0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    raise NoConvergence(f"bisection did not converge in {cfg.max_iter} iterations at k={k!r}")


def _accept(E: float, k: float, params: PhysParams) -> ModeEnergy:
    return ModeEnergy(k, E, "positive", _mode_residual(E, k, beta_kg(E, params), params))


def dirac_spectrum(k, params: PhysParams) -> np.ndarray:
    """Eigenvalues of the momentum-space Dirac Hamiltonian, descending."""
    k = np.asarray(k, dtype=float)
    if not np.all(np.isfinite(k)):
        raise EigensolverFailure(f"non-finite wavevector {k!r}")
    h = dirac_hamiltonian(k, params)
    try:
        eigs = np.linalg.eigvalsh(h)
    except np.linalg.LinAlgError as exc:
        raise EigensolverFailure(str(exc)) from exc
    if not np.all(np.isfinite(eigs)):
        raise EigensolverFailure(f"eigensolver returned non-finite values for k={k!r}")
    return eigs[::-1].copy()


def nonrel_limit_gap(k: float, params: PhysParams) -> float:
    """Residual of the Schrödinger approximation over the leading quartic term.

    Returns ``|E - mc^2 - hbar^2 k^2/(2m)| / (hbar^4 k^4 / (8 m^3 c^2))``,
    evaluated as ``4 / (1 + sqrt(1 + x))^2`` with ``x = (hbar k / mc)^2``
    to avoid cancellation; this tends to 1 as k -> 0.
    """
    x = (params.hbar * k / (params.m * params.c)) ** 2
    return 4.0 / (1.0 + math.sqrt(1.0 + x)) ** 2


def group_velocity(k, params: PhysParams):
    """dE/d(hbar k) = c^2 hbar k / E(k) on the Klein-Gordon branch."""
    k = np.asarray(k, dtype=float)
    return (params.c**2 * params.hbar * k / kg_energy(k, params))[()]
