"""Fold-catastrophe potential and its relativistic specialisations."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from foldrel.exceptions import SingularRadius
from foldrel.units import PhysParams

FOUR_THIRDS = 4.0 / 3.0
TWO_THIRDS = 2.0 / 3.0


@dataclass(frozen=True)
class FoldPotential:
    n: float = 0.0

    def __call__(self, x):
        return fold_eval(x, self.n)


@dataclass(frozen=True)
class RelativisticPotentialSpec:
    """Constants of the two-term potential.

    ``beta`` scales the r-independent term, ``B`` the r**(-4/3) action-field
    term.  ``E`` is the plane-wave energy (must be positive).
    """

    E: float
    beta: float = 0.0
    B: float = 0.0
    params: PhysParams = PhysParams()

    def __post_init__(self):
        if not (math.isfinite(self.E) and self.E > 0):
            raise ValueError(f"E must be positive and finite, got {self.E!r}")
        if not (math.isfinite(self.beta) and math.isfinite(self.B)):
            raise ValueError("beta and B must be finite")


def fold_eval(x, n):
    return x**3 + n * x


def _check_radius(r):
    if not r > 0:
        raise SingularRadius(f"potential is singular at r = {r!r}; need r > 0")


def potential_general(r: float, alpha4: float, spec: RelativisticPotentialSpec, omega: float) -> float:
    """Two-term potential for a general frequency exponent ``alpha4``.

    ``(hbar^2/m) [beta (mc/hbar)^2 w^(3 alpha4) + B (mc/hbar)^(2/3) w^alpha4 r^(-4/3)]``
    with ``w = hbar*omega/(m c^2)``.  ``spec.E`` is not used here.
    """
    _check_radius(r)
    p = spec.params
    inv_len = p.m * p.c / p.hbar
    w = p.hbar * omega / (p.m * p.c**2)
    first = spec.beta * inv_len**2 * w ** (3 * alpha4)
    second = spec.B * inv_len**TWO_THIRDS * w**alpha4 * r ** (-FOUR_THIRDS)
    return p.hbar**2 / p.m * (first + second)


def action_field(r: float, spec: RelativisticPotentialSpec) -> float:
    """The r-dependent term f(r) = B (hbar^2 E / c)^(2/3) r^(-4/3) / m."""
    _check_radius(r)
    p = spec.params
    return spec.B * (p.hbar**2 * spec.E / p.c) ** TWO_THIRDS * r ** (-FOUR_THIRDS) / p.m


def potential_specialized(r: float, spec: RelativisticPotentialSpec) -> float:
    """beta E^2/(m c^2) + f(r)."""
    p = spec.params
    return spec.beta * spec.E**2 / (p.m * p.c**2) + action_field(r, spec)


def beta_kg(E: float, params: PhysParams, exact: bool = False):
    """The beta that makes the bracket ``(2b+1)E^2 - 2mc^2 E - m^2c^4`` vanish.

    With ``exact=True`` the rational function is evaluated in rational
    arithmetic on the binary values of the inputs and returned as a Fraction.
    The float result carries a representation error of about
    ``1e-16 * beta``, which for E << mc^2 leaves a bracket residual near
    ``1e-16 * m^2 c^4`` rather than zero.
    """
    if not E > 0:
        raise ValueError(f"E must be positive, got {E!r}")
    if exact:
        E, mc2 = Fraction(E), Fraction(params.m) * Fraction(params.c) ** 2
    else:
        mc2 = params.m * params.c**2
    return (mc2**2 + 2 * mc2 * E - E**2) / (2 * E**2)


def bracket_residual(beta, E: float, params: PhysParams):
    """``(2 beta + 1) E^2 - 2 mc^2 E - m^2 c^4``; exact when ``beta`` is a Fraction."""
    if isinstance(beta, Fraction):
        E, mc2 = Fraction(E), Fraction(params.m) * Fraction(params.c) ** 2
    else:
        mc2 = params.m * params.c**2
    return (2 * beta + 1) * E**2 - 2 * mc2 * E - mc2**2


def revised_constant(E: float, params: PhysParams) -> float:
    """Spatially constant part of the revised equation: (1 + 2E/mc^2 - E^2/m^2c^4) mc^2 / 2."""
    mc2 = params.m * params.c**2
    u = E / mc2
    return 0.5 * (1 + 2 * u - u * u) * mc2


def revised_potential(r: float, spec: RelativisticPotentialSpec) -> float:
    """Potential with beta eliminated in favour of E; ``spec.beta`` is ignored."""
    return revised_constant(spec.E, spec.params) + action_field(r, spec)


def mass_energy_degree(p: float, params: PhysParams) -> float:
    """mc^2 [1 + c^2 p^2 / (m^2 c^4)], i.e. E^2/(mc^2) on the mass shell."""
    mc2 = params.m * params.c**2
    return mc2 * (1 + (params.c * p / mc2) ** 2)
