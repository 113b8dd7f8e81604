"""Physical parameter sets shared by the numeric modules."""
from __future__ import annotations

import math
from dataclasses import dataclass

# CODATA 2018 exact / recommended values.
SPEED_OF_LIGHT = 299_792_458.0
HBAR = 1.054571817e-34
ELECTRON_MASS = 9.1093837015e-31


@dataclass(frozen=True)
class PhysParams:
    """Rest mass ``m``, light speed ``c`` and reduced Planck constant ``hbar``.

    Units are whatever the caller chooses; all three must be positive and finite.
    """

    m: float = 1.0
    c: float = 1.0
    hbar: float = 1.0

    def __post_init__(self):
        for name in ("m", "c", "hbar"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ValueError(f"{name} must be positive and finite, got {value!r}")

    @property
    def rest_energy(self) -> float:
        return self.m * self.c**2

    @property
    def compton_wavenumber(self) -> float:
        """mc/hbar, the wavenumber at which hbar*k equals mc."""
        return self.m * self.c / self.hbar


NATURAL = PhysParams(1.0, 1.0, 1.0)


def electron_si() -> PhysParams:
    return PhysParams(ELECTRON_MASS, SPEED_OF_LIGHT, HBAR)
