"""Spectral propagation of wavefunctions on a periodic 1-D grid.

Two propagators share one state type:

* :func:`split_step` - Strang splitting for the Schrödinger equation with an
  arbitrary tabulated potential (half potential kick, exact kinetic drift in
  Fourier space, half kick).
* :func:`relativistic_propagate` - free relativistic evolution; every Fourier
  mode picks up the phase ``exp(-i E(k) dt / hbar)`` with ``E(k)`` from the
  self-consistent mode solver.
"""
from __future__ import annotations

import functools
import math
import warnings
from dataclasses import dataclass, field
from typing import Literal, Optional, Sequence, Union

import numpy as np

from foldrel.dispersion import DispersionConfig, kg_energy, self_consistent_energy
from foldrel.exceptions import (
    AliasFrequency,
    InsufficientSamples,
    SingularPotentialNode,
    UnresolvableWidth,
    WrapAmbiguity,
    ZeroNorm,
)
from foldrel.potential import RelativisticPotentialSpec, beta_kg, potential_specialized
from foldrel.units import PhysParams

DEFAULT_POTENTIAL_CAP = 1e6  # in units of mc^2


@dataclass(frozen=True)
class Grid1D:
    n_points: int
    dx: float
    x0: float = 0.0

    def __post_init__(self):
        n = self.n_points
        if n < 16 or n & (n - 1):
            raise ValueError(f"n_points must be a power of two >= 16, got {n}")
        if not (math.isfinite(self.dx) and self.dx > 0):
            raise ValueError(f"dx must be positive, got {self.dx!r}")

    @classmethod
    def centered(cls, n_points: int, dx: float, avoid_origin: bool = False) -> "Grid1D":
        """Grid on [-L/2, L/2); with ``avoid_origin`` nodes sit at half-integer multiples of dx."""
        x0 = -(n_points // 2) * dx
        if avoid_origin:
            x0 += 0.5 * dx
        return cls(n_points, dx, x0)

    @property
    def length(self) -> float:
        return self.n_points * self.dx

    @property
    def x(self) -> np.ndarray:
        return self.x0 + self.dx * np.arange(self.n_points)

    @property
    def k(self) -> np.ndarray:
        return 2 * np.pi * np.fft.fftfreq(self.n_points, d=self.dx)

    @property
    def dk(self) -> float:
        return 2 * np.pi / self.length

    def wrap(self, d):
        """Map displacements into [-L/2, L/2)."""
        L = self.length
        return (np.asarray(d) + 0.5 * L) % L - 0.5 * L


@dataclass(frozen=True)
class WaveState:
    grid: Grid1D
    amplitudes: np.ndarray
    time: float = 0.0

    def __post_init__(self):
        psi = np.asarray(self.amplitudes, dtype=complex)
        if psi.shape != (self.grid.n_points,):
            raise ValueError(f"amplitudes must have shape ({self.grid.n_points},), got {psi.shape}")
        if not np.all(np.isfinite(psi)):
            raise ValueError("amplitudes must be finite")
        object.__setattr__(self, "amplitudes", psi)

    @property
    def norm(self) -> float:
        return float(np.sum(np.abs(self.amplitudes) ** 2) * self.grid.dx)


PotentialLike = Union[None, float, np.ndarray, RelativisticPotentialSpec]


@dataclass(frozen=True)
class PropagatorSpec:
    """How to advance a state by one step of length ``dt``.

    ``potential`` (schrodinger only) may be a constant, an array tabulated on
    the grid, or a :class:`RelativisticPotentialSpec` evaluated at r = |x|.
    """

    kind: Literal["schrodinger", "relativistic_free"]
    dt: float
    params: PhysParams = PhysParams()
    potential: PotentialLike = None
    potential_cap: float = DEFAULT_POTENTIAL_CAP
    dispersion: DispersionConfig = field(default_factory=DispersionConfig)

    def __post_init__(self):
        if self.kind not in ("schrodinger", "relativistic_free"):
            raise ValueError(f"unknown propagator kind {self.kind!r}")
        if not (math.isfinite(self.dt) and self.dt > 0):
            raise ValueError(f"dt must be positive, got {self.dt!r}")
        if self.kind == "relativistic_free" and self.potential is not None:
            raise ValueError("relativistic_free propagation takes no potential")


def gaussian_packet(grid: Grid1D, x_center: float, k0: float, sigma: float) -> WaveState:
    """Normalised Gaussian with |psi|^2 of standard deviation ``sigma`` and carrier ``k0``."""
    if sigma < 4 * grid.dx:
        raise UnresolvableWidth(f"sigma={sigma!r} is below 4*dx={4 * grid.dx!r}")
    if abs(k0) >= np.pi / grid.dx:
        raise AliasFrequency(f"|k0|={abs(k0)!r} is at or above the Nyquist wavenumber {np.pi / grid.dx!r}")
    d = grid.wrap(grid.x - x_center)
    psi = np.exp(-(d**2) / (4 * sigma**2) + 1j * k0 * d)
    psi /= math.sqrt(np.sum(np.abs(psi) ** 2) * grid.dx)
    return WaveState(grid, psi, 0.0)


def observables(state: WaveState) -> dict:
    """Norm, circular mean position, mean wavenumber and variance about the mean."""
    grid = state.grid
    prob = np.abs(state.amplitudes) ** 2
    total = float(prob.sum())
    if total * grid.dx < 1e-300:
        raise ZeroNorm("state has zero norm")
    theta = 2 * np.pi * (grid.x - grid.x0) / grid.length
    angle = np.angle(np.sum(prob * np.exp(1j * theta)))
    mean_x = grid.x0 + (angle % (2 * np.pi)) * grid.length / (2 * np.pi)
    d = grid.wrap(grid.x - mean_x)
    variance = float(np.sum(prob * d**2) / total)
    spec = np.abs(np.fft.fft(state.amplitudes)) ** 2
    mean_k = float(np.sum(grid.k * spec) / spec.sum())
    return {"norm": total * grid.dx, "mean_x": float(mean_x), "mean_k": mean_k, "variance_x": variance}


def tabulate_potential(grid: Grid1D, potential: PotentialLike, params: PhysParams,
                       cap: float = DEFAULT_POTENTIAL_CAP) -> np.ndarray:
    """Potential values on the grid nodes, rejecting singular or runaway nodes."""
    if potential is None:
        return np.zeros(grid.n_points)
    if isinstance(potential, RelativisticPotentialSpec):
        r = np.abs(grid.x)
        if np.any(r == 0):
            raise SingularPotentialNode("a grid node sits at r = 0; use Grid1D.centered(..., avoid_origin=True)")
        values = np.array([potential_specialized(ri, potential) for ri in r])
    else:
        values = np.broadcast_to(np.asarray(potential, dtype=float), (grid.n_points,)).copy()
    bad = ~np.isfinite(values) | (np.abs(values) > cap * params.rest_energy)
    if np.any(bad):
        idx = int(np.flatnonzero(bad)[0])
        raise SingularPotentialNode(
            f"potential at node {idx} (x={grid.x[idx]!r}) is {values[idx]!r}, beyond cap {cap}*mc^2"
        )
    return values


def revised_spec_for_state(state: WaveState, params: PhysParams, B: float = 0.0) -> RelativisticPotentialSpec:
    """Potential constants frozen from the packet's mean carrier.

    E is the Klein-Gordon energy at <k> and beta the value making the plane
    wave self-consistent, so the tabulated potential equals the revised form.
    """
    E = float(kg_energy(observables(state)["mean_k"], params))
    return RelativisticPotentialSpec(E=E, beta=beta_kg(E, params), B=B, params=params)


@functools.lru_cache(maxsize=32)
def _kinetic_phase(grid: Grid1D, dt: float, params: PhysParams) -> np.ndarray:
    k = grid.k
    phase = np.exp(-1j * params.hbar * k**2 * dt / (2 * params.m))
    phase.setflags(write=False)
    return phase


@functools.lru_cache(maxsize=32)
def mode_energies(grid: Grid1D, params: PhysParams, cfg: DispersionConfig = DispersionConfig()) -> np.ndarray:
    """Self-consistent energy of every Fourier mode of ``grid`` (FFT order)."""
    k = grid.k
    energies = np.empty_like(k)
    solved: dict[float, float] = {}
    for i, ki in enumerate(np.abs(k)):
        if ki not in solved:
            solved[ki] = self_consistent_energy(float(ki), params, cfg).E
        energies[i] = solved[ki]
    energies.setflags(write=False)
    return energies


def _warn_phase_wrap(max_omega: float, dt: float) -> None:
    if max_omega * dt > np.pi / 4:
        warnings.warn(
            f"max |omega| * dt = {max_omega * dt:.3g} exceeds pi/4; per-step phases wrap",
            RuntimeWarning,
            stacklevel=3,
        )


def split_step(state: WaveState, spec: PropagatorSpec, *, check: bool = True) -> WaveState:
    """One Strang step of the Schrödinger equation."""
    if spec.kind != "schrodinger":
        raise ValueError("split_step needs a schrodinger PropagatorSpec")
    p = spec.params
    V = tabulate_potential(state.grid, spec.potential, p, spec.potential_cap)
    kin = _kinetic_phase(state.grid, spec.dt, p)
    if check:
        kmax = np.pi / state.grid.dx
        _warn_phase_wrap(p.hbar * kmax**2 / (2 * p.m) + np.max(np.abs(V)) / p.hbar, spec.dt)
    half = np.exp(-0.5j * V * spec.dt / p.hbar)
    psi = half * np.fft.ifft(kin * np.fft.fft(half * state.amplitudes))
    return WaveState(state.grid, psi, state.time + spec.dt)


def relativistic_propagate(state: WaveState, spec: PropagatorSpec, *, check: bool = True) -> WaveState:
    """Advance every Fourier mode by its relativistic phase over ``spec.dt``."""
    if spec.kind != "relativistic_free":
        raise ValueError("relativistic_propagate needs a relativistic_free PropagatorSpec")
    p = spec.params
    E = mode_energies(state.grid, p, spec.dispersion)
    if check:
        _warn_phase_wrap(float(E.max()) / p.hbar, spec.dt)
    phase = np.exp(-1j * E * spec.dt / p.hbar)
    psi = np.fft.ifft(phase * np.fft.fft(state.amplitudes))
    return WaveState(state.grid, psi, state.time + spec.dt)


def step(state: WaveState, spec: PropagatorSpec, *, check: bool = True) -> WaveState:
    if spec.kind == "schrodinger":
        return split_step(state, spec, check=check)
    return relativistic_propagate(state, spec, check=check)


@dataclass
class Trajectory:
    """Observables sampled during :func:`evolve`."""

    rows: list = field(default_factory=list)

    COLUMNS = ("step", "time", "norm", "mean_x", "mean_k", "variance_x")

    def append(self, step_index: int, state: WaveState) -> None:
        obs = observables(state)
        self.rows.append({"step": step_index, "time": state.time, **obs})

    def column(self, name: str) -> np.ndarray:
        return np.array([row[name] for row in self.rows])

    def time_position(self) -> list[tuple[float, float]]:
        return [(row["time"], row["mean_x"]) for row in self.rows]


def evolve(state: WaveState, spec: PropagatorSpec, n_steps: int, sample_every: int = 1):
    """Run ``n_steps`` steps, sampling observables every ``sample_every`` steps.

    Equivalent to repeated :func:`step` calls but with the per-step phase
    factors built once.  Returns ``(final_state, trajectory)``.
    """
    if n_steps < 0 or sample_every < 1:
        raise ValueError("n_steps must be >= 0 and sample_every >= 1")
    grid, p = state.grid, spec.params
    if spec.kind == "schrodinger":
        V = tabulate_potential(grid, spec.potential, p, spec.potential_cap)
        kmax = np.pi / grid.dx
        _warn_phase_wrap(p.hbar * kmax**2 / (2 * p.m) + np.max(np.abs(V)) / p.hbar, spec.dt)
        half = np.exp(-0.5j * V * spec.dt / p.hbar)
        full_k = _kinetic_phase(grid, spec.dt, p)
    else:
        E = mode_energies(grid, p, spec.dispersion)
        _warn_phase_wrap(float(E.max()) / p.hbar, spec.dt)
        half = None
        full_k = np.exp(-1j * E * spec.dt / p.hbar)

    traj = Trajectory()
    traj.append(0, state)
    psi = state.amplitudes
    t0 = state.time
    for n in range(1, n_steps + 1):
        if half is None:
            psi = np.fft.ifft(full_k * np.fft.fft(psi))
        else:
            psi = half * np.fft.ifft(full_k * np.fft.fft(half * psi))
        if n % sample_every == 0 or n == n_steps:
            current = WaveState(grid, psi, t0 + n * spec.dt)
            traj.append(n, current)
    return WaveState(grid, psi, t0 + n_steps * spec.dt), traj


def group_velocity_estimate(trajectory: Sequence[tuple[float, float]], period: Optional[float] = None,
                            dt: Optional[float] = None) -> float:
    """Least-squares slope of mean position against time.

    Positions are unwrapped with ``period`` when given; a net displacement of
    half a period or more is ambiguous and raises :class:`WrapAmbiguity`.
    """
    if len(trajectory) < 10:
        raise InsufficientSamples(f"need at least 10 samples, got {len(trajectory)}")
    t, x = (np.asarray(v, dtype=float) for v in zip(*trajectory))
    if dt is not None and t[-1] - t[0] < 100 * dt:
        raise InsufficientSamples(f"samples span {t[-1] - t[0]!r}, less than 100*dt")
    if period is not None:
        x = np.unwrap(x, period=period)
        if abs(x[-1] - x[0]) >= 0.5 * period:
            raise WrapAmbiguity("packet travelled half the periodic domain or more")
    slope, _ = np.polyfit(t, x, 1)
    return float(slope)
