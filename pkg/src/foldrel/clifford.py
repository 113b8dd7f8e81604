"""Pauli and Dirac matrices with exact algebraic checks.

The Dirac matrices have entries in {0, +-1, +-i}, so their products live in
the Gaussian integers.  :class:`GaussianMatrix` keeps real and imaginary parts
as separate integer arrays, which makes the anticommutator and commutator
checks exact rather than tolerance based.
"""
from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass, field

import numpy as np

from foldrel.units import PhysParams


class GaussianMatrix:
    """Square matrix over Z[i], stored as two int64 arrays."""

    __slots__ = ("re", "im")

    def __init__(self, re, im=None):
        re = np.asarray(re)
        im = np.zeros_like(re) if im is None else np.asarray(im)
        if re.shape != im.shape:
            raise ValueError("real and imaginary parts differ in shape")
        if not (np.all(re == np.round(re)) and np.all(im == np.round(im))):
            raise ValueError("GaussianMatrix entries must be Gaussian integers")
        self.re = re.astype(np.int64)
        self.im = im.astype(np.int64)
        self.re.setflags(write=False)
        self.im.setflags(write=False)

    @classmethod
    def _raw(cls, re, im) -> "GaussianMatrix":
        # Integer inputs only: products and sums of Gaussian integers stay exact.
        out = cls.__new__(cls)
        re.setflags(write=False)
        im.setflags(write=False)
        out.re, out.im = re, im
        return out

    @classmethod
    def from_complex(cls, a) -> "GaussianMatrix":
        a = np.asarray(a, dtype=complex)
        return cls(a.real, a.imag)

    @classmethod
    def identity(cls, n: int) -> "GaussianMatrix":
        return cls(np.eye(n, dtype=np.int64))

    @classmethod
    def zeros(cls, n: int) -> "GaussianMatrix":
        return cls(np.zeros((n, n), dtype=np.int64))

    @property
    def shape(self):
        return self.re.shape

    def to_complex(self) -> np.ndarray:
        return self.re + 1j * self.im

    __array_priority__ = 100

    def __array__(self, dtype=None, copy=None):
        out = self.to_complex()
        return out if dtype is None else out.astype(dtype)

    def __add__(self, other):
        if isinstance(other, GaussianMatrix):
            return GaussianMatrix._raw(self.re + other.re, self.im + other.im)
        return NotImplemented

    def __sub__(self, other):
        if isinstance(other, GaussianMatrix):
            return GaussianMatrix._raw(self.re - other.re, self.im - other.im)
        return NotImplemented

    def __neg__(self):
        return GaussianMatrix._raw(-self.re, -self.im)

    def __matmul__(self, other):
        if isinstance(other, GaussianMatrix):
            return GaussianMatrix._raw(
                self.re @ other.re - self.im @ other.im,
                self.re @ other.im + self.im @ other.re,
            )
        return NotImplemented

    def __mul__(self, scalar):
        """Multiply by an integer or Gaussian-integer scalar."""
        if isinstance(scalar, (int, np.integer)):
            return GaussianMatrix._raw(self.re * scalar, self.im * scalar)
        if isinstance(scalar, complex) and scalar.real.is_integer() and scalar.imag.is_integer():
            a, b = int(scalar.real), int(scalar.imag)
            return GaussianMatrix._raw(a * self.re - b * self.im, a * self.im + b * self.re)
        return NotImplemented

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, GaussianMatrix):
            return bool(np.array_equal(self.re, other.re) and np.array_equal(self.im, other.im))
        return NotImplemented

    __hash__ = None

    @property
    def H(self) -> "GaussianMatrix":
        """Conjugate transpose."""
        return GaussianMatrix._raw(self.re.T.copy(), -self.im.T)

    def max_abs(self) -> float:
        return float(np.sqrt(np.max(self.re**2 + self.im**2)))

    def trace(self) -> complex:
        return complex(int(np.trace(self.re)), int(np.trace(self.im)))

    def __repr__(self):
        return f"GaussianMatrix({self.to_complex()!r})"


def block(a, b, c, d) -> GaussianMatrix:
    """Assemble [[a, b], [c, d]] from equally sized Gaussian blocks."""
    return GaussianMatrix(np.block([[a.re, b.re], [c.re, d.re]]), np.block([[a.im, b.im], [c.im, d.im]]))


_PAULI = {
    1: GaussianMatrix([[0, 1], [1, 0]]),
    2: GaussianMatrix([[0, 0], [0, 0]], [[0, -1], [1, 0]]),
    3: GaussianMatrix([[1, 0], [0, -1]]),
}


def pauli(j: int) -> GaussianMatrix:
    try:
        return _PAULI[j]
    except (KeyError, TypeError):
        raise IndexError(f"Pauli index must be 1, 2 or 3, got {j!r}") from None


@dataclass(frozen=True)
class DiracSet:
    s0: GaussianMatrix
    s1: GaussianMatrix
    s2: GaussianMatrix
    s3: GaussianMatrix

    def __iter__(self):
        return iter((self.s0, self.s1, self.s2, self.s3))

    def __getitem__(self, i):
        return (self.s0, self.s1, self.s2, self.s3)[i]

    def replace(self, index: int, matrix) -> "DiracSet":
        mats = list(self)
        mats[index] = matrix
        return DiracSet(*mats)


@functools.lru_cache(maxsize=None)
def dirac_set() -> DiracSet:
    """S0 = diag(I, -I) and S_j = [[0, sigma_j], [sigma_j, 0]]."""
    eye = GaussianMatrix.identity(2)
    zero = GaussianMatrix.zeros(2)
    s0 = block(eye, zero, zero, -eye)
    sj = [block(zero, pauli(j), pauli(j), zero) for j in (1, 2, 3)]
    return DiracSet(s0, *sj)


def anticommutator(a, b):
    return a @ b + b @ a


def commutator(a, b):
    return a @ b - b @ a


def _deviation(m) -> float:
    if isinstance(m, GaussianMatrix):
        return m.max_abs()
    return float(np.max(np.abs(m)))


def _identity_like(a):
    n = a.shape[0]
    return GaussianMatrix.identity(n) if isinstance(a, GaussianMatrix) else np.eye(n)


@dataclass
class CliffordReport:
    """Max absolute deviation per condition; passes only if every one is zero."""

    spatial: dict = field(default_factory=dict)  # (i, j) -> {S_i, S_j} - 2 delta_ij I
    mixed: dict = field(default_factory=dict)  # i -> {S_i, S_0}
    squares: dict = field(default_factory=dict)  # i -> S_i^2 - I
    hermitian: dict = field(default_factory=dict)  # i -> S_i - S_i^H

    @property
    def sections(self) -> dict:
        return {
            "anticommute_spatial": self.spatial,
            "anticommute_mixed": self.mixed,
            "squares_identity": self.squares,
            "hermitian": self.hermitian,
        }

    @property
    def max_deviation(self) -> dict[str, float]:
        return {name: max(sec.values()) for name, sec in self.sections.items()}

    @property
    def passed(self) -> bool:
        return all(v == 0 for v in self.max_deviation.values())

    def failures(self) -> list[str]:
        out = []
        for name, sec in self.sections.items():
            out.extend(f"{name}{key}: {dev}" for key, dev in sec.items() if dev != 0)
        return out


def check_clifford(mats: DiracSet) -> CliffordReport:
    report = CliffordReport()
    eye = _identity_like(mats.s0)
    for i, j in itertools.product((1, 2, 3), repeat=2):
        expected = eye * 2 if i == j else eye * 0
        report.spatial[(i, j)] = _deviation(anticommutator(mats[i], mats[j]) - expected)
    for i in (1, 2, 3):
        report.mixed[i] = _deviation(anticommutator(mats[i], mats.s0))
    for i in range(4):
        report.squares[i] = _deviation(mats[i] @ mats[i] - eye)
        report.hermitian[i] = _deviation(mats[i] - mats[i].H if isinstance(mats[i], GaussianMatrix)
                                         else mats[i] - np.conj(mats[i]).T)
    return report


def dirac_hamiltonian(k, params: PhysParams) -> np.ndarray:
    """Momentum-space Hamiltonian for a plane wave exp(i k.r).

    The gradient becomes i*k, so ``i hbar c S.grad`` turns into ``-hbar c S.k``.
    """
    k = np.asarray(k, dtype=float)
    if k.shape != (3,):
        raise ValueError(f"k must be a 3-vector, got shape {k.shape}")
    mats = _dirac_complex()
    hc = params.hbar * params.c
    mc2 = params.m * params.c**2
    return -hc * (k[0] * mats[1] + k[1] * mats[2] + k[2] * mats[3]) + mc2 * mats[0]


_DIRAC_COMPLEX = None


def _dirac_complex():
    global _DIRAC_COMPLEX
    if _DIRAC_COMPLEX is None:
        _DIRAC_COMPLEX = tuple(m.to_complex() for m in dirac_set())
    return _DIRAC_COMPLEX


def hamiltonian_square_check(k, params: PhysParams) -> float:
    """Max-entry deviation of H(k)^2 from (hbar^2 c^2 |k|^2 + m^2 c^4) I, relative to that scalar."""
    h = dirac_hamiltonian(k, params)
    k = np.asarray(k, dtype=float)
    scale = (params.hbar * params.c) ** 2 * float(k @ k) + (params.m * params.c**2) ** 2
    return float(np.max(np.abs(h @ h - scale * np.eye(4)))) / scale


@functools.lru_cache(maxsize=None)
def spin_generators() -> tuple[GaussianMatrix, GaussianMatrix, GaussianMatrix]:
    """Sigma_k = diag(sigma_k, sigma_k)."""
    zero = GaussianMatrix.zeros(2)
    return tuple(block(pauli(j), zero, zero, pauli(j)) for j in (1, 2, 3))


def spin_operators(params: PhysParams):
    """Return (Sigma, J) with J_k = (hbar/2) Sigma_k as complex arrays."""
    sigma = spin_generators()
    J = tuple(0.5 * params.hbar * s.to_complex() for s in sigma)
    return sigma, J


def levi_civita(i: int, j: int, k: int) -> int:
    return int(np.sign((j - i) * (k - i) * (k - j)))


@dataclass
class Su2Report:
    """Outcome of [G_i, G_j] = 2i eps_ijk G_k for generators G.

    With J = (hbar/2) G this is exactly [J_i, J_j] = i hbar eps_ijk J_k; the
    common factor hbar^2/4 is divided out so the check stays exact.
    ``commutators`` holds [G_i, G_j] and ``deviations`` the max |entry| of
    the mismatch in units of hbar^2/4.
    """

    label: str
    commutators: dict
    deviations: dict

    @property
    def passed(self) -> bool:
        return all(v == 0 for v in self.deviations.values())


def su2_check(generators, label: str = "") -> Su2Report:
    commutators = {}
    deviations = {}
    for i, j in itertools.combinations((1, 2, 3), 2):
        k = 6 - i - j
        comm = commutator(generators[i - 1], generators[j - 1])
        expected = generators[k - 1] * complex(0, 2 * levi_civita(i, j, k))
        commutators[(i, j)] = comm
        deviations[(i, j)] = _deviation(comm - expected)
    return Su2Report(label, commutators, deviations)


def spin_algebra_reports() -> tuple[Su2Report, Su2Report]:
    """su(2) check for J = (hbar/2) Sigma and for the literal J = (hbar/2) S.

    The second fails: [S_1, S_2] = 2i Sigma_3, which is block diagonal,
    whereas S_3 is block off-diagonal.
    """
    ds = dirac_set()
    return (
        su2_check(spin_generators(), "J = (hbar/2) Sigma"),
        su2_check((ds.s1, ds.s2, ds.s3), "J = (hbar/2) S"),
    )


def su2_numeric_deviation(J, params: PhysParams) -> float:
    """Max |[J_i, J_j] - i hbar eps_ijk J_k| in floating point, over all pairs."""
    worst = 0.0
    for i, j in itertools.combinations((0, 1, 2), 2):
        k = 3 - i - j
        eps = levi_civita(i + 1, j + 1, k + 1)
        diff = J[i] @ J[j] - J[j] @ J[i] - 1j * params.hbar * eps * J[k]
        worst = max(worst, float(np.max(np.abs(diff))))
    return worst
