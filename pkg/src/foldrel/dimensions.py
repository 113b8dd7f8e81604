"""Exact dimensional analysis over the (L, T, M) base.

Exponents are :class:`fractions.Fraction` throughout, so fractional powers
such as 2/3 compare exactly.  The solver finds every exponent vector ``e``
with ``prod(basis[i] ** e[i]) == target`` by Gauss-Jordan elimination over
the rationals.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

from foldrel.exceptions import InconsistentSystem, NonLengthVariable

RationalLike = Union[Fraction, int, str]

BASE_DIMENSIONS = ("L", "T", "M")


def as_rational(value: RationalLike) -> Fraction:
    """Coerce ints, Fractions and strings like ``"-2/3"`` to a Fraction.

    Floats are rejected: they would silently smuggle rounding into exact code.
    """
    if isinstance(value, bool) or isinstance(value, float):
        raise TypeError(f"exact rational required, got {type(value).__name__}")
    return Fraction(value)


@dataclass(frozen=True)
class Dim:
    L: Fraction = Fraction(0)
    T: Fraction = Fraction(0)
    M: Fraction = Fraction(0)

    def __post_init__(self):
        for name in BASE_DIMENSIONS:
            object.__setattr__(self, name, as_rational(getattr(self, name)))

    @classmethod
    def from_vector(cls, vec: Sequence[RationalLike]) -> "Dim":
        L, T, M = vec
        return cls(L, T, M)

    def as_vector(self) -> tuple[Fraction, Fraction, Fraction]:
        return (self.L, self.T, self.M)

    def __mul__(self, other: "Dim") -> "Dim":
        return dim_mul(self, other)

    def __truediv__(self, other: "Dim") -> "Dim":
        return dim_mul(self, dim_pow(other, -1))

    def __pow__(self, p: RationalLike) -> "Dim":
        return dim_pow(self, p)

    @property
    def is_dimensionless(self) -> bool:
        return self.L == 0 and self.T == 0 and self.M == 0

    def __str__(self) -> str:
        parts = [f"{n}^{v}" for n, v in zip(BASE_DIMENSIONS, self.as_vector()) if v != 0]
        return " ".join(parts) if parts else "1"


DIMENSIONLESS = Dim()


def dim_mul(a: Dim, b: Dim) -> Dim:
    return Dim(a.L + b.L, a.T + b.T, a.M + b.M)


def dim_pow(a: Dim, p: RationalLike) -> Dim:
    p = as_rational(p)
    return Dim(a.L * p, a.T * p, a.M * p)


def parse_dim(text: str) -> Dim:
    """Parse ``"dimensionless"`` or ``"L=-2/3,T=0,M=1"`` (missing keys are 0)."""
    text = text.strip()
    if text.lower() in ("dimensionless", "1", ""):
        return DIMENSIONLESS
    values = {}
    for item in text.split(","):
        key, sep, val = item.partition("=")
        key = key.strip()
        if not sep or key not in BASE_DIMENSIONS:
            raise ValueError(f"bad dimension component {item!r}")
        values[key] = Fraction(val.strip())
    return Dim(**values)


@dataclass(frozen=True)
class Quantity:
    name: str
    dim: Dim


def standard_basis() -> list[Quantity]:
    """Mass, reduced Planck constant, light speed and circular frequency."""
    return [
        Quantity("m", Dim(0, 0, 1)),
        Quantity("hbar", Dim(2, -1, 1)),
        Quantity("c", Dim(1, -1, 0)),
        Quantity("omega", Dim(0, -1, 0)),
    ]


# Extra named quantities the CLI accepts in a custom basis.
KNOWN_QUANTITIES: dict[str, Dim] = {q.name: q.dim for q in standard_basis()}
KNOWN_QUANTITIES.update(
    {
        "E": Dim(2, -2, 1),
        "p": Dim(1, -1, 1),
        "r": Dim(1, 0, 0),
        "t": Dim(0, 1, 0),
        "k": Dim(-1, 0, 0),
    }
)

# Dimension of the fold variable x: x**3 must scale like an inverse area.
FOLD_VARIABLE_DIM = Dim(Fraction(-2, 3), 0, 0)


def product_dim(basis: Sequence[Quantity], exponents: Iterable[RationalLike]) -> Dim:
    out = DIMENSIONLESS
    for q, e in zip(basis, exponents, strict=True):
        out = dim_mul(out, dim_pow(q.dim, e))
    return out


@dataclass(frozen=True)
class ExponentSolution:
    """Solution family ``particular + sum(lam_i * direction_i)``.

    ``free_directions`` holds ``(name, vector)`` pairs; the name is
    ``alpha<j>`` where ``j`` is the 1-based basis position of the unpivoted
    quantity, so omega in the standard basis yields ``alpha4``.
    """

    basis_names: tuple[str, ...]
    particular: tuple[Fraction, ...]
    free_directions: tuple[tuple[str, tuple[Fraction, ...]], ...]

    @property
    def free_names(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.free_directions)

    @property
    def is_unique(self) -> bool:
        return not self.free_directions

    def evaluate(self, free: Mapping[str, RationalLike] | None = None) -> tuple[Fraction, ...]:
        free = dict(free or {})
        unknown = set(free) - set(self.free_names)
        if unknown:
            raise KeyError(f"unknown free parameters: {sorted(unknown)}")
        out = list(self.particular)
        for name, direction in self.free_directions:
            lam = as_rational(free.get(name, 0))
            if lam:
                out = [o + lam * d for o, d in zip(out, direction)]
        return tuple(out)

    def describe(self) -> list[str]:
        """One ``alpha_i = const + coeff*alpha_j ...`` line per basis quantity."""
        lines = []
        for i, qname in enumerate(self.basis_names):
            label = f"alpha{i + 1}"
            terms = []
            for fname, direction in self.free_directions:
                coeff = direction[i]
                if fname == label:
                    continue
                if coeff:
                    terms.append((coeff, fname))
            if label in self.free_names:
                lines.append(f"{label} ({qname}) = {label} [free]")
                continue
            text = str(self.particular[i]) if self.particular[i] or not terms else ""
            for coeff, fname in terms:
                sign = "-" if coeff < 0 else "+"
                mag = abs(coeff)
                body = fname if mag == 1 else f"{mag}*{fname}"
                text = f"{text} {sign} {body}" if text else (body if sign == "+" else f"-{body}")
            lines.append(f"{label} ({qname}) = {text}")
        return lines


def solve_exponent_system(basis: Sequence[Quantity], target: Dim) -> ExponentSolution:
    """Find all rational exponents reproducing ``target`` from ``basis``.

    Raises :class:`InconsistentSystem` when the target lies outside the span
    of the basis dimensions.
    """
    if not basis:
        raise ValueError("basis must be non-empty")
    names = [q.name for q in basis]
    if len(set(names)) != len(names):
        raise ValueError(f"duplicate quantity names in basis: {names}")

    n = len(basis)
    # Augmented matrix: one row per base dimension, one column per quantity.
    rows = [
        [q.dim.as_vector()[d] for q in basis] + [target.as_vector()[d]]
        for d in range(len(BASE_DIMENSIONS))
    ]

    pivots: list[int] = []
    r = 0
    for col in range(n):
        pivot_row = next((i for i in range(r, len(rows)) if rows[i][col] != 0), None)
        if pivot_row is None:
            continue
        rows[r], rows[pivot_row] = rows[pivot_row], rows[r]
        p = rows[r][col]
        rows[r] = [v / p for v in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][col] != 0:
                f = rows[i][col]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
        if r == len(rows):
            break

    bad = [BASE_DIMENSIONS[i] for i in range(r, len(rows)) if rows[i][n] != 0]
    if bad:
        raise InconsistentSystem(
            f"target {target} is not reachable from basis {names}; "
            f"{len(bad)} residual equation(s) reduce to 0 = nonzero",
            residual_rows=[tuple(rows[i]) for i in range(r, len(rows)) if rows[i][n] != 0],
        )

    particular = [Fraction(0)] * n
    for row, col in enumerate(pivots):
        particular[col] = rows[row][n]

    directions = []
    for free in (c for c in range(n) if c not in pivots):
        vec = [Fraction(0)] * n
        vec[free] = Fraction(1)
        for row, col in enumerate(pivots):
            vec[col] = -rows[row][free]
        directions.append((f"alpha{free + 1}", tuple(vec)))

    return ExponentSolution(tuple(names), tuple(particular), tuple(directions))


def fold_variable_exponents(alpha4: RationalLike) -> tuple[Fraction, Fraction, Fraction]:
    """Exponents of m, hbar, c for x ~ m^a1 hbar^a2 c^a3 omega^alpha4."""
    a4 = as_rational(alpha4)
    two_thirds = Fraction(2, 3)
    return (two_thirds - a4, a4 - two_thirds, two_thirds - 2 * a4)


def control_parameter_exponent(x_dim: Dim = FOLD_VARIABLE_DIM) -> Fraction:
    """Power of r in n(r) ~ r**alpha0 such that n(r)*x has dimension L^-2."""
    if x_dim.T != 0 or x_dim.M != 0:
        raise NonLengthVariable(f"variable dimension {x_dim} is not a pure power of length")
    return Fraction(-2) - x_dim.L
