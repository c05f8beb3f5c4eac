"""
Sparse multivariate polynomials over ℂ in variables z1..zn.

Coefficients are double-precision complex numbers. Every constructor
normalizes: coefficients with |coef| ≤ tol·max(1, scale) are dropped,
where scale is the largest contribution magnitude seen by the operation.
Terms are stored in graded-lex order (higher total degree first, then
lexicographically larger exponent tuples first).
"""
from __future__ import annotations

import cmath
import itertools
from dataclasses import dataclass
from math import comb
from typing import Iterable, Mapping, Sequence

import numpy as np

from app.config import settings
from app.utils.error_handler import DimensionMismatch, IndexOutOfRange, NonFiniteCoefficient

Monomial = tuple[int, ...]


def _grlex_key(mono: Monomial):
    return (-sum(mono), tuple(-e for e in mono))


def _check_finite(value: complex) -> complex:
    value = complex(value)
    if not cmath.isfinite(value):
        raise NonFiniteCoefficient(f"coefficient {value!r} is not finite")
    return value


@dataclass(frozen=True, init=False)
class ShiftVector:
    c: tuple[complex, ...]

    def __init__(self, c: Iterable[complex]):
        object.__setattr__(self, "c", tuple(_check_finite(x) for x in c))

    @property
    def dim(self) -> int:
        return len(self.c)

    def __neg__(self) -> ShiftVector:
        return ShiftVector(-x for x in self.c)

    def __add__(self, other: ShiftVector) -> ShiftVector:
        if other.dim != self.dim:
            raise DimensionMismatch(f"shift dims {self.dim} and {other.dim}")
        return ShiftVector(a + b for a, b in zip(self.c, other.c))

    def __iter__(self):
        return iter(self.c)

    def __len__(self):
        return len(self.c)

    def __getitem__(self, idx):
        return self.c[idx]

    def is_zero(self, tol: float | None = None) -> bool:
        tol = settings.SINGULAR_TOL if tol is None else tol
        return all(abs(x) <= tol for x in self.c)


def _as_shift(c) -> ShiftVector:
    return c if isinstance(c, ShiftVector) else ShiftVector(c)


@dataclass(frozen=True)
class Poly:
    dim: int
    terms: tuple[tuple[Monomial, complex], ...] = ()

    # -- construction ---------------------------------------------------

    @classmethod
    def from_contributions(
        cls,
        dim: int,
        contributions: Iterable[tuple[Monomial, complex]],
        tol: float | None = None,
        floor: float = 1.0,
    ) -> Poly:
        """Sum contributions per monomial and normalize.

        floor is the magnitude 1 in the units of the contributions; it differs
        from 1 only for ExpPoly coefficients carried under a log scale.
        """
        tol = settings.ZERO_TOL if tol is None else tol
        acc: dict[Monomial, complex] = {}
        scale = 0.0
        for mono, coef in contributions:
            if len(mono) != dim:
                raise DimensionMismatch(f"monomial {mono} in dimension {dim}")
            coef = _check_finite(coef)
            scale = max(scale, abs(coef))
            acc[mono] = acc.get(mono, 0j) + coef
        cutoff = tol * max(floor, scale)
        kept = [(m, c) for m, c in acc.items() if abs(c) > cutoff]
        kept.sort(key=lambda t: _grlex_key(t[0]))
        return cls(dim, tuple(kept))

    @classmethod
    def from_dict(cls, dim: int, mapping: Mapping[Monomial, complex], tol: float | None = None) -> Poly:
        return cls.from_contributions(dim, mapping.items(), tol)

    @classmethod
    def zero(cls, dim: int) -> Poly:
        return cls(dim, ())

    @classmethod
    def constant(cls, dim: int, value: complex) -> Poly:
        return cls.from_contributions(dim, [((0,) * dim, value)])

    @classmethod
    def variable(cls, dim: int, j: int) -> Poly:
        """The coordinate z_j (1-based)."""
        if not 1 <= j <= dim:
            raise IndexOutOfRange(f"variable z{j} outside 1..{dim}")
        mono = tuple(1 if i == j - 1 else 0 for i in range(dim))
        return cls(dim, ((mono, 1 + 0j),))

    # -- inspection -----------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def degree(self) -> int:
        return max((sum(m) for m, _ in self.terms), default=0)

    def as_dict(self) -> dict[Monomial, complex]:
        return dict(self.terms)

    def coeff(self, mono: Monomial) -> complex:
        return self.as_dict().get(tuple(mono), 0j)

    @property
    def constant_term(self) -> complex:
        return self.coeff((0,) * self.dim)

    def without_constant(self) -> Poly:
        zero = (0,) * self.dim
        return Poly(self.dim, tuple(t for t in self.terms if t[0] != zero))

    @property
    def is_constant(self) -> bool:
        return all(sum(m) == 0 for m, _ in self.terms)

    def max_abs_coeff(self) -> float:
        return max((abs(c) for _, c in self.terms), default=0.0)

    def variables_used(self) -> set[int]:
        """1-based indices of the variables that occur."""
        return {i + 1 for m, _ in self.terms for i, e in enumerate(m) if e}

    # -- operators ------------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, Poly):
            other = Poly.constant(self.dim, other)
        return poly_add(self, other)

    __radd__ = __add__

    def __neg__(self):
        return poly_scale(self, -1)

    def __sub__(self, other):
        if not isinstance(other, Poly):
            other = Poly.constant(self.dim, other)
        return poly_add(self, -other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Poly):
            return poly_mul(self, other)
        return poly_scale(self, other)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        return poly_pow(self, k)


def _same_dim(a: Poly, b: Poly):
    if a.dim != b.dim:
        raise DimensionMismatch(f"polynomials in {a.dim} and {b.dim} variables")


def poly_add(a: Poly, b: Poly) -> Poly:
    _same_dim(a, b)
    return Poly.from_contributions(a.dim, itertools.chain(a.terms, b.terms))


def poly_scale(p: Poly, s: complex) -> Poly:
    s = _check_finite(s)
    return Poly.from_contributions(p.dim, ((m, c * s) for m, c in p.terms))


def poly_mul(a: Poly, b: Poly) -> Poly:
    _same_dim(a, b)
    contributions = (
        (tuple(x + y for x, y in zip(ma, mb)), ca * cb)
        for ma, ca in a.terms
        for mb, cb in b.terms
    )
    return Poly.from_contributions(a.dim, contributions)


def poly_pow(p: Poly, k: int) -> Poly:
    result = Poly.constant(p.dim, 1)
    for _ in range(k):
        result = poly_mul(result, p)
    return result


def shift_contributions(p: Poly, c) -> list[tuple[Monomial, complex]]:
    """Unmerged binomial expansion of p(z + c)."""
    c = _as_shift(c)
    if p.dim != c.dim:
        raise DimensionMismatch(f"polynomial in {p.dim} variables shifted by {c.dim}-vector")

    def expansions(mono: Monomial):
        # per variable: (new exponent, binomial weight · c_j^(e-k))
        return [
            [(k, comb(e, k) * (c[j] ** (e - k))) for k in range(e + 1)]
            for j, e in enumerate(mono)
        ]

    contributions = []
    for mono, coef in p.terms:
        for choice in itertools.product(*expansions(mono)):
            weight = coef
            for _, w in choice:
                weight *= w
            contributions.append((tuple(k for k, _ in choice), weight))
    return contributions


def poly_shift(p: Poly, c) -> Poly:
    """q(z) = p(z + c), expanded binomially."""
    return Poly.from_contributions(p.dim, shift_contributions(p, c))


def partial_contributions(p: Poly, j: int) -> list[tuple[Monomial, complex]]:
    """Unmerged terms of ∂p/∂z_j, j is 1-based."""
    if not 1 <= j <= p.dim:
        raise IndexOutOfRange(f"∂/∂z{j} outside 1..{p.dim}")
    idx = j - 1
    contributions = []
    for mono, coef in p.terms:
        e = mono[idx]
        if e:
            new = mono[:idx] + (e - 1,) + mono[idx + 1:]
            contributions.append((new, coef * e))
    return contributions


def poly_partial(p: Poly, j: int) -> Poly:
    """Formal ∂/∂z_j, j is 1-based."""
    return Poly.from_contributions(p.dim, partial_contributions(p, j))


def poly_eval(p: Poly, point: Sequence[complex]) -> complex:
    if len(point) != p.dim:
        raise DimensionMismatch(f"point of length {len(point)} for {p.dim} variables")
    total = 0j
    for mono, coef in p.terms:
        term = coef
        for x, e in zip(point, mono):
            if e:
                term *= complex(x) ** e
        total += term
    return total


def poly_eval_batch(p: Poly, points: np.ndarray) -> np.ndarray:
    """Evaluate at every row of an (m, n) complex array."""
    points = np.asarray(points, dtype=complex)
    if points.ndim != 2 or points.shape[1] != p.dim:
        raise DimensionMismatch(f"points of shape {points.shape} for {p.dim} variables")
    out = np.zeros(points.shape[0], dtype=complex)
    for mono, coef in p.terms:
        out += coef * np.prod(points ** np.asarray(mono), axis=1)
    return out


def poly_isclose(a: Poly, b: Poly, tol: float | None = None) -> bool:
    """Coefficient-wise equality within tol·max(1, |coef|)."""
    _same_dim(a, b)
    tol = settings.ZERO_TOL if tol is None else tol
    da, db = a.as_dict(), b.as_dict()
    for mono in da.keys() | db.keys():
        x, y = da.get(mono, 0j), db.get(mono, 0j)
        if abs(x - y) > tol * max(1.0, abs(x), abs(y)):
            return False
    return True


def dot(a: Sequence[complex], c) -> complex:
    c = _as_shift(c)
    if len(a) != c.dim:
        raise DimensionMismatch(f"vector of length {len(a)} against {c.dim}-vector")
    return sum((complex(x) * y for x, y in zip(a, c.c)), 0j)


def linear_form(coeffs: Sequence[complex], constant: complex = 0) -> Poly:
    """Σ coeffs_j z_j + constant."""
    dim = len(coeffs)
    contributions = [
        (tuple(1 if i == j else 0 for i in range(dim)), complex(a))
        for j, a in enumerate(coeffs)
    ]
    contributions.append(((0,) * dim, complex(constant)))
    return Poly.from_contributions(dim, contributions)


def compose_univariate(uni_coeffs: Sequence[complex], inner: Poly) -> Poly:
    """H(inner) for H(t) = Σ uni_coeffs[k]·t^k, by Horner's rule."""
    result = Poly.zero(inner.dim)
    for a in reversed(list(uni_coeffs)):
        result = poly_add(poly_mul(result, inner), Poly.constant(inner.dim, a))
    return result
