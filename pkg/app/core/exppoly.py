"""
Exponential polynomials Σ c_j(z)·exp(P_j(z)).

Canonical form: exponent polynomials carry no constant term (the constant
is folded into the coefficient), no two terms share an exponent, and no
coefficient is zero. Distinct-exponent terms with polynomial coefficients
are linearly independent over the polynomials (Borel-type lemma), so an
ExpPoly is identically zero iff its canonical term list is empty.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from app.config import settings
from app.core.polyalg import (
    Monomial,
    Poly,
    poly_add,
    poly_eval,
    poly_eval_batch,
    poly_isclose,
    poly_partial,
    poly_shift,
    partial_contributions,
    shift_contributions,
)
from app.utils.error_handler import DimensionMismatch, EvaluationOverflow, IndexOutOfRange, InvalidOrder
from app.utils.logger import get_logger

logger = get_logger(__name__)


@dataclass(frozen=True)
class ExpTerm:
    """coeff(z) · e^{log_scale} · exp(expo(z)); log_scale is real and nonzero only
    when a folded constant would overflow a double."""
    coeff: Poly
    expo: Poly
    log_scale: float = 0.0

    @property
    def dim(self) -> int:
        return self.coeff.dim


# raw term: unnormalized coefficient contributions, exponent, real log scale
RawTerm = tuple[list[tuple[Monomial, complex]], Poly, float]


def _expo_key(expo: Poly):
    return (expo.degree, tuple((m, round(c.real, 9), round(c.imag, 9)) for m, c in expo.terms))


def _raw(term: ExpTerm, scale: complex = 1) -> RawTerm:
    return ([(m, c * scale) for m, c in term.coeff.terms], term.expo, term.log_scale)


def ep_sum(dim: int, raw_terms: Iterable[RawTerm]) -> ExpPoly:
    """Canonicalize a raw term list in a single pass.

    Exponent constants are folded into the coefficients, terms whose
    exponents agree within tolerance are merged, and each merged
    coefficient is normalized against max(1, its largest contribution).
    """
    groups: list[tuple[Poly, list[tuple[list, float]]]] = []
    for contributions, expo, log_scale in raw_terms:
        if expo.dim != dim:
            raise DimensionMismatch(f"exponent in {expo.dim} variables, expected {dim}")
        kappa = expo.constant_term
        bare = expo.without_constant()
        phase = cmath.exp(1j * kappa.imag)
        entry = ([(m, c * phase) for m, c in contributions], log_scale + kappa.real)
        for rep, members in groups:
            if poly_isclose(rep, bare):
                members.append(entry)
                break
        else:
            groups.append((bare, [entry]))

    limit = settings.EXP_OVERFLOW_LIMIT
    terms = []
    for expo, members in groups:
        top = max(ls for _, ls in members)
        base = top if abs(top) > limit else 0.0
        merged = []
        for contributions, ls in members:
            factor = math.exp(ls - base)
            if factor == 0.0:
                continue
            merged.extend((m, c * factor) for m, c in contributions)
        # magnitude 1 measured in units of e^{base}
        floor = math.exp(min(-base, limit))
        coeff = Poly.from_contributions(dim, merged, floor=floor)
        if not coeff.is_zero:
            if base:
                logger.debug("log_scale_kept", log_scale=base)
            terms.append(ExpTerm(coeff, expo, base))
    terms.sort(key=lambda t: _expo_key(t.expo))
    return ExpPoly(dim, tuple(terms))


def ep_canonicalize(dim: int, terms: Iterable[ExpTerm | tuple[Poly, Poly]]) -> ExpPoly:
    raw = []
    for t in terms:
        if not isinstance(t, ExpTerm):
            t = ExpTerm(*t)
        if t.coeff.dim != dim:
            raise DimensionMismatch(f"coefficient in {t.coeff.dim} variables, expected {dim}")
        raw.append(_raw(t))
    return ep_sum(dim, raw)


@dataclass(frozen=True)
class ExpPoly:
    dim: int
    terms: tuple[ExpTerm, ...] = ()

    @classmethod
    def zero(cls, dim: int) -> ExpPoly:
        return cls(dim, ())

    @classmethod
    def constant(cls, dim: int, value: complex) -> ExpPoly:
        return ep_canonicalize(dim, [(Poly.constant(dim, value), Poly.zero(dim))])

    @classmethod
    def from_poly(cls, p: Poly) -> ExpPoly:
        return ep_canonicalize(p.dim, [(p, Poly.zero(p.dim))])

    @classmethod
    def exp(cls, expo: Poly, coeff: complex | Poly = 1) -> ExpPoly:
        """coeff · exp(expo)"""
        if not isinstance(coeff, Poly):
            coeff = Poly.constant(expo.dim, coeff)
        return ep_canonicalize(expo.dim, [(coeff, expo)])

    @property
    def is_zero(self) -> bool:
        return ep_is_zero(self)

    @property
    def is_transcendental(self) -> bool:
        return any(not t.expo.is_zero for t in self.terms)

    @property
    def exponent_degree(self) -> int:
        """Largest exponent degree, i.e. the order of growth of the function."""
        return max((t.expo.degree for t in self.terms), default=0)

    def __add__(self, other):
        if not isinstance(other, ExpPoly):
            other = ExpPoly.constant(self.dim, other)
        return ep_add(self, other)

    __radd__ = __add__

    def __neg__(self):
        return ep_scale(self, -1)

    def __sub__(self, other):
        if not isinstance(other, ExpPoly):
            other = ExpPoly.constant(self.dim, other)
        return ep_add(self, -other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, ExpPoly):
            return ep_mul(self, other)
        return ep_scale(self, other)

    __rmul__ = __mul__

    def __truediv__(self, scalar: complex):
        return ep_scale(self, 1 / complex(scalar))


def _same_dim(a: ExpPoly, b: ExpPoly):
    if a.dim != b.dim:
        raise DimensionMismatch(f"exponential polynomials in {a.dim} and {b.dim} variables")


def terms_of(e: ExpPoly, scale: complex = 1) -> list[RawTerm]:
    return [_raw(t, scale) for t in e.terms]


def product_terms(a: ExpPoly, b: ExpPoly, scale: complex = 1) -> list[RawTerm]:
    """Raw terms of scale·a·b, left for ep_sum to merge."""
    _same_dim(a, b)
    out = []
    for ta in a.terms:
        for tb in b.terms:
            contributions = [
                (tuple(x + y for x, y in zip(ma, mb)), scale * ca * cb)
                for ma, ca in ta.coeff.terms
                for mb, cb in tb.coeff.terms
            ]
            out.append((contributions, poly_add(ta.expo, tb.expo), ta.log_scale + tb.log_scale))
    return out


def ep_add(a: ExpPoly, b: ExpPoly) -> ExpPoly:
    _same_dim(a, b)
    return ep_sum(a.dim, terms_of(a) + terms_of(b))


def ep_scale(e: ExpPoly, s: complex) -> ExpPoly:
    return ep_sum(e.dim, terms_of(e, complex(s)))


def ep_mul(a: ExpPoly, b: ExpPoly) -> ExpPoly:
    return ep_sum(a.dim, product_terms(a, b))


def ep_shift(e: ExpPoly, c) -> ExpPoly:
    """E(z + c); exponent constants produced by the shift are re-folded."""
    if len(c) != e.dim:
        raise DimensionMismatch(f"shift of length {len(c)} for {e.dim} variables")
    raw = [
        (shift_contributions(t.coeff, c), poly_shift(t.expo, c), t.log_scale)
        for t in e.terms
    ]
    return ep_sum(e.dim, raw)


def ep_partial_k(e: ExpPoly, j: int, k: int) -> ExpPoly:
    """k-fold ∂/∂z_j; each round maps c·e^P to (∂c + c·∂P)·e^P."""
    if not 1 <= j <= e.dim:
        raise IndexOutOfRange(f"∂/∂z{j} outside 1..{e.dim}")
    if not isinstance(k, int) or isinstance(k, bool) or k < 1:
        raise InvalidOrder(f"derivative order {k!r} must be a positive integer")
    result = e
    for _ in range(k):
        raw = []
        for t in result.terms:
            contributions = partial_contributions(t.coeff, j)
            d_expo = poly_partial(t.expo, j)
            contributions.extend(
                (tuple(x + y for x, y in zip(mc, me)), cc * ce)
                for mc, cc in t.coeff.terms
                for me, ce in d_expo.terms
            )
            raw.append((contributions, t.expo, t.log_scale))
        result = ep_sum(e.dim, raw)
    return result


def ep_eval(e: ExpPoly, point: Sequence[complex]) -> complex:
    if len(point) != e.dim:
        raise DimensionMismatch(f"point of length {len(point)} for {e.dim} variables")
    total = 0j
    for t in e.terms:
        p = poly_eval(t.expo, point) + t.log_scale
        if p.real > settings.EXP_OVERFLOW_LIMIT:
            raise EvaluationOverflow(f"exponent real part {p.real:.1f} exceeds {settings.EXP_OVERFLOW_LIMIT}")
        total += poly_eval(t.coeff, point) * cmath.exp(p)
    return total


def ep_eval_batch(e: ExpPoly, points: np.ndarray) -> np.ndarray:
    points = np.asarray(points, dtype=complex)
    if points.ndim != 2 or points.shape[1] != e.dim:
        raise DimensionMismatch(f"points of shape {points.shape} for {e.dim} variables")
    out = np.zeros(points.shape[0], dtype=complex)
    for t in e.terms:
        p = poly_eval_batch(t.expo, points) + t.log_scale
        if np.any(p.real > settings.EXP_OVERFLOW_LIMIT):
            raise EvaluationOverflow(f"exponent real part {p.real.max():.1f} exceeds {settings.EXP_OVERFLOW_LIMIT}")
        out += poly_eval_batch(t.coeff, points) * np.exp(p)
    return out


def ep_is_zero(e: ExpPoly) -> bool:
    # Canonical merging leaves pairwise non-constant exponent differences,
    # so the Borel-type lemma makes the empty list the only zero.
    return not e.terms


def ep_isclose(a: ExpPoly, b: ExpPoly) -> bool:
    return ep_is_zero(ep_add(a, -b))
