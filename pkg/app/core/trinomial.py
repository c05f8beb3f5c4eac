"""
The trinomial form Q_w(x, y) = x² + 2wxy + y², its constants A1/A2 and
residual builders for the three systems:

    DIFFERENCE        Q_w(f, g(z+c)) = e^{g1},            Q_w(g, f(z+c)) = e^{g2}
    PARTIAL_DIFF      Q_w(∂ᵏf, g(z+c)) = e^{g1},          Q_w(∂ᵏg, f(z+c)) = e^{g2}
    SHIFT_DIFFERENCE  Q_w(∂ᵏf, g(z+c) − g(z)) = 1,        Q_w(∂ᵏg, f(z+c) − f(z)) = 1

∂ᵏ is the k-th partial derivative in z1.
"""
from __future__ import annotations

import cmath
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

from app.config import settings
from app.core.exppoly import ExpPoly, ep_partial_k, ep_shift, ep_sum, product_terms, terms_of
from app.core.polyalg import Poly, ShiftVector
from app.utils.error_handler import DegenerateW, DimensionMismatch, InvalidCase, InvalidOrder
from app.utils.logger import get_logger

logger = get_logger(__name__)

SQRT2 = cmath.sqrt(2)


@dataclass(frozen=True)
class TrinomialConstants:
    w: complex
    A1: complex
    A2: complex
    sqrt1pw: complex
    sqrt1mw: complex


@lru_cache(maxsize=256)
def _constants(w: complex) -> TrinomialConstants:
    sqrt1pw = cmath.sqrt(1 + w)
    sqrt1mw = cmath.sqrt(1 - w)
    A1 = 1 / (2 * sqrt1pw) + 1 / (2j * sqrt1mw)
    A2 = 1 / (2 * sqrt1pw) - 1 / (2j * sqrt1mw)
    return TrinomialConstants(w, A1, A2, sqrt1pw, sqrt1mw)


def make_constants(w: complex) -> TrinomialConstants:
    """A1, A2 on the principal square-root branch; rejects w² ∈ {0, 1}."""
    w = complex(w)
    tol = settings.SINGULAR_TOL
    if not cmath.isfinite(w) or abs(w) <= tol or abs(w * w - 1) <= tol:
        raise DegenerateW(f"w = {w} violates w² ∉ {{0, 1}}", w=str(w))
    return _constants(w)


class SystemType(str, Enum):
    DIFFERENCE = "difference"
    PARTIAL_DIFF = "partial_diff_difference"
    SHIFT_DIFFERENCE = "shift_difference"


@dataclass(frozen=True)
class SystemKind:
    type: SystemType
    n: int
    c: ShiftVector
    g1: Poly | None = None
    g2: Poly | None = None
    k: int = 1

    def __post_init__(self):
        if self.n < 1 or self.c.dim != self.n:
            raise DimensionMismatch(f"shift of length {self.c.dim} in dimension {self.n}")
        if not isinstance(self.k, int) or self.k < 1:
            raise InvalidOrder(f"order k = {self.k!r} must be a positive integer")
        if self.type != SystemType.DIFFERENCE and self.n != 2:
            raise InvalidCase(f"{self.type.value} system is stated in two variables, got n = {self.n}")
        if self.type == SystemType.SHIFT_DIFFERENCE:
            object.__setattr__(self, "g1", Poly.zero(self.n))
            object.__setattr__(self, "g2", Poly.zero(self.n))
        for name in ("g1", "g2"):
            value = getattr(self, name)
            if value is None:
                object.__setattr__(self, name, Poly.zero(self.n))
            elif value.dim != self.n:
                raise DimensionMismatch(f"{name} in {value.dim} variables, expected {self.n}")


def _q_raw(x: ExpPoly, y: ExpPoly, w: complex):
    return product_terms(x, x) + product_terms(x, y, 2 * w) + product_terms(y, y)


def q_form(x: ExpPoly, y: ExpPoly, w: complex) -> ExpPoly:
    if x.dim != y.dim:
        raise DimensionMismatch(f"Q_w of arguments in {x.dim} and {y.dim} variables")
    return ep_sum(x.dim, _q_raw(x, y, complex(w)))


def uv_transform(f: ExpPoly, gshift: ExpPoly) -> tuple[ExpPoly, ExpPoly]:
    """u = (f + gshift)/√2, v = (f − gshift)/√2, so Q_w(f, gshift) = (1+w)u² + (1−w)v²."""
    if f.dim != gshift.dim:
        raise DimensionMismatch(f"u–v transform of arguments in {f.dim} and {gshift.dim} variables")
    u = ep_sum(f.dim, terms_of(f, 1 / SQRT2) + terms_of(gshift, 1 / SQRT2))
    v = ep_sum(f.dim, terms_of(f, 1 / SQRT2) + terms_of(gshift, -1 / SQRT2))
    return u, v


def exp_factorization(x: ExpPoly, y: ExpPoly, w: complex) -> dict:
    """Split Q_w(x, y) = X·Y with x = (A1X + A2Y)/√2, y = (A2X + A1Y)/√2.

    When X and Y are single exponentials their exponents are returned as
    gamma1, gamma2 (the constant of each exponent recovered from its
    coefficient), otherwise those entries are None.
    """
    if x.dim != y.dim:
        raise DimensionMismatch(f"factorization of arguments in {x.dim} and {y.dim} variables")
    k = make_constants(w)
    denom = k.A1 ** 2 - k.A2 ** 2
    X = ep_sum(x.dim, terms_of(x, SQRT2 * k.A1 / denom) + terms_of(y, -SQRT2 * k.A2 / denom))
    Y = ep_sum(x.dim, terms_of(y, SQRT2 * k.A1 / denom) + terms_of(x, -SQRT2 * k.A2 / denom))
    return {"X": X, "Y": Y, "gamma1": _single_exponent(X), "gamma2": _single_exponent(Y)}


def _single_exponent(e: ExpPoly) -> Poly | None:
    if len(e.terms) != 1 or not e.terms[0].coeff.is_constant:
        return None
    t = e.terms[0]
    return t.expo + (cmath.log(t.coeff.constant_term) + t.log_scale)


def _apply_d(kind: SystemKind, e: ExpPoly) -> ExpPoly:
    if kind.type == SystemType.DIFFERENCE:
        return e
    return ep_partial_k(e, 1, kind.k)


def _apply_s(kind: SystemKind, e: ExpPoly) -> ExpPoly:
    shifted = ep_shift(e, kind.c)
    if kind.type == SystemType.SHIFT_DIFFERENCE:
        return ep_sum(e.dim, terms_of(shifted) + terms_of(e, -1))
    return shifted


def residuals(kind: SystemKind, f: ExpPoly, g: ExpPoly, w: complex) -> tuple[ExpPoly, ExpPoly]:
    """r1 = Q_w(D f, S g) − e^{g1}, r2 = Q_w(D g, S f) − e^{g2}, each merged in one pass."""
    if f.dim != kind.n or g.dim != kind.n:
        raise DimensionMismatch(f"pair in {f.dim}/{g.dim} variables for an n = {kind.n} system")
    w = complex(w)
    out = []
    for first, second, rhs in ((f, g, kind.g1), (g, f, kind.g2)):
        x, y = _apply_d(kind, first), _apply_s(kind, second)
        raw = _q_raw(x, y, w) + terms_of(ExpPoly.exp(rhs), -1)
        out.append(ep_sum(kind.n, raw))
    logger.debug("residuals_built", system=kind.type.value, r1_terms=len(out[0].terms), r2_terms=len(out[1].terms))
    return out[0], out[1]


def system_sides(kind: SystemKind, f: ExpPoly, g: ExpPoly) -> list[tuple[ExpPoly, ExpPoly, ExpPoly]]:
    """(x, y, right side) for both equations, used by the numeric oracle."""
    return [
        (_apply_d(kind, f), _apply_s(kind, g), ExpPoly.exp(kind.g1)),
        (_apply_d(kind, g), _apply_s(kind, f), ExpPoly.exp(kind.g2)),
    ]
