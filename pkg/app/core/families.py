"""
Closed-form solution families of the three trinomial systems and the
parameter relations each family needs.

Notation used below: κ(ξ) = A1ξ + A2/ξ, κ'(ξ) = A2ξ + A1/ξ, and for the
two-exponential families U = L1 + Φ, V = L2 + Ψ.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Sequence

from app.config import settings
from app.core.constraints import Constraint, ConstraintKind, LinearExpr
from app.core.exppoly import ExpPoly, ep_add
from app.core.polyalg import Poly, ShiftVector, compose_univariate, dot, linear_form
from app.core.trinomial import SQRT2, SystemKind, SystemType, TrinomialConstants, make_constants
from app.utils.error_handler import InvalidCase, NotShiftInvariant, ZeroCoefficient
from app.utils.logger import get_logger

logger = get_logger(__name__)


# -- periodic parts ---------------------------------------------------------

@dataclass(frozen=True)
class PeriodicTerm:
    """H(d·z) with H(t) = Σ uni[k]·t^k."""
    form: tuple[complex, ...]
    uni: tuple[complex, ...]

    def __init__(self, form: Sequence[complex], uni: Sequence[complex]):
        object.__setattr__(self, "form", tuple(complex(x) for x in form))
        object.__setattr__(self, "uni", tuple(complex(x) for x in uni))

    @property
    def is_constant(self) -> bool:
        return all(abs(a) == 0 for a in self.uni[1:])


@dataclass(frozen=True)
class PeriodicPart:
    terms: tuple[PeriodicTerm, ...]
    realized: Poly
    violations: tuple[tuple[tuple[complex, ...], complex], ...] = ()

    @property
    def is_valid(self) -> bool:
        return not self.violations


def _dot_is_zero(form: Sequence[complex], c: ShiftVector, value: complex) -> bool:
    scale = max(1.0, sum(abs(d) * abs(x) for d, x in zip(form, c.c)))
    return abs(value) <= settings.CHECK_TOL * scale


def build_periodic(c: ShiftVector, terms: Sequence[PeriodicTerm], strict: bool = True) -> PeriodicPart:
    """Σ H(d·z) over the terms; each non-constant H needs d·c = 0.

    strict=False records offending forms instead of raising, which is how
    printed examples with d·c ≠ 0 are audited.
    """
    realized = Poly.zero(c.dim)
    violations = []
    for term in terms:
        if len(term.form) != c.dim:
            raise InvalidCase(f"linear form {term.form} has length {len(term.form)}, expected {c.dim}")
        value = dot(term.form, c)
        if not term.is_constant and not _dot_is_zero(term.form, c, value):
            if strict:
                raise NotShiftInvariant(term.form, value)
            violations.append((term.form, value))
            logger.info("periodic_violation", form=str(term.form), dot=str(value))
        realized = realized + compose_univariate(term.uni, linear_form(term.form))
    return PeriodicPart(tuple(terms), realized, tuple(violations))


# -- family parameters ----------------------------------------------------

class FamilyCase(str, Enum):
    T1_i = "T1_i"
    T1_ii = "T1_ii"
    T1_iii = "T1_iii"
    T2_i = "T2_i"
    T2_ii = "T2_ii"
    T2_iii = "T2_iii"
    T3_i = "T3_i"
    T3_ii = "T3_ii"

    @property
    def system_index(self) -> int:
        return int(self.value[1])

    @property
    def has_subcase(self) -> bool:
        return self.value.endswith(("_ii", "_iii")) and self.system_index < 3

    @property
    def system_type(self) -> SystemType:
        return {1: SystemType.DIFFERENCE, 2: SystemType.PARTIAL_DIFF, 3: SystemType.SHIFT_DIFFERENCE}[self.system_index]


SUBCASE_SIGNS = {"a": (1, 1), "b": (1, -1), "c": (-1, 1), "d": (-1, -1)}

GAMMA_ONCE = "once"
GAMMA_DOUBLE = "double"


@dataclass(frozen=True)
class FamilySpec:
    case: FamilyCase
    n: int
    c: ShiftVector
    w: complex
    subcase: str | None = None
    k: int = 1
    a: tuple[complex, ...] = ()
    b: tuple[complex, ...] = ()
    alpha: complex = 0j
    beta: complex = 0j
    gamma: complex = 0j
    eta: complex = 0j
    xi1: complex = 1 + 0j
    xi2: complex = 1 + 0j
    d: tuple[complex, complex, complex, complex] = (0j, 0j, 0j, 0j)
    phi: tuple[PeriodicTerm, ...] = ()
    psi: tuple[PeriodicTerm, ...] = ()
    gamma_reading: str = GAMMA_ONCE
    printed_sign: bool = False

    def with_d(self, index: int, value: complex) -> FamilySpec:
        """Copy with d_index (1-based) replaced."""
        d = list(self.d)
        d[index - 1] = complex(value)
        return replace(self, d=tuple(d))


@dataclass(frozen=True)
class Family:
    f: ExpPoly
    g: ExpPoly
    g1: Poly
    g2: Poly
    kind: SystemKind
    violations: tuple = field(default=())

    def __iter__(self):
        return iter((self.f, self.g, self.g1, self.g2))


def kappa(k: TrinomialConstants, xi: complex) -> complex:
    return k.A1 * xi + k.A2 / xi


def kappa_prime(k: TrinomialConstants, xi: complex) -> complex:
    return k.A2 * xi + k.A1 / xi


def _nonzero(value: complex, what: str) -> complex:
    if abs(value) <= settings.SINGULAR_TOL:
        raise ZeroCoefficient(f"{what} vanishes")
    return value


def validate_spec(spec: FamilySpec):
    case = spec.case
    if spec.c.dim != spec.n:
        raise InvalidCase(f"shift of length {spec.c.dim} for n = {spec.n}")
    if spec.c.is_zero():
        raise InvalidCase("the families need a nonzero shift c")
    if case.system_index > 1 and spec.n != 2:
        raise InvalidCase(f"{case.value} is stated in two variables, got n = {spec.n}")
    if case.has_subcase:
        if spec.subcase not in SUBCASE_SIGNS:
            raise InvalidCase(f"{case.value} needs a subcase in a-d, got {spec.subcase!r}")
    elif spec.subcase is not None:
        raise InvalidCase(f"{case.value} takes no subcase")
    if not isinstance(spec.k, int) or spec.k < 1:
        raise InvalidCase(f"order k = {spec.k!r} must be a positive integer")
    if case.system_index < 3 and len(spec.a) != spec.n:
        raise InvalidCase(f"{case.value} needs {spec.n} linear coefficients a")
    if case.has_subcase and len(spec.b) != spec.n:
        raise InvalidCase(f"{case.value} needs {spec.n} linear coefficients b")
    if case == FamilyCase.T2_i and abs(spec.a[0]) <= settings.SINGULAR_TOL:
        raise InvalidCase("a1 must be nonzero")
    if case == FamilyCase.T3_ii and spec.k % 2:
        raise InvalidCase(f"T3_ii needs an even order, got k = {spec.k}")
    if case in (FamilyCase.T1_i, FamilyCase.T2_i) and (abs(spec.xi1) == 0 or abs(spec.xi2) == 0):
        raise InvalidCase("ξ1 and ξ2 must be nonzero")
    if case.system_index > 1:
        for term in spec.phi + spec.psi:
            if abs(term.form[0]) != 0:
                raise InvalidCase(f"{case.value} periodic parts depend on z2 only, got form {term.form}")
    if spec.gamma_reading not in (GAMMA_ONCE, GAMMA_DOUBLE):
        raise InvalidCase(f"unknown γ reading {spec.gamma_reading!r}")


# -- construction ---------------------------------------------------------

def _t3_phase(spec: FamilySpec) -> Poly:
    """P = αz1 + βz2 + Φ1(z2) + γ, with γ twice under the double reading."""
    phi = build_periodic(spec.c, spec.phi, strict=False).realized
    shift = spec.gamma * (2 if spec.gamma_reading == GAMMA_DOUBLE else 1)
    return linear_form((spec.alpha, spec.beta), shift) + phi


def _exp(coef: complex, expo: Poly) -> ExpPoly:
    return ExpPoly.exp(expo, coef)


def construct(spec: FamilySpec) -> Family:
    """(f, g, g1, g2) of the chosen family, plus the system it solves."""
    validate_spec(spec)
    k = make_constants(spec.w)
    A1, A2 = k.A1, k.A2
    d1, d2, d3, d4 = spec.d
    case = spec.case
    n = spec.n
    violations: list = []

    if case.system_index < 3:
        phi_part = build_periodic(spec.c, spec.phi, strict=False)
        psi_part = build_periodic(spec.c, spec.psi, strict=False)
        violations = list(phi_part.violations) + list(psi_part.violations)
        phi, psi = phi_part.realized, psi_part.realized

    if case in (FamilyCase.T1_i, FamilyCase.T2_i):
        L = linear_form(spec.a)
        base = L + phi
        g1, g2 = base + d1, base + d2
        if case == FamilyCase.T1_i:
            cf = _nonzero(kappa(k, spec.xi1), "A1ξ1 + A2/ξ1")
            cg = _nonzero(kappa(k, spec.xi2), "A1ξ2 + A2/ξ2")
            f = _exp(cf / SQRT2, g1 * 0.5)
            g = _exp(cg / SQRT2, g2 * 0.5)
        else:
            Lc = dot(spec.a, spec.c)
            cf = _nonzero(kappa_prime(k, spec.xi2), "A2ξ2 + A1/ξ2")
            cg = _nonzero(kappa_prime(k, spec.xi1), "A2ξ1 + A1/ξ1")
            f = _exp(cf / SQRT2, (base - Lc + d2) * 0.5)
            g = _exp(cg / SQRT2, (base - Lc + d1) * 0.5)

    elif case.has_subcase:
        U = linear_form(spec.a) + phi
        V = linear_form(spec.b) + psi
        if (U - V).without_constant().is_zero:
            raise InvalidCase("L1 + Φ and L2 + Ψ must differ by a non-constant polynomial")
        g1 = U + V + (d1 + d3)
        g2 = U + V + (d2 + d4)
        if case == FamilyCase.T1_ii:
            f = ep_add(_exp(A1 / SQRT2, U + d1), _exp(A2 / SQRT2, V + d3))
            g = ep_add(_exp(A1 / SQRT2, V + d4), _exp(A2 / SQRT2, U + d2))
        elif case == FamilyCase.T1_iii:
            f = ep_add(_exp(A1 / SQRT2, U + d1), _exp(A2 / SQRT2, V + d3))
            g = ep_add(_exp(A1 / SQRT2, U + d2), _exp(A2 / SQRT2, V + d4))
        else:
            L1c, L2c = dot(spec.a, spec.c), dot(spec.b, spec.c)
            g = ep_add(_exp(A2 / SQRT2, U - L1c + d1), _exp(A1 / SQRT2, V - L2c + d3))
            if case == FamilyCase.T2_ii:
                f = ep_add(_exp(A2 / SQRT2, V - L2c + d4), _exp(A1 / SQRT2, U - L1c + d2))
            else:
                f = ep_add(_exp(A2 / SQRT2, U - L1c + d2), _exp(A1 / SQRT2, V - L2c + d4))

    else:
        alpha_k = spec.alpha ** spec.k
        if abs(alpha_k) < settings.SINGULAR_TOL:
            raise ZeroCoefficient(f"αᵏ = {alpha_k} vanishes")
        phi_part = build_periodic(spec.c, spec.phi, strict=False)
        violations = list(phi_part.violations)
        P = _t3_phase(spec)
        scale = 1 / (SQRT2 * alpha_k)
        eta = spec.eta
        if case == FamilyCase.T3_i:
            sign = 1 if spec.printed_sign else (-1) ** spec.k
            f = ep_add(_exp(A1 * scale, P), _exp(sign * A2 * scale, -P))
            g = ep_add(_exp(A1 * scale, P + eta), _exp(sign * A2 * scale, -(P + eta)))
        else:
            f = ep_add(_exp(A1 * scale, P), _exp(A2 * scale, -P))
            g = ep_add(_exp(A1 * scale, -P + eta), _exp(A2 * scale, P - eta))
        g1 = g2 = Poly.zero(n)

    kind = SystemKind(case.system_type, n, spec.c, g1, g2, spec.k)
    logger.debug("family_constructed", case=case.value, subcase=spec.subcase, f_terms=len(f.terms), g_terms=len(g.terms))
    return Family(f, g, g1, g2, kind, tuple(violations))


# -- relations ------------------------------------------------------------

def spec_bindings(spec: FamilySpec) -> dict[str, complex]:
    """Numeric values of the symbols the constraint sets refer to."""
    d1, d2, d3, d4 = spec.d
    bindings: dict[str, complex] = {"d1": d1, "d2": d2, "d3": d3, "d4": d4}
    if spec.case.system_index < 3:
        if spec.case.has_subcase:
            bindings["L1(c)"] = dot(spec.a, spec.c)
            bindings["L2(c)"] = dot(spec.b, spec.c)
        else:
            bindings["L(c)"] = dot(spec.a, spec.c)
    else:
        Lc = spec.alpha * spec.c[0] + spec.beta * spec.c[1]
        if spec.gamma_reading == GAMMA_DOUBLE:
            Lc += spec.gamma
        bindings["L(c)"] = Lc
        bindings["eta"] = spec.eta
        bindings["alpha^k"] = spec.alpha ** spec.k
    return bindings


def _exp_c(expr: dict, target: complex, label: str) -> Constraint:
    return Constraint(LinearExpr.of(expr), target, label)


def constraint_set(spec: FamilySpec) -> list[Constraint]:
    """Relations of the chosen family with subcase signs already paired."""
    validate_spec(spec)
    k = make_constants(spec.w)
    A1, A2 = k.A1, k.A2
    case = spec.case

    if case in (FamilyCase.T1_i, FamilyCase.T2_i):
        kf1, kf2 = kappa(k, spec.xi1), kappa(k, spec.xi2)
        kp1, kp2 = kappa_prime(k, spec.xi1), kappa_prime(k, spec.xi2)
        _nonzero(kf1, "A1ξ1 + A2/ξ1")
        _nonzero(kf2, "A1ξ2 + A2/ξ2")
        weight = (spec.a[0] / 2) ** spec.k if case == FamilyCase.T2_i else 1
        out = [
            _exp_c({"L(c)": 1}, weight ** 2 * kp1 * kp2 / (kf1 * kf2), "exp(L(c))"),
        ]
        if case == FamilyCase.T1_i:
            out.append(_exp_c({"d1": 1, "d2": -1}, kp2 * kf2 / (kf1 * kp1), "exp(d1 - d2)"))
        # the full relations fix (L(c), d1 - d2) only up to sign
        out.append(_exp_c({"L(c)": 0.5, "d1": 0.5, "d2": -0.5}, weight * kp2 / kf1, "exp((L(c) + d1 - d2)/2)"))
        return out

    if case.has_subcase:
        s1, s2 = SUBCASE_SIGNS[spec.subcase]
        if case == FamilyCase.T1_ii:
            t1, t2 = 1, 1
        elif case == FamilyCase.T1_iii:
            t1, t2 = A2 / A1, A1 / A2
        elif case == FamilyCase.T2_ii:
            t1, t2 = spec.a[0] ** spec.k, spec.b[0] ** spec.k
        else:
            t1, t2 = A2 * spec.a[0] ** spec.k / A1, A1 * spec.b[0] ** spec.k / A2
        return [
            _exp_c({"L1(c)": 1}, s1 * t1, "exp(L1(c))"),
            _exp_c({"L2(c)": 1}, s2 * t2, "exp(L2(c))"),
            _exp_c({"d1": 1, "d2": -1}, s1, "exp(d1 - d2)"),
            _exp_c({"d3": 1, "d4": -1}, s2, "exp(d3 - d4)"),
        ]

    alpha_k = spec.alpha ** spec.k
    e_eta = cmath.exp(spec.eta)
    if case == FamilyCase.T3_i:
        sign = (-1) ** spec.k
        target_L = A2 * e_eta / (sign * A1 * alpha_k + A2 * e_eta)
        target_alpha = -(sign * A1 ** 2 + A2 ** 2) / (sign * A1 * A2 * e_eta)
    else:
        target_L = 1 + alpha_k / e_eta
        target_alpha = -2 * e_eta
    return [
        _exp_c({"L(c)": 1}, target_L, "exp(L(c))"),
        _exp_c({"eta": 2}, 1, "exp(2*eta)"),
        Constraint(LinearExpr.of({"alpha^k": 1}), target_alpha, "alpha^k", ConstraintKind.VALUE),
    ]


def periodic_violations(spec: FamilySpec) -> list[tuple[tuple[complex, ...], complex]]:
    out = []
    for terms in (spec.phi, spec.psi):
        out.extend(build_periodic(spec.c, terms, strict=False).violations)
    return out


def negate_relation(spec: FamilySpec) -> FamilySpec:
    """Flip exactly one sign relation of a consistent spec.

    i cases: d1 += 2πi flips the half relation; ii/iii: d4 += πi flips
    e^{d3−d4}; T3 cases: η += πi flips e^η.
    """
    if spec.case in (FamilyCase.T1_i, FamilyCase.T2_i):
        return spec.with_d(1, spec.d[0] + 2j * math.pi)
    if spec.case.has_subcase:
        return spec.with_d(4, spec.d[3] + 1j * math.pi)
    return replace(spec, eta=spec.eta + 1j * math.pi)
