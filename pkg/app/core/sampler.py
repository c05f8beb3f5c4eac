"""
Seeded generation of constraint-consistent family parameters.

Free parameters are drawn at random, every relation is then solved with
solve_exp on a random logarithm branch in [-BRANCH_RANGE, BRANCH_RANGE]
and the remaining linear coefficient (or shift entry) is solved for.
"""
from __future__ import annotations

import cmath
import math

import numpy as np

from app.config import settings
from app.core.constraints import solve_exp, solve_linear_for_last
from app.core.families import (
    SUBCASE_SIGNS,
    FamilyCase,
    FamilySpec,
    PeriodicTerm,
    kappa,
    kappa_prime,
)
from app.core.polyalg import ShiftVector
from app.core.trinomial import make_constants

ALL_CASES: list[tuple[FamilyCase, str | None]] = [
    (case, sub)
    for case in FamilyCase
    for sub in (("a", "b", "c", "d") if case.has_subcase else (None,))
]

_MIN_GAP = 1e-3


class _Draw:
    def __init__(self, seed: int):
        self.rng = np.random.default_rng(seed)

    def complex(self, lo: float = 0.5, hi: float = 1.5) -> complex:
        r = self.rng.uniform(lo, hi)
        theta = self.rng.uniform(-math.pi, math.pi)
        return complex(cmath.rect(r, theta))

    def branch(self) -> int:
        return int(self.rng.integers(-settings.BRANCH_RANGE, settings.BRANCH_RANGE + 1))

    def w(self) -> complex:
        while True:
            w = self.complex(0.2, 3.0)
            if abs(w * w - 1) > 0.1:
                return w

    def shift(self, n: int) -> ShiftVector:
        return ShiftVector(self.complex() for _ in range(n))

    def solve(self, target: complex) -> complex:
        return solve_exp(target, self.branch()).value

    def periodic(self, c: ShiftVector, count: int) -> tuple[PeriodicTerm, ...]:
        """Random H(d·z) with d·c = 0, small coefficients so numeric sampling stays bounded."""
        terms = []
        for _ in range(count):
            head = [self.complex(0.3, 1.0) for _ in range(c.dim - 1)]
            form = head + [solve_linear_for_last(head, c, 0)]
            degree = int(self.rng.integers(1, 4))
            uni = [0j] + [self.complex(0.05, 0.3) for _ in range(degree)]
            terms.append(PeriodicTerm(form, uni))
        return tuple(terms)

    def z2_part(self, c2_zero: bool) -> tuple[PeriodicTerm, ...]:
        """χ(z2): any polynomial when c2 = 0, otherwise a constant."""
        if c2_zero:
            degree = int(self.rng.integers(1, 4))
            uni = [self.complex(0.1, 0.5)] + [self.complex(0.05, 0.3) for _ in range(degree)]
        else:
            uni = [self.complex(0.1, 0.5)]
        return (PeriodicTerm((0, 1), uni),)


def _t1_i_spec(draw: _Draw, case: FamilyCase) -> FamilySpec:
    two_var = case == FamilyCase.T2_i
    while True:
        w = draw.w()
        k = make_constants(w)
        xi1, xi2 = draw.complex(), draw.complex()
        kf1, kf2, kp1, kp2 = kappa(k, xi1), kappa(k, xi2), kappa_prime(k, xi1), kappa_prime(k, xi2)
        if min(abs(kf1), abs(kf2), abs(kp1), abs(kp2)) > _MIN_GAP:
            break
    n = 2 if two_var else int(draw.rng.integers(2, 4))
    order = int(draw.rng.integers(1, 4)) if two_var else 1
    c = draw.shift(n)
    a_head = [draw.complex() for _ in range(n - 1)]
    weight = (a_head[0] / 2) ** order if two_var else 1

    Lc = draw.solve(weight ** 2 * kp1 * kp2 / (kf1 * kf2))
    half = draw.solve(weight * kp2 / kf1)
    d2 = draw.complex()
    d1 = d2 + 2 * half - Lc

    c2_zero = two_var and draw.rng.random() < 0.3
    if c2_zero:
        c = ShiftVector((Lc / a_head[0], 0))
        a = (a_head[0], draw.complex())
    else:
        a = tuple(a_head) + (solve_linear_for_last(a_head, c, Lc),)
    phi = draw.z2_part(c2_zero) if two_var else draw.periodic(c, int(draw.rng.integers(1, 3)))
    return FamilySpec(
        case=case, n=n, c=c, w=w, k=order, a=a, xi1=xi1, xi2=xi2,
        d=(d1, d2, 0j, 0j), phi=phi,
    )


def _two_exp_spec(draw: _Draw, case: FamilyCase, subcase: str) -> FamilySpec:
    s1, s2 = SUBCASE_SIGNS[subcase]
    w = draw.w()
    k = make_constants(w)
    two_var = case.system_index == 2
    n = 2 if two_var else int(draw.rng.integers(2, 4))
    order = int(draw.rng.integers(1, 4)) if two_var else 1
    c = draw.shift(n)
    a_head = [draw.complex() for _ in range(n - 1)]
    b_head = [draw.complex() for _ in range(n - 1)]

    if case == FamilyCase.T1_ii:
        t1, t2 = 1, 1
    elif case == FamilyCase.T1_iii:
        t1, t2 = k.A2 / k.A1, k.A1 / k.A2
    elif case == FamilyCase.T2_ii:
        t1, t2 = a_head[0] ** order, b_head[0] ** order
    else:
        t1, t2 = k.A2 * a_head[0] ** order / k.A1, k.A1 * b_head[0] ** order / k.A2

    a = tuple(a_head) + (solve_linear_for_last(a_head, c, draw.solve(s1 * t1)),)
    b = tuple(b_head) + (solve_linear_for_last(b_head, c, draw.solve(s2 * t2)),)
    d2, d4 = draw.complex(), draw.complex()
    d1 = d2 + draw.solve(s1)
    d3 = d4 + draw.solve(s2)
    if two_var:
        phi, psi = draw.z2_part(False), draw.z2_part(False)
    else:
        phi = draw.periodic(c, int(draw.rng.integers(0, 3)))
        psi = draw.periodic(c, int(draw.rng.integers(0, 3)))
    return FamilySpec(
        case=case, subcase=subcase, n=n, c=c, w=w, k=order, a=a, b=b,
        d=(d1, d2, d3, d4), phi=phi, psi=psi,
    )


def _t3_spec(draw: _Draw, case: FamilyCase) -> FamilySpec:
    w = draw.w()
    k = make_constants(w)
    A1, A2 = k.A1, k.A2
    if case == FamilyCase.T3_ii:
        order = 2 * int(draw.rng.integers(1, 3))
    else:
        order = int(draw.rng.integers(1, 4))
    eta = 1j * math.pi * draw.branch()
    e_eta = cmath.exp(eta)
    sign = (-1) ** order
    if case == FamilyCase.T3_i:
        alpha_k = -(sign * A1 ** 2 + A2 ** 2) / (sign * A1 * A2 * e_eta)
        target = A2 * e_eta / (sign * A1 * alpha_k + A2 * e_eta)
    else:
        alpha_k = -2 * e_eta
        target = 1 + alpha_k / e_eta
    # any k-th root of αᵏ will do
    root = int(draw.rng.integers(0, order))
    alpha = cmath.exp((cmath.log(alpha_k) + 2j * math.pi * root) / order)
    Lc = draw.solve(target)

    c2_zero = draw.rng.random() < 0.3
    if c2_zero:
        c = ShiftVector((Lc / alpha, 0))
        beta = draw.complex()
    else:
        c = draw.shift(2)
        beta = (Lc - alpha * c[0]) / c[1]
    return FamilySpec(
        case=case, n=2, c=c, w=w, k=order, alpha=alpha, beta=beta,
        gamma=draw.complex(0.1, 1.0), eta=eta, phi=draw.z2_part(c2_zero),
    )


def sample_spec(case: FamilyCase | str, subcase: str | None = None, seed: int = 0) -> FamilySpec:
    """A FamilySpec whose constraint set passes by construction."""
    case = FamilyCase(case)
    draw = _Draw(seed)
    if case in (FamilyCase.T1_i, FamilyCase.T2_i):
        return _t1_i_spec(draw, case)
    if case.has_subcase:
        return _two_exp_spec(draw, case, subcase or "a")
    return _t3_spec(draw, case)
