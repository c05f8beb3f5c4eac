"""
Transcendental relations e^{X} = v over named parameters, plus the few
plain-value relations (αᵏ = v) the shift-difference families need.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Mapping, Sequence

from app.config import settings
from app.core.polyalg import ShiftVector
from app.utils.error_handler import DimensionMismatch, SingularSolve, UnboundSymbol, ZeroTarget


@dataclass(frozen=True)
class LinearExpr:
    """Σ coef·symbol + constant."""
    coeffs: tuple[tuple[str, complex], ...]
    constant: complex = 0j

    @classmethod
    def of(cls, mapping: Mapping[str, complex], constant: complex = 0j) -> LinearExpr:
        return cls(tuple((name, complex(v)) for name, v in mapping.items()), complex(constant))

    def evaluate(self, bindings: Mapping[str, complex]) -> complex:
        total = complex(self.constant)
        for name, coef in self.coeffs:
            if name not in bindings:
                raise UnboundSymbol(name)
            total += coef * complex(bindings[name])
        return total

    @property
    def symbols(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.coeffs)

    def __str__(self) -> str:
        parts = []
        for name, coef in self.coeffs:
            if coef == 1:
                parts.append(name)
            elif coef == -1:
                parts.append(f"-{name}")
            elif coef.imag == 0:
                parts.append(f"{coef.real:g}*{name}")
            else:
                parts.append(f"{coef}*{name}")
        if self.constant:
            parts.append(f"{self.constant}")
        return " + ".join(parts).replace("+ -", "- ") or "0"


class ConstraintKind(str, Enum):
    EXP = "exp"      # exp(lhs) == target
    VALUE = "value"  # lhs == target


@dataclass(frozen=True)
class Constraint:
    lhs: LinearExpr
    target: complex
    label: str
    kind: ConstraintKind = ConstraintKind.EXP

    def __post_init__(self):
        target = complex(self.target)
        if not cmath.isfinite(target):
            raise ZeroTarget(f"{self.label}: target {target} is not finite")
        if self.kind == ConstraintKind.EXP and abs(target) == 0.0:
            raise ZeroTarget(f"{self.label}: exp(...) can never equal 0")
        object.__setattr__(self, "target", target)


@dataclass(frozen=True)
class CheckResult:
    label: str
    passed: bool
    deviation: float
    value: complex = 0j
    target: complex = 0j


def check(cst: Constraint, bindings: Mapping[str, complex], tol: float | None = None) -> CheckResult:
    """Relative deviation |lhs − target| / max(1, |target|), lhs = exp(expr) for EXP relations."""
    tol = settings.CHECK_TOL if tol is None else tol
    x = cst.lhs.evaluate(bindings)
    if cst.kind == ConstraintKind.EXP:
        if x.real > settings.EXP_OVERFLOW_LIMIT:
            return CheckResult(cst.label, False, math.inf, x, cst.target)
        value = cmath.exp(x)
    else:
        value = x
    deviation = abs(value - cst.target) / max(1.0, abs(cst.target))
    return CheckResult(cst.label, deviation <= tol, deviation, value, cst.target)


def check_all(constraints: Sequence[Constraint], bindings: Mapping[str, complex], tol: float | None = None) -> list[CheckResult]:
    return [check(c, bindings, tol) for c in constraints]


@dataclass(frozen=True)
class BranchSolution:
    value: complex
    branch: int = field(default=0)


def solve_exp(target: complex, branch: int = 0) -> BranchSolution:
    """x with e^x = target: principal log plus 2πi·branch."""
    target = complex(target)
    if abs(target) == 0.0 or not cmath.isfinite(target):
        raise ZeroTarget(f"e^x = {target} has no solution")
    return BranchSolution(cmath.log(target) + 2j * math.pi * branch, branch)


def solve_linear_for_last(coeffs: Sequence[complex], c, rhs: complex) -> complex:
    """Last coefficient a_n with Σ a_j c_j = rhs, the other a_j given."""
    c = c if isinstance(c, ShiftVector) else ShiftVector(c)
    if len(coeffs) != c.dim - 1:
        raise DimensionMismatch(f"{len(coeffs)} fixed coefficients for a {c.dim}-vector")
    last = c[c.dim - 1]
    if abs(last) <= settings.SINGULAR_TOL:
        raise SingularSolve(f"c{c.dim} = {last} is too small to solve for a{c.dim}")
    partial = sum((complex(a) * x for a, x in zip(coeffs, c.c)), 0j)
    return (complex(rhs) - partial) / last
