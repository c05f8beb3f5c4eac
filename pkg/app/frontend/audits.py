"""
Worked examples audited against their printed closed forms.

Each example is a list of readings: the family parameters as printed,
plus alternative readings where the printed statement is ambiguous. The
first reading is the primary one.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

from app.core.families import GAMMA_DOUBLE, FamilyCase, FamilySpec, PeriodicTerm
from app.core.polyalg import ShiftVector

PI_I = 1j * math.pi


@dataclass(frozen=True)
class AuditReading:
    name: str
    spec: FamilySpec
    printed_f: str
    printed_g: str
    symbols: dict = field(default_factory=dict)
    note: str = ""


def _single_exponential() -> list[AuditReading]:
    # w = 3, Φ = (z1 − z2)³ with (1, −1)·c = 0
    spec = FamilySpec(
        case=FamilyCase.T1_i, n=2, c=ShiftVector((PI_I, PI_I)), w=3,
        a=(1, 1), xi1=1, xi2=1, d=(PI_I, -PI_I, 0, 0),
        phi=(PeriodicTerm((1, -1), (0, 0, 0, 1)),),
    )
    return [AuditReading(
        "printed", spec,
        "(1/(2*sqrt(2)))*exp((z1+z2+(z1-z2)^3+d1)/2)",
        "(1/(2*sqrt(2)))*exp((z1+z2+(z1-z2)^3+d2)/2)",
        {"d1": PI_I, "d2": -PI_I},
    )]


def _three_variable() -> list[AuditReading]:
    pi = math.pi
    spec = FamilySpec(
        case=FamilyCase.T1_ii, subcase="a", n=3, c=ShiftVector((PI_I, 2 * PI_I, -PI_I)), w=2,
        a=(1, 1, 1), b=(1, 1, -1), d=(2 * PI_I, 0, 4 * PI_I, 0),
        phi=(
            PeriodicTerm((1, -1, 0), (0, 0, -pi ** 2)),
            PeriodicTerm((1, 1, 0), (0, 0, 0, 1j * pi ** 3)),
            PeriodicTerm((0, 1, -1), (0, 0, 0, 0, pi ** 4)),
        ),
        psi=(PeriodicTerm((1, 2, -1), (0, 0, pi ** 4)),),
    )
    U = "z1+z2+z3 - pi^2*(z1-z2)^2 + i*pi^3*(z1+z2)^3 + pi^4*(z2-z3)^4 + d1"
    V = "z1+z2-z3 + pi^4*(z1+2*z2-z3)^2 + d3"
    return [AuditReading(
        "printed", spec,
        f"(1/sqrt(2))*(-((3-sqrt(3))/6)*exp({U}) + ((3+sqrt(3))/6)*exp({V}))",
        f"(1/sqrt(2))*(-((3-sqrt(3))/6)*exp({V}) + ((3+sqrt(3))/6)*exp({U}))",
        {"d1": 2 * PI_I, "d3": 4 * PI_I},
        note="the periodic linear forms do not annihilate c",
    )]


def _derivative_single() -> list[AuditReading]:
    # e^{L(c)/2} = 1/2 from c1 = c2 = −log 2; e^{(d1 − d2)/2} = −1
    ln2 = math.log(2)
    spec = FamilySpec(
        case=FamilyCase.T2_i, n=2, c=ShiftVector((-ln2, -ln2)), w=2, k=1,
        a=(1, 1), xi1=1, xi2=-1, d=(2 * PI_I, 0, 0, 0),
    )
    return [AuditReading(
        "printed", spec,
        "-(2/sqrt(2*(1+w)))*exp((z1+z2+d2)/2)",
        "(2/sqrt(2*(1+w)))*exp((z1+z2+d1)/2)",
        {"w": 2, "d1": 2 * PI_I, "d2": 0},
    )]


def _derivative_pair() -> list[AuditReading]:
    spec = FamilySpec(
        case=FamilyCase.T2_ii, subcase="a", n=2, c=ShiftVector((8 * PI_I / 3, -2 * PI_I / 3)), w=2, k=1,
        a=(1, 1), b=(1, -2), d=(2 * PI_I, 0, 2 * PI_I, 0),
    )
    return [AuditReading(
        "printed", spec,
        "(1/(6*sqrt(2)))*(-(3-sqrt(3))*exp(z1+z2+d2) + (3+sqrt(3))*exp(z1-2*z2+d4))",
        "(1/(6*sqrt(2)))*((3+sqrt(3))*exp(z1+z2+d1) - (3-sqrt(3))*exp(z1-2*z2+d3))",
        {"d1": 2 * PI_I, "d2": 0, "d3": 2 * PI_I, "d4": 0},
    )]


def _shift_difference() -> list[AuditReading]:
    alpha = 1j * math.sqrt(2)
    printed_f = "(1/(12*sqrt(2)))*((3-sqrt(3))*exp(alpha*z1+z2+1) - (3+sqrt(3))*exp(-(alpha*z1+z2+1)))"
    printed_g = "(1/(12*sqrt(2)))*((3-sqrt(3))*exp(-(alpha*z1+z2+1)) - (3+sqrt(3))*exp(alpha*z1+z2+1))"
    base = FamilySpec(
        case=FamilyCase.T3_ii, n=2, c=ShiftVector((PI_I / 2, PI_I / 2)), w=2, k=2,
        alpha=alpha, beta=1, gamma=1, eta=0,
    )
    # αc1 + c2 = πi in place of c1 + c2 = πi
    weighted_c = ShiftVector((PI_I / 2, PI_I - alpha * PI_I / 2))
    symbols = {"alpha": alpha}
    return [
        AuditReading("printed", base, printed_f, printed_g, symbols,
                     note="c1 + c2 = pi*i as printed"),
        AuditReading("alpha-weighted", replace(base, c=weighted_c), printed_f, printed_g, symbols,
                     note="alpha*c1 + c2 = pi*i"),
        AuditReading("double-gamma", replace(base, c=weighted_c, gamma_reading=GAMMA_DOUBLE),
                     printed_f, printed_g, symbols,
                     note="gamma counted inside L and again in the exponent"),
    ]


WORKED_EXAMPLES = {
    "single-exponential": _single_exponential,
    "three-variable": _three_variable,
    "derivative-single": _derivative_single,
    "derivative-pair": _derivative_pair,
    "shift-difference": _shift_difference,
}


def readings_for(example_id: str) -> list[AuditReading]:
    return WORKED_EXAMPLES[example_id]()

