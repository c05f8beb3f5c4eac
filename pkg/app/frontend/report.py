"""
Verification reports: pydantic models serialized as JSON, a plain-text
summary, and the pandas summary table of a sampling batch.
"""
from __future__ import annotations

from enum import Enum
from typing import Optional

import pandas as pd
from pydantic import BaseModel, model_validator

from app.core.exppoly import ExpPoly
from app.frontend.printer import print_expr


class Verdict(str, Enum):
    SOLUTION = "Solution"
    NOT_A_SOLUTION = "NotASolution"
    CONSTRAINT_VIOLATION = "ConstraintViolation"


EXIT_CODES = {
    Verdict.SOLUTION: 0,
    Verdict.NOT_A_SOLUTION: 2,
    Verdict.CONSTRAINT_VIOLATION: 3,
}

# worst first
_SEVERITY = [Verdict.CONSTRAINT_VIOLATION, Verdict.NOT_A_SOLUTION, Verdict.SOLUTION]


def worst_verdict(verdicts) -> Verdict:
    verdicts = set(verdicts)
    for verdict in _SEVERITY:
        if verdict in verdicts:
            return verdict
    return Verdict.SOLUTION


class ConstraintEntry(BaseModel):
    label: str
    passed: bool
    deviation: Optional[float] = None
    value: Optional[str] = None
    target: Optional[str] = None
    error: Optional[str] = None


class ViolationEntry(BaseModel):
    """A periodic-part linear form d with d·c ≠ 0."""
    part: str
    form: list[str]
    dot: str


class FactorEntry(BaseModel):
    """Left side of one equation split as e^{gamma1}·e^{gamma2}; None where a factor is not a single exponential."""
    equation: int
    gamma1: Optional[str] = None
    gamma2: Optional[str] = None


class NumericResiduals(BaseModel):
    points: int
    radius: float
    shrinks: int
    max_abs: list[float]
    max_rel: list[float]


class FunctionInfo(BaseModel):
    text: str
    terms: int
    transcendental: bool
    exponent_degrees: list[int]

    @classmethod
    def of(cls, e: ExpPoly) -> FunctionInfo:
        return cls(
            text=print_expr(e),
            terms=len(e.terms),
            transcendental=e.is_transcendental,
            exponent_degrees=[t.expo.degree for t in e.terms],
        )


class VerificationReport(BaseModel):
    name: str
    system: str
    verdict: Verdict
    f: FunctionInfo
    g: FunctionInfo
    constraints: list[ConstraintEntry] = []
    violations: list[ViolationEntry] = []
    factors: list[FactorEntry] = []
    symbolic_residual_zero: list[bool]
    residual_terms: list[int]
    numeric: Optional[NumericResiduals] = None
    printed_form_matches: Optional[bool] = None
    notes: list[str] = []
    stats: dict = {}
    readings: list["VerificationReport"] = []

    @model_validator(mode='after')
    def validate_solution_claim(self):
        if self.verdict == Verdict.SOLUTION:
            if not all(self.symbolic_residual_zero):
                raise ValueError('Solution verdict with a nonzero symbolic residual')
            if not all(c.passed for c in self.constraints) or self.violations:
                raise ValueError('Solution verdict with a failing constraint')
            if self.numeric is None or self.numeric.points == 0:
                raise ValueError('Solution verdict without numeric confirmation')
        return self

    @property
    def exit_code(self) -> int:
        return EXIT_CODES[self.verdict]


VerificationReport.model_rebuild()


class BatchReport(BaseModel):
    """Summary of a sampling batch."""
    verdict: Verdict
    rows: list[dict]
    summary: dict

    @property
    def exit_code(self) -> int:
        return EXIT_CODES[self.verdict]


def render_summary(report: VerificationReport, indent: str = "") -> str:
    lines = [
        f"{indent}{report.name} [{report.system}]: {report.verdict.value}",
        f"{indent}  f = {report.f.text}",
        f"{indent}  g = {report.g.text}",
    ]
    for c in report.constraints:
        status = "ok  " if c.passed else "FAIL"
        detail = c.error if c.error else f"deviation {c.deviation:.3e}" if c.deviation is not None else ""
        lines.append(f"{indent}  {status} {c.label}  {detail}")
    for v in report.violations:
        lines.append(f"{indent}  periodic {v.part}: form ({', '.join(v.form)}) has d·c = {v.dot}")
    for entry in report.factors:
        if entry.gamma1 is not None and entry.gamma2 is not None:
            lines.append(f"{indent}  equation {entry.equation} factors: exp({entry.gamma1}) * exp({entry.gamma2})")
    zero = ", ".join("zero" if z else "nonzero" for z in report.symbolic_residual_zero)
    lines.append(f"{indent}  symbolic residuals: {zero} (terms {report.residual_terms})")
    if report.numeric is not None:
        n = report.numeric
        if n.points:
            rel = ", ".join(f"{x:.3e}" for x in n.max_rel)
            lines.append(f"{indent}  numeric: {n.points} points, radius {n.radius:g}, max relative residual {rel}")
        else:
            lines.append(f"{indent}  numeric: no point could be evaluated")
    if report.printed_form_matches is not None:
        lines.append(f"{indent}  printed form reproduced: {'yes' if report.printed_form_matches else 'no'}")
    for note in report.notes:
        lines.append(f"{indent}  note: {note}")
    for reading in report.readings:
        lines.append(render_summary(reading, indent + "    "))
    return "\n".join(lines)


def batch_frame(rows: list[dict]) -> pd.DataFrame:
    columns = ["case", "subcase", "seed", "verdict", "residual_terms", "max_rel"]
    return pd.DataFrame(rows, columns=columns)


def summarize_batch(frame: pd.DataFrame) -> dict:
    """Verdict counts and worst residual per case/subcase."""
    if frame.empty:
        return {"total": 0, "verdicts": {}, "by_case": []}
    keyed = frame.assign(subcase=frame["subcase"].fillna("-"))
    by_case = (
        keyed.groupby(["case", "subcase"], sort=True)
        .agg(specs=("seed", "size"),
             solutions=("verdict", lambda v: int((v == Verdict.SOLUTION.value).sum())),
             max_rel=("max_rel", "max"))
        .reset_index()
    )
    # plain python scalars so the summary serializes
    records = [
        {"case": r.case, "subcase": r.subcase, "specs": int(r.specs),
         "solutions": int(r.solutions), "max_rel": float(r.max_rel)}
        for r in by_case.itertuples(index=False)
    ]
    return {
        "total": int(len(frame)),
        "verdicts": {str(k): int(v) for k, v in sorted(frame["verdict"].value_counts().items())},
        "by_case": records,
    }


def render_batch(report: BatchReport) -> str:
    summary = report.summary
    lines = [f"sample batch: {summary['total']} specs, overall {report.verdict.value}"]
    if summary["by_case"]:
        lines.append(pd.DataFrame(summary["by_case"]).to_string(index=False))
    return "\n".join(lines)
