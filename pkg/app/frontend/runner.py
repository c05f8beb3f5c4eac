"""
Scenario execution: symbolic residuals, the numeric sampling oracle,
constraint checks and verdicts.
"""
from __future__ import annotations

import numpy as np

from app.config import settings
from app.core.constraints import check_all
from app.core.exppoly import ExpPoly, ep_eval_batch, ep_isclose
from app.core.families import FamilySpec, build_periodic, constraint_set, construct, spec_bindings
from app.core.sampler import ALL_CASES, sample_spec
from app.core.trinomial import SystemKind, SystemType, exp_factorization, residuals, system_sides
from app.frontend import audits
from app.frontend.parser import parse_expr
from app.frontend.printer import format_complex, print_poly
from app.frontend.report import (
    BatchReport,
    ConstraintEntry,
    FactorEntry,
    FunctionInfo,
    NumericResiduals,
    Verdict,
    VerificationReport,
    ViolationEntry,
    batch_frame,
    summarize_batch,
    worst_verdict,
)
from app.frontend.scenario import (
    RunOptions,
    bind_symbols,
    build_family_spec,
    build_pair,
    build_system,
    run_options,
)
from app.utils.error_handler import CONSTRAINT_ERRORS, DegenerateW, EvaluationOverflow, labelled_errors
from app.utils.logger import get_logger
from app.utils.metrics import MetricsCollector, metrics
from app.utils.validation import ScenarioRequest

logger = get_logger(__name__)


def system_label(kind: SystemKind) -> str:
    if kind.type == SystemType.DIFFERENCE:
        return f"{kind.type.value}(n={kind.n})"
    return f"{kind.type.value}(k={kind.k})"


def _unit_points(seed: int, count: int, n: int) -> np.ndarray:
    """Uniform points of the unit polydisc, drawn once per run."""
    rng = np.random.default_rng(seed)
    modulus = np.sqrt(rng.random((count, n)))
    phase = rng.uniform(-np.pi, np.pi, (count, n))
    return modulus * np.exp(1j * phase)


def _side_residual(x, y, rhs, w: complex) -> tuple[np.ndarray, np.ndarray]:
    r = x * x + 2 * w * x * y + y * y - rhs
    ax, ay = np.abs(x), np.abs(y)
    scale = ax * ax + 2 * abs(w) * ax * ay + ay * ay + np.abs(rhs)
    return np.abs(r), np.abs(r) / np.where(scale > 0, scale, 1.0)


def numeric_residuals(kind: SystemKind, f: ExpPoly, g: ExpPoly, w: complex,
                      options: RunOptions, collector: MetricsCollector) -> NumericResiduals:
    """Max absolute and relative residual of both equations over sampled points.

    Points are drawn in |z_j| ≤ SAMPLE_RADIUS; an overflowing exponent halves
    the radius, up to SAMPLE_SHRINK_STEPS times.
    """
    unit = _unit_points(options.seed, options.points, kind.n)
    sides = system_sides(kind, f, g)
    radius = settings.SAMPLE_RADIUS
    for shrinks in range(settings.SAMPLE_SHRINK_STEPS + 1):
        points = radius * unit
        try:
            max_abs, max_rel = [], []
            for x, y, rhs in sides:
                values = [ep_eval_batch(e, points) for e in (x, y, rhs)]
                if not all(np.all(np.isfinite(v)) for v in values):
                    raise EvaluationOverflow("non-finite value at a sample point")
                abs_r, rel_r = _side_residual(*values, w)
                if not (np.all(np.isfinite(abs_r)) and np.all(np.isfinite(rel_r))):
                    raise EvaluationOverflow("residual overflowed at a sample point")
                max_abs.append(float(abs_r.max()))
                max_rel.append(float(rel_r.max()))
        except EvaluationOverflow:
            collector.record_shrink(radius)
            radius /= 2
            continue
        collector.record_points(options.points)
        return NumericResiduals(points=options.points, radius=radius, shrinks=shrinks,
                                max_abs=max_abs, max_rel=max_rel)
    collector.record_points(0, options.points)
    logger.warning("numeric_check_skipped", points=options.points)
    return NumericResiduals(points=0, radius=radius * 2, shrinks=settings.SAMPLE_SHRINK_STEPS,
                            max_abs=[], max_rel=[])


def decide_verdict(constraints: list[ConstraintEntry], violations: list[ViolationEntry],
                   symbolic_zero: list[bool], numeric: NumericResiduals) -> Verdict:
    if violations or any(not c.passed for c in constraints):
        return Verdict.CONSTRAINT_VIOLATION
    if not all(symbolic_zero) or numeric.points == 0:
        return Verdict.NOT_A_SOLUTION
    if max(numeric.max_rel) > settings.NUMERIC_TOL:
        return Verdict.NOT_A_SOLUTION
    return Verdict.SOLUTION


def factor_entries(kind: SystemKind, f: ExpPoly, g: ExpPoly, w: complex) -> list[FactorEntry]:
    """gamma1, gamma2 of each left side Q_w(x, y) = e^{gamma1}·e^{gamma2}."""
    entries = []
    for equation, (x, y, _) in enumerate(system_sides(kind, f, g), start=1):
        try:
            parts = exp_factorization(x, y, w)
        except DegenerateW:
            return []
        entries.append(FactorEntry(
            equation=equation,
            gamma1=None if parts["gamma1"] is None else print_poly(parts["gamma1"]),
            gamma2=None if parts["gamma2"] is None else print_poly(parts["gamma2"]),
        ))
    return entries


def verify_pair(name: str, kind: SystemKind, w: complex, f: ExpPoly, g: ExpPoly,
                options: RunOptions, collector: MetricsCollector,
                constraints: list[ConstraintEntry] | None = None,
                violations: list[ViolationEntry] | None = None) -> VerificationReport:
    constraints = constraints or []
    violations = violations or []
    r1, r2 = residuals(kind, f, g, w)
    collector.record_residual(len(r1.terms) + len(r2.terms))
    symbolic_zero = [r1.is_zero, r2.is_zero]
    numeric = numeric_residuals(kind, f, g, w, options, collector)
    verdict = decide_verdict(constraints, violations, symbolic_zero, numeric)
    collector.record_verdict(verdict.value)
    logger.info("pair_verified", name=name, verdict=verdict.value, r1_terms=len(r1.terms), r2_terms=len(r2.terms))
    return VerificationReport(
        name=name,
        system=system_label(kind),
        verdict=verdict,
        f=FunctionInfo.of(f),
        g=FunctionInfo.of(g),
        constraints=constraints,
        violations=violations,
        factors=factor_entries(kind, f, g, w),
        symbolic_residual_zero=symbolic_zero,
        residual_terms=[len(r1.terms), len(r2.terms)],
        numeric=numeric,
    )


def check_constraints(spec: FamilySpec, collector: MetricsCollector) -> list[ConstraintEntry]:
    """Per-relation entries; a relation whose target cannot be formed becomes a failing entry."""
    try:
        results = check_all(constraint_set(spec), spec_bindings(spec))
    except CONSTRAINT_ERRORS as e:
        collector.record_constraint_error(e.label)
        return [ConstraintEntry(label="constraint_set", passed=False, error=f"{e.label}: {e.message}")]
    entries = []
    for result in results:
        collector.record_constraint(result.label, result.passed)
        entries.append(ConstraintEntry(
            label=result.label,
            passed=result.passed,
            deviation=result.deviation,
            value=format_complex(result.value),
            target=format_complex(result.target),
        ))
    return entries


def periodic_entries(spec: FamilySpec) -> list[ViolationEntry]:
    entries = []
    for part, terms in (("phi", spec.phi), ("psi", spec.psi)):
        for form, value in build_periodic(spec.c, terms, strict=False).violations:
            entries.append(ViolationEntry(part=part, form=[format_complex(x) for x in form], dot=format_complex(value)))
    return entries


def verify_family(spec: FamilySpec, name: str, options: RunOptions, collector: MetricsCollector) -> VerificationReport:
    family = construct(spec)
    return verify_pair(
        name, family.kind, spec.w, family.f, family.g, options, collector,
        constraints=check_constraints(spec, collector),
        violations=periodic_entries(spec),
    )


def run_audit(example_id: str, options: RunOptions, collector: MetricsCollector) -> VerificationReport:
    """Verify every reading of a worked example; alternative readings nest under the primary one."""
    reports = []
    for reading in audits.readings_for(example_id):
        report = verify_family(reading.spec, f"{example_id}/{reading.name}", options, collector)
        n = reading.spec.n
        printed_f = parse_expr(reading.printed_f, n, reading.symbols)
        printed_g = parse_expr(reading.printed_g, n, reading.symbols)
        family = construct(reading.spec)
        report.printed_form_matches = ep_isclose(family.f, printed_f) and ep_isclose(family.g, printed_g)
        if reading.note:
            report.notes.append(reading.note)
        reports.append(report)
    primary = reports[0]
    primary.readings = reports[1:]
    logger.info("audit_completed", example=example_id, readings=len(reports),
                verdicts=[r.verdict.value for r in reports])
    return primary


def run_sample(case, subcase, count: int, seed: int, options: RunOptions, collector: MetricsCollector) -> BatchReport:
    """Construct and verify `count` sampled specs per case/subcase."""
    # no case: every family; a case without subcase: all of its subcases
    combos = [
        (c, s) for c, s in ALL_CASES
        if (case is None or c.value == case) and (subcase is None or s == subcase)
    ]
    rows = []
    for family_case, family_subcase in combos:
        for offset in range(count):
            spec = sample_spec(family_case, family_subcase, seed + offset)
            report = verify_family(spec, f"{family_case.value}/{family_subcase or '-'}", options, collector)
            rows.append({
                "case": family_case.value,
                "subcase": family_subcase,
                "seed": seed + offset,
                "verdict": report.verdict.value,
                "residual_terms": sum(report.residual_terms),
                "max_rel": max(report.numeric.max_rel) if report.numeric.points else None,
            })
    frame = batch_frame(rows)
    verdict = worst_verdict(Verdict(v) for v in frame["verdict"]) if rows else Verdict.SOLUTION
    return BatchReport(verdict=verdict, rows=rows, summary=summarize_batch(frame))


def run(scenario: ScenarioRequest, seed: int | None = None, points: int | None = None,
        tol: float | None = None) -> VerificationReport | BatchReport:
    """Dispatch a validated scenario; command-line overrides take precedence."""
    options = run_options(scenario, seed, points, tol, settings)
    symbols = bind_symbols(scenario.symbols)
    params = scenario.typed_params
    collector = MetricsCollector()
    collector.record_run(scenario.mode)
    logger.info("run_started", mode=scenario.mode, seed=options.seed, points=options.points)

    overrides = {"ZERO_TOL": options.zero_tol, "CHECK_TOL": options.check_tol, "NUMERIC_TOL": options.numeric_tol}
    with settings.override(**overrides), labelled_errors(f"{scenario.mode} run"):
        if scenario.mode == "verify":
            kind, w = build_system(scenario.system, symbols)
            f, g = build_pair(params, kind.n, symbols)
            report = verify_pair("verify", kind, w, f, g, options, collector)
        elif scenario.mode == "construct":
            spec = build_family_spec(params, symbols)
            name = spec.case.value + (f"({spec.subcase})" if spec.subcase else "")
            report = verify_family(spec, name, options, collector)
        elif scenario.mode == "audit":
            report = run_audit(params.example, options, collector)
        else:
            sample_seed = params.seed if params.seed is not None else options.seed
            report = run_sample(params.case, params.subcase, params.count, sample_seed, options, collector)

    if isinstance(report, VerificationReport):
        report.stats = collector.snapshot()
    metrics.merge(collector)
    return report
