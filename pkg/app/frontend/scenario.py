"""
Scenario documents: loading, and conversion of the validated request
models into core objects (SystemKind, FamilySpec, ExpPoly pairs).

Schema (JSON):

    {
      "mode": "verify" | "construct" | "audit" | "sample",
      "symbols": {"name": <scalar>, ...},           # optional, bound in order
      "system": {"type", "n", "c", "w", "k", "g1", "g2"},   # verify only
      "params": {...},                               # per mode, see app.utils.validation
      "tolerances": {"zero", "check", "numeric"},    # optional
      "seed": <int>, "points": <int>                 # optional
    }

Scalars are JSON numbers or constant expressions ("pi*i/2", "-log(2)").
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Union

from pydantic import ValidationError

from app.core.constraints import solve_exp
from app.core.exppoly import ExpPoly
from app.core.families import FamilyCase, FamilySpec, PeriodicTerm
from app.core.polyalg import ShiftVector
from app.core.trinomial import SystemKind, SystemType
from app.frontend.parser import parse_constant, parse_expr, parse_poly
from app.utils.error_handler import ScenarioError
from app.utils.logger import get_logger
from app.utils.validation import (
    FamilyRequest,
    PeriodicTermRequest,
    ScenarioRequest,
    SystemRequest,
    VerifyRequest,
    validate_scenario,
)

logger = get_logger(__name__)


def load_scenario(source: Union[str, Path, Mapping]) -> ScenarioRequest:
    """Read and validate a scenario from a path or an already-decoded mapping."""
    if isinstance(source, Mapping):
        data = dict(source)
    else:
        path = Path(source)
        try:
            data = json.loads(path.read_text(encoding="utf-8"))
        except FileNotFoundError as e:
            raise ScenarioError(f"scenario file {path} not found", path=str(path)) from e
        except json.JSONDecodeError as e:
            raise ScenarioError(f"{path}: invalid JSON at line {e.lineno}, column {e.colno}", path=str(path)) from e
    if not isinstance(data, dict):
        raise ScenarioError("a scenario must be a JSON object")
    try:
        scenario = validate_scenario(data)
    except ValidationError as e:
        raise ScenarioError(f"invalid scenario: {e.errors()[0]['msg']}", errors=len(e.errors())) from e
    logger.info("scenario_loaded", mode=scenario.mode)
    return scenario


def bind_symbols(symbols: Mapping[str, object]) -> dict[str, complex]:
    """Evaluate named constants in order; later ones may use earlier ones."""
    bound: dict[str, complex] = {}
    for name, text in symbols.items():
        bound[name] = parse_constant(text, bound)
    return bound


def _constants(values, symbols: Mapping[str, complex]) -> tuple[complex, ...]:
    return tuple(parse_constant(v, symbols) for v in values)


def build_system(request: SystemRequest, symbols: Mapping[str, complex]) -> tuple[SystemKind, complex]:
    n = request.n
    kind = SystemKind(
        SystemType(request.type),
        n,
        ShiftVector(_constants(request.c, symbols)),
        parse_poly(request.g1, n, symbols),
        parse_poly(request.g2, n, symbols),
        request.k,
    )
    return kind, parse_constant(request.w, symbols)


def build_pair(request: VerifyRequest, n: int, symbols: Mapping[str, complex]) -> tuple[ExpPoly, ExpPoly]:
    return parse_expr(request.f, n, symbols), parse_expr(request.g, n, symbols)


def _periodic(terms: list[PeriodicTermRequest], symbols) -> tuple[PeriodicTerm, ...]:
    return tuple(PeriodicTerm(_constants(t.form, symbols), _constants(t.coeffs, symbols)) for t in terms)


def build_family_spec(request: FamilyRequest, symbols: Mapping[str, complex]) -> FamilySpec:
    d = list(_constants((request.d1, request.d2, request.d3, request.d4), symbols))
    for target in request.d_diff:
        # e^{d_i − d_j} = target fixes d_i from d_j
        i = 0 if target.pair == "d1-d2" else 2
        d[i] = d[i + 1] + solve_exp(parse_constant(target.target, symbols), target.branch).value
    return FamilySpec(
        case=FamilyCase(request.case),
        n=request.n,
        c=ShiftVector(_constants(request.c, symbols)),
        w=parse_constant(request.w, symbols),
        subcase=request.subcase,
        k=request.k,
        a=_constants(request.a, symbols),
        b=_constants(request.b, symbols),
        alpha=parse_constant(request.alpha, symbols),
        beta=parse_constant(request.beta, symbols),
        gamma=parse_constant(request.gamma, symbols),
        eta=parse_constant(request.eta, symbols),
        xi1=parse_constant(request.xi1, symbols),
        xi2=parse_constant(request.xi2, symbols),
        d=tuple(d),
        phi=_periodic(request.phi, symbols),
        psi=_periodic(request.psi, symbols),
        gamma_reading=request.gamma_reading,
        printed_sign=request.printed_sign,
    )


@dataclass(frozen=True)
class RunOptions:
    """Seed, sample size and tolerances a run uses; None means the settings default."""
    seed: int
    points: int
    zero_tol: float | None = None
    check_tol: float | None = None
    numeric_tol: float | None = None


def run_options(scenario: ScenarioRequest, seed: int | None, points: int | None, tol: float | None, defaults) -> RunOptions:
    """Command-line flags win over the scenario, the scenario over the settings."""
    tolerances = scenario.tolerances
    if seed is None:
        seed = scenario.seed if scenario.seed is not None else defaults.DEFAULT_SEED
    return RunOptions(
        seed=seed,
        points=points or scenario.points or defaults.SAMPLE_POINTS,
        zero_tol=tol if tol is not None else tolerances.zero,
        check_tol=tol if tol is not None else tolerances.check,
        numeric_tol=tolerances.numeric,
    )
