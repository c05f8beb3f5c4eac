from contextlib import contextmanager
from typing import Any

from app.utils.logger import get_logger

logger = get_logger("error_handler")


class FermatError(Exception):
    """Base error; every failure the CLI reports carries a stable label."""
    label = "error"

    def __init__(self, message: str = "", **details: Any):
        super().__init__(message or self.label)
        self.message = message or self.label
        self.details = details

    def to_dict(self) -> dict:
        data = {"error": self.label, "message": self.message}
        for key, value in self.details.items():
            data[key] = value if isinstance(value, (int, float, str, bool, type(None))) else str(value)
        return data


class DimensionMismatch(FermatError):
    label = "dimension_mismatch"


class IndexOutOfRange(FermatError):
    label = "index_out_of_range"


class InvalidOrder(FermatError):
    label = "invalid_order"


class NonFiniteCoefficient(FermatError):
    label = "non_finite_coefficient"


class DegenerateW(FermatError):
    label = "degenerate_w"


class NotShiftInvariant(FermatError):
    """A linear form d with d·c ≠ 0 was offered as a periodic term."""
    label = "not_shift_invariant"

    def __init__(self, form, dot, message: str = ""):
        super().__init__(message or f"linear form {list(form)} has d·c = {dot}", form=list(form), dot=dot)
        self.form = tuple(form)
        self.dot = dot


class ZeroCoefficient(FermatError):
    label = "zero_coefficient"


class InvalidCase(FermatError):
    label = "invalid_case"


class ZeroTarget(FermatError):
    label = "zero_target"


class SingularSolve(FermatError):
    label = "singular_solve"


class UnboundSymbol(FermatError):
    label = "unbound_symbol"

    def __init__(self, name: str):
        super().__init__(f"symbol '{name}' is not bound", symbol=name)
        self.name = name


class EvaluationOverflow(FermatError):
    label = "evaluation_overflow"


class ExprSyntaxError(FermatError):
    label = "syntax_error"

    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{message} at line {line}, column {col}", line=line, col=col)
        self.line = line
        self.col = col


class NonPolynomialExponent(FermatError):
    label = "non_polynomial_exponent"


class ScenarioError(FermatError):
    label = "scenario_error"


# Errors a constraint set may raise when the parameters make a target undefined
CONSTRAINT_ERRORS = (ZeroCoefficient, ZeroTarget, SingularSolve, InvalidCase)


@contextmanager
def labelled_errors(context: str):
    """Re-raise raw arithmetic failures as labelled FermatErrors."""
    try:
        yield
    except FermatError:
        raise
    except (ZeroDivisionError, OverflowError, ValueError) as e:
        logger.error("unlabelled_failure", context=context, error=str(e))
        raise FermatError(f"{context}: {e}") from e
