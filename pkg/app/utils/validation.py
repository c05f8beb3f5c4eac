from pydantic import BaseModel, Field, ValidationError, field_validator, model_validator
import math
import re
from typing import Any, Literal, Optional, Union

from app.utils.logger import get_logger

logger = get_logger("validation")

# A scalar in a scenario file: a JSON number or a constant expression such as "pi*i/2"
Scalar = Union[int, float, str]

# ---------------------- Validators ----------------------

class ParameterValidator:
    """Family parameter validation"""
    VALID_CASES = ["T1_i", "T1_ii", "T1_iii", "T2_i", "T2_ii", "T2_iii", "T3_i", "T3_ii"]
    VALID_SUBCASES = ["a", "b", "c", "d"]
    VALID_SYSTEMS = ["difference", "partial_diff_difference", "shift_difference"]
    VALID_EXAMPLES = [
        "single-exponential",
        "three-variable",
        "derivative-single",
        "derivative-pair",
        "shift-difference",
    ]
    # numbered ids of the worked examples
    EXAMPLE_IDS = {
        "3.1": "single-exponential",
        "3.2": "three-variable",
        "3.3": "derivative-single",
        "3.4": "derivative-pair",
        "3.5": "shift-difference",
    }

    @staticmethod
    def validate_finite(value) -> bool:
        if isinstance(value, bool) or not isinstance(value, (int, float, complex)):
            return False
        z = complex(value)
        return math.isfinite(z.real) and math.isfinite(z.imag)

    @staticmethod
    def validate_order(k) -> bool:
        return isinstance(k, int) and not isinstance(k, bool) and k >= 1

    @staticmethod
    def validate_even_order(k) -> bool:
        return ParameterValidator.validate_order(k) and k % 2 == 0

    @classmethod
    def validate_case(cls, case: str) -> bool:
        return case in cls.VALID_CASES

    @classmethod
    def validate_subcase(cls, case: str, subcase: Optional[str]) -> bool:
        """ii/iii cases of the first two families need a subcase a-d, every other case none."""
        if not cls.validate_case(case):
            return False
        needs_subcase = case.endswith(("_ii", "_iii")) and not case.startswith("T3")
        if needs_subcase:
            return subcase in cls.VALID_SUBCASES
        return subcase is None

    @classmethod
    def validate_example(cls, example_id: str) -> bool:
        return example_id in cls.VALID_EXAMPLES or example_id in cls.EXAMPLE_IDS

    @classmethod
    def resolve_example(cls, example_id: str) -> str:
        """Numbered id or name -> example name"""
        return cls.EXAMPLE_IDS.get(example_id, example_id)

    @staticmethod
    def validate_tolerance(tol) -> bool:
        return isinstance(tol, (int, float)) and not isinstance(tol, bool) and 0 < tol < 1


class ExpressionValidator:
    """Names and texts accepted by the expression parser"""
    RESERVED = ["i", "pi", "e", "exp", "sqrt", "log", "ln"]

    @classmethod
    def validate_symbol_name(cls, name: str) -> bool:
        if not name or not isinstance(name, str):
            return False
        if not re.match(r'^[A-Za-z_][A-Za-z0-9_]*$', name):
            return False
        # z1, z2, ... are the variables
        if re.match(r'^z\d+$', name):
            return False
        return name not in cls.RESERVED

    @staticmethod
    def validate_text(text) -> bool:
        return isinstance(text, str) and bool(text.strip())

# ---------------------- Pydantic Models ----------------------

class ToleranceRequest(BaseModel):
    zero: Optional[float] = None
    check: Optional[float] = None
    numeric: Optional[float] = None

    @field_validator('zero', 'check', 'numeric')
    @classmethod
    def validate_tolerance(cls, v):
        if v is not None and not ParameterValidator.validate_tolerance(v):
            raise ValueError('Tolerance must lie in (0, 1)')
        return v


class SystemRequest(BaseModel):
    type: str
    n: int = Field(default=2, ge=1, le=16)
    c: list[Scalar]
    w: Scalar
    k: int = Field(default=1, ge=1)
    g1: str = "0"
    g2: str = "0"

    @field_validator('type')
    @classmethod
    def validate_type(cls, v):
        if v not in ParameterValidator.VALID_SYSTEMS:
            raise ValueError(f'Invalid system type: {v}')
        return v

    @model_validator(mode='after')
    def validate_shape(self):
        if len(self.c) != self.n:
            raise ValueError(f'Shift c has {len(self.c)} entries, expected n = {self.n}')
        if self.type != "difference" and self.n != 2:
            raise ValueError(f'{self.type} systems are stated in two variables')
        return self


class PeriodicTermRequest(BaseModel):
    """H(d·z): the linear form d and the coefficients of H in ascending order."""
    form: list[Scalar] = Field(..., min_length=1)
    coeffs: list[Scalar] = Field(..., min_length=1)


class DiffTargetRequest(BaseModel):
    """Solve d_i from e^{d_i − d_j} = target on the given log branch."""
    pair: Literal["d1-d2", "d3-d4"]
    target: Scalar
    branch: int = Field(default=0, ge=-100, le=100)


class VerifyRequest(BaseModel):
    f: str
    g: str

    @field_validator('f', 'g')
    @classmethod
    def validate_expression(cls, v):
        if not ExpressionValidator.validate_text(v):
            raise ValueError('Expression text must not be empty')
        return v


class FamilyRequest(BaseModel):
    case: str
    subcase: Optional[str] = None
    n: int = Field(default=2, ge=1, le=16)
    w: Scalar
    c: list[Scalar]
    k: int = Field(default=1, ge=1)
    a: list[Scalar] = []
    b: list[Scalar] = []
    alpha: Scalar = 0
    beta: Scalar = 0
    gamma: Scalar = 0
    eta: Scalar = 0
    xi1: Scalar = 1
    xi2: Scalar = 1
    d1: Scalar = 0
    d2: Scalar = 0
    d3: Scalar = 0
    d4: Scalar = 0
    d_diff: list[DiffTargetRequest] = []
    phi: list[PeriodicTermRequest] = []
    psi: list[PeriodicTermRequest] = []
    gamma_reading: Literal["once", "double"] = "once"
    printed_sign: bool = False

    @field_validator('case')
    @classmethod
    def validate_case(cls, v):
        if not ParameterValidator.validate_case(v):
            raise ValueError(f'Invalid family case: {v}')
        return v

    @model_validator(mode='after')
    def validate_family(self):
        if not ParameterValidator.validate_subcase(self.case, self.subcase):
            raise ValueError(f'Invalid subcase {self.subcase!r} for {self.case}')
        if len(self.c) != self.n:
            raise ValueError(f'Shift c has {len(self.c)} entries, expected n = {self.n}')
        if self.case == "T3_ii" and not ParameterValidator.validate_even_order(self.k):
            raise ValueError('T3_ii needs an even order k')
        for term in self.phi + self.psi:
            if len(term.form) != self.n:
                raise ValueError(f'Linear form {term.form} does not have n = {self.n} entries')
        return self


class AuditRequest(BaseModel):
    example: str

    @field_validator('example')
    @classmethod
    def validate_example(cls, v):
        if not ParameterValidator.validate_example(v):
            raise ValueError(f'Unknown worked example: {v}')
        return ParameterValidator.resolve_example(v)


class SampleRequest(BaseModel):
    case: Optional[str] = None
    subcase: Optional[str] = None
    count: int = Field(default=1, ge=1, le=1000)
    seed: Optional[int] = None

    @model_validator(mode='after')
    def validate_case(self):
        if self.case is None:
            if self.subcase is not None:
                raise ValueError('A subcase needs a case')
            return self
        if not ParameterValidator.validate_case(self.case):
            raise ValueError(f'Invalid family case: {self.case}')
        if self.subcase is not None and not ParameterValidator.validate_subcase(self.case, self.subcase):
            raise ValueError(f'Invalid subcase {self.subcase!r} for {self.case}')
        return self


PARAMS_BY_MODE = {
    "verify": VerifyRequest,
    "construct": FamilyRequest,
    "audit": AuditRequest,
    "sample": SampleRequest,
}


class ScenarioRequest(BaseModel):
    mode: Literal["verify", "construct", "audit", "sample"]
    symbols: dict[str, Scalar] = {}
    system: Optional[SystemRequest] = None
    params: dict[str, Any] = {}
    tolerances: ToleranceRequest = ToleranceRequest()
    seed: Optional[int] = None
    points: Optional[int] = Field(default=None, ge=1, le=100000)

    @field_validator('symbols')
    @classmethod
    def validate_symbols(cls, v):
        for name in v:
            if not ExpressionValidator.validate_symbol_name(name):
                raise ValueError(f'Invalid symbol name: {name}')
        return v

    @model_validator(mode='after')
    def validate_mode(self):
        if self.mode == "verify" and self.system is None:
            raise ValueError('verify mode needs a system')
        try:
            PARAMS_BY_MODE[self.mode].model_validate(self.params)
        except ValidationError as e:
            raise ValueError(f'Invalid {self.mode} params: {e}') from e
        return self

    @property
    def typed_params(self):
        """params parsed into the model of the scenario's mode"""
        return PARAMS_BY_MODE[self.mode].model_validate(self.params)


def validate_scenario(data: dict) -> ScenarioRequest:
    """Validate a scenario document using ScenarioRequest model"""
    return ScenarioRequest(**data)
