import cmath
import math

import pytest

from app.core.exppoly import ExpPoly, ep_isclose
from app.core.polyalg import Poly, poly_isclose
from app.frontend.audits import WORKED_EXAMPLES
from app.frontend.parser import parse_constant, parse_expr, parse_poly, tokenize
from app.frontend.printer import format_complex, print_expr, print_poly
from app.utils.error_handler import ExprSyntaxError, NonPolynomialExponent, UnboundSymbol


@pytest.mark.unit
class TestParser:

    def setup_method(self):
        self.z1 = Poly.variable(2, 1)
        self.z2 = Poly.variable(2, 2)

    def test_polynomial(self):
        """Sums, products and integer powers of variables"""
        e = parse_expr("(z1 + z2)^2 - 2*z1*z2", 2)
        assert ep_isclose(e, ExpPoly.from_poly(self.z1 ** 2 + self.z2 ** 2))

    def test_exponential(self):
        """exp() of a polynomial and e^(...) agree"""
        a = parse_expr("3*exp(z1 - z2)", 2)
        b = parse_expr("3*e^(z1 - z2)", 2)
        assert ep_isclose(a, ExpPoly.exp(self.z1 - self.z2, 3))
        assert ep_isclose(a, b)

    def test_constants(self):
        """i, pi, imaginary literals, sqrt and log"""
        assert cmath.isclose(parse_constant("2*pi*i"), 2j * math.pi)
        assert cmath.isclose(parse_constant("1.5i"), 1.5j)
        assert cmath.isclose(parse_constant("sqrt(-1)"), 1j)
        assert cmath.isclose(parse_constant("-log(2)"), -math.log(2))
        assert cmath.isclose(parse_constant("ln(e)"), 1)
        assert cmath.isclose(parse_constant("2^3/4"), 2)
        assert parse_constant(3) == 3 + 0j

    def test_symbols(self):
        """Named symbols are substituted as constants"""
        e = parse_expr("alpha*z1 + d1", 2, {"alpha": 2j, "d1": 1})
        assert ep_isclose(e, ExpPoly.from_poly(2j * self.z1 + 1))

    def test_exponent_constant_folded_on_parse(self):
        """exp(z1 + pi*i) parses to −exp(z1)"""
        assert ep_isclose(parse_expr("exp(z1 + pi*i)", 2), -ExpPoly.exp(self.z1))

    def test_parse_poly(self):
        """A polynomial text gives a Poly; exponentials are refused"""
        assert poly_isclose(parse_poly("z1*z2 + 1", 2), self.z1 * self.z2 + 1)
        with pytest.raises(NonPolynomialExponent):
            parse_poly("exp(z1)", 2)

    def test_nested_exponential_rejected(self):
        """exp(exp(z1)) is not an exponential polynomial"""
        with pytest.raises(NonPolynomialExponent) as exc:
            parse_expr("exp(exp(z1))", 2)
        assert exc.value.details["col"] == 1

    def test_error_position(self):
        """Syntax errors carry the line and column of the offending token"""
        with pytest.raises(ExprSyntaxError) as exc:
            parse_expr("z1 +\n  * z2", 2)
        assert (exc.value.line, exc.value.col) == (2, 3)
        with pytest.raises(ExprSyntaxError) as exc:
            tokenize("z1 $ z2")
        assert exc.value.col == 4

    @pytest.mark.parametrize("text", ["", "z1 +", "(z1", "z1 z2", "1/z1", "z1^-1", "z1^0.5", "sqrt(z1)", "z3", "2e"])
    def test_rejected(self, text):
        """Malformed or unsupported expressions"""
        with pytest.raises(ExprSyntaxError):
            parse_expr(text, 2)

    def test_unbound_symbol(self):
        """An unknown name is reported by name"""
        with pytest.raises(UnboundSymbol):
            parse_expr("beta*z1", 2)

    def test_constant_rejects_variables(self):
        """Constants are parsed without variables"""
        with pytest.raises(ExprSyntaxError):
            parse_constant("z1")


@pytest.mark.unit
class TestPrinter:

    def setup_method(self):
        self.z1 = Poly.variable(2, 1)
        self.z2 = Poly.variable(2, 2)

    @pytest.mark.parametrize("value,text", [
        (2, "2"), (0.5, "0.5"), (2j, "2i"), (-2j, "(-2i)"), (1j, "i"), (-1j, "(-i)"),
        (1 - 2j, "(1-2i)"), (1.5 + 1j, "(1.5+i)"), (0, "0"),
    ])
    def test_format_complex(self, value, text):
        """Integers print without a decimal point, compound values in parentheses"""
        assert format_complex(value) == text

    def test_rounding_noise_snapped(self):
        """A part far below the other prints as 0"""
        assert format_complex(2.16e-17 + 0.3535j) == "0.3535i"
        assert format_complex(0.5 - 3e-18j) == "0.5"
        assert print_poly(Poly.constant(2, 1 + 1e-17j) * self.z1) == "z1"
        assert format_complex(1e-17 + 1e-17j) == "(1e-17+1e-17i)"

    def test_zero_and_one(self):
        """The zero function prints as 0, the constant one as 1"""
        assert print_expr(ExpPoly.zero(2)) == "0"
        assert print_expr(ExpPoly.constant(2, 1)) == "1"

    def test_poly(self):
        """Negative coefficients print as subtraction"""
        assert print_poly(self.z1 - 2 * self.z2) == "z1 - 2*z2"
        assert print_poly(self.z1 ** 2 * self.z2) == "z1^2*z2"

    def test_exponential_term(self):
        """A constant coefficient multiplies exp() directly"""
        assert print_expr(ExpPoly.exp(self.z1, -1)) == "-exp(z1)"
        assert print_expr(ExpPoly.exp(self.z1 + self.z2, 2j)) == "2i*exp(z1 + z2)"

    def test_deterministic(self):
        """Printing the same value twice gives the same text"""
        e = parse_expr("(1/(2*sqrt(2)))*exp((z1+z2+(z1-z2)^3)/2) + z1", 2)
        assert print_expr(e) == print_expr(parse_expr("z1 + (1/(2*sqrt(2)))*exp((z1+z2+(z1-z2)^3)/2)", 2))

    def test_print_parse_closure(self):
        """Printed worked-example functions parse back to the same value"""
        for builder in WORKED_EXAMPLES.values():
            for reading in builder():
                n = reading.spec.n
                for text in (reading.printed_f, reading.printed_g):
                    e = parse_expr(text, n, reading.symbols)
                    assert ep_isclose(parse_expr(print_expr(e), n), e)
