"""
Deterministic text for Poly / ExpPoly values, readable back by the parser.
"""
from __future__ import annotations

from app.core.exppoly import ExpPoly, ExpTerm
from app.core.polyalg import Monomial, Poly


# a part this small against |z| is rounding noise
NOISE_RATIO = 1e-15


def _snap(z: complex) -> complex:
    z = complex(z)
    floor = NOISE_RATIO * abs(z)
    re = 0.0 if abs(z.real) <= floor else z.real
    im = 0.0 if abs(z.imag) <= floor else z.imag
    return complex(re, im)


def _real(x: float) -> str:
    if x == 0:
        return "0"
    if float(x).is_integer() and abs(x) < 1e16:
        return str(int(x))
    return repr(float(x))


def format_complex(z: complex) -> str:
    """Real and imaginary parts as shortest round-trip floats; compound values in parentheses.

    A part below 1e-15 of |z| prints as 0.
    """
    z = _snap(z)
    re, im = z.real, z.imag
    if im == 0:
        return _real(re)
    if im == 1:
        imag = "i"
    elif im == -1:
        imag = "-i"
    else:
        imag = f"{_real(im)}i"
    if re == 0:
        return imag if im > 0 else f"({imag})"
    sign = "-" if im < 0 else "+"
    return f"({_real(re)}{sign}{imag.lstrip('-')})"


def _monomial(mono: Monomial) -> str:
    parts = []
    for j, e in enumerate(mono, start=1):
        if e == 1:
            parts.append(f"z{j}")
        elif e > 1:
            parts.append(f"z{j}^{e}")
    return "*".join(parts)


def _scaled(coef: complex, body: str) -> str:
    """coef·body, with ±1 absorbed."""
    coef = _snap(coef)
    if not body:
        return format_complex(coef)
    if coef == 1:
        return body
    if coef == -1:
        return f"-{body}"
    return f"{format_complex(coef)}*{body}"


def _join(parts: list[str]) -> str:
    if not parts:
        return "0"
    text = " + ".join(parts)
    return text.replace("+ -", "- ")


def print_poly(p: Poly) -> str:
    return _join([_scaled(c, _monomial(m)) for m, c in p.terms])


def _print_term(t: ExpTerm) -> str:
    expo = t.expo + t.log_scale if t.log_scale else t.expo
    if expo.is_zero:
        return print_poly(t.coeff)
    factor = f"exp({print_poly(expo)})"
    if len(t.coeff.terms) == 1 and t.coeff.is_constant:
        return _scaled(t.coeff.constant_term, factor)
    return f"({print_poly(t.coeff)})*{factor}"


def print_expr(e: ExpPoly) -> str:
    """Terms in canonical order joined by ' + '; zero prints as 0."""
    return _join([_print_term(t) for t in e.terms])
