import cmath
import math

import numpy as np
import pytest

from app.core.exppoly import ExpPoly, ep_isclose
from app.core.polyalg import Poly, ShiftVector, poly_isclose
from app.core.trinomial import (
    SQRT2,
    SystemKind,
    SystemType,
    exp_factorization,
    make_constants,
    q_form,
    residuals,
    uv_transform,
)
from app.utils.error_handler import DegenerateW, DimensionMismatch, InvalidCase, InvalidOrder


def random_w(rng: np.random.Generator) -> complex:
    while True:
        w = complex(cmath.rect(rng.uniform(0.2, 3.0), rng.uniform(-math.pi, math.pi)))
        if abs(w * w - 1) > 0.1:
            return w


def random_exponent(rng: np.random.Generator, dim: int = 2) -> Poly:
    """Random polynomial without constant term, degree at most 3"""
    p = Poly.zero(dim)
    for j in range(1, dim + 1):
        z = Poly.variable(dim, j)
        p = p + complex(rng.normal(), rng.normal()) * z
    z1 = Poly.variable(dim, 1)
    return p + complex(rng.normal(), rng.normal()) * z1 ** int(rng.integers(2, 4))


@pytest.mark.unit
class TestConstants:

    def test_identities(self):
        """Sum, difference, product and the vanishing square coefficient over random w"""
        rng = np.random.default_rng(1)
        for _ in range(1000):
            w = random_w(rng)
            k = make_constants(w)
            A1, A2 = k.A1, k.A2
            assert cmath.isclose((A1 + A2) ** 2 * (1 + w), 1, abs_tol=1e-9)
            assert cmath.isclose((A1 - A2) ** 2 * (1 - w), -1, abs_tol=1e-9)
            assert cmath.isclose(A1 * A2 * 2 * (1 - w * w), 1, abs_tol=1e-9)
            scale = abs(A1) ** 2 + abs(A2) ** 2
            assert abs(A1 ** 2 + A2 ** 2 + 2 * w * A1 * A2) <= 1e-9 * scale

    def test_known_values_at_two(self):
        """w = 2 gives A1 = −(3 − √3)/6 and A2 = (3 + √3)/6"""
        k = make_constants(2)
        assert cmath.isclose(k.A1, -(3 - math.sqrt(3)) / 6, abs_tol=1e-12)
        assert cmath.isclose(k.A2, (3 + math.sqrt(3)) / 6, abs_tol=1e-12)

    @pytest.mark.parametrize("w", [0, 1, -1, 1 + 1e-14, complex("nan")])
    def test_degenerate_w(self, w):
        """w² ∈ {0, 1} and non-finite w are rejected"""
        with pytest.raises(DegenerateW):
            make_constants(w)


@pytest.mark.unit
class TestQuadraticForm:

    def test_two_exponential_pair_gives_one(self):
        """(A1e^h + A2e^{−h})/√2 and (A2e^h + A1e^{−h})/√2 satisfy Q_w = 1"""
        rng = np.random.default_rng(2)
        for _ in range(200):
            w = random_w(rng)
            k = make_constants(w)
            h = random_exponent(rng)
            x = (ExpPoly.exp(h, k.A1) + ExpPoly.exp(-h, k.A2)) / SQRT2
            y = (ExpPoly.exp(h, k.A2) + ExpPoly.exp(-h, k.A1)) / SQRT2
            assert ep_isclose(q_form(x, y, w), ExpPoly.constant(2, 1))

    def test_factorization_recovers_exponents(self):
        """X·Y = Q_w(x, y), and X = e^h, Y = e^{−h} for the two-exponential pair"""
        rng = np.random.default_rng(3)
        w = 2.5
        k = make_constants(w)
        h = random_exponent(rng)
        x = (ExpPoly.exp(h, k.A1) + ExpPoly.exp(-h, k.A2)) / SQRT2
        y = (ExpPoly.exp(h, k.A2) + ExpPoly.exp(-h, k.A1)) / SQRT2
        parts = exp_factorization(x, y, w)
        assert ep_isclose(parts["X"] * parts["Y"], q_form(x, y, w))
        assert poly_isclose(parts["gamma1"], h)
        assert poly_isclose(parts["gamma2"], -h)

    def test_factorization_of_general_pair(self):
        """Arbitrary x, y still factor as X·Y; exponents are only reported for single exponentials"""
        z1, z2 = Poly.variable(2, 1), Poly.variable(2, 2)
        x = ExpPoly.exp(z1, 2) + ExpPoly.from_poly(z2)
        y = ExpPoly.exp(z1 * z2, 1j)
        parts = exp_factorization(x, y, 0.5j)
        assert ep_isclose(parts["X"] * parts["Y"], q_form(x, y, 0.5j))
        assert parts["gamma1"] is None

    def test_uv_transform(self):
        """Q_w(f, s) = (1 + w)u² + (1 − w)v²"""
        z1, z2 = Poly.variable(2, 1), Poly.variable(2, 2)
        f = ExpPoly.exp(z1 + z2, 3) - ExpPoly.from_poly(z1)
        s = ExpPoly.exp(z1 - z2, 1j)
        w = 1.7 - 0.2j
        u, v = uv_transform(f, s)
        assert ep_isclose(q_form(f, s, w), (1 + w) * u * u + (1 - w) * v * v)


@pytest.mark.unit
class TestSystemKind:

    def setup_method(self):
        self.c2 = ShiftVector((1j, 2))

    def test_shift_difference_right_sides_are_zero(self):
        """The shift-difference system has e^0 = 1 on both right sides"""
        kind = SystemKind(SystemType.SHIFT_DIFFERENCE, 2, self.c2, Poly.variable(2, 1), None, 2)
        assert kind.g1.is_zero and kind.g2.is_zero

    def test_validation(self):
        """Shift length, order and dimension of the derivative systems are checked"""
        with pytest.raises(DimensionMismatch):
            SystemKind(SystemType.DIFFERENCE, 3, self.c2)
        with pytest.raises(InvalidOrder):
            SystemKind(SystemType.PARTIAL_DIFF, 2, self.c2, k=0)
        with pytest.raises(InvalidCase):
            SystemKind(SystemType.PARTIAL_DIFF, 3, ShiftVector((1, 1, 1)))

    def test_residuals_of_a_wrong_pair(self):
        """f = g = 1 does not solve the difference system with right side e^{z1}"""
        kind = SystemKind(SystemType.DIFFERENCE, 2, self.c2, Poly.variable(2, 1), Poly.variable(2, 1))
        one = ExpPoly.constant(2, 1)
        r1, r2 = residuals(kind, one, one, 2)
        assert not r1.is_zero and not r2.is_zero

    def test_residual_dimension_checked(self):
        """A pair in the wrong number of variables is rejected"""
        kind = SystemKind(SystemType.DIFFERENCE, 2, self.c2)
        with pytest.raises(DimensionMismatch):
            residuals(kind, ExpPoly.constant(3, 1), ExpPoly.constant(2, 1), 2)
