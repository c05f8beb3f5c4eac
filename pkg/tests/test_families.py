import cmath
import math
from dataclasses import replace

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from app.core.constraints import check_all
from app.core.families import (
    FamilyCase,
    FamilySpec,
    PeriodicTerm,
    build_periodic,
    constraint_set,
    construct,
    negate_relation,
    periodic_violations,
    spec_bindings,
)
from app.core.polyalg import ShiftVector, dot, poly_isclose, poly_shift
from app.core.sampler import ALL_CASES, sample_spec
from app.core.trinomial import SystemType, residuals
from app.utils.error_handler import InvalidCase, NotShiftInvariant
from tests.strategies import coefficients, dims, shift_pairs, shifts

PI_I = 1j * math.pi


def single_exponential_spec() -> FamilySpec:
    return FamilySpec(
        case=FamilyCase.T1_i, n=2, c=ShiftVector((PI_I, PI_I)), w=3,
        a=(1, 1), xi1=1, xi2=1, d=(PI_I, -PI_I, 0, 0),
        phi=(PeriodicTerm((1, -1), (0, 0, 0, 1)),),
    )


def assert_solves(spec: FamilySpec):
    family = construct(spec)
    r1, r2 = residuals(family.kind, family.f, family.g, spec.w)
    assert r1.is_zero, f"{spec.case.value}/{spec.subcase}: first equation leaves {len(r1.terms)} terms"
    assert r2.is_zero, f"{spec.case.value}/{spec.subcase}: second equation leaves {len(r2.terms)} terms"
    assert not family.violations


def assert_constraints_pass(spec: FamilySpec):
    results = check_all(constraint_set(spec), spec_bindings(spec))
    failed = [(r.label, r.deviation) for r in results if not r.passed]
    assert not failed, f"{spec.case.value}/{spec.subcase}: {failed}"


@pytest.mark.unit
class TestPeriodicParts:

    def setup_method(self):
        self.c = ShiftVector((PI_I, PI_I))

    def test_annihilated_form_is_shift_invariant(self):
        """H((1, −1)·z) is unchanged by z → z + c"""
        part = build_periodic(self.c, [PeriodicTerm((1, -1), (0.5, 1, 2j))])
        assert part.is_valid
        assert poly_isclose(poly_shift(part.realized, self.c), part.realized)

    def test_strict_rejects_non_annihilated_form(self):
        """(1, 1)·c = 2πi ≠ 0"""
        with pytest.raises(NotShiftInvariant):
            build_periodic(self.c, [PeriodicTerm((1, 1), (0, 1))])

    def test_lenient_records_violation(self):
        """strict=False keeps the term and records the form with its dot product"""
        part = build_periodic(self.c, [PeriodicTerm((1, 1), (0, 1))], strict=False)
        assert not part.is_valid
        (form, value), = part.violations
        assert form == (1, 1)
        assert cmath.isclose(value, 2 * PI_I)

    def test_constant_term_needs_no_annihilation(self):
        """A constant H is allowed for any form"""
        part = build_periodic(self.c, [PeriodicTerm((1, 1), (3,))])
        assert part.is_valid
        assert part.realized.constant_term == 3

    def test_form_length_checked(self):
        """A form in the wrong dimension is rejected"""
        with pytest.raises(InvalidCase):
            build_periodic(self.c, [PeriodicTerm((1, 1, 1), (0, 1))])


@pytest.mark.unit
class TestPeriodicPartLaws:

    @settings(max_examples=200)
    @given(shift_pairs())
    def test_annihilating_parts_are_shift_invariant(self, case):
        """Σ H(d·z) with every d·c = 0 is unchanged by z → z + c"""
        c, terms = case
        part = build_periodic(c, terms)
        assert part.is_valid
        assert poly_isclose(poly_shift(part.realized, c), part.realized)

    @settings(max_examples=50)
    @given(dims().flatmap(lambda n: st.tuples(shifts(n), st.lists(coefficients(1.0), min_size=n, max_size=n),
                                              coefficients(1.0))))
    def test_non_annihilating_forms_rejected(self, case):
        """A non-constant H(d·z) with d·c ≠ 0 raises NotShiftInvariant"""
        c, form, slope = case
        assume(abs(dot(form, c)) > 1e-3)
        with pytest.raises(NotShiftInvariant):
            build_periodic(c, [PeriodicTerm(form, (0, slope))])


@pytest.mark.unit
class TestConstruct:

    def test_single_exponential_solves(self):
        """w = 3, Φ = (z1 − z2)³ and c = (πi, πi) give zero residuals and passing relations"""
        spec = single_exponential_spec()
        assert_solves(spec)
        assert_constraints_pass(spec)
        assert construct(spec).kind.type == SystemType.DIFFERENCE

    def test_family_unpacks(self):
        """A Family unpacks as (f, g, g1, g2)"""
        f, g, g1, g2 = construct(single_exponential_spec())
        assert f.is_transcendental and g.is_transcendental
        assert g1.degree == 3

    def test_three_variable_violations(self):
        """Each printed linear form of the three-variable example misses c"""
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
        dots = [value for _, value in construct(spec).violations]
        expected = [-PI_I, 3 * PI_I, 3 * PI_I, 6 * PI_I]
        assert len(dots) == len(expected)
        for value, target in zip(dots, expected):
            assert cmath.isclose(value, target, abs_tol=1e-12)
        assert len(periodic_violations(spec)) == 4

    def test_shift_difference_with_weighted_shift(self):
        """k = 2, α = i√2, αc1 + c2 = πi solves the shift-difference system"""
        alpha = 1j * math.sqrt(2)
        spec = FamilySpec(
            case=FamilyCase.T3_ii, n=2, c=ShiftVector((PI_I / 2, PI_I - alpha * PI_I / 2)), w=2, k=2,
            alpha=alpha, beta=1, gamma=1, eta=0,
        )
        assert_solves(spec)
        assert_constraints_pass(spec)

    def test_shift_difference_as_printed_fails_relation(self):
        """c1 + c2 = πi does not meet e^{L(c)} = −1 when α = i√2"""
        spec = FamilySpec(
            case=FamilyCase.T3_ii, n=2, c=ShiftVector((PI_I / 2, PI_I / 2)), w=2, k=2,
            alpha=1j * math.sqrt(2), beta=1, gamma=1, eta=0,
        )
        results = check_all(constraint_set(spec), spec_bindings(spec))
        assert not all(r.passed for r in results)

    def test_validation_errors(self):
        """Malformed parameter sets are rejected before construction"""
        base = single_exponential_spec()
        with pytest.raises(InvalidCase):
            construct(replace(base, c=ShiftVector((0, 0))))
        with pytest.raises(InvalidCase):
            construct(replace(base, subcase="a"))
        with pytest.raises(InvalidCase):
            construct(replace(base, a=(1,)))
        with pytest.raises(InvalidCase):
            construct(replace(base, case=FamilyCase.T1_ii, b=(1, -1)))
        t3 = FamilySpec(case=FamilyCase.T3_ii, n=2, c=ShiftVector((1, 1)), w=2, k=3, alpha=1, beta=1)
        with pytest.raises(InvalidCase):
            construct(t3)
        t2 = FamilySpec(case=FamilyCase.T2_i, n=2, c=ShiftVector((1, 1)), w=2, a=(1, 1),
                        phi=(PeriodicTerm((1, -1), (0, 1)),))
        with pytest.raises(InvalidCase):
            construct(t2)

    def test_equal_exponents_rejected(self):
        """The two exponentials of a subcase family must differ"""
        spec = FamilySpec(case=FamilyCase.T1_ii, subcase="a", n=2, c=ShiftVector((PI_I, PI_I)), w=2,
                          a=(1, 1), b=(1, 1))
        with pytest.raises(InvalidCase):
            construct(spec)


@pytest.mark.unit
class TestSampledFamilies:

    @pytest.mark.parametrize("case,subcase", ALL_CASES)
    def test_sampled_specs_solve(self, case, subcase):
        """Sampled parameters pass every relation and the family has zero residuals"""
        for seed in range(3):
            spec = sample_spec(case, subcase, seed)
            assert_constraints_pass(spec)
            assert_solves(spec)

    @pytest.mark.parametrize("case,subcase", ALL_CASES)
    def test_negated_relation_is_caught(self, case, subcase):
        """Flipping one sign relation fails a relation check and leaves a nonzero residual"""
        for seed in range(20):
            spec = negate_relation(sample_spec(case, subcase, seed))
            results = check_all(constraint_set(spec), spec_bindings(spec))
            assert not all(r.passed for r in results), f"seed {seed}: every relation passed"
            family = construct(spec)
            r1, r2 = residuals(family.kind, family.f, family.g, spec.w)
            assert not (r1.is_zero and r2.is_zero), f"seed {seed}: residuals vanished"

    def test_sampling_is_deterministic(self):
        """The same seed gives the same parameters"""
        assert sample_spec("T2_iii", "c", 7) == sample_spec("T2_iii", "c", 7)


@pytest.mark.slow
class TestSampledFamiliesSweep:

    @pytest.mark.parametrize("case,subcase", ALL_CASES)
    def test_fifty_seeds(self, case, subcase):
        """Fifty seeds per family, each solving its system exactly"""
        for seed in range(50):
            spec = sample_spec(case, subcase, seed)
            assert_constraints_pass(spec)
            assert_solves(spec)
