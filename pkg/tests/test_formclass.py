import pytest

from quadnorm.formclass import (
    BinaryQuadraticForm,
    DiscriminantMismatchError,
    ImprimitiveError,
    InertPrimeError,
    SquareDiscriminantError,
    all_reduced_forms,
    class_group,
    minkowski_class_number,
    polya_report,
    prime_form,
    prime_form_raw,
    principal_class,
    reduction_cycle,
    sign_class,
)
from quadnorm.intmath import is_squarefree
from quadnorm.quadfield import fundamental_unit, make_field

# deterministic sample of fundamental discriminants used by the heavier
# group-law checks; the large ones (discriminants up to 4*10^4) keep the
# composition code honest
SAMPLE_D = [2, 3, 5, 7, 10, 13, 15, 26, 34, 79, 82, 105, 142, 226, 229, 399,
            442, 577, 1009, 1093, 1489, 2993, 4002, 5101, 7053, 9949,
            24005, 33337, 36021, 39997]


class TestReduction:
    def test_already_reduced_is_canonical(self):
        f = BinaryQuadraticForm(1, 16, -15)
        assert f.is_reduced()
        cls = reduction_cycle(f)
        assert cls.canonical == f
        assert cls.cycle_length == 4

    def test_rho_preserves_class(self):
        for f in (BinaryQuadraticForm(3, 2, -26), BinaryQuadraticForm(1, 6, -1)):
            assert reduction_cycle(f) == reduction_cycle(f.rho())

    def test_imprimitive_rejected(self):
        with pytest.raises(ImprimitiveError):
            reduction_cycle(BinaryQuadraticForm(2, 32, -30))

    def test_square_discriminant_rejected(self):
        with pytest.raises(SquareDiscriminantError):
            reduction_cycle(BinaryQuadraticForm(1, 3, 0))  # disc 9

    def test_negative_discriminant_rejected(self):
        with pytest.raises(SquareDiscriminantError):
            reduction_cycle(BinaryQuadraticForm(1, 0, 1))

    def test_equivalence_decision(self):
        # all reduced forms in one rho-cycle share the canonical form
        for D in (316, 40, 145):
            for f in all_reduced_forms(D):
                assert reduction_cycle(f) == reduction_cycle(f.rho())


class TestComposition:
    def test_identity_law(self):
        for D in (316, 40, 145, 1756):
            e = principal_class(D)
            for f in all_reduced_forms(D):
                c = reduction_cycle(f)
                assert e * c == c

    def test_inverse_law(self):
        for D in (316, 40, 145, 1756):
            e = principal_class(D)
            for f in all_reduced_forms(D):
                c = reduction_cycle(f)
                assert c * c.inverse() == e

    def test_cube_of_class_above_3_for_79(self):
        cls = reduction_cycle(BinaryQuadraticForm(3, 2, -26))
        cube = cls * cls * cls
        # trivial in the ideal class group: principal up to the sign class
        assert cube in (principal_class(316), sign_class(316))
        wide = class_group(make_field(79), "wide")
        assert wide.rep(cube) == wide.identity()

    def test_discriminant_mismatch(self):
        with pytest.raises(DiscriminantMismatchError):
            principal_class(316) * principal_class(40)

    @pytest.mark.parametrize("d", SAMPLE_D)
    def test_group_laws_exhaustive(self, d):
        F = make_field(d)
        group = class_group(F, "narrow")
        elems = group.elements
        e = principal_class(F.disc)
        table = {}
        for a in elems:
            for b in elems:
                ab = a * b
                table[(a, b)] = ab
                assert ab in elems
        for a in elems:
            for b in elems:
                assert table[(a, b)] == table[(b, a)]
                for c in elems:
                    assert table[(table[(a, b)], c)] == table[(a, table[(b, c)])]
            assert table[(a, a.inverse())] == e


class TestClassGroup:
    def test_wide_79(self, field79):
        g = class_group(field79, "wide")
        assert g.h == 3 and g.elementary_divisors == (3,)

    def test_narrow_79(self, field79):
        g = class_group(field79, "narrow")
        assert g.h == 6 and g.elementary_divisors == (6,)

    def test_wide_40(self, field10):
        assert class_group(field10, "wide").h == 2

    def test_wide_5(self):
        g = class_group(make_field(5), "wide")
        assert g.h == 1 and g.elementary_divisors == ()

    def test_narrow_wide_ratio_matches_unit_norm(self):
        for d in range(2, 200):
            if not is_squarefree(d):
                continue
            F = make_field(d)
            narrow = class_group(F, "narrow")
            wide = class_group(F, "wide")
            ratio = narrow.h // wide.h
            expected = 1 if fundamental_unit(F).unit_norm == -1 else 2
            assert ratio == expected, f"d={d}"

    def test_odd_parts_coincide(self):
        def odd(xs):
            out = []
            for x in xs:
                while x % 2 == 0:
                    x //= 2
                if x > 1:
                    out.append(x)
            return sorted(out)

        for d in SAMPLE_D:
            F = make_field(d)
            assert odd(class_group(F, "narrow").elementary_divisors) == odd(
                class_group(F, "wide").elementary_divisors
            ), f"d={d}"

    def test_generator_orders_equal_divisors(self):
        for d in (79, 10, 226, 399, 442, 4002):
            for flavor in ("narrow", "wide"):
                g = class_group(make_field(d), flavor)
                assert len(g.generators) == len(g.elementary_divisors)
                prod = 1
                for gen, divisor in zip(g.generators, g.elementary_divisors):
                    assert g.order_of(gen) == divisor
                    prod *= divisor
                assert prod == g.h
                for a, b in zip(g.elementary_divisors, g.elementary_divisors[1:]):
                    assert b % a == 0


class TestPrimeForm:
    def test_above_3_for_79(self, field79):
        assert prime_form_raw(field79, 3).as_tuple() == (3, 2, -26)

    def test_order_of_class_above_3(self, field79):
        wide = class_group(field79, "wide")
        assert wide.order_of(prime_form(field79, 3)) == 3

    def test_ramified_form(self, field79):
        assert prime_form_raw(field79, 79).as_tuple() == (79, 0, -1)

    def test_inert_has_no_form(self, field79):
        with pytest.raises(InertPrimeError):
            prime_form(field79, 37)


class TestPolya:
    def test_example_316(self, field79):
        r = polya_report(field79)
        assert r.ramified_primes == (2, 79)
        assert r.polya_order == 1 and r.h1_order == 4

    def test_example_40(self, field10):
        r = polya_report(field10)
        assert r.polya_order == 2 and r.h1_order == 2

    def test_example_5(self):
        r = polya_report(make_field(5))
        assert r.polya_order == 1 and r.h1_order == 2

    def test_cocycle_oracle_to_1000(self):
        # independent description of the degree-2 unit cohomology from the
        # action on {+-eps^k}: order 4 when the unit norm is +1, else 2
        for d in range(2, 1001):
            if not is_squarefree(d):
                continue
            F = make_field(d)
            r = polya_report(F)
            s = len(r.ramified_primes)
            assert r.h1_order * r.polya_order == 2**s, f"d={d}"
            assert r.polya_order & (r.polya_order - 1) == 0, f"d={d}"
            expected_h1 = 4 if fundamental_unit(F).unit_norm == 1 else 2
            assert r.h1_order == expected_h1, f"d={d}"


class TestNonCyclicStructure:
    @pytest.mark.parametrize("d,divs", [(130, (2, 2)), (399, (2, 4)), (210, (2, 2))])
    def test_divisors_match_order_counts(self, d, divs):
        from math import gcd

        g = class_group(make_field(d), "wide")
        assert g.elementary_divisors == divs
        e = g.identity()
        for k in (2, 3, 4, 6):
            count = 0
            for x in g.elements:
                acc, kk, base = e, k, x
                while kk:
                    if kk & 1:
                        acc = g.mul(acc, base)
                    base = g.mul(base, base)
                    kk >>= 1
                if acc == e:
                    count += 1
            expected = 1
            for dv in divs:
                expected *= gcd(k, dv)
            assert count == expected, f"d={d}, k={k}"


class TestMinkowskiOracle:
    def test_agrees_with_forms_to_600(self):
        for d in range(2, 601):
            if not is_squarefree(d):
                continue
            F = make_field(d)
            assert class_group(F, "wide").h == minkowski_class_number(F), f"d={d}"
