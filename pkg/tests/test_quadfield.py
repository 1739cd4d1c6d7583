import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quadnorm.intmath import primes_up_to
from quadnorm.quadfield import (
    EvenPrimeError,
    NonSquarefreeError,
    NotPrimeError,
    OutOfRangeError,
    QuadInteger,
    RamifiedPrimeError,
    SplittingType,
    brute_force_unit,
    fundamental_unit,
    make_field,
    reduce_mod_prime,
    split_roots,
    splitting_type,
)


class TestMakeField:
    def test_disc_3_mod_4(self):
        assert make_field(79).disc == 316

    def test_disc_1_mod_4(self):
        F = make_field(5)
        assert F.disc == 5 and F.half_basis

    def test_rejects_square_factor(self):
        with pytest.raises(NonSquarefreeError):
            make_field(12)

    def test_rejects_small(self):
        with pytest.raises(OutOfRangeError):
            make_field(1)


class TestSplitting:
    def test_inert(self, field79):
        assert splitting_type(field79, 37) is SplittingType.INERT

    def test_split(self, field79):
        assert splitting_type(field79, 3) is SplittingType.SPLIT

    def test_ramified(self, field79):
        assert splitting_type(field79, 79) is SplittingType.RAMIFIED

    def test_not_prime(self, field79):
        with pytest.raises(NotPrimeError):
            splitting_type(field79, 15)

    @pytest.mark.parametrize("d", [79, 10, 5])
    def test_densities(self, d):
        F = make_field(d)
        counts = {SplittingType.SPLIT: 0, SplittingType.INERT: 0, SplittingType.RAMIFIED: 0}
        primes = primes_up_to(10_000)
        for ell in primes:
            counts[splitting_type(F, ell)] += 1
        total = len(primes)
        assert abs(counts[SplittingType.SPLIT] / total - 0.5) < 0.05
        assert abs(counts[SplittingType.INERT] / total - 0.5) < 0.05
        assert counts[SplittingType.RAMIFIED] == len(
            [p for p in primes if F.disc % p == 0]
        )


class TestQuadInteger:
    def test_half_coordinates_need_matching_parity(self):
        with pytest.raises(ValueError):
            QuadInteger(5, 1, 2, 2)

    def test_half_reduces_to_integral(self):
        assert QuadInteger(5, 2, 4, 2) == QuadInteger(5, 1, 2)

    def test_no_half_for_2_mod_4(self):
        with pytest.raises(ValueError):
            QuadInteger(10, 1, 1, 2)

    def test_product_of_halves(self):
        w = QuadInteger(5, 1, 1, 2)
        assert w * w == QuadInteger(5, 3, 1, 2)  # w^2 = w + 1

    def test_norm_and_trace(self):
        x = QuadInteger(79, 80, 9)
        assert x.norm() == 1 and x.trace() == 160

    def test_unit_inverse(self):
        u = QuadInteger(10, 3, 1)
        assert u * u.inverse() == QuadInteger(10, 1, 0)
        assert u ** -2 == (u ** 2).inverse()

    def test_conjugate_product_is_norm(self):
        for d, a, b, den in ((79, 80, 9, 1), (5, 1, 1, 2), (10, 3, 1, 1)):
            x = QuadInteger(d, a, b, den)
            assert x * x.conjugate() == QuadInteger(d, x.norm(), 0)


class TestFundamentalUnit:
    @pytest.mark.parametrize(
        "d,a,b,den,norm",
        [
            (79, 80, 9, 1, 1),
            (10, 3, 1, 1, -1),
            (2, 1, 1, 1, -1),
            (5, 1, 1, 2, -1),
            (13, 3, 1, 2, -1),
            (94, 2143295, 221064, 1, 1),
        ],
    )
    def test_known_units(self, d, a, b, den, norm):
        u = fundamental_unit(make_field(d))
        assert (u.value.a, u.value.b, u.value.den) == (a, b, den)
        assert u.unit_norm == norm

    def test_exact_norm_identity(self):
        for d in range(2, 120):
            try:
                F = make_field(d)
            except NonSquarefreeError:
                continue
            u = fundamental_unit(F)
            assert u.value * u.value.conjugate() == QuadInteger(d, u.unit_norm, 0)
            assert u.value.is_greater_than_one()

    def test_long_period_units_stay_exact(self):
        # periods in the hundreds and coordinates with dozens of digits
        for d in (1621, 1951):
            F = make_field(d)
            u = fundamental_unit(F)
            assert u.value * u.value.conjugate() == QuadInteger(d, u.unit_norm, 0)
            assert u.value.is_greater_than_one()
        assert len(str(fundamental_unit(make_field(1951)).value.a)) > 30

    def test_matches_pell_brute_force_below_500(self):
        cap = 20_000
        for d in range(2, 501):
            try:
                F = make_field(d)
            except NonSquarefreeError:
                continue
            cf = fundamental_unit(F).value
            oracle = brute_force_unit(F, min(abs(cf.b), cap))
            if abs(cf.b) <= cap:
                assert oracle == cf, f"d={d}"
            else:
                # no unit exists below the bound, consistent with the big one
                assert brute_force_unit(F, cap) is None, f"d={d}"


class TestReduceModPrime:
    def test_inert_example(self, field79):
        eps = fundamental_unit(field79).value
        img = reduce_mod_prime(field79, eps, 37)
        assert (img.c0, img.c1, img.dmod) == (6, 9, 5)

    def test_identity(self, field79):
        one = QuadInteger(79, 1, 0)
        img = reduce_mod_prime(field79, one, 37)
        assert img.is_one()

    def test_split_example_with_root(self, field79):
        eps = fundamental_unit(field79).value
        img = reduce_mod_prime(field79, eps, 7, 3)
        assert (img.c0, img.c1, img.root) == (2, 0, 3)

    def test_ramified_rejected(self, field79):
        with pytest.raises(RamifiedPrimeError):
            reduce_mod_prime(field79, QuadInteger(79, 1, 0), 79)

    def test_even_rejected(self, field79):
        with pytest.raises(EvenPrimeError):
            reduce_mod_prime(field79, QuadInteger(79, 1, 0), 2)

    def test_half_integral_elements_reduce(self):
        F = make_field(5)
        w = QuadInteger(5, 1, 1, 2)
        img = reduce_mod_prime(F, w, 13)
        # (1 + w)/2 with inverse of 2 mod 13 = 7
        assert img.c0 == 7 and img.c1 == 7

    @given(
        a1=st.integers(-50, 50), b1=st.integers(-50, 50),
        a2=st.integers(-50, 50), b2=st.integers(-50, 50),
        qi=st.sampled_from([3, 7, 13, 23, 29, 37, 41]),
    )
    @settings(max_examples=150, deadline=None)
    def test_multiplicative(self, a1, b1, a2, b2, qi):
        F = make_field(79)
        if F.disc % qi == 0:
            return
        x = QuadInteger(79, a1, b1)
        y = QuadInteger(79, a2, b2)
        root = None
        if splitting_type(F, qi) is SplittingType.SPLIT:
            root = split_roots(F, qi)[0]
        lhs = reduce_mod_prime(F, x * y, qi, root)
        rhs = reduce_mod_prime(F, x, qi, root) * reduce_mod_prime(F, y, qi, root)
        assert lhs == rhs
