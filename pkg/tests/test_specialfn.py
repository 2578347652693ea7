import math

import mpmath as mp
import pytest

from fracgap.errors import DomainError
from fracgap.fracint import integrate_frac_quadrature
from fracgap.funcspec import reciprocal_power, scaled_reciprocal
from fracgap.specialfn import (
    gamma_via_fracint,
    harmonic,
    li_offset,
    zeta_series,
    zeta_via_fracint,
)

mp.mp.dps = 30
MP_GAMMA = float(mp.euler)


class TestLiOffset:
    def test_base_point(self):
        assert li_offset(2.0) == 0.0

    @pytest.mark.parametrize("x", [3.0, 10.0, 100.0, 12345.0])
    def test_against_mpmath(self, x):
        expected = float(mp.li(x) - mp.li(2))
        assert li_offset(x) == pytest.approx(expected, abs=1e-10, rel=1e-12)

    def test_strictly_increasing_unit_steps(self):
        prev = 0.0
        for x in [2.0, 2.5, 4.0, 9.0, 50.0, 1000.0]:
            cur = li_offset(x)
            assert cur >= prev
            prev = cur
        for x in [2.0, 3.0, 10.0, 97.0]:
            step = li_offset(x + 1.0) - li_offset(x)
            assert 1.0 / math.log(x + 1.0) < step < 1.0 / math.log(x)

    def test_domain(self):
        with pytest.raises(DomainError):
            li_offset(1.5)


class TestHarmonic:
    def test_small_values(self):
        assert harmonic(1) == 1.0
        assert harmonic(4) == pytest.approx(25.0 / 12.0, rel=1e-15)

    def test_extrapolates_to_euler_gamma(self):
        n = 10**6
        drift = harmonic(n) - math.log(n) - MP_GAMMA
        # H_n - log n - gamma = 1/(2n) - O(1/n^2)
        assert drift == pytest.approx(0.5 / n, abs=1e-10)

    def test_rejects_zero(self):
        with pytest.raises(DomainError):
            harmonic(0)


class TestZetaSeries:
    def test_small_sums(self):
        assert zeta_series(2, 1) == 1.0
        assert zeta_series(2, 3) == pytest.approx(49.0 / 36.0, rel=1e-15)

    def test_tail_bracket(self):
        # zeta(2) - partial sum lies in (1/(N+1), 1/N)
        n = 10**6
        tail = float(mp.zeta(2)) - zeta_series(2, n)
        assert 1.0 / (n + 1) < tail < 1.0 / n

    def test_rejects_n_below_2(self):
        with pytest.raises(DomainError):
            zeta_series(1, 10)


class TestZetaViaFracint:
    def test_degenerate_c1(self):
        est = zeta_via_fracint(2, 1)
        assert est.value == 2.0
        assert est.predicted_error > 0

    def test_c3_exact_identity(self):
        est = zeta_via_fracint(2, 3)
        assert est.value == pytest.approx(61.0 / 36.0, rel=1e-12)

    def test_quadrature_route_agrees(self):
        n, c = 2, 3
        quad = integrate_frac_quadrature(reciprocal_power(c, n), 1.0, float(c**n), 1e-11)
        alt = n / (n - 1) - quad / c**n
        assert zeta_via_fracint(n, c).value == pytest.approx(alt, abs=1e-9)

    def test_c1000_near_zeta2(self):
        est = zeta_via_fracint(2, 1000)
        target = zeta_series(2, 10**6)  # series oracle, tail < 1e-6
        assert abs(est.value - target) <= 1e-5

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_finite_c_identity(self, n):
        for c in range(2, 51):
            est = zeta_via_fracint(n, c)
            closed = c ** (1.0 - n) / (n - 1.0) + zeta_series(n, c)
            assert est.value == pytest.approx(closed, rel=1e-10)

    def test_error_shrinks_with_c(self):
        target = zeta_series(2, 10**6)
        for c1, c2 in [(2, 20), (20, 200), (5, 50)]:
            e1 = abs(zeta_via_fracint(2, c1).value - target)
            e2 = abs(zeta_via_fracint(2, c2).value - target)
            assert e2 <= e1 + 1e-12

    def test_rejects_bad_parameters(self):
        with pytest.raises(DomainError):
            zeta_via_fracint(1, 10)
        with pytest.raises(DomainError):
            zeta_via_fracint(2, 0)


class TestGammaViaFracint:
    def test_degenerate_a1(self):
        assert gamma_via_fracint(1).value == 0.0

    def test_a4_closed_form_and_quadrature(self):
        est = gamma_via_fracint(4)
        closed = math.log(4.0) - 25.0 / 12.0 + 1.0
        assert est.value == pytest.approx(closed, rel=1e-12)
        quad = integrate_frac_quadrature(scaled_reciprocal(4.0), 1.0, 4.0, 1e-11) / 4.0
        assert est.value == pytest.approx(quad, abs=1e-9)

    @pytest.mark.parametrize("a", [2, 10, 100, 1000, 10**4])
    def test_harmonic_identity(self, a):
        est = gamma_via_fracint(a)
        assert est.value == pytest.approx(math.log(a) - harmonic(a) + 1.0, rel=1e-10)

    def test_converges_to_one_minus_gamma(self):
        est = gamma_via_fracint(10**4)
        assert abs(est.value - (1.0 - MP_GAMMA)) <= 1e-4
        assert est.predicted_error == pytest.approx(0.5e-4)

    def test_error_shrinks_with_a(self):
        target = 1.0 - MP_GAMMA
        errors = [abs(gamma_via_fracint(a).value - target) for a in (10, 100, 1000)]
        assert errors[1] <= errors[0] + 1e-12
        assert errors[2] <= errors[1] + 1e-12

    def test_rejects_zero(self):
        with pytest.raises(DomainError):
            gamma_via_fracint(0)
