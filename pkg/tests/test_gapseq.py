import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fracgap.errors import DomainError
from fracgap.funcspec import lookup
from fracgap.gapseq import (
    assumption_audit,
    assumption_partial_sums,
    comparison_sweep,
    comparison_terms,
    compute_rst,
    default_rst_grid,
    integral_of_reciprocal,
    interval_reciprocal_integrals,
    loglog_slopes,
    primes_sequence,
    residual,
    residual_sweep,
    sequence_from_list,
    squares_sequence,
    stat_sweep,
    theta_interval_scan,
)

mp.mp.dps = 30

IDENT = lookup("identity")
LOG = lookup("log")
SQRT = lookup("sqrt")


class TestSequences:
    def test_strict_increase_enforced(self):
        with pytest.raises(DomainError):
            sequence_from_list("bad", [1, 1])
        with pytest.raises(DomainError):
            sequence_from_list("bad", [3, 2])
        with pytest.raises(DomainError):
            sequence_from_list("bad", [0, 1])

    def test_squares_default_skips_one(self):
        sq = squares_sequence(100)
        assert sq.terms.tolist() == [4, 9, 16, 25, 36, 49, 64, 81, 100]

    def test_primes_sequence(self, table_1e4):
        seq = primes_sequence(table_1e4)
        assert seq.a(1) == 2 and seq.a(4) == 7

    def test_index_bounds(self):
        seq = sequence_from_list("s", [1, 2, 3])
        with pytest.raises(DomainError):
            seq.a(0)
        with pytest.raises(DomainError):
            seq.a(4)


class TestReciprocalIntegrals:
    def test_matches_closed_forms(self):
        assert integral_of_reciprocal(IDENT, 2.0, 5.0) == pytest.approx(
            math.log(2.5), rel=1e-14
        )
        assert integral_of_reciprocal(SQRT, 4.0, 9.0) == pytest.approx(2.0, rel=1e-14)
        li_gap = integral_of_reciprocal(LOG, 2.0, 10.0)
        assert li_gap == pytest.approx(float(mp.li(10) - mp.li(2)), abs=1e-10)

    def test_log_family_reduction_formulas(self):
        # antiderivatives of 1/log^2 and 1/log^3 agree with direct quadrature
        from fracgap.numerics import adaptive_integral

        for name in ("log2", "log3"):
            f = lookup(name)
            direct = adaptive_integral(
                lambda x, f=f: 1.0 / np.asarray(f.eval(x), dtype=np.float64),
                3.0,
                400.0,
                tol=1e-12,
            )
            assert direct.converged
            got = integral_of_reciprocal(f, 3.0, 400.0)
            assert got == pytest.approx(direct.value, abs=1e-9)

    def test_vectorized_matches_scalar(self):
        lo = np.array([2.0, 3.0, 10.0, 113.0])
        hi = np.array([3.0, 5.0, 11.0, 127.0])
        for f in (IDENT, LOG, SQRT, lookup("log2")):
            vec = interval_reciprocal_integrals(f, lo, hi)
            for i in range(lo.size):
                assert vec[i] == pytest.approx(
                    integral_of_reciprocal(f, lo[i], hi[i]), rel=1e-11, abs=1e-13
                )


class TestSandwich:
    def test_first_primes_identity_n3(self):
        seq = sequence_from_list("first-primes", [2, 3, 5])
        v = compute_rst(seq, IDENT, 3)
        assert v.r == pytest.approx(math.log(2.5) - 0.7, abs=1e-12)
        assert v.s == pytest.approx(math.log(2.5) - 7.0 / 6.0, abs=1e-12)
        assert v.t == pytest.approx(math.log(2.5) - 11.0 / 15.0, abs=1e-12)
        # measured counterexample to the tempting r <= t:
        assert v.r > v.t
        # while the provable relations hold
        assert v.s <= v.r < v.t + v.upper_slack
        assert 0.0 <= v.r < v.upper_slack

    def test_pair_1_2_closed_form(self):
        seq = sequence_from_list("pair", [1, 2])
        v = compute_rst(seq, IDENT, 2)
        assert v.r == pytest.approx(math.log(2.0) - 0.5, abs=1e-14)
        assert v.s == pytest.approx(math.log(2.0) - 1.0, abs=1e-14)
        assert v.t == pytest.approx(v.r, abs=1e-14)

    def test_rejects_bad_n_and_f(self):
        seq = sequence_from_list("s", [2, 3, 5])
        with pytest.raises(DomainError):
            compute_rst(seq, IDENT, 1)
        with pytest.raises(DomainError):
            compute_rst(seq, lookup("4/x"), 3)  # decreasing f

    def test_breakpoint_budget_surfaces(self, table_1e4):
        from fracgap.config import Config
        from fracgap.errors import BudgetError

        seq = primes_sequence(table_1e4)
        with pytest.raises(BudgetError):
            compute_rst(seq, IDENT, seq.count, config=Config(breakpoint_cap=100))

    def test_invariants_on_prime_grid(self, table_1e4):
        seq = primes_sequence(table_1e4)
        for f in (IDENT, LOG, SQRT):
            for n in default_rst_grid(seq.count):
                v = compute_rst(seq, f, n)
                assert v.s <= v.r + 1e-12, (f.name, n)
                assert v.s <= v.t + 1e-12, (f.name, n)
                assert v.r < v.t + v.upper_slack, (f.name, n)
                assert 0.0 <= v.r < v.upper_slack, (f.name, n)

    def test_log_power_catalog_members_work(self, table_1e4):
        # li-backed reciprocal antiderivatives keep the whole pipeline exact
        seq = primes_sequence(table_1e4)
        for name in ("log2", "log3"):
            v = compute_rst(seq, lookup(name), 64)
            assert v.s <= v.r < v.t + v.upper_slack
            assert 0.0 <= v.r < v.upper_slack

    @given(
        start=st.integers(min_value=2, max_value=30),
        steps=st.lists(st.integers(min_value=1, max_value=9), min_size=1, max_size=12),
    )
    @settings(max_examples=60, deadline=None)
    def test_invariants_random_sequences(self, start, steps):
        terms = [start]
        for s in steps:
            terms.append(terms[-1] + s)
        seq = sequence_from_list("random", terms)
        for f in (IDENT, SQRT, LOG):
            v = compute_rst(seq, f, seq.count)
            assert v.s <= v.r + 1e-12
            assert v.r < v.t + v.upper_slack
            assert 0.0 <= v.r < v.upper_slack

    def test_default_grid_shape(self):
        grid = default_rst_grid(100)
        assert grid[0] == 2 and grid[-1] == 100
        assert 3 in grid and 64 in grid
        with pytest.raises(DomainError):
            default_rst_grid(1)
        with pytest.raises(DomainError):
            default_rst_grid(100, base=1.0)


class TestResiduals:
    def test_primes_identity_n1(self, table_1e4):
        seq = primes_sequence(table_1e4)
        r = residual(seq, IDENT, 1)
        assert r.residual == pytest.approx(math.log(1.5) - 0.5, abs=1e-14)
        assert r.lower_bound <= r.residual <= 0.0

    def test_primes_log_n1(self, table_1e4):
        seq = primes_sequence(table_1e4)
        r = residual(seq, LOG, 1)
        expected = float(mp.li(3) - mp.li(2)) - 1.0 / math.log(2.0)
        assert r.residual == pytest.approx(expected, abs=1e-10)

    def test_pair_1_2(self):
        seq = sequence_from_list("pair", [1, 2])
        r = residual(seq, IDENT, 1)
        assert r.residual == pytest.approx(math.log(2.0) - 1.0, abs=1e-14)

    def test_sweep_matches_single(self, table_1e4):
        seq = primes_sequence(table_1e4)
        for f in (IDENT, LOG):
            sweep = residual_sweep(seq, f, 1, 200)
            for n in (1, 2, 50, 137, 200):
                single = residual(seq, f, n)
                assert sweep.residual[n - 1] == pytest.approx(
                    single.residual, rel=1e-9, abs=1e-12
                )

    def test_bounds_full_table(self, table_1e6):
        seq = primes_sequence(table_1e6)
        for f in (IDENT, LOG):
            sw = residual_sweep(seq, f)
            assert np.all(sw.residual < 0.0)
            assert np.all(sw.residual >= sw.lower_bound)
        swi = residual_sweep(seq, IDENT)
        assert np.all(np.abs(swi.residual) <= np.square(swi.d / swi.a) / 2.0)

    def test_index_errors(self, table_1e4):
        seq = primes_sequence(table_1e4)
        with pytest.raises(DomainError):
            residual(seq, IDENT, 0)
        with pytest.raises(DomainError):
            residual(seq, IDENT, seq.count)  # needs a successor


class TestAssumptionSums:
    def test_first_terms_identity(self, table_1e4):
        s1 = assumption_partial_sums(table_1e4, 1)
        assert s1.l1 == pytest.approx(1.0 / 6.0, rel=1e-14)
        assert s1.l2 == pytest.approx(1.0 / math.log(2) - 1.0 / math.log(3), rel=1e-14)
        s3 = assumption_partial_sums(table_1e4, 3)
        assert s3.l1 == pytest.approx(23.0 / 42.0, rel=1e-13)

    def test_lf_matches_l1_for_identity(self, table_1e4):
        s = assumption_partial_sums(table_1e4, 500, f=IDENT)
        assert s.lf == pytest.approx(s.l1, rel=1e-12)

    def test_monotone_and_nonnegative(self, table_1e4):
        samples = assumption_audit(table_1e4, [10, 100, 1000], f=SQRT)
        l1s = [s.l1 for s in samples]
        l2s = [s.l2 for s in samples]
        lfs = [s.lf for s in samples]
        for seqv in (l1s, l2s, lfs):
            assert all(v >= 0 for v in seqv)
            assert all(b >= a for a, b in zip(seqv, seqv[1:]))
        slopes = loglog_slopes(samples)
        assert len(slopes) == 2

    def test_range_errors(self, table_1e4):
        with pytest.raises(DomainError):
            assumption_partial_sums(table_1e4, 0)
        with pytest.raises(DomainError):
            assumption_partial_sums(table_1e4, table_1e4.count)
        with pytest.raises(DomainError):
            assumption_audit(table_1e4, [100, 10])


class TestComparison:
    def test_k2_boundary_failure(self, table_1e4):
        c = comparison_terms(table_1e4, 2)
        # direct evaluation: p=3, p_next=5, d=2
        l3, l5 = math.log(3.0), math.log(5.0)
        assert c.a_term == pytest.approx(2.0 * (1 / l3 - 1 / l5), rel=1e-14)
        assert c.b_term == pytest.approx(2.0 * (1 / l3**2 - 1 / l5**2), rel=1e-14)
        assert c.b_term > c.a_term
        assert not c.condition_holds
        assert not c.b_below_a

    def test_k4_holds(self, table_1e4):
        c = comparison_terms(table_1e4, 4)
        l7, l11 = math.log(7.0), math.log(11.0)
        assert c.a_term == pytest.approx(4.0 * (1 / l7 - 1 / l11), rel=1e-14)
        assert c.b_term == pytest.approx(4.0 * (1 / l7**2 - 1 / l11**2), rel=1e-14)
        assert c.condition_holds and c.b_below_a
        assert 0.0 < c.b_term < c.a_term

    def test_condition_equivalent_to_ordering(self, table_1e4):
        data = comparison_sweep(table_1e4)
        assert np.array_equal(data["condition_holds"], data["b_below_a"])

    def test_holds_from_k4_to_1e6(self, table_1e6):
        data = comparison_sweep(table_1e6, 4)
        assert bool(np.all(data["b_below_a"]))

    def test_out_of_range(self, table_1e4):
        with pytest.raises(DomainError):
            comparison_terms(table_1e4, 0)
        with pytest.raises(DomainError):
            comparison_terms(table_1e4, table_1e4.count)


class TestThetaScan:
    def test_small_theta_first_interval_empty(self, table_1e4):
        scan = theta_interval_scan(table_1e4, 0.01, m_max=1)
        assert scan.violations.tolist() == [1]
        assert scan.largest_violating_p == 2

    def test_theta_02_largest_violation_is_23(self, table_1e6):
        scan = theta_interval_scan(table_1e6, 0.2)
        assert scan.largest_violating_p == 23
        assert scan.violations.tolist() == [1, 2, 3, 4, 6, 8, 9]

    def test_bertrand_theta_1(self, table_1e6):
        scan = theta_interval_scan(table_1e6, 1.0)
        assert scan.violations.size == 0
        assert scan.largest_violating_p is None

    def test_range_errors(self, table_1e4):
        with pytest.raises(DomainError):
            theta_interval_scan(table_1e4, 0.0)
        with pytest.raises(DomainError):
            theta_interval_scan(table_1e4, 0.5, m_max=table_1e4.count)


class TestStatSweep:
    def test_westzynthius_first_pair(self, table_1e4):
        sw = stat_sweep(table_1e4, "westzynthius", min_prime=2)
        assert sw.columns["merit"][0] == pytest.approx(1.0 / math.log(2.0), rel=1e-14)
        assert sw.columns["li_gap"][0] == pytest.approx(
            float(mp.li(3) - mp.li(2)), abs=1e-12
        )

    def test_westzynthius_diff_is_negated_residual(self, table_1e4):
        sw = stat_sweep(table_1e4, "westzynthius")
        rs = residual_sweep(primes_sequence(table_1e4), LOG)
        diff = sw.columns["merit"] - sw.columns["li_gap"]
        assert np.max(np.abs(diff + rs.residual)) <= 1e-10

    def test_cramer_at_113(self, table_1e4):
        sw = stat_sweep(table_1e4, "cramer")
        i = int(np.flatnonzero(sw.p == 113)[0])
        lp, lq = math.log(113.0), math.log(127.0)
        expected = (127.0 / lq) * (lq / lp - 1.0)
        assert sw.columns["comparand"][i] == pytest.approx(expected, rel=1e-12)
        assert sw.columns["merit2"][i] == pytest.approx(14.0 / lp**2, rel=1e-14)

    def test_merit3_sup_matches_bruteforce(self, table_1e6):
        sw = stat_sweep(table_1e6, "merit3", min_prime=11)
        p = sw.p.astype(np.float64)
        d = (sw.p_next - sw.p).astype(np.float64)
        vals = d / np.log(p) ** 3
        brute = float(vals[sw.p >= 11].max())
        assert sw.final_sup("merit3") == brute

    def test_running_extrema_monotone(self, table_1e4):
        sw = stat_sweep(table_1e4, "cramer")
        for col, arr in sw.running_sup.items():
            ok = ~np.isnan(arr)
            assert np.all(np.diff(arr[ok]) >= 0), col
        for col, arr in sw.running_inf.items():
            ok = ~np.isnan(arr)
            assert np.all(np.diff(arr[ok]) <= 0), col

    def test_min_prime_skip(self, table_1e4):
        sw = stat_sweep(table_1e4, "merit3", min_prime=11)
        # raw values still emitted for small primes, extrema ignore them
        assert sw.columns["merit3"].size == sw.n.size
        assert np.isnan(sw.running_sup["merit3"][0])
        assert not np.any(sw.tracked[:4])  # 2, 3, 5, 7

    def test_unknown_kind(self, table_1e4):
        with pytest.raises(DomainError):
            stat_sweep(table_1e4, "nope")
