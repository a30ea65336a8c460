import math

import pytest
from hypothesis import given, strategies as st

from bowley.accounts import (
    IDENTITY_IDS,
    NationalAccounts,
    RateSet,
    bowley_from_rates,
    check_identities,
    profit_ratio_from_rates,
    rates_from_accounts,
    shares_from_accounts,
)
from bowley.errors import InvalidAccounts, ZeroConsumptionRate, ZeroIncome

STEADY = NationalAccounts(C=1.25, Y=1.25, e=1, pi=0.25, W=5)

pos = st.floats(min_value=1e-3, max_value=1e3)
rates = st.floats(min_value=0.0, max_value=1.0)


def consistent_accounts(e, pi, W, gap=0.0):
    """Snapshot with Y = e + pi and C = Y + gap."""
    return NationalAccounts(C=e + pi + gap, Y=e + pi, e=e, pi=pi, W=W)


class TestConstruction:
    @pytest.mark.parametrize("field", ["C", "Y", "e", "pi"])
    def test_negative_flow_rejected(self, field):
        kwargs = dict(C=1, Y=1, e=0.5, pi=0.5, W=1)
        kwargs[field] = -0.1
        with pytest.raises(InvalidAccounts):
            NationalAccounts(**kwargs)

    @pytest.mark.parametrize("W", [0, -1, math.inf, math.nan])
    def test_bad_wealth_rejected(self, W):
        with pytest.raises(InvalidAccounts):
            NationalAccounts(C=1, Y=1, e=0.5, pi=0.5, W=W)

    def test_inconsistent_income_allowed(self):
        acc = NationalAccounts(C=1, Y=3, e=1, pi=1, W=1)
        assert acc.Y != acc.e + acc.pi

    def test_rateset_rejects_negative(self):
        with pytest.raises(InvalidAccounts):
            RateSet(omega=-0.1, gamma=0.1, r=0.0)


class TestRates:
    def test_steady_state_snapshot(self):
        rs = rates_from_accounts(STEADY)
        assert rs.omega == pytest.approx(0.25, abs=1e-15)
        assert rs.gamma == pytest.approx(0.25, abs=1e-15)
        assert rs.r == pytest.approx(0.05, abs=1e-15)

    def test_all_zero_flows(self):
        rs = rates_from_accounts(NationalAccounts(0, 0, 0, 0, 1))
        assert (rs.omega, rs.gamma, rs.r) == (0, 0, 0)

    def test_consumption_sixty_percent_of_gdp(self):
        rs = rates_from_accounts(NationalAccounts(C=0.6, Y=0.6, e=0.45, pi=0.15, W=3))
        assert rs.omega == pytest.approx(0.2)
        assert rs.gamma == pytest.approx(0.2)
        assert rs.r == pytest.approx(0.05)


class TestShares:
    def test_example(self):
        sh = shares_from_accounts(STEADY)
        assert sh.beta == pytest.approx(0.8)
        assert sh.rho == pytest.approx(0.2)

    def test_all_labour(self):
        sh = shares_from_accounts(NationalAccounts(C=2, Y=2, e=2, pi=0, W=4))
        assert (sh.beta, sh.rho) == (1, 0)

    def test_all_capital(self):
        sh = shares_from_accounts(NationalAccounts(C=2, Y=2, e=0, pi=2, W=4))
        assert (sh.beta, sh.rho) == (0, 1)

    def test_zero_income(self):
        with pytest.raises(ZeroIncome):
            shares_from_accounts(NationalAccounts(0, 0, 0, 0, 1))


class TestRateFormulas:
    @pytest.mark.parametrize(
        "r, omega, beta",
        [(0.02, 0.25, 0.92), (0.08, 0.20, 0.60), (0.0, 0.2, 1.0), (0.2, 0.2, 0.0)],
    )
    def test_bowley(self, r, omega, beta):
        assert bowley_from_rates(r, omega) == pytest.approx(beta, abs=1e-12)

    @pytest.mark.parametrize(
        "r, omega, rho", [(0.05, 0.25, 0.2), (0.0, 0.3, 0.0), (0.08, 0.20, 0.40)]
    )
    def test_profit_ratio(self, r, omega, rho):
        assert profit_ratio_from_rates(r, omega) == pytest.approx(rho, abs=1e-12)

    def test_negative_beta_not_clamped(self):
        assert bowley_from_rates(0.3, 0.25) == pytest.approx(-0.2)

    @pytest.mark.parametrize("fn", [bowley_from_rates, profit_ratio_from_rates])
    def test_zero_omega(self, fn):
        with pytest.raises(ZeroConsumptionRate):
            fn(0.05, 0.0)


class TestIdentities:
    def test_steady_state_all_pass(self):
        report = check_identities(STEADY, 1e-12)
        assert report.all_passed
        assert tuple(c.identity for c in report) == IDENTITY_IDS

    def test_off_equilibrium(self):
        report = check_identities(NationalAccounts(C=1, Y=2, e=1, pi=1, W=10), 1e-12)
        assert not report[1].passed
        assert not report[17].passed
        assert report[2].passed
        assert report[17].left == pytest.approx(0.1)
        assert report[17].right == pytest.approx(0.2)
        # r/omega and r/gamma part ways off equilibrium.
        assert report.rho_by_omega == pytest.approx(1.0)
        assert report.rho_by_gamma == pytest.approx(0.5)

    @given(pos, pos, pos, pos, pos)
    def test_infinite_tolerance_passes_everything(self, C, Y, e, pi, W):
        assert check_identities(NationalAccounts(C, Y, e, pi, W), math.inf).all_passed

    def test_undefined_sides_pass_only_at_infinite_tol(self):
        acc = NationalAccounts(0, 0, 0, 0, 1)
        assert 8 in check_identities(acc, 1e6).failed
        assert check_identities(acc, math.inf).all_passed

    def test_pass_flag_matches_residual(self):
        report = check_identities(NationalAccounts(C=1, Y=1.5, e=1, pi=0.5, W=4), 0.25)
        for c in report:
            assert c.passed == (c.residual <= 0.25)

    def test_negative_tolerance_rejected(self):
        with pytest.raises(ValueError):
            check_identities(STEADY, -1.0)


@given(pos, pos, pos, st.floats(min_value=1e-3, max_value=5.0))
def test_share_sum_is_income_coverage(e, pi, W, Y):
    acc = NationalAccounts(C=Y, Y=Y, e=e, pi=pi, W=W)
    sh = shares_from_accounts(acc)
    assert sh.beta + sh.rho == pytest.approx((e + pi) / Y, rel=1e-12)


@given(pos, pos, pos)
def test_shares_sum_to_one_when_consistent(e, pi, W):
    sh = shares_from_accounts(consistent_accounts(e, pi, W))
    assert abs(sh.beta + sh.rho - 1) <= 1e-15


@given(rates, st.floats(min_value=1e-3, max_value=1.0))
def test_bowley_and_profit_ratio_complement(r, omega):
    assert abs(bowley_from_rates(r, omega) + profit_ratio_from_rates(r, omega) - 1) <= 1e-15


@given(pos, pos, pos)
def test_consistency_square(e, pi, W):
    acc = consistent_accounts(e, pi, W)
    rs = rates_from_accounts(acc)
    assert shares_from_accounts(acc).beta == pytest.approx(
        bowley_from_rates(rs.r, rs.omega), abs=1e-12
    )


@given(pos, pos, pos, st.floats(min_value=0, max_value=2), st.floats(1e-3, 1e3))
def test_scale_invariance(e, pi, W, gap, k):
    acc = consistent_accounts(e, pi, W, gap)
    scaled = acc.scaled(k)
    r1, r2 = rates_from_accounts(acc), rates_from_accounts(scaled)
    s1, s2 = shares_from_accounts(acc), shares_from_accounts(scaled)
    for a, b in [(r1.omega, r2.omega), (r1.gamma, r2.gamma), (r1.r, r2.r),
                 (s1.beta, s2.beta), (s1.rho, s2.rho)]:
        assert a == pytest.approx(b, abs=1e-12, rel=1e-12)


@given(
    st.floats(min_value=1e-6, max_value=0.5),
    st.floats(min_value=1e-4, max_value=0.5),
    st.floats(min_value=0.05, max_value=1.0),
)
def test_monotonicity(r, dr, omega):
    assert bowley_from_rates(r + dr, omega) < bowley_from_rates(r, omega)
    assert bowley_from_rates(r, omega + dr) > bowley_from_rates(r, omega)
