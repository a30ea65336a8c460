"""Bowley ratio toolkit: accounting identities, a floating-income wealth
flow, sectoral drift scenarios and empirical range checks."""

from .accounts import (
    IdentityReport,
    NationalAccounts,
    RateSet,
    ShareSet,
    bowley_from_rates,
    check_identities,
    profit_ratio_from_rates,
    rates_from_accounts,
    shares_from_accounts,
)
from .dynamics import (
    EconomyParams,
    SectorSpec,
    Stability,
    Status,
    simulate_sectors,
    simulate_single,
    stability_classify,
    steady_state,
    step_single,
    sweep,
)
from .empirical import (
    AccountsSeries,
    ParameterBox,
    bowley_range,
    ingest_accounts_csv,
    omega_from_macro,
    ratio_series,
)

__version__ = "0.1.0"
