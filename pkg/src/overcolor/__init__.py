"""Exact q-series engine and congruence verification harness for
overcolored odd partitions and their relatives."""

from .arith import is_prime, legendre
from .eta import SeriesCache, default_cache, eta_power, eta_quotient, verify_binomial_reduction
from .families import (
    Family,
    brute_overcolored,
    colored_odd,
    colored_odd_counts,
    enumerate_overcolored,
    family_series,
    overcolored,
    overcolored_batch,
    overcolored_counts,
    pure_power,
)
from .modforms import (
    EtaQuotient,
    HeckeResult,
    check_level_conditions,
    cusp_orders,
    eigenform_check,
    eta_quotient_expansion,
    hecke_tp,
)
from .report import VerificationReport
from .series import EXACT, Ring, Series, eq_mod, first_difference, mod_int, mod_pow2

__version__ = "0.1.0"
