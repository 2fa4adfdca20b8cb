"""Roots of unity summing to zero in binary fields, nice sets and the codes built from them."""

from ._core import (
    Code,
    NicePair,
    NotFoundError,
    ResourceLimitError,
    SearchExhaustedError,
    UsageError,
    Witness,
    brute_force_deps,
    build_nice_pair,
    class_test_3,
    converse_check,
    eval_bounds,
    extract_witness_3,
    fourier_profile,
    gcd_test_3,
    is_prime,
    largest_prime_factor_mersenne,
    ldc_demo,
    min_k_dependency,
    necessary_cond_3,
    necessary_cond_k,
    odd_t_filter,
    ord2,
    primes,
    search,
    subgroup_2,
    sufficient_cond_3,
    verify_nice,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
