import itertools

import pytest

import niceldc


def test_orders_and_filters():
    assert niceldc.ord2(73) == 9
    assert niceldc.ord2(13264529) == 47
    assert niceldc.is_prime(8191)
    assert not niceldc.is_prime(8193)
    assert niceldc.necessary_cond_3(73, 9)
    assert not niceldc.sufficient_cond_3(73, 9)
    assert not niceldc.odd_t_filter(5, 4)


def test_dependency_tests_agree():
    for p in niceldc.primes(3, 2000):
        found = niceldc.class_test_3(p) is not None
        assert niceldc.gcd_test_3(p) == found


def test_witness():
    w = niceldc.extract_witness_3(73)
    assert w.exponents == [0, 1, 9]
    assert w.t == 9
    assert w.verify()
    assert niceldc.Witness.from_text(w.to_text()).exponents == w.exponents
    with pytest.raises(niceldc.NotFoundError):
        niceldc.extract_witness_3(5)
    with pytest.raises(LookupError):
        niceldc.extract_witness_3(5)


def test_brute_force_and_fourier():
    bf = niceldc.brute_force_deps(7, 3)
    assert bf["ordered_count"] == 42
    assert bf["distinct_count"] == 7
    prof = niceldc.fourier_profile(7)
    assert prof["coefficients"] == [7] + [-1] * 7
    assert prof["parseval_sum"] == 56
    assert prof["moments"][3] == 42
    assert niceldc.min_k_dependency(5) == 5


def _nice_by_definition(p, s0, s1):
    beta = 1
    while True:
        for alpha in range(p):
            if sum((alpha + beta * g) % p in s0 for g in s1) % 2:
                return False
        beta = beta * 2 % p
        if beta == 1:
            return True


def test_nice_pair():
    pair = niceldc.build_nice_pair(7)
    assert pair.s1 == [0, 1, 3]
    assert len(pair.s0) == 4
    assert niceldc.verify_nice(7, pair.s0, pair.s1)
    assert _nice_by_definition(7, set(pair.s0), pair.s1)
    assert not niceldc.verify_nice(7, [0], [0, 1, 3])
    assert niceldc.subgroup_2(7) == [1, 2, 4]


def test_code_roundtrip():
    code = niceldc.Code(7, 3)
    assert code.length == 343
    assert code.queries == 3
    for bits in itertools.product([0, 1], repeat=3):
        y = code.encode(list(bits))
        for i in range(3):
            for seed in range(5):
                bit, positions = code.decode(y, i, seed)
                assert bit == bits[i]
                assert len(positions) == 3
    with pytest.raises(ValueError):
        code.encode([0, 2, 1])


def test_code_statistics():
    code = niceldc.Code(7, 4)
    st = code.smoothness(0)
    assert st["flat"]
    assert st["t_size"] == 1372
    r = code.simulate(0.05, 2000, seed=1)
    assert r["rate"] <= r["bound"] + r["slack"]
    assert code.simulate(0.0, 200)["errors"] == 0


def test_search():
    records, summary = niceldc.search(3, 100000, threads=2)
    assert summary["odd_primes"] == 9591
    non_weil = [r["p"] for r in records if r["dep"] and not r["weil"]]
    assert non_weil == [73]
    again, _ = niceldc.search(3, 100000, threads=1)
    assert again == records
    with pytest.raises(ValueError):
        niceldc.search(3, 100, method="brute")


def test_bounds_and_converse():
    (row,) = niceldc.eval_bounds(23, 23)
    assert row["largest"] == 178481
    assert row["verdicts"]["P > 2^(3t/4)"]
    assert niceldc.largest_prime_factor_mersenne(23) == 178481
    assert niceldc.converse_check([(73, 9), (599479, 33)]) == []
    assert niceldc.converse_check([(73, 11)])


def test_ldc_demo():
    rep = niceldc.ldc_demo(7, 4, [0.0, 0.03], 500, 1)
    assert rep["length"] == 2401
    assert rep["roundtrip_ok"]
    assert rep["rows"][0]["errors"] == 0
    with pytest.raises(niceldc.NotFoundError):
        niceldc.ldc_demo(13264529, 2, [0.0], 10, 0)
