import math

import pytest

import addisc


def test_generate_and_spec():
    assert addisc.generate(addisc.spec("rudin_shapiro"), 6)["terms"] == [0, 1, 2, 4, 5, 7]
    assert addisc.generate(addisc.spec("floor_power", c=1.5), 5)["terms"] == [1, 2, 5, 8, 11]
    sq = addisc.generate(addisc.spec("polynomial", coefficients=[25, -10, 1]), 3)
    assert sq["first_index"] == 5 and sq["terms"] == [0, 1, 4]
    assert addisc.normalize_spec({"family": "kronecker"}) == {"family": "kronecker", "params": {}}
    assert addisc.predicted_tau(addisc.spec("floor_power", c=1.2)) == pytest.approx(0.1)
    assert addisc.is_convex([1, 4, 9, 16])


def test_energy_backends_agree():
    terms = [0, 1, 2, 4]
    assert addisc.energy_bruteforce(terms) == 36
    assert addisc.energy_histogram(terms) == 36
    assert addisc.energy_convolution(terms) == 36
    assert addisc.difference_histogram(terms) == {0: 4, 1: 2, 2: 2, 3: 1, 4: 1}
    n = 1000
    assert addisc.energy_convolution(list(range(1, n + 1))) == (2 * n**3 + n) // 3


def test_large_energy_is_a_python_int():
    terms = addisc.generate(addisc.spec("rudin_shapiro"), 1 << 12)["terms"]
    e = addisc.energy_convolution(terms)
    assert isinstance(e, int) and e == addisc.energy_histogram(terms)


def test_representation_count():
    assert addisc.representation_count([0, 0, 1], 10, 3) == 1
    assert addisc.representation_count([0, 0, 1], 10, 4, "bruteforce") == 0
    with pytest.raises(ValueError):
        addisc.representation_count([0, 0, 1], 10, 3, "guess")


def test_discrepancy():
    assert addisc.star_discrepancy([0.25, 0.75]) == 0.25
    assert addisc.fractional_parts([1, 2, 3], 0.5) == [0.5, 0.0, 0.5]
    g = addisc.golden_numerator()
    assert g == (math.isqrt(5 * 2**256) - 2**128) // 2
    assert addisc.fractional_parts([1], g)[0] == pytest.approx((math.sqrt(5) - 1) / 2)
    assert len(addisc.draw_alphas(1, 4)) == 4
    m = addisc.metric_experiment(addisc.spec("kronecker"), 5, 3, [64, 128, 256])
    assert [b["N"] for b in m["bands"]] == [64, 128, 256]


def test_expsum():
    est = addisc.l1_norm([0, 1], 1e-8)
    assert est["I"] == pytest.approx(4 / math.pi, rel=1e-8)
    assert est["fourth_moment"] == pytest.approx(6.0)
    assert abs(addisc.exp_sum([0, 1], 0.5)) < 1e-15
    assert addisc.holder_lower_bound(6, 2) == pytest.approx(math.sqrt(8 / 6))
    with pytest.raises(addisc.BudgetExceeded):
        addisc.l1_norm([0, 1], 1e-6, 1024)


def test_rudin_shapiro():
    assert [addisc.rs_sign(k) for k in range(8)] == [1, 1, 1, -1, 1, 1, -1, 1]
    assert addisc.rs_partial_sum(8) == 4
    assert abs(addisc.rs_polynomial_eval(1, 0.0) - 2) < 1e-15
    assert addisc.block_sum_identity_residual(8, 0.123) < 2**8 * 1e-12
    assert addisc.rs_verify(6, 5000)["passed"]


def test_errors_map_to_python_exceptions():
    with pytest.raises(ValueError):
        addisc.generate({"family": "nope"}, 3)
    with pytest.raises(addisc.InvalidArgument):
        addisc.star_discrepancy([])
    with pytest.raises(addisc.BudgetExceeded):
        addisc.generate(addisc.spec("lacunary", ratio=2.0), 100)
    assert issubclass(addisc.BudgetExceeded, addisc.Error)


def test_experiment_round_trip():
    cfg = addisc.default_config()
    cfg.update(spec=addisc.spec("thue_morse"), alphas=5, checkpoints=[64, 128, 256])
    first = addisc.run_experiment(cfg)
    assert first["schema_version"] == 1
    second = addisc.run_experiment(first["config"])
    first.pop("timestamps")
    second.pop("timestamps")
    assert first == second
    assert addisc.verify("discrepancy")["passed"]
