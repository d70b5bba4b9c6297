import numpy as np
import pytest

from linmax.coefficients import (
    CoefficientRealization,
    Deterministic,
    GeometricRandom,
    PowerDecay,
    c_plus_minus,
    check_moment_conditions,
    order_for_sup_tail,
    sample_coefficients,
    truncation_order,
)
from linmax.errors import NonSummableTailError, UnsupportedModelError


def test_deterministic_sampling_example():
    real = sample_coefficients(Deterministic((1.0, -1.0, 1.0)), 5, seed=0)
    assert real.head == (1.0, -1.0, 1.0, 0.0, 0.0, 0.0)
    assert real.tail_sup == 0.0 and real.tail_sum == 0.0
    assert real.tail_exact


def test_geometric_unit_amplitude_example():
    real = sample_coefficients(GeometricRandom(rho=0.5), 3, seed=0)
    assert real.head == (1.0, 0.5, 0.25, 0.125)
    # remaining geometric mass: sum_{j>3} 2^-j = 0.125
    assert real.tail_sum == pytest.approx(0.125)


def test_sampling_determinism_and_extension():
    model = GeometricRandom(rho=0.7, amplitude_lo=0.2, amplitude_hi=1.4)
    a = sample_coefficients(model, 10, seed=3)
    b = sample_coefficients(model, 10, seed=3)
    assert a.head == b.head
    # extending the order reuses the values already drawn
    c = sample_coefficients(model, 50, seed=3)
    assert c.head[:11] == a.head


def test_c_plus_minus_examples():
    real = sample_coefficients(Deterministic((1.0, -1.0, 1.0)), 2, seed=0)
    assert c_plus_minus(real) == (1.0, 1.0)
    real = sample_coefficients(Deterministic((-2.0, -0.5)), 1, seed=0)
    assert c_plus_minus(real) == (0.0, 2.0)


def test_c_plus_minus_geometric_tail_below_head():
    # head (1, .5, .25, .125), positive tail bounded by 0.0625 < 1
    real = sample_coefficients(GeometricRandom(rho=0.5), 3, seed=0)
    assert real.tail_pos_sup == pytest.approx(0.0625)
    # oracle: recompute from a much longer head
    extended = sample_coefficients(GeometricRandom(rho=0.5), 60, seed=0)
    brute = (max(max(extended.head), 0.0), max(max(-v for v in extended.head), 0.0))
    assert c_plus_minus(real) == brute == (1.0, 0.0)
    assert real.c_plus_minus_exact


def test_c_plus_minus_deterministic_brute_force():
    rng = np.random.default_rng(8)
    for _ in range(50):
        values = tuple(rng.uniform(-3, 3, size=rng.integers(1, 9)))
        real = sample_coefficients(Deterministic(values), max(len(values) - 1, 0), seed=0)
        cp, cm = c_plus_minus(real)
        vals = np.asarray(real.head)
        assert cp == max(float(np.max(vals)), 0.0)
        assert cm == max(float(np.max(-vals)), 0.0)


def test_c_plus_minus_geometric_extended_oracle_100_seeds():
    # positive amplitudes: value at order 60 equals the order-200
    # recomputation exactly (tail bound 1.5 * 0.5^201 is far below any head max)
    model = GeometricRandom(rho=0.5, amplitude_lo=0.5, amplitude_hi=1.5)
    for seed in range(100):
        real = sample_coefficients(model, 60, seed=seed)
        long = sample_coefficients(model, 200, seed=seed)
        cp_long = max(max(long.head), 0.0)
        cm_long = max(max(-v for v in long.head), 0.0)
        assert c_plus_minus(real) == (cp_long, cm_long)


def test_c_plus_minus_flagged_when_tail_decides():
    # all-but-zero head with a live positive tail bound: flagged inexact
    model = GeometricRandom(rho=0.5, amplitude_lo=0.0, amplitude_hi=1.0)
    real = sample_coefficients(model, 2, seed=1)
    shrunk = CoefficientRealization(
        head=(1e-12,), order=0,
        tail_sup=real.tail_sup, tail_sum=real.tail_sum,
        tail_pos_sup=0.25, tail_neg_sup=0.0, tail_exact=False,
        model=model, seed=1,
    )
    assert not shrunk.c_plus_minus_exact
    assert c_plus_minus(shrunk)[0] == 0.25


def test_condition_checker_ground_truth():
    rep = check_moment_conditions(Deterministic((1.0, 0.5, -0.25)), 1.5)
    assert rep.passes_delta_moment_sum and rep.passes_gamma_moment_sum and rep.passes_abs_moment_sum
    assert rep.sufficient

    rep = check_moment_conditions(PowerDecay(beta=0.9), 1.5)
    assert not rep.passes_abs_moment_sum
    assert not rep.sufficient
    assert "E|C_j|" in rep.explanation

    rep = check_moment_conditions(GeometricRandom(rho=0.5), 0.5)
    assert rep.passes_delta_moment_sum and rep.passes_gamma_moment_sum
    assert rep.sufficient
    assert 0.0 < rep.delta < 0.5
    assert 0.5 < rep.gamma < 1.0


def test_condition_checker_monotone_in_beta():
    alphas = (0.5, 1.0, 1.5, 2.5)
    betas = (0.3, 0.8, 1.1, 1.9, 3.0, 6.0)
    for alpha in alphas:
        for attr in ("passes_delta_moment_sum", "passes_gamma_moment_sum", "passes_abs_moment_sum"):
            flags = [getattr(check_moment_conditions(PowerDecay(beta=b), alpha), attr) for b in betas]
            # once a condition passes it stays passing for larger beta
            assert flags == sorted(flags)


def test_condition_checker_unsupported_family():
    with pytest.raises(UnsupportedModelError):
        check_moment_conditions("not a model", 1.0)


def test_truncation_order_geometric_example():
    q = truncation_order(GeometricRandom(rho=0.5), 1e-6)
    assert q == 20
    # oracle: direct partial summation of the sup envelope
    js = np.arange(0, 400)
    tail = lambda q: float(np.sum(0.5 ** js[js > q]))
    assert tail(20) <= 1e-6 < tail(19)


def test_truncation_order_deterministic():
    assert truncation_order(Deterministic((1.0, -1.0, 1.0)), 0.5) == 2
    assert truncation_order(Deterministic((1.0, -1.0, 1.0)), 1e-12) == 2
    # trailing zeros are not part of the support
    assert truncation_order(Deterministic((1.0, 0.5, 0.0, 0.0)), 1e-9) == 1


def test_truncation_order_power_integral_bound():
    q = truncation_order(PowerDecay(beta=2.0), 0.1)
    assert q == 9
    # oracle: direct partial summation to 1e6 terms confirms the bound is safe
    js = np.arange(10, 10 ** 6)
    assert float(np.sum((js + 1.0) ** -2.0)) <= 0.1


def test_truncation_order_non_summable():
    with pytest.raises(NonSummableTailError):
        truncation_order(PowerDecay(beta=0.9), 0.1)
    with pytest.raises(ValueError):
        truncation_order(GeometricRandom(rho=0.5), 0.0)


def test_order_for_sup_tail():
    model = GeometricRandom(rho=0.5)
    q = order_for_sup_tail(model, 1e-9)
    assert 0.5 ** (q + 1) <= 1e-9 < 0.5 ** q
    # power models have finite sup-tail orders even when the sum diverges
    q = order_for_sup_tail(PowerDecay(beta=0.9), 1e-3)
    assert (q + 2.0) ** -0.9 <= 1e-3


def test_model_validation():
    with pytest.raises(ValueError):
        GeometricRandom(rho=1.0)
    with pytest.raises(ValueError):
        GeometricRandom(rho=0.5, amplitude_lo=-1.0)
    with pytest.raises(ValueError):
        GeometricRandom(rho=0.5, sign_pattern=(2,))
    with pytest.raises(ValueError):
        PowerDecay(beta=0.0)
    with pytest.raises(ValueError):
        sample_coefficients(Deterministic((1.0,)), -1, seed=0)


def test_sign_pattern_and_negative_rho_tails():
    real = sample_coefficients(GeometricRandom(rho=-0.5), 3, seed=0)
    assert real.head == (1.0, -0.5, 0.25, -0.125)
    assert real.tail_pos_sup > 0 and real.tail_neg_sup > 0
    # alternating pattern against alternating rho gives a constant sign
    model = GeometricRandom(rho=-0.5, sign_pattern=(1, -1))
    real = sample_coefficients(model, 3, seed=0)
    assert real.head == (1.0, 0.5, 0.25, 0.125)
    assert real.tail_pos_sup > 0 and real.tail_neg_sup == 0.0
