import numpy as np
import pytest

from linmax.innovations import TailLaw, norming_constant, sample_innovations, tail_prob


def test_tail_prob_examples():
    assert tail_prob(TailLaw(alpha=2.0, p=0.5), 10.0) == pytest.approx(0.01)
    assert tail_prob(TailLaw(alpha=1.5, p=0.5), 1.0) == 1.0
    assert tail_prob(TailLaw(alpha=1.0, p=0.5, scale=2.0), 4.0) == pytest.approx(0.5)


def test_tail_prob_saturates_below_scale():
    law = TailLaw(alpha=1.3, p=0.4, scale=2.0)
    assert tail_prob(law, 0.5) == 1.0
    assert tail_prob(law, 1.999) == 1.0


def test_tail_prob_monotone_nonincreasing():
    law = TailLaw(alpha=0.7, p=0.2, scale=0.5)
    xs = np.linspace(0.01, 50.0, 500)
    probs = tail_prob(law, xs)
    assert np.all(np.diff(probs) <= 0)


def test_tail_prob_domain_error():
    law = TailLaw(alpha=1.0, p=0.5)
    with pytest.raises(ValueError):
        tail_prob(law, 0.0)
    with pytest.raises(ValueError):
        tail_prob(law, -1.0)


def test_norming_constant_examples():
    assert norming_constant(TailLaw(alpha=2.0, p=0.5), 100) == pytest.approx(10.0)
    assert norming_constant(TailLaw(alpha=1.0, p=0.5), 1) == pytest.approx(1.0)
    assert norming_constant(TailLaw(alpha=0.5, p=0.5, scale=2.0), 16) == pytest.approx(512.0)


def test_norming_identity():
    for alpha in (0.4, 1.0, 1.7, 3.2):
        for n in (1, 10, 1234, 10 ** 6):
            law = TailLaw(alpha=alpha, p=0.3, scale=1.7)
            a_n = norming_constant(law, n)
            assert n * tail_prob(law, a_n) == pytest.approx(1.0, rel=1e-12)


def test_law_validation():
    with pytest.raises(ValueError):
        TailLaw(alpha=0.0, p=0.5)
    with pytest.raises(ValueError):
        TailLaw(alpha=1.0, p=1.5)
    with pytest.raises(ValueError):
        TailLaw(alpha=1.0, p=0.5, scale=0.0)
    with pytest.raises(ValueError):
        TailLaw(alpha=1.0, p=0.5, r=0.4)
    assert TailLaw(alpha=1.0, p=0.25).r == 0.75


def test_seeded_determinism():
    law = TailLaw(alpha=1.2, p=0.6)
    a = sample_innovations(law, 1000, seed=99)
    b = sample_innovations(law, 1000, seed=99)
    assert np.array_equal(a, b)
    c = sample_innovations(law, 1000, seed=100)
    assert not np.array_equal(a, c)


def test_all_positive_when_p_is_one():
    z = sample_innovations(TailLaw(alpha=1.0, p=1.0), 1000, seed=5)
    assert np.all(z > 0)
    z = sample_innovations(TailLaw(alpha=1.0, p=0.0), 1000, seed=5)
    assert np.all(z < 0)


def test_sign_fraction_binomial_band():
    # binomial sd at p=0.7, n=1e5 is 0.00145: the 0.01 band is ~7 sigma
    z = sample_innovations(TailLaw(alpha=1.5, p=0.7), 100000, seed=2024)
    assert abs(np.mean(z > 0) - 0.7) <= 0.01


def test_changing_p_preserves_magnitudes():
    law_a = TailLaw(alpha=1.5, p=0.3)
    law_b = TailLaw(alpha=1.5, p=0.9)
    za = sample_innovations(law_a, 5000, seed=77)
    zb = sample_innovations(law_b, 5000, seed=77)
    assert np.array_equal(np.abs(za), np.abs(zb))


def test_empirical_tail_frequency_within_four_sigma():
    law = TailLaw(alpha=1.5, p=0.5, scale=1.0)
    n = 100000
    z = np.abs(sample_innovations(law, n, seed=31))
    for x in (1.0, 1.5, 2.5, 5.0, 20.0):
        q = tail_prob(law, x)
        band = 4.0 * np.sqrt(q * (1 - q) / n)
        assert abs(np.mean(z > x) - q) <= band


def _hill_estimate(magnitudes, top_fraction=0.05):
    s = np.sort(magnitudes)
    k = int(top_fraction * s.size)
    top = s[-k:]
    threshold = s[-k - 1]
    return k / np.sum(np.log(top / threshold))


def test_hill_estimator_recovers_alpha():
    for alpha in (0.8, 1.5, 2.5):
        z = sample_innovations(TailLaw(alpha=alpha, p=0.5), 100000, seed=404)
        est = _hill_estimate(np.abs(z))
        assert abs(est - alpha) <= 0.1 * alpha


def test_count_validation():
    with pytest.raises(ValueError):
        sample_innovations(TailLaw(alpha=1.0, p=0.5), 0, seed=1)
