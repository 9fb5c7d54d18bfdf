import pytest

from sumdiff import alt_parameterization, bound_report, ratio_claim


def test_exponents_at_reference_delta():
    rep = bound_report(1.0, 0.6, 0.2, 10**4)
    assert rep.f_delta == pytest.approx(0.4)
    assert rep.r_delta == pytest.approx(0.4)  # 2r = max(0.6, 0.8)
    assert rep.C == 1.0


def test_p1_reference_value():
    rep = bound_report(1.0, 0.6, 0.2, 10**4)
    assert rep.P1 == pytest.approx(4 * 10 ** (-1.6), rel=1e-12)
    assert rep.P2 == pytest.approx(10 ** (4 * -0.2), rel=1e-12)


def test_exponent_crossover_at_two_thirds():
    rep = bound_report(1.0, 2 / 3, 0.1, 100)
    assert 3 - 4 * rep.delta == pytest.approx(5 - 7 * rep.delta)
    assert rep.r_delta == pytest.approx((3 - 4 * rep.delta) / 2)


def test_cardinality_interval():
    rep = bound_report(2.0, 0.6, 0.2, 10**4)
    center = 2.0 * 10 ** (4 * 0.4)
    assert rep.card_interval == (pytest.approx(center / 2), pytest.approx(1.5 * center))
    assert rep.card_interval[0] < rep.card_interval[1]


def test_collision_quantities():
    rep = bound_report(0.5, 0.6, 0.2, 10**4)
    assert rep.C == 1.0  # max(1, c)
    assert rep.EY_bound == pytest.approx(2 * 10 ** (4 * 0.6))
    assert rep.sigmaY_bound == pytest.approx(7 * 10 ** (4 * 0.4))
    assert rep.Y_threshold == pytest.approx(9 * 10 ** (4 * 0.6))


def test_parameter_validation():
    with pytest.raises(ValueError):
        bound_report(1.0, 0.5, 0.1, 100)  # delta boundary
    with pytest.raises(ValueError):
        bound_report(1.0, 1.0, 0.1, 100)
    with pytest.raises(ValueError):
        bound_report(-1.0, 0.6, 0.1, 100)
    with pytest.raises(ValueError):
        bound_report(1.0, 0.6, 0.4, 100)  # g_exp = f(delta)
    with pytest.raises(ValueError):
        bound_report(1.0, 0.8, 0.6, 100)  # g_exp > f(0.8) = 0.5
    bound_report(1.0, 0.8, 0.3, 100)  # fine: 0.3 < 0.5


def test_ratio_claim_reference_value():
    claim = ratio_claim(bound_report(1.0, 0.6, 0.2, 10**6))
    assert claim.ratio_center == 2.0
    assert claim.deviation_scale == pytest.approx(10 ** (6 * -0.2))
    assert claim.failure_prob_bound == pytest.approx(4 * 10 ** (-2.4) + 10 ** (-1.2), rel=1e-12)
    assert claim.failure_prob_bound == pytest.approx(0.0790, abs=5e-4)


def test_ratio_claim_trivialises_as_g_exp_approaches_f():
    claim = ratio_claim(bound_report(1.0, 0.6, 0.4 - 1e-12, 10**6))
    assert claim.failure_prob_bound == pytest.approx(4 * 10 ** (-2.4) + 1.0, rel=1e-6)


def test_accuracy_exponent_floor():
    # f(delta) >= 1/4 throughout (1/2, 1), approaching 1/4 near 1/2
    for delta in [0.5001, 0.55, 0.6, 2 / 3, 0.75, 0.9, 0.9999]:
        rep = bound_report(1.0, delta, 0.01, 100)
        assert rep.f_delta >= 0.25
    assert bound_report(1.0, 0.5001, 0.01, 100).f_delta == pytest.approx(0.25, abs=1e-3)


def test_bounds_decrease_in_n():
    small = bound_report(1.0, 0.6, 0.2, 10**3)
    large = bound_report(1.0, 0.6, 0.2, 10**6)
    assert large.P1 < small.P1
    assert large.P2 < small.P2


def test_alt_parameterization_valid_range():
    alt = alt_parameterization(1.0, 0.6, 10**4)
    assert not alt.trivial and not alt.sidon_regime
    assert alt.P2 == pytest.approx(10 ** (4 * -0.4))  # exponent 6 - 4.8 - 0.8
    assert alt.Y_threshold == pytest.approx(9 * 10 ** (4 * 0.6))


def test_alt_parameterization_trivial_and_sidon():
    at_cutoff = alt_parameterization(1.0, 0.75, 10**4)
    assert at_cutoff.trivial and not at_cutoff.sidon_regime
    beyond = alt_parameterization(1.0, 0.8, 10**4)
    assert beyond.trivial and beyond.sidon_regime
    assert "Sidon" in beyond.note


def test_alt_parameterization_validation():
    with pytest.raises(ValueError):
        alt_parameterization(1.0, 0.4, 100)
    with pytest.raises(ValueError):
        alt_parameterization(0.0, 0.6, 100)
