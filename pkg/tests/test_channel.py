import dataclasses
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spoofrelay.channel import (SPEED_OF_LIGHT, ChannelSet, ConfigError, Scenario,
                                ZFInfeasibleError, free_space_gain, lift_precoder,
                                load_scenario, parse_config, project, scenario_from_mapping,
                                synthesize, ula_steering)


def base(**kw):
    args = dict(d_sd=1000.0, d_se=400.0, ps=1e10, pe=1e10)
    args.update(kw)
    return Scenario(**args)


# steering / gain -----------------------------------------------------------

def test_steering_broadside():
    a = ula_steering(0.0, 4)
    np.testing.assert_allclose(a, np.ones(4))
    assert np.vdot(a, a).real == pytest.approx(4.0)


def test_steering_endfire():
    np.testing.assert_allclose(ula_steering(math.pi / 2, 2), [1, -1], atol=1e-15)


@given(st.floats(-10, 10), st.integers(1, 12))
def test_steering_unit_modulus(theta, n):
    np.testing.assert_allclose(np.abs(ula_steering(theta, n)), 1.0, rtol=1e-14)


def test_free_space_gain_value():
    lam = SPEED_OF_LIGHT / 1.8e9
    assert lam == pytest.approx(0.16655, abs=5e-6)
    # by hand: 0.1665514 / (4 * pi * 1000)
    assert free_space_gain(1000.0, 1.8e9) == pytest.approx(1.3254e-5, rel=1e-4)


def test_free_space_gain_inverse_distance():
    assert free_space_gain(500.0, 1.8e9) == pytest.approx(2 * free_space_gain(1000.0, 1.8e9))
    assert free_space_gain(300.0, 2e9) / free_space_gain(600.0, 2e9) == 2.0


def test_free_space_gain_rejects_nonpositive():
    with pytest.raises(ValueError):
        free_space_gain(0.0, 1e9)


# scenario validation -------------------------------------------------------

@pytest.mark.parametrize("kw", [dict(d_se=1000.0), dict(d_sd=-1.0), dict(m_rx=0),
                                dict(n_tx=0), dict(ps=0.0), dict(pe=-1.0),
                                dict(gamma_gap=0.5)])
def test_scenario_rejects(kw):
    with pytest.raises(ConfigError):
        base(**kw)


def test_scenario_d_ed():
    assert base().d_ed == 600.0
    assert base(d_se=2800.0).d_ed == 1800.0


def test_reference_snr_constructor():
    sc = Scenario.from_reference_snr(400.0, 10.0, 3.0)
    assert sc.ps * free_space_gain(1000.0, 1.8e9) ** 2 == pytest.approx(10.0)
    assert sc.pe / sc.ps == pytest.approx(10 ** 0.3)


# synthesize ----------------------------------------------------------------

def test_alpha_ratio_single_antenna():
    cs = synthesize(base())
    assert cs.alpha == pytest.approx(6.25, rel=1e-12)


@settings(max_examples=50, deadline=None)
@given(st.floats(10.0, 5000.0), st.integers(0, 1000))
def test_power_ratio_law(d_se, seed):
    if abs(d_se - 1000.0) < 1e-6:
        return
    cs = synthesize(base(d_se=d_se), seed)
    assert cs.alpha == pytest.approx((1000.0 / d_se) ** 2, rel=1e-12)


def test_loop_channel_rank_one_and_null_space():
    cs = synthesize(base(m_rx=1, n_tx=2))
    assert cs.H_ee.shape == (1, 2)
    assert np.linalg.matrix_rank(cs.H_ee) == 1
    assert project(cs).r0 == 1


def test_shapes_multi_antenna():
    cs = synthesize(base(m_rx=3, n_tx=4))
    assert cs.h_se.shape == (3,) and cs.h_ed.shape == (4,) and cs.H_ee.shape == (3, 4)
    assert np.linalg.matrix_rank(cs.H_ee) == 1


@pytest.mark.parametrize("seed", [None, 0, 12345])
def test_synthesize_deterministic(seed):
    sc = base(m_rx=2, n_tx=3)
    assert synthesize(sc, seed).equals(synthesize(sc, seed))


def test_seed_changes_only_phases():
    sc = base(m_rx=2, n_tx=3)
    a, b = synthesize(sc, None), synthesize(sc, 7)
    assert not a.equals(b)
    assert a.hsd2 == pytest.approx(b.hsd2) and a.hse2 == pytest.approx(b.hse2)
    np.testing.assert_allclose(np.abs(a.h_ed), np.abs(b.h_ed))


def test_channel_arrays_read_only():
    cs = synthesize(base())
    with pytest.raises(ValueError):
        cs.h_se[0] = 0


def test_channelset_shape_check():
    with pytest.raises(ValueError):
        ChannelSet(1.0, [1.0, 1.0], [1.0, 1.0], np.zeros((1, 2)), 1.0, 1.0)


# project / lift ------------------------------------------------------------

def test_project_zero_loop_is_identity_norm():
    cs = ChannelSet(1.0, [0.5], [1.0, 2j], np.zeros((1, 2)), 1.0, 1.0)
    pc = project(cs)
    assert pc.r0 == 2
    assert pc.hed_hat2 == pytest.approx(5.0)


def test_project_full_rank_infeasible():
    rng = np.random.default_rng(0)
    H = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    cs = ChannelSet(1.0, [1.0, 1.0], [1.0, 1.0], H, 1.0, 1.0)
    with pytest.raises(ZFInfeasibleError):
        project(cs)


def test_project_single_tx_antenna_infeasible():
    with pytest.raises(ZFInfeasibleError):
        project(synthesize(base(n_tx=1)))


def test_feasibility_rule_by_rank():
    rng = np.random.default_rng(5)
    for m, n, r in [(2, 3, 2), (3, 3, 3), (3, 2, 2), (1, 4, 1), (3, 4, 0)]:
        H = (rng.standard_normal((m, r)) @ rng.standard_normal((r, n))) if r \
            else np.zeros((m, n))
        cs = ChannelSet(1.0, np.ones(m), np.ones(n), H, 1.0, 1.0)
        if n > r:
            assert project(cs).r0 == n - r
        else:
            with pytest.raises(ZFInfeasibleError):
                project(cs)


def test_projection_contracts():
    rng = np.random.default_rng(9)
    for _ in range(50):
        u, v = rng.standard_normal(1) + 0j, rng.standard_normal(2) + 1j * rng.standard_normal(2)
        h_ed = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        cs = ChannelSet(1.0, [1.0], h_ed, np.outer(u, v.conj()), 1.0, 1.0)
        pc = project(cs)
        assert np.linalg.norm(pc.h_ed_hat) <= np.linalg.norm(h_ed) * (1 + 1e-12)
        np.testing.assert_allclose(pc.V0.conj().T @ pc.V0, np.eye(pc.r0), atol=1e-12)


def test_lift_zero():
    pc = project(synthesize(base(m_rx=2, n_tx=3)))
    assert np.all(lift_precoder(pc, np.zeros((pc.r0, 2))) == 0)


def test_lift_isometry_and_nulling():
    cs = synthesize(base(m_rx=2, n_tx=4), 3)
    pc = project(cs)
    rng = np.random.default_rng(1)
    for _ in range(20):
        W = rng.standard_normal((pc.r0, 2)) + 1j * rng.standard_normal((pc.r0, 2))
        Wh = lift_precoder(pc, W)
        assert np.linalg.norm(Wh) == pytest.approx(np.linalg.norm(W), abs=1e-12)
        assert np.linalg.norm(cs.H_ee @ Wh) <= 1e-10 * np.linalg.norm(cs.H_ee) * np.linalg.norm(W)
        a = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        assert np.linalg.norm(Wh @ a) == pytest.approx(np.linalg.norm(W @ a), rel=1e-12)


def test_lift_dimension_mismatch():
    pc = project(synthesize(base(m_rx=1, n_tx=3)))
    with pytest.raises(ValueError):
        lift_precoder(pc, np.zeros((pc.r0 + 1, 1)))


# config --------------------------------------------------------------------

CFG = """
# comment line
d_sd_m = 1000
d_se_m = 400      # inline comment
freq_hz = 1.8e9
m_rx = 1
n_tx = 2
ps_db = 100
pe_db: 103
seed = 5
"""


def test_parse_and_build():
    sc, seed = scenario_from_mapping(parse_config(CFG))
    assert seed == 5
    assert sc.d_se == 400.0 and sc.m_rx == 1 and sc.n_tx == 2
    assert sc.ps == pytest.approx(1e10) and sc.pe == pytest.approx(10 ** 10.3)
    assert sc.gamma_gap == 1.0


def test_gap_key():
    sc, seed = scenario_from_mapping(parse_config(CFG + "gamma_gap_db = 3\n"))
    assert sc.gamma_gap == pytest.approx(10 ** 0.3)


@pytest.mark.parametrize("text", [CFG + "bogus = 1\n", CFG.replace("n_tx = 2", ""),
                                  CFG + "d_sd_m = 2\n", CFG + "just words\n",
                                  CFG.replace("m_rx = 1", "m_rx = x")])
def test_bad_configs(text):
    with pytest.raises(ConfigError):
        scenario_from_mapping(parse_config(text))


def test_load_scenario_missing_file(tmp_path):
    with pytest.raises(ConfigError):
        load_scenario(tmp_path / "nope.cfg")


def test_load_scenario_roundtrip(tmp_path):
    p = tmp_path / "s.cfg"
    p.write_text(CFG)
    sc, seed = load_scenario(p)
    assert dataclasses.asdict(sc) == dataclasses.asdict(scenario_from_mapping(parse_config(CFG))[0])
