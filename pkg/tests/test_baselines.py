import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spoofrelay.baselines import Scheme, jamming_rate, passive_rate
from spoofrelay.channel import ChannelSet, project
from spoofrelay.oracle import random_instance
from spoofrelay.solver import solve


def inst(c2, a, e=1.0, ps=10.0, pe=2.0):
    return ChannelSet(math.sqrt(c2), [math.sqrt(a)], [math.sqrt(e), 0.0],
                      np.zeros((1, 2)), ps, pe)


def test_passive_decodable():
    cs = inst(1.0, 2.0)
    r = passive_rate(cs)
    assert r.scheme is Scheme.PASSIVE
    assert r.rate_bps_hz == pytest.approx(math.log2(11))
    assert r.jam_power_used == 0.0


def test_passive_too_weak():
    assert passive_rate(inst(1.0, 0.99)).rate_bps_hz == 0.0


def test_passive_boundary_counts():
    assert passive_rate(inst(1.0, 1.0)).rate_bps_hz == pytest.approx(math.log2(11))


def test_jamming_branch_no_jam():
    cs = inst(1.0, 2.0)
    r = jamming_rate(cs, project(cs))
    assert r.jam_power_used == 0.0
    assert r.rate_bps_hz == passive_rate(cs).rate_bps_hz


def test_jamming_branch_minimal_power():
    cs = inst(1.0, 0.5, e=1.0, ps=10.0, pe=2.0)
    r = jamming_rate(cs, project(cs))
    assert r.scheme is Scheme.JAMMING
    assert r.jam_power_used == pytest.approx(1.0)
    assert r.rate_bps_hz == pytest.approx(math.log2(1 + 0.5 * 10.0))


def test_jamming_branch_out_of_reach():
    cs = inst(1.0, 0.1, e=1.0, ps=10.0, pe=2.0)
    r = jamming_rate(cs, project(cs))
    assert r.rate_bps_hz == 0.0 and r.jam_power_used == 0.0


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 10**6))
def test_ordering_and_budget(seed):
    cs = random_instance(seed)
    pc = project(cs)
    p, j = passive_rate(cs), jamming_rate(cs, pc)
    assert 0.0 <= p.rate_bps_hz <= j.rate_bps_hz
    assert 0.0 <= j.jam_power_used <= cs.pe
    sol = solve(cs, pc)
    if sol.feasible:
        assert sol.rate_bps_hz >= j.rate_bps_hz - 1e-9
        if sol.case == 1 and cs.alpha > 1 * (1 + 1e-9):
            assert sol.rate_bps_hz > j.rate_bps_hz
        if sol.case == 3:
            assert j.rate_bps_hz == 0.0 and sol.rate_bps_hz > 0.0
