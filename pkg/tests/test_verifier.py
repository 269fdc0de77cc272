from fractions import Fraction

import numpy as np
import pytest

from hotplug.model import DemandScenario, SystemParams, Transmission, generate_library
from hotplug.schemes import make_scheme
from hotplug.verifier import (PlacedScheme, ScenarioCapExceeded, decodable, exhaustive_report,
                              generic_linear_decode, simulate)


def test_decode_from_verbatim_cache():
    p = SystemParams(2, 2, 2, B=3, q=5)
    lib = generate_library(p, 1)
    rows = np.hstack([np.eye(3, dtype=int), np.zeros((3, 3), dtype=int)])
    got = generic_linear_decode(rows, lib.file(1), np.zeros((0, 6)), [], 1, p)
    assert np.array_equal(got, lib.file(1))
    assert decodable(rows, np.zeros((0, 6)), 1, p)


def test_empty_everything_is_undecodable():
    p = SystemParams(2, 2, 2, B=2, q=2)
    assert generic_linear_decode(np.zeros((0, 4)), [], np.zeros((0, 4)), [], 1, p) is None
    assert not decodable(np.zeros((0, 4)), np.zeros((0, 4)), 2, p)


def test_dimension_mismatch():
    p = SystemParams(2, 2, 2, B=2, q=2)
    with pytest.raises(ValueError):
        generic_linear_decode(np.eye(4), [1, 0], np.zeros((0, 4)), [], 1, p)


def test_new1_fixture_user_two():
    s = make_scheme("new1", 3, 2, 2, t=1)
    lib = generate_library(s.params, 4)
    res = simulate(s, DemandScenario((2, 3), (2, 1)), lib)
    u2 = res.users[0]
    assert u2.user == 2 and np.array_equal(u2.generic, lib.file(2))
    assert np.array_equal(u2.specific, u2.generic)


def test_simulate_single_packet_and_whole_file():
    s = make_scheme("new1", 3, 2, 2, t=1)
    res = simulate(s, DemandScenario((1, 3), (1, 1)), generate_library(s.params, 0))
    assert res.ok and res.load == Fraction(1, 2) and len(res.transmission.packets) == 1
    s2 = make_scheme("new2", 3, 2, 2)
    res = simulate(s2, DemandScenario((1, 2), (1, 1)), generate_library(s2.params, 0))
    assert res.ok and res.load == 1


def test_full_caches_send_nothing():
    for s in [make_scheme("base", 3, 2, 2, t=3), make_scheme("new1", 2, 2, 3, t=2)]:
        res = simulate(s, DemandScenario((1, 2), (1, 2)), generate_library(s.params, 0))
        assert res.ok and res.load == 0 and not res.transmission.packets


def test_library_params_must_match():
    s = make_scheme("new1", 3, 2, 2, t=1)
    with pytest.raises(ValueError):
        PlacedScheme(s, generate_library(s.params.with_(B=4), 0))


@pytest.mark.parametrize("name,t,load", [("new1", 1, Fraction(1, 2)), ("new2", None, 1),
                                         ("base", 1, 1), ("remark2", 1, Fraction(1, 2))])
def test_three_user_reports(name, t, load):
    rep = exhaustive_report(make_scheme(name, 3, 2, 2, t=t))
    assert rep.scenarios_checked == 12
    assert rep.match and rep.memory_match
    assert rep.worst_load == rep.formula_load == load
    assert rep.max_rank_load[2] == load


def test_load_never_exceeds_formula_and_attains_it_at_full_rank():
    rep = exhaustive_report(make_scheme("new1", 4, 3, 2, t=1))
    assert rep.match
    assert all(v <= rep.formula_load for v in rep.max_rank_load.values())
    assert rep.max_rank_load[2] == rep.formula_load


def test_report_deterministic():
    s = make_scheme("base", 4, 2, 3, t=2)
    a, b = exhaustive_report(s, seed=3), exhaustive_report(s, seed=3)
    assert a.summary() == b.summary() and a.decode_failures == b.decode_failures


def test_broken_delivery_is_reported():
    s = make_scheme("new1", 3, 2, 2, t=1)
    # an empty delivery leaves users unable to decode
    s.deliver = lambda sc: Transmission(s.params, ())
    rep = exhaustive_report(s)
    assert not rep.match and rep.decode_failures


def test_cap_and_sampling():
    s = make_scheme("new1", 6, 3, 3, t=1)
    with pytest.raises(ScenarioCapExceeded):
        exhaustive_report(s, cap=100)
    rep = exhaustive_report(s, sample=30, seed=1)
    assert rep.sampled and rep.match is None and rep.scenarios_checked == 30
    assert not rep.decode_failures and "(sampled)" in rep.summary()
