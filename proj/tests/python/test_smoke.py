import math
import random

import pytest

import pulse_etl as pe


def example1_model(load=5.0):
    b = -0.01
    return pe.ContinuousModel(-0.01, b, b * load, 1e-4)


def test_kappa():
    assert math.isclose(pe.kappa(0.05, 2000, 1.0), 0.0661968778, rel_tol=1e-9)
    with pytest.raises(ValueError):
        pe.kappa(1.5, 2000, 1.0)


def test_plan_pulse():
    cmd = pe.plan_pulse(example1_model(), 0.02, pe.ActuatorLimits(100.0))
    assert abs(cmd.duration - 0.0190458052) < 1e-9
    end = pe.propagate_noiseless(example1_model(), 0.02, cmd.amplitude, cmd.duration)
    assert abs(end) < 1e-12


def test_insufficient_authority():
    weak = pe.ContinuousModel(-1.0, 1.0, 5.0, 0.0)
    with pytest.raises(pe.InsufficientAuthority):
        pe.plan_pulse(weak, 0.02, pe.ActuatorLimits(1.0))


def test_small_monte_carlo():
    e = pe.estimate_expected_tau(pe.ContinuousModel(-0.01, -0.01, -0.05, 0.0), 0.02, m_sim=10)
    assert abs(e.mean - 0.401) < 1e-9


def test_sysid_round_trip():
    truth = pe.ContinuousModel(-0.5, 1.2, 0.3, 0.0)
    dt = 1e-3
    disc = pe.discretize(truth, dt)
    rng = random.Random(4)
    xs, us, nxt = [], [], []
    x = 0.0
    for k in range(3000):
        u = rng.choice([-1.0, 0.0, 1.0]) if k % 50 == 0 else us[-1]
        x_next = pe.step(disc, x, u, 0.0)
        xs.append(x)
        us.append(u)
        nxt.append(x_next)
        x = x_next
    est = pe.to_continuous(pe.least_squares_fit(xs, us, nxt, dt), dt)
    assert math.isclose(est.a, truth.a, rel_tol=1e-8)
    assert math.isclose(est.b, truth.b, rel_tol=1e-8)
    assert math.isclose(est.eps_eff, truth.eps_eff, rel_tol=1e-8)


SCENARIO = """
truth.a = -0.01
truth.b = -0.01
truth.eps = 5
truth.q = 1e-4
truth.entry_mode = input_side
actuator.u_max = 100
learn.N = 50
learn.M = 200
sim.horizon_events = 40
seed = 3
"""


def test_run_scenario_from_text():
    scenario = pe.parse_scenario(SCENARIO)
    log = pe.run_scenario(scenario)
    assert len(log.rows) == 40
    assert [r.event_index for r in log.rows] == list(range(1, 41))
    assert all(0.0 < r.tau_s <= 1.0 for r in log.rows)
    csv = log.to_csv()
    assert csv.splitlines()[0].startswith("event_index,t_s,x_trigger")
    assert csv == pe.run_scenario(scenario).to_csv()


def test_bad_scenario():
    with pytest.raises(pe.ConfigError):
        pe.parse_scenario("truth.a = -1\nnot a key = 2\n")
