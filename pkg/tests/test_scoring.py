import math

import pytest
from hypothesis import given, strategies as st

from rocketeval.flightsim import FlightOutcome
from rocketeval.harness import select_best
from rocketeval.scoring import (ALTITUDE_CHALLENGE, LANDING_CHALLENGE,
                                AltitudeChallengeSpec, LandingChallengeSpec,
                                RewardBreakdown, render_percentage_score,
                                score_altitude, score_landing, score_outcome,
                                zero_breakdown)


def outcome(apogee=0.0, landing_x=0.0, landing_y=0.0, impact=0.0,
            structural_failure=False, cost=0.0, failure=None) -> FlightOutcome:
    return FlightOutcome(
        apogee=apogee, apogee_time=0.0, landing_x=landing_x, landing_y=landing_y,
        impact_velocity=impact,
        horizontal_distance=math.hypot(landing_x, landing_y),
        flight_time=0.0, burnout_mass=1.0, max_dynamic_pressure=0.0,
        max_q_state=None, structural_failure=structural_failure,
        total_cost=cost, failure=failure)


ALT = AltitudeChallengeSpec(target_apogee=3048.0)
LAND = LandingChallengeSpec(target_x=4000.0, target_y=4000.0)


# --- altitude challenge -------------------------------------------------------

def test_perfect_altitude_outcome_scores_exactly_one():
    r = score_altitude(outcome(apogee=3048.0), ALT)
    assert all(v == 1.0 for v in r.components.values())
    assert r.total == 1.0


def test_half_apogee_gives_half_distance_reward():
    r = score_altitude(outcome(apogee=1524.0), ALT)
    assert r.components["distance_reward"] == pytest.approx(0.5, abs=1e-12)


def test_impact_at_limit_zeroes_safety_reward():
    r = score_altitude(outcome(apogee=3048.0, impact=25.0), ALT)
    assert r.components["impact_reward"] == 0.0


def test_structural_failure_costs_its_weight():
    r = score_altitude(outcome(apogee=3048.0, structural_failure=True), ALT)
    assert r.components["structural_failure_reward"] == 0.0
    assert r.total == pytest.approx(0.9, abs=1e-12)


def test_overshoot_distance_clamps_to_zero():
    r = score_altitude(outcome(apogee=3.0 * 3048.0), ALT)
    assert r.components["distance_reward"] == 0.0


def test_drift_reward_scale():
    # max horizontal distance = 0.3 x target apogee
    r = score_altitude(outcome(apogee=3048.0, landing_x=3048.0 * 0.3), ALT)
    assert r.components["horz_distance_reward"] == pytest.approx(0.0, abs=1e-12)


def test_cost_reward_linear():
    r = score_altitude(outcome(apogee=3048.0, cost=500.0), ALT)
    assert r.components["cost_reward"] == pytest.approx(0.5, abs=1e-12)
    r = score_altitude(outcome(apogee=3048.0, cost=2000.0), ALT)
    assert r.components["cost_reward"] == 0.0


# --- landing challenge ----------------------------------------------------------

def test_exact_landing_scores_full_component():
    r = score_landing(outcome(landing_x=4000.0, landing_y=4000.0), LAND)
    assert r.components["landing_reward"] == 1.0


def test_landing_at_pad_zeroes_component():
    r = score_landing(outcome(landing_x=0.0, landing_y=0.0), LAND)
    assert LAND.target_distance == pytest.approx(5656.854249, abs=1e-6)
    assert r.components["landing_reward"] == 0.0


def test_perfect_landing_outcome_totals_exactly_point_nine():
    r = score_landing(outcome(landing_x=4000.0, landing_y=4000.0), LAND)
    assert all(v == 1.0 for v in r.components.values())
    assert r.total == 0.9


def test_weights_sum_exactly():
    assert math.fsum(ALT.weights) == 1.0
    assert math.fsum(LAND.weights) == pytest.approx(0.9, abs=1e-15)


# --- shared behavior -------------------------------------------------------------

def test_failed_simulation_scores_zero():
    r = score_outcome(outcome(apogee=3000.0, failure="timeout"), ALT)
    assert r.total == 0.0
    assert r.failure == "timeout"
    assert all(v == 0.0 for v in r.components.values())


def test_zero_breakdown_component_names():
    alt = zero_breakdown(ALTITUDE_CHALLENGE, "drc_failed")
    assert set(alt.components) == {"distance_reward", "structural_failure_reward",
                                   "horz_distance_reward", "cost_reward",
                                   "impact_reward"}
    land = zero_breakdown(LANDING_CHALLENGE, "drc_failed")
    assert set(land.components) == {"landing_reward", "structural_failure_reward",
                                    "cost_reward", "impact_reward"}


def test_render_percentage_score():
    assert render_percentage_score(
        RewardBreakdown("x", {}, 0.7657)) == 76.57
    assert render_percentage_score(RewardBreakdown("x", {}, 0.0)) == 0.0
    assert render_percentage_score(RewardBreakdown("x", {}, 0.956)) == 95.60


_outcomes = st.builds(
    outcome,
    apogee=st.floats(0.0, 50000.0),
    landing_x=st.floats(-50000.0, 50000.0),
    landing_y=st.floats(-50000.0, 50000.0),
    impact=st.floats(0.0, 500.0),
    structural_failure=st.booleans(),
    cost=st.floats(0.0, 100000.0),
)


@given(_outcomes)
def test_altitude_components_clamped(out):
    r = score_altitude(out, ALT)
    for value in r.components.values():
        assert 0.0 <= value <= 1.0
    assert 0.0 <= r.total <= 1.0


@given(_outcomes)
def test_landing_components_clamped(out):
    r = score_landing(out, LAND)
    for value in r.components.values():
        assert 0.0 <= value <= 1.0
    assert 0.0 <= r.total <= 0.9 + 1e-12


@given(_outcomes)
def test_totals_recombine_from_components(out):
    r = score_altitude(out, ALT)
    recombined = math.fsum(w * r.components[name] for w, name in zip(
        ALT.weights, ("distance_reward", "structural_failure_reward",
                      "horz_distance_reward", "cost_reward", "impact_reward")))
    assert abs(recombined - r.total) <= 1e-12
    rl = score_landing(out, LAND)
    recombined_l = math.fsum(w * rl.components[name] for w, name in zip(
        LAND.weights, ("landing_reward", "structural_failure_reward",
                       "cost_reward", "impact_reward")))
    assert abs(recombined_l - rl.total) <= 1e-12


@given(st.floats(0.0, 3.0), st.floats(0.0, 3.0))
def test_distance_reward_monotone_in_error(a, b):
    lo, hi = sorted((a, b))
    r_lo = score_altitude(outcome(apogee=3048.0 * (1.0 + lo)), ALT)
    r_hi = score_altitude(outcome(apogee=3048.0 * (1.0 + hi)), ALT)
    assert r_hi.components["distance_reward"] <= r_lo.components["distance_reward"] + 1e-12


@given(st.floats(0.0, 500.0), st.floats(0.0, 500.0))
def test_impact_reward_monotone(a, b):
    lo, hi = sorted((a, b))
    r_lo = score_altitude(outcome(apogee=3048.0, impact=lo), ALT)
    r_hi = score_altitude(outcome(apogee=3048.0, impact=hi), ALT)
    assert r_hi.components["impact_reward"] <= r_lo.components["impact_reward"] + 1e-12


@given(st.lists(st.floats(0.0, 1.0), min_size=1, max_size=20),
       st.floats(0.01, 100.0))
def test_argmax_scale_invariant(totals, scale):
    assert select_best(totals) == select_best([t * scale for t in totals])


def test_select_best_ties_go_to_earliest():
    assert select_best([0.5, 0.7, 0.7, 0.2]) == 1
