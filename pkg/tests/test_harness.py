import json
import sys
from pathlib import Path

import pytest

from rocketeval.briefs import render_task_brief
from rocketeval.flightsim import Environment
from rocketeval.harness import (CallableAgent, ScriptedAgent, Session,
                                SubprocessAgent, history_from_attempts,
                                render_prompt, replay_session, run_session,
                                scoreboard, select_best, session_filename)
from rocketeval.pipeline import TaskSpec, evaluate_source

AGENT_SCRIPT = str(Path(__file__).parent / "agents" / "fixed_agent.py")


def altitude_task(budget=3, mode="iterative") -> TaskSpec:
    return TaskSpec(challenge="target_altitude", environment=Environment(5.0, "E"),
                    target_apogee=3048.0, iteration_budget=budget,
                    sampling_mode=mode)


def landing_task(budget=2) -> TaskSpec:
    return TaskSpec(challenge="precision_landing", environment=Environment(5.0, "E"),
                    target_x=4000.0, target_y=4000.0, iteration_budget=budget)


# --- briefs -----------------------------------------------------------------

def test_altitude_brief_contains_target(catalog):
    brief = render_task_brief(altitude_task(), catalog)
    assert "**Target Apogee**: 3048.0 meters" in brief
    assert "5 m/s from E direction" in brief


def test_landing_brief_omits_apogee(catalog):
    brief = render_task_brief(landing_task(), catalog)
    assert "Target Apogee" not in brief
    assert "x=4000.0" in brief and "y=4000.0" in brief
    assert "landing_reward" in brief


def test_brief_embeds_motor_table_byte_identical(catalog):
    brief = render_task_brief(altitude_task(), catalog)
    assert catalog.motors_table_text.rstrip("\n") in brief


def test_brief_lists_materials_and_example(catalog):
    brief = render_task_brief(altitude_task(), catalog)
    for name in catalog.material_names:
        assert name in brief
    assert '"motor_choice": "CesaroniO5800"' in brief


def test_brief_scoring_listing_matches_challenge(catalog):
    alt = render_task_brief(altitude_task(), catalog)
    assert "distance_reward" in alt and "horz_distance_reward" in alt
    land = render_task_brief(landing_task(), catalog)
    assert "landing_error_percent" in land


# --- sessions -----------------------------------------------------------------

def test_scripted_session_three_identical_attempts(example_text):
    agent = ScriptedAgent([example_text], agent_id="fixed")
    session = run_session(altitude_task(3), agent)
    assert len(session.attempts) == 3
    totals = [a.reward.total for a in session.attempts]
    assert totals[0] == totals[1] == totals[2]
    assert session.best_attempt_index == 0


def test_best_of_n_takes_max(example_text):
    from rocketeval.optimizers import RandomDesignAgent
    agent = RandomDesignAgent(seed=11)
    session = run_session(altitude_task(10, mode="best_of_n"), agent, seed=11)
    totals = [a.reward.total for a in session.attempts]
    assert len(totals) == 10
    assert session.attempts[session.best_attempt_index].reward.total == max(totals)


def test_best_of_n_sends_empty_history(example_text):
    seen = []

    def fn(brief, history, task):
        seen.append(len(history))
        return example_text

    run_session(altitude_task(4, mode="best_of_n"), CallableAgent(fn))
    assert seen == [0, 0, 0, 0]


def test_iterative_history_monotone(example_text):
    seen = []

    def fn(brief, history, task):
        seen.append([h.raw_text for h in history])
        return f"attempt-{len(history)}\n" + example_text

    session = run_session(altitude_task(3), CallableAgent(fn))
    assert [len(h) for h in seen] == [0, 1, 2]
    # Prompt k contains exactly the outputs of attempts 0..k-1.
    assert seen[2][0].startswith("attempt-0")
    assert seen[2][1].startswith("attempt-1")
    prompt = render_prompt("BRIEF", history_from_attempts(session.attempts[:2]))
    assert "attempt-0" in prompt and "attempt-1" in prompt
    assert "attempt-2" not in prompt


def test_drc_failure_attempt_scores_zero_with_feedback(example_text):
    bad = json.loads(example_text)
    bad["aerodynamics"]["tail"]["top_radius"] = 0.05  # equal radii
    texts = [example_text, json.dumps(bad), example_text]
    session = run_session(altitude_task(3), ScriptedAgent(texts))
    failed = session.attempts[1]
    assert failed.reward.total == 0.0
    assert failed.reward.failure == "drc_failed"
    assert any(rule == "tail_radii_equal" for rule, _ in failed.feedback.drc_violations)
    assert "tail" in failed.feedback.rendered
    assert session.best_attempt_index in (0, 2)
    assert session.best_attempt_index == 0  # earliest tie wins


def test_malformed_output_recorded_with_parse_error():
    session = run_session(altitude_task(1), ScriptedAgent(["not a design"]))
    attempt = session.attempts[0]
    assert attempt.design is None
    assert attempt.reward.total == 0.0
    assert attempt.parse_error is not None
    assert attempt.feedback.parse_error in attempt.feedback.rendered


def test_feedback_contents_by_challenge(example_text):
    alt = run_session(altitude_task(1), ScriptedAgent([example_text]))
    fb = alt.attempts[0].feedback
    assert "apogee" in fb.metrics
    assert "landing_x" not in fb.metrics
    assert fb.metrics["structural_integrity"] == "PASSED"

    land = run_session(landing_task(1), ScriptedAgent([example_text]))
    fb = land.attempts[0].feedback
    assert "apogee" not in fb.metrics
    assert "landing_x" in fb.metrics and "landing_y" in fb.metrics


def test_session_persistence_round_trip(example_text, tmp_path):
    out = tmp_path / "session.json"
    session = run_session(altitude_task(2), ScriptedAgent([example_text]),
                          seed=7, out_path=out)
    loaded = Session.load(out)
    assert loaded.to_dict() == session.to_dict()
    assert loaded.to_json() == session.to_json()


def test_session_replay_reproduces_rewards(example_text, tmp_path):
    session = run_session(altitude_task(2), ScriptedAgent([example_text]))
    replayed = replay_session(session)
    for original, again in zip(session.attempts, replayed):
        assert again.reward.total == original.reward.total
        assert again.reward.components == original.reward.components


# --- subprocess agents -----------------------------------------------------------

def test_subprocess_agent_full_session(example_text):
    agent = SubprocessAgent([sys.executable, AGENT_SCRIPT], turn_timeout=60.0)
    try:
        session = run_session(altitude_task(2), agent)
    finally:
        agent.close()
    assert len(session.attempts) == 2
    assert session.truncated is None
    direct = evaluate_source(example_text, altitude_task(2))
    assert session.attempts[0].reward.total == direct.reward.total


def test_subprocess_agent_death_truncates_session():
    agent = SubprocessAgent([sys.executable, AGENT_SCRIPT, "--die-after", "1"],
                            turn_timeout=30.0)
    try:
        session = run_session(altitude_task(4), agent)
    finally:
        agent.close()
    assert len(session.attempts) == 1
    assert session.truncated is not None
    assert any(e["event"] == "session_truncated" for e in session.events)


def test_subprocess_garbage_output_still_recorded():
    agent = SubprocessAgent([sys.executable, AGENT_SCRIPT, "--garbage"],
                            turn_timeout=30.0)
    try:
        session = run_session(altitude_task(2), agent)
    finally:
        agent.close()
    assert len(session.attempts) == 2
    assert all(a.reward.total == 0.0 for a in session.attempts)
    assert session.truncated is None


# --- scoreboard --------------------------------------------------------------------

def test_scoreboard_single_session(example_text):
    session = run_session(altitude_task(2), ScriptedAgent([example_text], "a1"))
    board = scoreboard([session])
    row = board["agents"][0]
    best = session.attempts[session.best_attempt_index].reward.total
    assert row["agent_id"] == "a1"
    assert row["mean_best"] == best
    assert row["best"] == best
    assert len(row["mean_per_iteration"]) == 2


def test_scoreboard_mean_of_bests():
    def fake_session(agent_id, totals):
        task = altitude_task(len(totals))
        texts = ["junk"] * len(totals)
        s = run_session(task, ScriptedAgent(texts, agent_id))
        # Overwrite rewards with synthetic totals for arithmetic checking.
        for attempt, value in zip(s.attempts, totals):
            object.__setattr__(attempt.reward, "total", value)
        s.best_attempt_index = select_best(totals)
        return s

    board = scoreboard([fake_session("x", [0.1, 0.6]),
                        fake_session("x", [0.7, 0.2])])
    row = board["agents"][0]
    assert row["mean_best"] == pytest.approx(0.65)
    assert row["best"] == pytest.approx(0.7)
    assert row["mean_per_iteration"] == [pytest.approx(0.4), pytest.approx(0.4)]


def test_scoreboard_empty_input():
    assert scoreboard([]) == {"agents": []}


def test_scoreboard_ordering_deterministic(example_text):
    sessions = [run_session(altitude_task(1), ScriptedAgent([example_text], name))
                for name in ("zeta", "alpha", "mid")]
    board = scoreboard(sessions)
    assert [r["agent_id"] for r in board["agents"]] == ["alpha", "mid", "zeta"]


def test_session_filename_stable(example_text):
    session = run_session(altitude_task(1), ScriptedAgent([example_text], "a b/c"))
    name = session_filename(session)
    assert name == "session-a-b-c-target_altitude-seedx.json"
