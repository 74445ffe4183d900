"""End-to-end evaluation of one design attempt against a task.

The same path is used by the CLI, the HTTP server, the session harness, and
the optimizers: parse the raw text, run the design rules, simulate, evaluate
structure and cost, score, and render the feedback an agent would see.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace

from .catalog import Catalog, default_catalog
from .design import (DesignParseError, DrcReport, RocketDesign, design_to_dict,
                     parse_design, run_drc)
from .flightsim import Environment, FlightOutcome, SimLimits, simulate
from .scoring import (ALTITUDE_CHALLENGE, LANDING_CHALLENGE,
                      AltitudeChallengeSpec, LandingChallengeSpec,
                      RewardBreakdown, render_percentage_score, score_outcome,
                      zero_breakdown)
from .structures import compute_cost, evaluate_structure

SAMPLING_ITERATIVE = "iterative"
SAMPLING_BEST_OF_N = "best_of_n"


@dataclass(frozen=True)
class TaskSpec:
    challenge: str                      # target_altitude | precision_landing
    environment: Environment
    target_apogee: float | None = None  # altitude challenge
    target_x: float | None = None       # landing challenge
    target_y: float | None = None
    iteration_budget: int = 10
    sampling_mode: str = SAMPLING_ITERATIVE
    include_breakdown: bool = True      # show the reward breakdown in feedback

    def __post_init__(self):
        if self.challenge not in (ALTITUDE_CHALLENGE, LANDING_CHALLENGE):
            raise ValueError(f"unknown challenge {self.challenge!r}")
        if self.sampling_mode not in (SAMPLING_ITERATIVE, SAMPLING_BEST_OF_N):
            raise ValueError(f"unknown sampling mode {self.sampling_mode!r}")
        if self.iteration_budget < 1:
            raise ValueError("iteration budget must be >= 1")
        if self.challenge == ALTITUDE_CHALLENGE and self.target_apogee is None:
            raise ValueError("altitude challenge needs target_apogee")
        if self.challenge == LANDING_CHALLENGE and (
                self.target_x is None or self.target_y is None):
            raise ValueError("landing challenge needs target_x and target_y")

    def challenge_spec(self) -> AltitudeChallengeSpec | LandingChallengeSpec:
        if self.challenge == ALTITUDE_CHALLENGE:
            return AltitudeChallengeSpec(target_apogee=self.target_apogee)
        return LandingChallengeSpec(target_x=self.target_x, target_y=self.target_y)

    def to_dict(self) -> dict:
        return {
            "challenge": self.challenge,
            "environment": self.environment.to_dict(),
            "target_apogee": self.target_apogee,
            "target_x": self.target_x,
            "target_y": self.target_y,
            "iteration_budget": self.iteration_budget,
            "sampling_mode": self.sampling_mode,
            "include_breakdown": self.include_breakdown,
        }

    @staticmethod
    def from_dict(d: dict) -> "TaskSpec":
        return TaskSpec(
            challenge=d["challenge"],
            environment=Environment.from_dict(d["environment"]),
            target_apogee=d.get("target_apogee"),
            target_x=d.get("target_x"),
            target_y=d.get("target_y"),
            iteration_budget=d.get("iteration_budget", 10),
            sampling_mode=d.get("sampling_mode", SAMPLING_ITERATIVE),
            include_breakdown=d.get("include_breakdown", True),
        )


@dataclass(frozen=True)
class FeedbackReport:
    metrics: dict
    drc_violations: tuple[tuple[str, str], ...]
    parse_error: str | None
    reward: dict | None
    rendered: str

    def to_dict(self) -> dict:
        return {
            "metrics": dict(self.metrics),
            "drc_violations": [list(v) for v in self.drc_violations],
            "parse_error": self.parse_error,
            "reward": self.reward,
            "rendered": self.rendered,
        }

    @staticmethod
    def from_dict(d: dict) -> "FeedbackReport":
        return FeedbackReport(
            metrics=d["metrics"],
            drc_violations=tuple(tuple(v) for v in d["drc_violations"]),
            parse_error=d.get("parse_error"),
            reward=d.get("reward"),
            rendered=d["rendered"],
        )


@dataclass(frozen=True)
class Attempt:
    index: int
    design_source: str
    design: RocketDesign | None
    parse_error: str | None
    drc: DrcReport | None
    outcome: FlightOutcome | None
    reward: RewardBreakdown
    feedback: FeedbackReport

    def to_dict(self) -> dict:
        return {
            "index": self.index,
            "design_source": self.design_source,
            "design": design_to_dict(self.design) if self.design else None,
            "parse_error": self.parse_error,
            "drc": self.drc.to_dict() if self.drc else None,
            "outcome": self.outcome.to_dict() if self.outcome else None,
            "reward": self.reward.to_dict(),
            "feedback": self.feedback.to_dict(),
        }

    @staticmethod
    def from_dict(d: dict) -> "Attempt":
        from .design import design_from_dict
        return Attempt(
            index=d["index"],
            design_source=d["design_source"],
            design=design_from_dict(d["design"]) if d.get("design") else None,
            parse_error=d.get("parse_error"),
            drc=DrcReport.from_dict(d["drc"]) if d.get("drc") else None,
            outcome=FlightOutcome.from_dict(d["outcome"]) if d.get("outcome") else None,
            reward=RewardBreakdown.from_dict(d["reward"]),
            feedback=FeedbackReport.from_dict(d["feedback"]),
        )


def evaluate_design(design: RocketDesign, task: TaskSpec,
                    catalog: Catalog | None = None,
                    limits: SimLimits | None = None,
                    ) -> tuple[DrcReport, FlightOutcome | None, RewardBreakdown]:
    """DRC, simulation, structures, cost, and score for a parsed design."""
    catalog = catalog or default_catalog()
    drc = run_drc(design, catalog)
    if not drc.passed:
        return drc, None, zero_breakdown(task.challenge, "drc_failed")
    outcome = simulate(design, task.environment, limits, catalog=catalog)
    if outcome.failure is None:
        stress = evaluate_structure(design, outcome.max_q_state, catalog)
        cost = compute_cost(design, catalog)
        outcome = replace(outcome, structural_failure=stress.failed,
                          total_cost=cost.total_cost)
    reward = score_outcome(outcome, task.challenge_spec())
    return drc, outcome, reward


def evaluate_source(source: str, task: TaskSpec, index: int = 0,
                    catalog: Catalog | None = None,
                    limits: SimLimits | None = None) -> Attempt:
    """Evaluate raw agent text. Unparseable text earns a zero reward and the
    parse error comes back as feedback."""
    catalog = catalog or default_catalog()
    design: RocketDesign | None = None
    parse_error: str | None = None
    drc: DrcReport | None = None
    outcome: FlightOutcome | None = None
    try:
        design = parse_design(source)
    except DesignParseError as e:
        parse_error = str(e)
        reward = zero_breakdown(task.challenge, "parse_failed")
    if design is not None:
        drc, outcome, reward = evaluate_design(design, task, catalog, limits)
    feedback = build_feedback(task, parse_error, drc, outcome, reward)
    return Attempt(
        index=index,
        design_source=source,
        design=design,
        parse_error=parse_error,
        drc=drc,
        outcome=outcome,
        reward=reward,
        feedback=feedback,
    )


def build_feedback(task: TaskSpec, parse_error: str | None,
                   drc: DrcReport | None, outcome: FlightOutcome | None,
                   reward: RewardBreakdown) -> FeedbackReport:
    """Challenge-specific metrics plus everything the agent should learn from."""
    metrics: dict = {}
    lines: list[str] = ["## Simulation Results"]

    if parse_error is not None:
        lines.append(f"- Design could not be parsed: {parse_error}")
    elif drc is not None and not drc.passed:
        lines.append("- Design rule checks FAILED; the design was not simulated:")
        for v in drc.violations:
            lines.append(f"    - [{v.rule_id}] {v.message}")
    elif outcome is not None and outcome.failure is not None:
        lines.append(f"- Simulation failed: {outcome.failure}"
                     + (f" ({outcome.notes})" if outcome.notes else ""))
    elif outcome is not None:
        structural = "FAILED" if outcome.structural_failure else "PASSED"
        cost = outcome.total_cost if outcome.total_cost is not None else 0.0
        if task.challenge == ALTITUDE_CHALLENGE:
            metrics["apogee"] = outcome.apogee
            metrics["structural_integrity"] = structural
            metrics["total_cost"] = cost
            lines.append(f"- Apogee: {outcome.apogee:.2f} m "
                         f"(target: {task.target_apogee:.2f} m)")
        else:
            metrics["landing_x"] = outcome.landing_x
            metrics["landing_y"] = outcome.landing_y
            metrics["structural_integrity"] = structural
            metrics["total_cost"] = cost
            lines.append(f"- Landing position: x={outcome.landing_x:.2f} m, "
                         f"y={outcome.landing_y:.2f} m "
                         f"(target: x={task.target_x:.2f} m, y={task.target_y:.2f} m)")
        lines.append(f"- Structural integrity: {structural}")
        lines.append(f"- Total cost: ${cost:.2f}")

    reward_dict = reward.to_dict() if task.include_breakdown else None
    if task.include_breakdown:
        lines.append(f"- Reward breakdown: {json.dumps(reward.components)}")
    lines.append(f"- Score: {render_percentage_score(reward):.2f} / 100")
    return FeedbackReport(
        metrics=metrics,
        drc_violations=tuple((v.rule_id, v.message) for v in drc.violations) if drc else (),
        parse_error=parse_error,
        reward=reward_dict,
        rendered="\n".join(lines),
    )
