"""Challenge reward functions.

Two challenges are scored from a FlightOutcome:

* target altitude — how close the apogee came to the target, plus structural
  integrity, horizontal drift, cost, and landing-speed components;
* precision landing — distance from the target landing point, plus
  structural integrity, cost, and landing-speed components.

Component names and formulas follow the environment's published scoring code
verbatim so that transcripts and feedback reports line up with what agents
are shown. Totals are exact weighted sums (math.fsum).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .flightsim import FlightOutcome

ALTITUDE_CHALLENGE = "target_altitude"
LANDING_CHALLENGE = "precision_landing"

ALTITUDE_WEIGHTS = (0.5, 0.1, 0.1, 0.15, 0.15)   # distance, structural, drift, cost, impact
LANDING_WEIGHTS = (0.75, 0.05, 0.05, 0.05)       # landing, structural, cost, impact

MAX_COST_SCALE = 1000.0          # USD
MAX_IMPACT_VELOCITY = 25.0       # m/s
HORZ_SCALE_FACTOR = 0.3          # max horizontal drift = target apogee x this


@dataclass(frozen=True)
class AltitudeChallengeSpec:
    target_apogee: float
    weights: tuple[float, float, float, float, float] = ALTITUDE_WEIGHTS
    max_cost_scale: float = MAX_COST_SCALE
    max_impact_velocity: float = MAX_IMPACT_VELOCITY
    horz_scale_factor: float = HORZ_SCALE_FACTOR

    def __post_init__(self):
        if self.target_apogee <= 0.0:
            raise ValueError("target apogee must be > 0")
        if abs(math.fsum(self.weights) - 1.0) > 1e-12:
            raise ValueError("altitude challenge weights must sum to 1.0")


@dataclass(frozen=True)
class LandingChallengeSpec:
    target_x: float
    target_y: float
    weights: tuple[float, float, float, float] = LANDING_WEIGHTS
    max_cost_scale: float = MAX_COST_SCALE
    max_impact_velocity: float = MAX_IMPACT_VELOCITY

    def __post_init__(self):
        if math.hypot(self.target_x, self.target_y) <= 0.0:
            raise ValueError("landing target must not be the launch pad")

    @property
    def target_distance(self) -> float:
        return math.sqrt(self.target_x ** 2 + self.target_y ** 2)


@dataclass(frozen=True)
class RewardBreakdown:
    challenge: str
    components: dict[str, float]
    total: float
    failure: str | None = None

    def to_dict(self) -> dict:
        return {
            "challenge": self.challenge,
            "components": dict(self.components),
            "total": self.total,
            "failure": self.failure,
        }

    @staticmethod
    def from_dict(d: dict) -> "RewardBreakdown":
        return RewardBreakdown(
            challenge=d["challenge"],
            components=dict(d["components"]),
            total=d["total"],
            failure=d.get("failure"),
        )


def _common_components(outcome: FlightOutcome, max_cost: float,
                       max_impact: float) -> tuple[float, float, float]:
    structural_failure_reward = 0.0 if outcome.structural_failure else 1.0
    total_cost = outcome.total_cost if outcome.total_cost is not None else 0.0
    cost_reward = max(0.0, 1.0 - total_cost / max_cost)
    impact_reward = max(0.0, 1.0 - abs(outcome.impact_velocity) / max_impact)
    return structural_failure_reward, cost_reward, impact_reward


def score_altitude(outcome: FlightOutcome, spec: AltitudeChallengeSpec) -> RewardBreakdown:
    """Five-component reward for the target altitude challenge."""
    percent_difference = abs(outcome.apogee - spec.target_apogee) / spec.target_apogee
    distance_reward = max(0.0, 1.0 - percent_difference)

    structural_reward, cost_reward, impact_reward = _common_components(
        outcome, spec.max_cost_scale, spec.max_impact_velocity)

    max_horz_distance = spec.target_apogee * spec.horz_scale_factor
    horz_distance_reward = max(0.0, 1.0 - outcome.horizontal_distance / max_horz_distance)

    components = {
        "distance_reward": distance_reward,
        "structural_failure_reward": structural_reward,
        "horz_distance_reward": horz_distance_reward,
        "cost_reward": cost_reward,
        "impact_reward": impact_reward,
    }
    w = spec.weights
    total = math.fsum((
        w[0] * distance_reward,
        w[1] * structural_reward,
        w[2] * horz_distance_reward,
        w[3] * cost_reward,
        w[4] * impact_reward,
    ))
    return RewardBreakdown(challenge=ALTITUDE_CHALLENGE, components=components, total=total)


def score_landing(outcome: FlightOutcome, spec: LandingChallengeSpec) -> RewardBreakdown:
    """Four-component reward for the precision landing challenge."""
    landing_error = math.sqrt((outcome.landing_x - spec.target_x) ** 2
                              + (outcome.landing_y - spec.target_y) ** 2)
    landing_error_percent = landing_error / spec.target_distance
    landing_reward = max(0.0, 1.0 - landing_error_percent)

    structural_reward, cost_reward, impact_reward = _common_components(
        outcome, spec.max_cost_scale, spec.max_impact_velocity)

    components = {
        "landing_reward": landing_reward,
        "structural_failure_reward": structural_reward,
        "cost_reward": cost_reward,
        "impact_reward": impact_reward,
    }
    w = spec.weights
    total = math.fsum((
        w[0] * landing_reward,
        w[1] * structural_reward,
        w[2] * cost_reward,
        w[3] * impact_reward,
    ))
    return RewardBreakdown(challenge=LANDING_CHALLENGE, components=components, total=total)


def score_outcome(outcome: FlightOutcome,
                  spec: AltitudeChallengeSpec | LandingChallengeSpec) -> RewardBreakdown:
    """Score any outcome; failed simulations earn a zero total."""
    if outcome.failure is not None:
        challenge = (ALTITUDE_CHALLENGE if isinstance(spec, AltitudeChallengeSpec)
                     else LANDING_CHALLENGE)
        return zero_breakdown(challenge, outcome.failure)
    if isinstance(spec, AltitudeChallengeSpec):
        return score_altitude(outcome, spec)
    return score_landing(outcome, spec)


def zero_breakdown(challenge: str, failure: str) -> RewardBreakdown:
    """The conservative floor for designs that never produced a valid flight."""
    if challenge == ALTITUDE_CHALLENGE:
        names = ("distance_reward", "structural_failure_reward",
                 "horz_distance_reward", "cost_reward", "impact_reward")
    else:
        names = ("landing_reward", "structural_failure_reward",
                 "cost_reward", "impact_reward")
    return RewardBreakdown(
        challenge=challenge,
        components={name: 0.0 for name in names},
        total=0.0,
        failure=failure,
    )


def render_percentage_score(breakdown: RewardBreakdown) -> float:
    """Report-friendly 0-100 score, rounded to two decimals."""
    return round(breakdown.total * 100.0, 2)
