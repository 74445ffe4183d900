"""Rocket design evaluation environment.

Parameterized rocket configurations, design rule checks, point-mass flight
simulation, structural and cost evaluation, challenge scoring, an agent
evaluation harness, and derivative-free optimizer baselines.
"""

from .catalog import (Catalog, MaterialSpec, MotorSpec, UnknownMaterialError,
                      UnknownMotorError, default_catalog, load_catalog,
                      lookup_material, lookup_motor)
from .design import (DesignParseError, DrcReport, RocketDesign, parse_design,
                     run_drc, serialize_design)
from .flightsim import (Environment, FlightOutcome, SimLimits, SimOverrides,
                        simulate, simulate_traced, thrust_at)
from .harness import (Session, run_session, replay_session, scoreboard,
                      select_best)
from .optimizers import DesignSpace, OptimizerConfig, optimize
from .pipeline import Attempt, TaskSpec, evaluate_design, evaluate_source
from .scoring import (AltitudeChallengeSpec, LandingChallengeSpec,
                      RewardBreakdown, render_percentage_score, score_altitude,
                      score_landing)
from .structures import CostBreakdown, StressReport, compute_cost, evaluate_structure

__version__ = "0.1.0"

__all__ = [
    "Attempt", "AltitudeChallengeSpec", "Catalog", "CostBreakdown",
    "DesignParseError", "DesignSpace", "DrcReport", "Environment",
    "FlightOutcome", "LandingChallengeSpec", "MaterialSpec", "MotorSpec",
    "OptimizerConfig", "RewardBreakdown", "RocketDesign", "Session",
    "SimLimits", "SimOverrides", "StressReport", "TaskSpec",
    "UnknownMaterialError", "UnknownMotorError", "compute_cost",
    "default_catalog", "evaluate_design", "evaluate_source",
    "evaluate_structure", "load_catalog", "lookup_material", "lookup_motor",
    "optimize", "parse_design", "render_percentage_score", "replay_session",
    "run_drc", "run_session", "scoreboard", "score_altitude", "score_landing",
    "select_best", "serialize_design", "simulate", "simulate_traced",
    "thrust_at",
]
