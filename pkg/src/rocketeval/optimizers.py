"""Derivative-free search baselines over the design space.

Designs are encoded as flat vectors: one real slot per continuous field and
one index slot per categorical choice (motor, materials, nose kind, main
trigger kind). Decoding clamps to bounds and repairs the handful of couplings
the design rules demand (body radius above the motor radius, fin taper, tail
radii), so optimizers can wander freely without crashing the pipeline.

All algorithms evaluate through the regular attempt pipeline and emit a
Session in the same transcript format as agent runs.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .catalog import Catalog, default_catalog
from .design import (NOSE_KINDS, BodyTube, FinSet, LaunchSetup, NoseCone,
                     Parachute, ParachutePair, PointPayload, RocketDesign,
                     TailCone, design_to_dict)
from .flightsim import SimLimits
from .harness import Session, select_best
from .pipeline import Attempt, TaskSpec, evaluate_source

RANDOM_SEARCH = "random_search"
SIMULATED_ANNEALING = "simulated_annealing"
CROSS_ENTROPY = "cross_entropy"

_BODY_RADIUS_MARGIN = 0.005   # m above the motor radius after repair
_BODY_LENGTH_MARGIN = 0.02    # m above the motor length after repair
_TAIL_RADIUS_NUDGE = 0.002    # m applied when tail radii collide
_DEFAULT_TRIGGER_ALTITUDE = 300.0  # m, filler when the main deploys at apogee

# (name, low, high) for every searched continuous field.
CONTINUOUS_BOUNDS: tuple[tuple[str, float, float], ...] = (
    ("body_radius", 0.03, 0.25),
    ("body_length", 0.3, 3.0),
    ("body_thickness", 0.0015, 0.03),
    ("nose_length", 0.05, 1.0),
    ("fin_root_chord", 0.03, 0.6),
    ("fin_tip_chord", 0.01, 0.6),
    ("fin_span", 0.02, 0.5),
    ("fin_cant", 0.0, 5.0),
    ("fin_thickness", 0.0015, 0.03),
    ("tail_length", 0.05, 1.5),
    ("tail_top_radius", 0.01, 0.25),
    ("tail_bottom_radius", 0.01, 0.25),
    ("main_cd_s", 0.05, 40.0),
    ("drogue_cd_s", 0.01, 4.0),
    ("rail_length", 0.5, 8.0),
    ("inclination", 45.0, 90.0),
    ("heading", 0.0, 359.99),
    ("payload_mass", 0.0, 10.0),
    ("payload_position", -2.0, 2.0),
    ("main_trigger_altitude", 50.0, 2000.0),
)

_FIN_COUNTS = (2, 3, 4, 5, 6)
_TRIGGER_KINDS = ("apogee", "altitude")


class DesignSpace:
    """Vector codec for RocketDesign over a fixed catalog."""

    def __init__(self, catalog: Catalog | None = None):
        self.catalog = catalog or default_catalog()
        self.continuous = CONTINUOUS_BOUNDS
        self.categoricals: tuple[tuple[str, tuple], ...] = (
            ("motor", self.catalog.motor_names),
            ("body_material", self.catalog.material_names),
            ("nose_material", self.catalog.material_names),
            ("fin_material", self.catalog.material_names),
            ("tail_material", self.catalog.material_names),
            ("nose_kind", NOSE_KINDS),
            ("fin_count", _FIN_COUNTS),
            ("main_trigger_kind", _TRIGGER_KINDS),
        )
        self.n_continuous = len(self.continuous)
        self.n_categorical = len(self.categoricals)
        self.size = self.n_continuous + self.n_categorical
        self.lows = np.array([lo for _, lo, _ in self.continuous])
        self.highs = np.array([hi for _, _, hi in self.continuous])
        self.cat_sizes = np.array([len(opts) for _, opts in self.categoricals])

    # -- encoding ----------------------------------------------------------

    def encode(self, design: RocketDesign) -> np.ndarray:
        main = design.parachutes.main
        apogee_trigger = main.trigger == "apogee"
        cont = [
            design.body.radius,
            design.body.length,
            design.body.thickness,
            design.nose_cone.length,
            design.fins.root_chord,
            design.fins.tip_chord,
            design.fins.span,
            design.fins.cant_angle,
            design.fins.thickness,
            design.tail.length,
            design.tail.top_radius,
            design.tail.bottom_radius,
            main.cd_s,
            design.parachutes.drogue.cd_s,
            design.launch.rail_length,
            design.launch.inclination,
            design.launch.heading,
            design.payload.mass,
            design.payload.position,
            _DEFAULT_TRIGGER_ALTITUDE if apogee_trigger else float(main.trigger),
        ]
        cats = [
            self.catalog.motor_names.index(design.motor_choice),
            self.catalog.material_names.index(design.body.material),
            self.catalog.material_names.index(design.nose_cone.material),
            self.catalog.material_names.index(design.fins.material),
            self.catalog.material_names.index(design.tail.material),
            NOSE_KINDS.index(design.nose_cone.kind),
            _FIN_COUNTS.index(design.fins.number),
            0 if apogee_trigger else 1,
        ]
        return np.array(cont + cats, dtype=float)

    def _cat_index(self, vector: np.ndarray, slot: int) -> int:
        raw = vector[self.n_continuous + slot]
        idx = int(round(raw)) if math.isfinite(raw) else 0
        return max(0, min(idx, int(self.cat_sizes[slot]) - 1))

    def decode(self, vector: np.ndarray) -> RocketDesign:
        """Clamp to bounds, repair couplings, and build the design."""
        c = np.clip(np.asarray(vector[:self.n_continuous], dtype=float),
                    self.lows, self.highs)
        motor = self.catalog.motor(self.catalog.motor_names[self._cat_index(vector, 0)])
        body_mat = self.catalog.material_names[self._cat_index(vector, 1)]
        nose_mat = self.catalog.material_names[self._cat_index(vector, 2)]
        fin_mat = self.catalog.material_names[self._cat_index(vector, 3)]
        tail_mat = self.catalog.material_names[self._cat_index(vector, 4)]
        nose_kind = NOSE_KINDS[self._cat_index(vector, 5)]
        fin_count = _FIN_COUNTS[self._cat_index(vector, 6)]
        trigger_kind = _TRIGGER_KINDS[self._cat_index(vector, 7)]

        body_radius = max(c[0], motor.radius + _BODY_RADIUS_MARGIN)
        body_length = max(c[1], motor.length + _BODY_LENGTH_MARGIN)
        thickness = min(c[2], 0.5 * body_radius)
        tip_chord = min(c[5], c[4])
        top_r, bottom_r = c[10], c[11]
        if top_r == bottom_r:
            if bottom_r + _TAIL_RADIUS_NUDGE <= self.highs[11]:
                bottom_r += _TAIL_RADIUS_NUDGE
            else:
                top_r -= _TAIL_RADIUS_NUDGE

        main_trigger: str | float = ("apogee" if trigger_kind == "apogee"
                                     else float(c[19]))
        return RocketDesign(
            motor_choice=motor.name,
            body=BodyTube(radius=float(body_radius), length=float(body_length),
                          material=body_mat, thickness=float(thickness)),
            nose_cone=NoseCone(kind=nose_kind, length=float(c[3]), material=nose_mat),
            fins=FinSet(number=fin_count, root_chord=float(c[4]),
                        tip_chord=float(tip_chord), span=float(c[6]),
                        cant_angle=float(c[7]), material=fin_mat,
                        thickness=float(c[8])),
            tail=TailCone(length=float(c[9]), top_radius=float(top_r),
                          bottom_radius=float(bottom_r), material=tail_mat),
            parachutes=ParachutePair(
                main=Parachute(cd_s=float(c[12]), trigger=main_trigger, name="Main"),
                drogue=Parachute(cd_s=float(c[13]), trigger="apogee", name="Drogue"),
            ),
            launch=LaunchSetup(rail_length=float(c[14]), inclination=float(c[15]),
                               heading=float(c[16])),
            payload=PointPayload(mass=float(c[17]), position=float(c[18])),
        )

    def sample_uniform(self, rng: np.random.Generator) -> np.ndarray:
        cont = rng.uniform(self.lows, self.highs)
        cats = np.array([rng.integers(0, n) for n in self.cat_sizes], dtype=float)
        return np.concatenate([cont, cats])


@dataclass(frozen=True)
class OptimizerConfig:
    algorithm: str
    budget: int
    seed: int = 0
    # cross-entropy
    population: int = 32
    elite_frac: float = 0.2
    smoothing: float = 0.5          # weight kept on the previous distribution
    init_sigma_scale: float = 0.25  # initial sigma as a fraction of the range
    sigma_floor_scale: float = 0.01
    # simulated annealing
    temperature: float = 0.05       # initial temperature, reward units
    step_scale: float = 0.08        # proposal step as a fraction of the range
    flip_prob: float = 0.15         # per-slot categorical mutation probability
    # logging
    full_log: bool = False          # population methods: log every individual

    def __post_init__(self):
        if self.algorithm not in (RANDOM_SEARCH, SIMULATED_ANNEALING, CROSS_ENTROPY):
            raise ValueError(f"unknown algorithm {self.algorithm!r}")
        if self.budget < 1:
            raise ValueError("budget must be >= 1")


def example_design() -> RocketDesign:
    """The documented example design (the optimizers' starting point)."""
    from .briefs import example_design_text
    from .design import parse_design
    return parse_design(example_design_text())


class _Evaluator:
    """Shared evaluation bookkeeping: every decode goes through the full
    attempt pipeline so sessions replay exactly like agent transcripts."""

    def __init__(self, space: DesignSpace, task: TaskSpec,
                 limits: SimLimits | None):
        self.space = space
        self.task = task
        self.limits = limits
        self.count = 0

    def attempt(self, vector: np.ndarray, index: int) -> Attempt:
        design = self.space.decode(vector)
        source = json.dumps(design_to_dict(design), indent=1)
        self.count += 1
        return evaluate_source(source, self.task, index=index,
                               catalog=self.space.catalog, limits=self.limits)


def optimize(task: TaskSpec, config: OptimizerConfig, *,
             catalog: Catalog | None = None,
             limits: SimLimits | None = None,
             out_path: str | Path | None = None) -> Session:
    """Run the configured algorithm and emit a Session transcript."""
    space = DesignSpace(catalog)
    evaluator = _Evaluator(space, task, limits)
    rng = np.random.default_rng(config.seed)

    if config.algorithm == RANDOM_SEARCH:
        attempts, metadata = _random_search(space, evaluator, rng, config)
    elif config.algorithm == SIMULATED_ANNEALING:
        attempts, metadata = _simulated_annealing(space, evaluator, rng, config)
    else:
        attempts, metadata = _cross_entropy(space, evaluator, rng, config)

    session = Session(
        task=task,
        agent_id=f"optimizer:{config.algorithm}",
        seed=config.seed,
        attempts=attempts,
        best_attempt_index=select_best([a.reward.total for a in attempts]),
        metadata=metadata,
    )
    session.events = [{"event": "attempt_evaluated", "index": a.index,
                       "total": a.reward.total} for a in attempts]
    if out_path is not None:
        session.save(out_path)
    return session


def _random_search(space: DesignSpace, evaluator: _Evaluator,
                   rng: np.random.Generator, config: OptimizerConfig):
    attempts = []
    for i in range(config.budget):
        attempts.append(evaluator.attempt(space.sample_uniform(rng), i))
    return attempts, {"algorithm": RANDOM_SEARCH, "evaluations": config.budget,
                      "logged": "all"}


def _sa_accept(delta: float, temperature: float, rng: np.random.Generator) -> bool:
    """Metropolis rule; at zero temperature this is a greedy hill-climb."""
    if delta >= 0.0:
        return True
    if temperature <= 0.0:
        return False
    return rng.random() < math.exp(delta / temperature)


def _simulated_annealing(space: DesignSpace, evaluator: _Evaluator,
                         rng: np.random.Generator, config: OptimizerConfig):
    current = space.encode(example_design())
    attempts = [evaluator.attempt(current, 0)]
    current_reward = attempts[0].reward.total
    scale = config.step_scale * (space.highs - space.lows)
    accepted_indices = [0]
    for i in range(1, config.budget):
        # Linear cooling to zero over the budget.
        temperature = config.temperature * (1.0 - i / config.budget)
        proposal = current.copy()
        proposal[:space.n_continuous] += rng.normal(0.0, 1.0, space.n_continuous) * scale
        for slot in range(space.n_categorical):
            if rng.random() < config.flip_prob:
                proposal[space.n_continuous + slot] = rng.integers(
                    0, space.cat_sizes[slot])
        attempt = evaluator.attempt(proposal, i)
        attempts.append(attempt)
        if _sa_accept(attempt.reward.total - current_reward, temperature, rng):
            current = proposal
            current_reward = attempt.reward.total
            accepted_indices.append(i)
    return attempts, {
        "algorithm": SIMULATED_ANNEALING,
        "evaluations": config.budget,
        "accepted_indices": accepted_indices,
        "temperature": config.temperature,
        "logged": "all",
    }


def _cross_entropy(space: DesignSpace, evaluator: _Evaluator,
                   rng: np.random.Generator, config: OptimizerConfig):
    n_cont = space.n_continuous
    ranges = space.highs - space.lows
    sigma_floor = config.sigma_floor_scale * ranges

    start = space.encode(example_design())
    mu = start[:n_cont].copy()
    sigma = config.init_sigma_scale * ranges
    # Categorical tables start centered on the example design's choices.
    example_cats = start[n_cont:]
    probs = []
    for slot, n in enumerate(space.cat_sizes):
        p = np.full(n, 0.5 / max(n - 1, 1))
        p[int(example_cats[slot])] = 0.5
        probs.append(p / p.sum())

    attempts: list[Attempt] = []
    gen_means: list[float] = []
    gen_bests: list[float] = []
    remaining = config.budget
    index = 0
    generation = 0
    n_elite = max(2, int(round(config.elite_frac * config.population)))

    while remaining > 0:
        pop = min(config.population, remaining)
        remaining -= pop
        generation += 1
        vectors = np.empty((pop, space.size))
        for i in range(pop):
            cont = rng.normal(mu, sigma)
            cats = np.array([rng.choice(len(p), p=p) for p in probs], dtype=float)
            vectors[i, :n_cont] = np.clip(cont, space.lows, space.highs)
            vectors[i, n_cont:] = cats
        generation_attempts = []
        for i in range(pop):
            generation_attempts.append(evaluator.attempt(vectors[i], index))
            index += 1
        rewards = np.array([a.reward.total for a in generation_attempts])
        gen_means.append(float(rewards.mean()))
        order = np.argsort(-rewards, kind="stable")
        elites = order[:min(n_elite, pop)]
        gen_bests.append(float(rewards[order[0]]))

        if config.full_log:
            attempts.extend(generation_attempts)
        else:
            best_local = generation_attempts[int(order[0])]
            attempts.append(Attempt(
                index=len(attempts),
                design_source=best_local.design_source,
                design=best_local.design,
                parse_error=best_local.parse_error,
                drc=best_local.drc,
                outcome=best_local.outcome,
                reward=best_local.reward,
                feedback=best_local.feedback,
            ))

        elite_vectors = vectors[elites]
        keep = config.smoothing
        mu = keep * mu + (1.0 - keep) * elite_vectors[:, :n_cont].mean(axis=0)
        spread = elite_vectors[:, :n_cont].std(axis=0)
        sigma = np.maximum(keep * sigma + (1.0 - keep) * spread, sigma_floor)
        for slot, p in enumerate(probs):
            counts = np.bincount(
                elite_vectors[:, n_cont + slot].astype(int),
                minlength=len(p)).astype(float)
            freq = (counts + 0.05) / (counts.sum() + 0.05 * len(p))
            updated = keep * p + (1.0 - keep) * freq
            probs[slot] = updated / updated.sum()

    return attempts, {
        "algorithm": CROSS_ENTROPY,
        "evaluations": config.budget,
        "population": config.population,
        "generations": generation,
        "generation_mean_reward": gen_means,
        "generation_best_reward": gen_bests,
        "logged": "all" if config.full_log else "per_generation_best",
    }


class RandomDesignAgent:
    """Agent returning uniformly sampled designs; used for best-of-N demos."""

    def __init__(self, seed: int = 0, catalog: Catalog | None = None):
        self.space = DesignSpace(catalog)
        self.rng = np.random.default_rng(seed)
        self.agent_id = f"random-design:{seed}"

    def respond(self, brief, history, task) -> str:
        design = self.space.decode(self.space.sample_uniform(self.rng))
        return json.dumps(design_to_dict(design), indent=1)

    def close(self) -> None:
        pass
