#!/usr/bin/env python3
"""Cross-entropy search on the target altitude task.

Reproduces the desk-scale optimization run: 3000 evaluations against a
3048 m target with a 5 m/s easterly wind, printing per-generation progress
and writing the full session transcript.
"""

import argparse
import time
from pathlib import Path

from rocketeval.flightsim import Environment
from rocketeval.optimizers import CROSS_ENTROPY, OptimizerConfig, optimize
from rocketeval.pipeline import TaskSpec
from rocketeval.scoring import render_percentage_score


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--budget", type=int, default=3000)
    parser.add_argument("--seed", type=int, default=1)
    parser.add_argument("--target", type=float, default=3048.0)
    parser.add_argument("--wind", type=float, default=5.0)
    parser.add_argument("--out", type=Path, default=Path("sessions/cem_altitude.json"))
    args = parser.parse_args()

    task = TaskSpec(challenge="target_altitude",
                    environment=Environment(args.wind, "E"),
                    target_apogee=args.target)
    config = OptimizerConfig(algorithm=CROSS_ENTROPY, budget=args.budget,
                             seed=args.seed)

    start = time.monotonic()
    session = optimize(task, config, out_path=args.out)
    elapsed = time.monotonic() - start

    means = session.metadata["generation_mean_reward"]
    bests = session.metadata["generation_best_reward"]
    for gen, (mean, best) in enumerate(zip(means, bests), start=1):
        print(f"gen {gen:3d}  mean {mean:.3f}  best {best:.3f}")

    top = session.attempts[session.best_attempt_index]
    print(f"\n{args.budget} evaluations in {elapsed:.1f}s "
          f"({args.budget / elapsed:.0f} eval/s)")
    print(f"best reward {top.reward.total:.4f} "
          f"(score {render_percentage_score(top.reward):.2f}/100)")
    print(f"session written to {args.out}")
    print("\nbest design:\n" + top.design_source)


if __name__ == "__main__":
    main()
