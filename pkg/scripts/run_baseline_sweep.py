#!/usr/bin/env python3
"""Sweep the three baseline optimizers over seeds on either challenge and
print the scoreboard. Sessions land in --out-dir for later aggregation."""

import argparse
from pathlib import Path

from rocketeval.flightsim import Environment
from rocketeval.harness import scoreboard, session_filename
from rocketeval.optimizers import (CROSS_ENTROPY, RANDOM_SEARCH,
                                   SIMULATED_ANNEALING, OptimizerConfig,
                                   optimize)
from rocketeval.pipeline import TaskSpec


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--task", choices=["altitude", "landing"], default="altitude")
    parser.add_argument("--budget", type=int, default=640)
    parser.add_argument("--seeds", type=int, nargs="+", default=[1, 2, 3])
    parser.add_argument("--out-dir", type=Path, default=Path("sessions/sweep"))
    args = parser.parse_args()

    if args.task == "altitude":
        task = TaskSpec(challenge="target_altitude",
                        environment=Environment(5.0, "E"), target_apogee=3048.0)
    else:
        task = TaskSpec(challenge="precision_landing",
                        environment=Environment(5.0, "E"),
                        target_x=4000.0, target_y=4000.0)

    sessions = []
    for algorithm in (RANDOM_SEARCH, SIMULATED_ANNEALING, CROSS_ENTROPY):
        for seed in args.seeds:
            config = OptimizerConfig(algorithm=algorithm, budget=args.budget,
                                     seed=seed)
            session = optimize(task, config)
            session.save(args.out_dir / f"seed{seed}-{session_filename(session)}")
            best = session.attempts[session.best_attempt_index].reward.total
            print(f"{algorithm:20s} seed {seed}: best {best:.3f}")
            sessions.append(session)

    print()
    for row in scoreboard(sessions)["agents"]:
        print(f"{row['agent_id']:28s} mean-best {row['mean_best']:.3f} "
              f"best {row['best']:.3f} over {row['sessions']} sessions")


if __name__ == "__main__":
    main()
