"""Command-line entry point.

Results are JSON on stdout (one document per invocation); diagnostics go to
stderr. Exit codes: 0 success (including zero-reward results - a failed DRC
is a valid result), 1 domain failure, 2 usage error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .briefs import render_task_brief
from .catalog import default_catalog
from .design import DesignParseError, parse_design, run_drc
from .flightsim import SimLimits, simulate, simulate_traced
from .harness import (HttpAgent, ScriptedAgent, Session, SubprocessAgent,
                      run_session, scoreboard, session_filename)
from .optimizers import (CROSS_ENTROPY, RANDOM_SEARCH, SIMULATED_ANNEALING,
                         OptimizerConfig, RandomDesignAgent, optimize)
from .pipeline import (SAMPLING_BEST_OF_N, SAMPLING_ITERATIVE, TaskSpec,
                       evaluate_design)
from .scoring import ALTITUDE_CHALLENGE, LANDING_CHALLENGE
from .server import make_server, parse_wind

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_USAGE = 2
EXIT_IO = 3

_ALGO_TOKENS = {
    "random": RANDOM_SEARCH, "random_search": RANDOM_SEARCH,
    "sa": SIMULATED_ANNEALING, "simulated_annealing": SIMULATED_ANNEALING,
    "cem": CROSS_ENTROPY, "cross_entropy": CROSS_ENTROPY,
}


class DomainError(Exception):
    pass


def _emit(args, payload: dict) -> None:
    indent = 2 if args.pretty else None
    sys.stdout.write(json.dumps(payload, indent=indent) + "\n")


def _diag(message: str) -> None:
    sys.stderr.write(message + "\n")


def _read_design(path: str):
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise IOError(f"cannot read design file {path}: {e}") from None
    try:
        return parse_design(text)
    except DesignParseError as e:
        raise DomainError(f"design does not parse: {e}") from None


def _task_from_args(args) -> TaskSpec:
    env = parse_wind(args.wind)
    mode = SAMPLING_BEST_OF_N if getattr(args, "mode", "iterative") == "best-of-n" \
        else SAMPLING_ITERATIVE
    budget = getattr(args, "n", None) if mode == SAMPLING_BEST_OF_N \
        else getattr(args, "iters", None)
    budget = budget or 10
    if args.task in ("altitude", ALTITUDE_CHALLENGE):
        if args.target is None:
            raise DomainError("--target is required for the altitude task")
        return TaskSpec(challenge=ALTITUDE_CHALLENGE, environment=env,
                        target_apogee=args.target, iteration_budget=budget,
                        sampling_mode=mode)
    if args.task in ("landing", LANDING_CHALLENGE):
        if args.tx is None or args.ty is None:
            raise DomainError("--tx and --ty are required for the landing task")
        return TaskSpec(challenge=LANDING_CHALLENGE, environment=env,
                        target_x=args.tx, target_y=args.ty,
                        iteration_budget=budget, sampling_mode=mode)
    raise DomainError(f"unknown task {args.task!r}")


def _make_agent(spec: str, seed: int | None):
    if spec.startswith("cmd:"):
        return SubprocessAgent(spec[4:])
    if spec.startswith(("http://", "https://")):
        return HttpAgent(spec)
    if spec == "example":
        from .briefs import example_design_text
        return ScriptedAgent([example_design_text()], agent_id="example-design")
    if spec == "random":
        return RandomDesignAgent(seed=seed or 0)
    raise DomainError(
        f"unknown agent {spec!r}; use cmd:<argv>, http(s)://..., example, or random")


# --- subcommand handlers ----------------------------------------------------

def _cmd_validate(args) -> int:
    design = _read_design(args.design)
    report = run_drc(design, default_catalog())
    _emit(args, report.to_dict())
    return EXIT_OK


def _cmd_simulate(args) -> int:
    design = _read_design(args.design)
    env = parse_wind(args.wind)
    limits = SimLimits(max_flight_time=args.max_flight_time)
    if args.trace:
        outcome, trace = simulate_traced(design, env, limits)
        try:
            Path(args.trace).write_text(trace.to_csv())
        except OSError as e:
            raise IOError(f"cannot write trace file: {e}") from None
        _diag(f"trace written to {args.trace} ({len(trace.phases)} rows)")
    else:
        outcome = simulate(design, env, limits)
    _emit(args, outcome.to_dict())
    return EXIT_OK


def _cmd_score(args) -> int:
    design = _read_design(args.design)
    task = _task_from_args(args)
    drc, outcome, reward = evaluate_design(design, task)
    _emit(args, reward.to_dict())
    if not drc.passed:
        _diag("design failed DRC: " + "; ".join(v.message for v in drc.violations))
    return EXIT_OK


def _cmd_bench_run(args) -> int:
    task = _task_from_args(args)
    agent = _make_agent(args.agent, args.seed)
    try:
        session = run_session(task, agent, seed=args.seed)
    finally:
        agent.close()
    out = Path(args.out) if args.out else Path(args.out_dir) / session_filename(session)
    try:
        session.save(out)
    except OSError as e:
        raise IOError(f"cannot write session file: {e}") from None
    best = session.best_attempt
    _emit(args, {
        "session_file": str(out),
        "agent_id": session.agent_id,
        "attempts": len(session.attempts),
        "truncated": session.truncated,
        "best_attempt_index": session.best_attempt_index,
        "best_total": best.reward.total if best else None,
    })
    return EXIT_OK


def _cmd_bench_scoreboard(args) -> int:
    directory = Path(args.directory)
    if not directory.is_dir():
        raise IOError(f"not a directory: {directory}")
    sessions = []
    for path in sorted(directory.glob("*.json")):
        try:
            sessions.append(Session.load(path))
        except (ValueError, KeyError):
            _diag(f"skipping {path.name}: not a session file")
    _emit(args, scoreboard(sessions))
    return EXIT_OK


def _cmd_optimize(args) -> int:
    task = _task_from_args(args)
    config = OptimizerConfig(
        algorithm=_ALGO_TOKENS[args.algo],
        budget=args.budget,
        seed=args.seed or 0,
        population=args.population,
        elite_frac=args.elite_frac,
        full_log=args.full_log,
    )
    session = optimize(task, config)
    if args.out:
        try:
            session.save(args.out)
        except OSError as e:
            raise IOError(f"cannot write session file: {e}") from None
    best = session.best_attempt
    _emit(args, {
        "session_file": args.out,
        "algorithm": config.algorithm,
        "evaluations": session.metadata.get("evaluations"),
        "best_attempt_index": session.best_attempt_index,
        "best_total": best.reward.total if best else None,
        "best_design": best.design_source if best and args.print_best else None,
    })
    return EXIT_OK


def _cmd_serve(args) -> int:
    server = make_server(args.host, args.port, sessions_dir=args.sessions_dir)
    host, port = server.server_address[:2]
    _diag(f"serving on http://{host}:{port} (Ctrl-C to stop)")
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        _diag("shutting down")
    finally:
        server.server_close()
    return EXIT_OK


def _cmd_catalog(args) -> int:
    cat = default_catalog()
    _emit(args, {
        "motors": [vars(m) for m in cat.motors.values()],
        "materials": [vars(m) for m in cat.materials.values()],
    })
    return EXIT_OK


def _cmd_brief(args) -> int:
    task = _task_from_args(args)
    sys.stdout.write(render_task_brief(task) + "\n")
    return EXIT_OK


# --- parser -----------------------------------------------------------------

def _add_task_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--task", default="altitude",
                   help="altitude or landing (default: altitude)")
    p.add_argument("--target", type=float, default=None,
                   help="target apogee in meters (altitude task)")
    p.add_argument("--tx", type=float, default=None,
                   help="landing target x / East in meters (landing task)")
    p.add_argument("--ty", type=float, default=None,
                   help="landing target y / North in meters (landing task)")
    p.add_argument("--wind", default="0@E",
                   help="wind as SPEED@FROM, e.g. 5@E or 3.5@270 (default 0@E)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rocketeval",
        description="Rocket design evaluation environment",
    )
    parser.add_argument("--pretty", action="store_true",
                        help="indent JSON output for humans")
    parser.add_argument("--config", default=None,
                        help="JSON file with default flag values (flags win)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="run design rule checks on a design file")
    p.add_argument("design")
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("simulate", help="simulate one flight and print the outcome")
    p.add_argument("design")
    p.add_argument("--wind", default="0@E")
    p.add_argument("--max-flight-time", type=float, default=600.0)
    p.add_argument("--trace", default=None, metavar="FILE",
                   help="write the trajectory time series as CSV")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("score", help="full pipeline: DRC, flight, structure, "
                                     "cost, reward")
    p.add_argument("design")
    _add_task_flags(p)
    p.add_argument("--challenge", dest="task", default=argparse.SUPPRESS,
                   help="alias for --task")
    p.set_defaults(func=_cmd_score)

    bench = sub.add_parser("bench", help="agent evaluation sessions")
    bench_sub = bench.add_subparsers(dest="bench_command", required=True)

    p = bench_sub.add_parser("run", help="run one session against an agent")
    _add_task_flags(p)
    p.add_argument("--agent", required=True,
                   help="cmd:<argv> | http(s)://url | example | random")
    p.add_argument("--iters", type=int, default=10,
                   help="iteration budget (default 10; the extended protocol uses 30)")
    p.add_argument("--mode", choices=["iterative", "best-of-n"], default="iterative")
    p.add_argument("--n", type=int, default=10, help="N for best-of-n mode")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", default=None, help="session file (default: auto name)")
    p.add_argument("--out-dir", default="sessions")
    p.set_defaults(func=_cmd_bench_run)

    p = bench_sub.add_parser("scoreboard", help="aggregate session files")
    p.add_argument("directory")
    p.set_defaults(func=_cmd_bench_scoreboard)

    p = sub.add_parser("optimize", help="derivative-free search baselines")
    _add_task_flags(p)
    p.add_argument("--algo", choices=sorted(_ALGO_TOKENS), default="cem")
    p.add_argument("--budget", type=int, default=3000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--population", type=int, default=32)
    p.add_argument("--elite-frac", type=float, default=0.2)
    p.add_argument("--full-log", action="store_true",
                   help="log every individual, not per-generation bests")
    p.add_argument("--print-best", action="store_true")
    p.add_argument("--out", default=None, help="session file to write")
    p.set_defaults(func=_cmd_optimize)

    p = sub.add_parser("serve", help="HTTP environment server")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--sessions-dir", default=None)
    p.set_defaults(func=_cmd_serve)

    p = sub.add_parser("catalog", help="print the motor and material catalogs")
    p.set_defaults(func=_cmd_catalog)

    p = sub.add_parser("brief", help="print the task brief an agent would receive")
    _add_task_flags(p)
    p.set_defaults(func=_cmd_brief)

    # Accept --pretty in either position (before or after the subcommand).
    leaves = [p for p in sub.choices.values() if p is not bench]
    leaves += list(bench_sub.choices.values())
    for leaf in leaves:
        leaf.add_argument("--pretty", action="store_true", help=argparse.SUPPRESS)

    return parser


def _apply_config_defaults(argv: list[str]) -> list[str]:
    """--config FILE provides defaults; explicit flags always win."""
    if "--config" not in argv:
        return argv
    i = argv.index("--config")
    try:
        path = argv[i + 1]
    except IndexError:
        return argv
    try:
        defaults = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as e:
        raise IOError(f"cannot read config file {path}: {e}") from None
    extra: list[str] = []
    for key, value in defaults.items():
        flag = f"--{key.replace('_', '-')}"
        if flag not in argv:
            extra += [flag, str(value)]
    return argv + extra


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        argv = _apply_config_defaults(argv)
        parser = build_parser()
        args = parser.parse_args(argv)
        return args.func(args)
    except DomainError as e:
        _diag(f"error: {e}")
        return EXIT_DOMAIN
    except IOError as e:
        _diag(f"i/o error: {e}")
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
