"""Command-line front end for running online IRL experiments.

Installed as "oirl-experiment" by setuptools.
"""

import sys
import argparse
import logging

import numpy as np

import oirl

from oirl.dynamics import DivergenceError, optimal_policy

from oirl.sysid.exceptions import GainDivergenceError

from oirl.harness.config import InvalidConfigError, load_config
from oirl.harness.experiment import run_experiment, replay_experiment
from oirl.harness.report import export_report
from oirl.harness.trajectory_io import \
    TrajectoryParseError, ingest_trajectory, ingest_states, format_float

from oirl.purging import query_demonstrator


EXIT_IO_ERROR = 1
EXIT_INVALID_CONFIG = 2
EXIT_PARSE_ERROR = 3
EXIT_DIVERGENCE = 4


def write_query_responses(states, demonstrator, output):
    """Write the demonstrator's control at each state as CSV."""
    states = np.atleast_2d(np.asarray(states, dtype=float))
    width = states.shape[1]
    responses = [query_demonstrator(x, demonstrator) for x in states]
    m = len(responses[0].u) if responses else 1
    output.write("{},{}\n".format(
        ",".join("x{}".format(i + 1) for i in range(width)),
        ",".join("u{}".format(i + 1) for i in range(m))))
    for sample in responses:
        output.write(",".join(format_float(v)
                              for v in list(sample.x) + list(sample.u)))
        output.write("\n")


def _run(args):
    cfg = load_config(args.config)
    if args.seed is not None:
        cfg = cfg._replace(seed=args.seed)
    report = run_experiment(cfg)
    export_report(report, args.out)


def _replay(args):
    cfg = load_config(args.config)
    traj = ingest_trajectory(args.trajectory)
    report = replay_experiment(traj, cfg)
    export_report(report, args.out)


def _query_demo(args):
    states = ingest_states(args.states)
    if args.output == "-":
        write_query_responses(states, optimal_policy, sys.stdout)
    else:
        with open(args.output, "w") as output:
            write_query_responses(states, optimal_policy, output)


def main(args=None):
    parser = argparse.ArgumentParser(
        description="Run online inverse reinforcement learning experiments "
                    "on the benchmark demonstrator.")
    parser.add_argument("--version", "-V", action="version",
                        version="%(prog)s {}".format(oirl.__version__))
    parser.add_argument("--verbose", "-v", action="count", default=0,
                        help="log progress (repeat for more detail)")

    subparsers = parser.add_subparsers(dest="command", metavar="COMMAND")

    run_parser = subparsers.add_parser(
        "run", help="run an experiment against a live simulation")
    run_parser.add_argument("config", nargs="?", default=None,
                            help="configuration file (default: built-in "
                                 "benchmark configuration)")
    run_parser.add_argument("--out", "-o", default="results",
                            metavar="DIRECTORY",
                            help="directory to write results into "
                                 "(default: %(default)s)")
    run_parser.add_argument("--seed", "-s", type=int, default=None,
                            help="override the query seed")
    run_parser.set_defaults(handler=_run)

    replay_parser = subparsers.add_parser(
        "replay", help="run an experiment over a recorded trajectory")
    replay_parser.add_argument("trajectory", help="trajectory CSV file")
    replay_parser.add_argument("config", nargs="?", default=None,
                               help="configuration file")
    replay_parser.add_argument("--out", "-o", default="results",
                               metavar="DIRECTORY",
                               help="directory to write results into "
                                    "(default: %(default)s)")
    replay_parser.set_defaults(handler=_replay)

    query_parser = subparsers.add_parser(
        "query-demo", help="report the demonstrator's control at a list of "
                           "states")
    query_parser.add_argument("states", help="CSV file with header x1,x2")
    query_parser.add_argument("--output", "-o", default="-",
                              metavar="FILENAME",
                              help="file to write responses to or - for "
                                   "stdout (default: %(default)s)")
    query_parser.set_defaults(handler=_query_demo)

    args = parser.parse_args(args)
    if args.command is None:
        parser.error("a command is required")

    logging.basicConfig(
        level={0: logging.WARNING, 1: logging.INFO}.get(args.verbose,
                                                        logging.DEBUG),
        format="%(name)s: %(message)s")

    try:
        args.handler(args)
    except InvalidConfigError as e:
        sys.stderr.write("{}: error: invalid configuration: {}\n".format(
            parser.prog, e))
        return EXIT_INVALID_CONFIG
    except TrajectoryParseError as e:
        sys.stderr.write("{}: error: {}\n".format(parser.prog, e))
        return EXIT_PARSE_ERROR
    except (DivergenceError, GainDivergenceError) as e:
        sys.stderr.write("{}: error: {}\n".format(parser.prog, e))
        return EXIT_DIVERGENCE
    except EnvironmentError as e:
        sys.stderr.write("{}: error: {}\n".format(parser.prog, e))
        return EXIT_IO_ERROR

    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
