"""
Copyright (c) 2019 The cocontagion developers
Released under the MIT license, see LICENSE.

===================================================
Simulate two competing contagions spreading on a multiplex network.

Each contagion spreads on its own layer of a two-layer network. Nodes adopt
with a Hill function of the density of active infected neighbours, and
infected nodes fall permanently dormant at a fixed per-step rate. The
scenarios sweep dormancy rates, small-world rewiring, synergy between the
contagions and network size, writing CSV tables and a manifest which pins
down every trial.
"""

import argparse
import logging
import sys

from cocontagion.config import SCENARIOS, ConfigError, parse_config
from cocontagion.run_scenario import run

def threads_value(value):
    """ parse --threads, a positive integer or 'auto'
    """

    if value == "auto":
        return value
    try:
        threads = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError("expected a positive integer or 'auto'")
    if threads < 1:
        raise argparse.ArgumentTypeError("expected a positive integer or 'auto'")

    return threads

def get_options(arguments=None):
    """ get the command line switches
    """

    parser = argparse.ArgumentParser(description="Monte Carlo simulation of \
        co-contagions with dormancy on two-layer multiplex networks.")
    parser.add_argument("--config", dest="config_path",
        help="Path to a JSON run configuration. See data/example_tau_grid.json \
            for the format.")
    parser.add_argument("--scenario", choices=SCENARIOS,
        help="scenario to run, overriding the config file.")
    parser.add_argument("--seed", type=int,
        help="master seed, which fixes every random draw of the run.")
    parser.add_argument("--trials", type=int,
        help="number of trials per grid cell (default 50).")
    parser.add_argument("--threads", type=threads_value,
        help="worker processes, or 'auto' for one per CPU. Outputs do not \
            depend on this.")
    parser.add_argument("--out", dest="output_dir",
        help="folder for the output files (default 'results').")
    parser.add_argument("--set", dest="overrides", action="append", default=[],
        metavar="KEY=VALUE",
        help="override a config value by dotted key, eg params.tau_a=0.05. \
            May be given more than once.")

    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument("--verbose", action="store_true", default=False,
        help="log debugging detail.")
    verbosity.add_argument("--quiet", action="store_true", default=False,
        help="only log warnings and errors.")

    args = parser.parse_args(arguments)

    return args

def main(arguments=None):

    options = get_options(arguments)

    level = logging.INFO
    if options.verbose:
        level = logging.DEBUG
    elif options.quiet:
        level = logging.WARNING
    logging.basicConfig(stream=sys.stderr, level=level,
        format="%(asctime)s %(name)s %(levelname)s: %(message)s")

    flags = {"scenario": options.scenario, "params.master_seed": options.seed,
        "trials": options.trials, "threads": options.threads,
        "output_dir": options.output_dir}

    try:
        config = parse_config(options.config_path, options.overrides, flags)
    except ConfigError as error:
        logging.error(str(error))
        sys.exit(2)
    except OSError as error:
        logging.error("cannot read config: %s", error)
        sys.exit(2)

    try:
        status = run(config)
    except KeyboardInterrupt:
        sys.exit("cocontagion exited.")

    sys.exit(status)

if __name__ == '__main__':
    main()
