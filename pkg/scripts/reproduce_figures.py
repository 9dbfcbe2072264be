"""
Copyright (c) 2019 The cocontagion developers
Released under the MIT license, see LICENSE.

Writes a run configuration for every published figure and runs the
cocontagion command line on each, one after another.
"""

import argparse
import json
import os
import subprocess
import sys

FULL_SIZE = 6400

def get_options():

    parser = argparse.ArgumentParser(description="helper script to rerun every " \
        "figure's scenario at full size.")
    parser.add_argument("--out", default="figures", help="folder for the results of each run")
    parser.add_argument("--trials", type=int, default=50, help="trials per grid cell")
    parser.add_argument("--threads", default="auto", help="worker processes per run")
    parser.add_argument("--seed", type=int, default=0, help="master seed for every run")
    parser.add_argument("--only", action="append", default=[],
        help="only run the named figure, may be given more than once")
    parser.add_argument("--dry-run", action="store_true", default=False,
        help="write the configs without running them")

    args = parser.parse_args()

    return args

def figure_configs(trials, seed):
    """ run configurations keyed by a short figure name
    """

    def config(scenario, kind_a, kind_b, **extra):
        data = {"scenario": scenario,
            "layer_a": {"kind": kind_a, "n": FULL_SIZE},
            "layer_b": {"kind": kind_b, "n": FULL_SIZE},
            "params": {"master_seed": seed},
            "trials": trials}
        for key, value in extra.items():
            data.setdefault(key, {}).update(value)
        return data

    configs = {}
    for kind_a, kind_b in [("RRG", "ERG"), ("ERG", "RRG"), ("ERG", "PLG"), ("PLG", "ERG")]:
        configs["tau_grid_{0}_{1}".format(kind_a, kind_b)] = config("tau_grid", kind_a, kind_b)

    for beta_a in [0.01, 0.001]:
        configs["beta_sweep_{0}".format(beta_a)] = config("beta_sweep", "WSG", "WSG",
            grids={"beta_a": [beta_a], "series": True})

    configs["synergy"] = config("synergy", "ERG", "ERG", grids={"series": True})

    for kind in ["RRG", "ERG", "PLG"]:
        configs["long_short_{0}".format(kind)] = config("long_short", kind, "LAT",
            grids={"raw_cells": True})

    configs["speed_order"] = config("speed_order", "ERG", "ERG")
    configs["branching"] = config("branching", "RRG", "ERG", grids={"series": True})

    return configs

def write_configs(configs, out_dir):
    """ write each config to <out>/<name>/config.json, pointing its results at
    the same folder
    """

    paths = {}
    for name, data in sorted(configs.items()):
        folder = os.path.join(out_dir, name)
        os.makedirs(folder, exist_ok=True)
        data["output_dir"] = folder

        path = os.path.join(folder, "config.json")
        with open(path, "w") as output:
            json.dump(data, output, indent=2, sort_keys=True)
            output.write("\n")
        paths[name] = path

    return paths

def main():

    args = get_options()

    configs = figure_configs(args.trials, args.seed)
    unknown = [x for x in args.only if x not in configs]
    if unknown:
        sys.exit("unknown figures: {0}. Pick from {1}".format(", ".join(unknown),
            ", ".join(sorted(configs))))
    if args.only:
        configs = {x: configs[x] for x in args.only}

    paths = write_configs(configs, args.out)
    if args.dry_run:
        return

    failed = []
    for name, path in sorted(paths.items()):
        command = [sys.executable, "-m", "cocontagion", "--config", path,
            "--threads", args.threads]
        if subprocess.call(command) != 0:
            failed.append(name)

    if failed:
        sys.exit("failed runs: {0}".format(", ".join(failed)))

if __name__ == "__main__":
    main()
