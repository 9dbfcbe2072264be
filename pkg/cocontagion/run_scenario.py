"""
Copyright (c) 2019 The cocontagion developers
Released under the MIT license, see LICENSE.

Runs the scenario named in a RunConfig and writes its output files.
"""

import logging
import os

from cocontagion.engine import run_trial
from cocontagion.experiments import (Pairing, build_multiplex, cell_branches,
    path_lengths, scenario_branching, scenario_long_short, scenario_speed_order,
    scenario_synergy, sweep_beta, sweep_tau_grid)
from cocontagion.outcomes import joint_upper_fraction
from cocontagion.write_results import (format_value, write_cell_branches,
    write_cell_series, write_heatmaps, write_manifest, write_raw_cells, write_series,
    write_table, write_trial_csv)

logger = logging.getLogger(__name__)

# number of BFS sources when estimating path lengths for the beta sweep
PATH_SAMPLE_SIZE = 200

def _write_sweep(sweep, out_dir, config, prefix=""):
    write_heatmaps(sweep, out_dir, prefix)
    if config.grids.get("raw_cells"):
        write_raw_cells(sweep, out_dir, prefix)
    if config.grids.get("series"):
        write_cell_series(sweep, out_dir, prefix)

def run_single_trial(config, out_dir):
    pairing = Pairing(config.layer_a, config.layer_b)
    multiplex = build_multiplex(pairing, config.params.master_seed, 0, 0)
    result = run_trial(multiplex, config.params, 0)
    write_trial_csv(result, os.path.join(out_dir, "trial.csv"))

    logger.info("trial stopped (%s) after %d steps: %d A, %d B of %d nodes",
        result.stop_reason, result.steps_run, result.final_a, result.final_b,
        result.node_count)

    return [(0, 0, 0)]

def run_tau_grid(config, out_dir):
    sweep = sweep_tau_grid(Pairing(config.layer_a, config.layer_b), config.grids["tau_a"],
        config.grids["tau_b"], config.params, config.trials, config.threads,
        keep_series=config.grids["series"])
    _write_sweep(sweep, out_dir, config)

    return sweep.trial_keys

def run_beta_sweep(config, out_dir):
    grids = config.grids
    trial_keys = []
    first_cell = 0
    for beta_a in grids["beta_a"]:
        prefix = ""
        if len(grids["beta_a"]) > 1:
            prefix = "beta_a_{0}_".format(format_value(beta_a))

        logger.info("sweeping beta_b and tau_b with beta_a=%g", beta_a)
        sweep = sweep_beta(grids["beta_b"], grids["tau_b"], config.params, config.trials,
            config.layer_a, beta_a, config.threads, first_cell, config.layer_b,
            grids["series"])
        _write_sweep(sweep, out_dir, config, prefix)
        trial_keys += sweep.trial_keys
        first_cell += len(grids["beta_b"]) * len(grids["tau_b"])

    lengths = path_lengths(config.layer_b, grids["beta_b"], config.params.master_seed,
        PATH_SAMPLE_SIZE)
    write_table(os.path.join(out_dir, "path_lengths.csv"),
        ["beta_b", "mean_path_length", "connected"],
        ((beta, x.mean, x.connected) for beta, x in lengths))

    return trial_keys

def run_synergy(config, out_dir):
    results = scenario_synergy(config.params, config.grids["alpha"],
        config.grids["pairings"], config.trials, config.layer_a.n, config.threads,
        Pairing(config.layer_a, config.layer_b), config.grids["series"])

    trial_keys = []
    summary = []
    for name, sweep in results.items():
        _write_sweep(sweep, out_dir, config, "{0}_".format(name))
        trial_keys += sweep.trial_keys
        for row, alpha in enumerate(sweep.row_values):
            summary.append((name, alpha, sweep.mean_final_a[row, 0],
                sweep.mean_final_b[row, 0], sweep.std_final_a[row, 0],
                sweep.std_final_b[row, 0],
                joint_upper_fraction(sweep.raw[row, 0], sweep.node_count)))

    write_table(os.path.join(out_dir, "synergy_summary.csv"),
        ["pairing", "alpha", "mean_final_a", "mean_final_b", "std_final_a",
        "std_final_b", "both_upper_fraction"], summary)

    return trial_keys

def run_long_short(config, out_dir):
    grids = config.grids
    sweep = scenario_long_short(config.params, config.layer_a, grids["tau_a"],
        grids["tau_b"], config.trials, threads=config.threads, lattice=config.layer_b,
        keep_series=grids["series"])
    _write_sweep(sweep, out_dir, config)

    branches = cell_branches(sweep, grids["lower"], grids["upper"])
    write_cell_branches(sweep, branches, out_dir)

    return sweep.trial_keys

def run_speed_order(config, out_dir):
    kinds = config.grids["kinds"]
    sweep, summary = scenario_speed_order(config.params, kinds, config.trials,
        config.layer_a.n, config.grids["threshold"], config.threads,
        Pairing(config.layer_a, config.layer_b))

    rows = []
    for row, kind in enumerate(kinds):
        for trial, (steps_a, steps_b) in enumerate(sweep.threshold_steps[row, 0].tolist()):
            rows.append((kind, trial, steps_a, steps_b))
        write_series(sweep.series[(row, 0)], os.path.join(out_dir,
            "series_{0}.csv".format(kind)))

    write_table(os.path.join(out_dir, "speed_order.csv"),
        ["kind", "trial", "steps_a", "steps_b"], rows)

    write_table(os.path.join(out_dir, "speed_summary.csv"),
        ["kind", "median_steps", "censored", "mean_degree", "degree_variance",
        "degree_skewness", "max_degree"],
        ((kind, median, censored) + tuple(stats) for kind, (median, censored, stats)
            in summary.items()))

    for kind, (median, censored, _) in summary.items():
        logger.info("%s: median %s steps to %g of nodes, %d trials censored", kind,
            format_value(median), config.grids["threshold"], censored)

    return sweep.trial_keys

def run_branching(config, out_dir):
    grids = config.grids
    results = scenario_branching(config.params, grids["sizes"], config.trials,
        Pairing(config.layer_a, config.layer_b), grids["contagion"], grids["lower"],
        grids["upper"], config.threads, grids["series"])

    trial_keys = []
    modes = []
    for n, (sweep, stats) in results.items():
        trial_keys += sweep.trial_keys
        write_table(os.path.join(out_dir, "branch_{0}.csv".format(n)),
            ["depth", "density"], zip(stats.grid, stats.kde_grid))
        write_table(os.path.join(out_dir, "branch_{0}_finals.csv".format(n)),
            ["trial", "final_a", "final_b"],
            ((trial, a, b) for trial, (a, b) in enumerate(sweep.raw[0, 0].tolist())))
        if grids["series"]:
            write_series(sweep.series[(0, 0)], os.path.join(out_dir,
                "branch_{0}_series.csv".format(n)))
        for index, (location, mass) in enumerate(stats.modes):
            modes.append((n, index, location, mass, stats.upper_fraction,
                stats.lower_fraction, stats.bandwidth, stats.lower, stats.upper))

        logger.info("n=%d: %d modes, %.2f of trials above %g, %.2f below %g", n,
            len(stats.modes), stats.upper_fraction, stats.upper, stats.lower_fraction,
            stats.lower)

    write_table(os.path.join(out_dir, "branch_modes.csv"),
        ["n", "mode", "location", "mass", "upper_fraction", "lower_fraction",
        "bandwidth", "lower", "upper"], modes)

    return trial_keys

RUNNERS = {
    "single_trial": run_single_trial,
    "tau_grid": run_tau_grid,
    "beta_sweep": run_beta_sweep,
    "synergy": run_synergy,
    "long_short": run_long_short,
    "speed_order": run_speed_order,
    "branching": run_branching,
}

def run(config):
    """ run a scenario and write its CSV files plus manifest.json

    Args:
        config: RunConfig

    Returns:
        exit status, 0 on success and 1 if the output folder can't be written
    """

    out_dir = config.output_dir
    try:
        os.makedirs(out_dir, exist_ok=True)
        if not os.access(out_dir, os.W_OK):
            raise PermissionError("output folder is not writable: {0}".format(out_dir))

        logger.info("running %s with %d trials per cell, writing to %s", config.scenario,
            config.trials, out_dir)
        trial_keys = RUNNERS[config.scenario](config, out_dir)
        write_manifest(config, trial_keys, out_dir)
    except OSError as error:
        logger.error("cannot write results: %s", error)
        return 1

    logger.info("finished %s, %d trials", config.scenario, len(trial_keys))

    return 0
