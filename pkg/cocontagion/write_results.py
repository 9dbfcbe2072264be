"""
Copyright (c) 2019 The cocontagion developers
Released under the MIT license, see LICENSE.

Writes trial series, sweep heatmaps and the run manifest.

Every file is a pure function of its inputs: real numbers use 17 significant
digits and the manifest has sorted keys and no timestamps, so reruns with the
same config give byte-identical outputs.
"""

import json
import logging
import os
import subprocess

import numpy as np

from cocontagion.outcomes import censored_median

logger = logging.getLogger(__name__)

HEATMAP_STATS = ("mean_final_a", "mean_final_b", "std_final_a", "std_final_b")

def format_real(value):
    """ format a real number so that parsing it back gives the same float
    """
    return "{0:.17g}".format(float(value))

def format_value(value):
    if value is None:
        return "NA"
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value)).lower()
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        if np.isnan(value):
            return "NA"
        return format_real(value)
    return str(value)

def write_table(path, header, rows):
    """ write a comma-separated table with a header line

    Args:
        path: path to write to
        header: list of column names
        rows: iterable of row sequences
    """

    with open(path, "w") as output:
        output.write(",".join(header) + "\n")
        for row in rows:
            output.write(",".join(format_value(x) for x in row) + "\n")

    logger.debug("wrote %s", path)

def write_trial_csv(result, path):
    """ write a TrialResult as step,count_a,count_b rows
    """
    write_table(path, ["step", "count_a", "count_b"], result.rows())

def write_heatmap(path, row_axis, row_values, col_axis, col_values, matrix):
    """ write a matrix with its axis values

    The first line holds '<row_axis>\\<col_axis>' and the column values, each
    further line starts with its row value.
    """

    header = ["{0}\\{1}".format(row_axis, col_axis)] + [format_value(x) for x in col_values]
    rows = ([value] + list(line) for value, line in zip(row_values, np.asarray(matrix)))
    write_table(path, header, rows)

def median_steps(sweep, contagion="a"):
    """ per-cell median steps to the sweep threshold, censored trials counted as
    never arriving (so the median is inf when most trials never got there)
    """

    column = 0 if contagion == "a" else 1
    rows, cols = sweep.shape
    medians = np.empty((rows, cols))
    for i in range(rows):
        for j in range(cols):
            medians[i, j] = censored_median(sweep.threshold_steps[i, j, :, column])

    return medians

def write_heatmaps(sweep, out_dir, prefix=""):
    """ write one heatmap per summary statistic of a SweepResult, plus the
    median steps to the threshold for each contagion

    Returns:
        list of the paths written
    """

    paths = []
    for stat in HEATMAP_STATS:
        path = os.path.join(out_dir, "{0}{1}.csv".format(prefix, stat))
        write_heatmap(path, sweep.row_axis, sweep.row_values, sweep.col_axis,
            sweep.col_values, getattr(sweep, stat))
        paths.append(path)

    for contagion in ("a", "b"):
        path = os.path.join(out_dir, "{0}median_steps_{1}.csv".format(prefix, contagion))
        write_heatmap(path, sweep.row_axis, sweep.row_values, sweep.col_axis,
            sweep.col_values, median_steps(sweep, contagion))
        paths.append(path)

    return paths

def write_raw_cells(sweep, out_dir, prefix=""):
    """ write every trial's final counts, one cell_<i>_<j>.csv per grid cell
    """

    rows, cols = sweep.shape
    for i in range(rows):
        for j in range(cols):
            path = os.path.join(out_dir, "{0}cell_{1}_{2}.csv".format(prefix, i, j))
            finals = sweep.raw[i, j]
            write_table(path, ["trial", "final_a", "final_b"],
                ((trial, a, b) for trial, (a, b) in enumerate(finals.tolist())))

def write_series(results, path):
    """ write the cumulative counts of several trials in long format
    """

    def rows():
        for trial, result in enumerate(results):
            for step, count_a, count_b in result.rows():
                yield trial, step, count_a, count_b

    write_table(path, ["trial", "step", "count_a", "count_b"], rows())

def write_cell_series(sweep, out_dir, prefix=""):
    """ write the kept trial series of a sweep, one series_<i>_<j>.csv per cell
    """

    paths = []
    for (i, j), results in sorted(sweep.series.items()):
        path = os.path.join(out_dir, "{0}series_{1}_{2}.csv".format(prefix, i, j))
        write_series(results, path)
        paths.append(path)

    return paths

def write_cell_branches(sweep, branches, out_dir, prefix=""):
    """ write the depth densities of every cell and a table of their modes

    Each branch_<i>_<j>.csv holds the kernel density of both contagions'
    final depths on a shared grid of depth fractions.

    Args:
        sweep: SweepResult
        branches: dict of (row, col) to BranchStats for A and for B
        out_dir: folder to write to
        prefix: prefix for every file name

    Returns:
        path to the modes table
    """

    modes = []
    for (i, j), (stats_a, stats_b) in sorted(branches.items()):
        path = os.path.join(out_dir, "{0}branch_{1}_{2}.csv".format(prefix, i, j))
        write_table(path, ["depth", "density_a", "density_b"],
            zip(stats_a.grid, stats_a.kde_grid, stats_b.kde_grid))

        row_value, col_value = sweep.row_values[i], sweep.col_values[j]
        for contagion, stats in (("a", stats_a), ("b", stats_b)):
            for index, (location, mass) in enumerate(stats.modes):
                modes.append((row_value, col_value, contagion, index, location, mass,
                    stats.upper_fraction, stats.lower_fraction, stats.bandwidth))

    path = os.path.join(out_dir, "{0}branch_modes.csv".format(prefix))
    write_table(path, [sweep.row_axis, sweep.col_axis, "contagion", "mode", "location",
        "mass", "upper_fraction", "lower_fraction", "bandwidth"], modes)

    return path

def git_describe():
    """ describe the source checkout, or 'unknown' outside a git repository
    """

    folder = os.path.dirname(os.path.abspath(__file__))
    try:
        output = subprocess.check_output(["git", "describe", "--always", "--dirty"],
            cwd=folder, stderr=subprocess.DEVNULL)
    except (OSError, subprocess.CalledProcessError):
        return "unknown"

    return output.decode("utf8").strip() or "unknown"

def write_manifest(config, trial_keys, out_dir):
    """ record the effective config and every trial that ran

    Args:
        config: RunConfig
        trial_keys: list of (cell, trial, trial_index) tuples
        out_dir: folder for manifest.json

    Returns:
        path to the manifest
    """

    master_seed = config.params.master_seed
    manifest = {
        "config": config.to_dict(include_threads=False),
        "git": git_describe(),
        "master_seed": master_seed,
        "trials": [{"cell": cell, "trial": trial, "trial_index": index,
            "master_seed": master_seed} for cell, trial, index in trial_keys],
    }

    path = os.path.join(out_dir, "manifest.json")
    with open(path, "w") as output:
        json.dump(manifest, output, sort_keys=True, indent=2)
        output.write("\n")

    return path
