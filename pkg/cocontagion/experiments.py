"""
Copyright (c) 2019 The cocontagion developers
Released under the MIT license, see LICENSE.

Batch experiments: grids of trials over dormancy, rewiring and synergy
values, run on freshly generated layers for every trial.

Each trial is an independent job named by (cell index, trial number). Its
layers, node pairing and dynamics all derive from the master seed and that
name, so results don't depend on how many worker processes ran the jobs or
in which order they finished.
"""

import logging
import multiprocessing
import os
from collections import namedtuple
from dataclasses import dataclass, replace
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from cocontagion.engine import GRAPH_STREAM, PATH_STREAM, run_trial
from cocontagion.graphgen import GraphSpec, degree_stats, generate_layer, mean_shortest_path
from cocontagion.multiplex import pair_layers
from cocontagion.outcomes import branch_stats, censored_median, speed_metric

logger = logging.getLogger(__name__)

Pairing = namedtuple("Pairing", ["layer_a", "layer_b"])

# a single trial to run. trial_index numbers the trial across the whole
# sweep and picks its dynamics stream.
TrialJob = namedtuple("TrialJob", ["pairing", "params", "cell", "trial", "trial_index",
    "threshold", "keep_series"])

TrialSummary = namedtuple("TrialSummary", ["final_a", "final_b", "steps_a", "steps_b",
    "stop_reason", "steps_run", "result"])

SYNERGY_PAIRINGS = ("ERG-ERG", "ERG-RRG", "ERG-PLG")
LONG_RANGE_KINDS = ("RRG", "ERG", "PLG")

@dataclass
class SweepResult:
    """ summary statistics of final depths over a two-axis grid of cells

    The mean and std arrays have shape (rows, cols). raw holds every trial's
    final (A, B) counts, shape (rows, cols, trials, 2), and threshold_steps
    the steps each contagion took to reach threshold_fraction of n (nan when
    it never did). trial_keys lists (cell, trial, trial_index) for every job.
    """
    row_axis: str
    row_values: Tuple[Any, ...]
    col_axis: str
    col_values: Tuple[Any, ...]
    mean_final_a: np.ndarray
    mean_final_b: np.ndarray
    std_final_a: np.ndarray
    std_final_b: np.ndarray
    trials_per_cell: int
    node_count: int
    raw: np.ndarray
    threshold_steps: np.ndarray
    threshold_fraction: float
    trial_keys: List[Tuple[int, int, int]]
    series: Optional[Dict[Tuple[int, int], list]] = None

    @property
    def axes(self):
        return {self.row_axis: self.row_values, self.col_axis: self.col_values}

    @property
    def shape(self):
        return (len(self.row_values), len(self.col_values))

def pairing_from_name(name, n=6400, templates=None):
    """ layer specs for a pairing name such as "ERG-RRG"

    Without templates both layers take default fields on n nodes. With a
    Pairing of templates, each template is retyped to its kind in the name.
    """

    kinds = name.split("-")
    if len(kinds) != 2:
        raise ValueError("pairing must look like KIND-KIND, not {0!r}".format(name))

    if templates is None:
        return Pairing(GraphSpec(kinds[0], n), GraphSpec(kinds[1], n))
    return Pairing(templates.layer_a.retyped(kinds[0]), templates.layer_b.retyped(kinds[1]))

def build_multiplex(pairing, master_seed, cell, trial):
    """ generate both layers and pair them for one trial

    Layer specs without a seed get one derived from (master_seed, cell,
    trial); a spec with an explicit seed gives the same layer every trial.
    """

    sequence = np.random.SeedSequence(master_seed, spawn_key=(GRAPH_STREAM, cell, trial))
    seed_a, seed_b, seed_pairing = (int(x) for x in sequence.generate_state(3))

    spec_a, spec_b = pairing
    if spec_a.seed is None:
        spec_a = spec_a.with_seed(seed_a)
    if spec_b.seed is None:
        spec_b = spec_b.with_seed(seed_b)

    return pair_layers(generate_layer(spec_a), generate_layer(spec_b), seed_pairing)

def run_job(job):
    """ run a single trial of a sweep, returning a TrialSummary
    """

    multiplex = build_multiplex(job.pairing, job.params.master_seed, job.cell, job.trial)
    result = run_trial(multiplex, job.params, job.trial_index)

    return TrialSummary(result.final_a, result.final_b,
        speed_metric(result, job.threshold, "a"), speed_metric(result, job.threshold, "b"),
        result.stop_reason, result.steps_run, result if job.keep_series else None)

def resolve_threads(threads):
    """ worker count from a config value: a positive integer, or "auto"
    """

    if threads == "auto":
        return os.cpu_count() or 1
    return max(1, int(threads))

def run_jobs(jobs, threads=1, trials_per_cell=None):
    """ run trial jobs, in-process or on a multiprocessing pool

    Returns:
        list of TrialSummary in the same order as jobs
    """

    threads = resolve_threads(threads)
    trials_per_cell = trials_per_cell or len(jobs) or 1
    cells = max(1, len(jobs) // trials_per_cell)

    def log_progress(done):
        if done % trials_per_cell == 0:
            logger.info("finished cell %d of %d", done // trials_per_cell, cells)

    summaries = []
    if threads == 1 or len(jobs) < 2:
        for job in jobs:
            summaries.append(run_job(job))
            log_progress(len(summaries))
        return summaries

    chunksize = max(1, len(jobs) // (threads * 8))
    with multiprocessing.Pool(threads) as pool:
        for summary in pool.imap(run_job, jobs, chunksize=chunksize):
            summaries.append(summary)
            log_progress(len(summaries))

    return summaries

def sweep_cells(cells, row_axis, row_values, col_axis, col_values, trials, threads=1,
        first_cell=0, threshold=0.5, keep_series=False):
    """ run every cell of a grid and aggregate final depths

    Args:
        cells: list of (Pairing, SimParams) in row-major order
        row_axis: name of the row parameter
        row_values: row parameter values
        col_axis: name of the column parameter
        col_values: column parameter values
        trials: trials per cell
        threads: worker processes, or "auto"
        first_cell: index of the first cell, so several sweeps in one run get
            distinct graph streams
        threshold: depth fraction for the threshold_steps record
        keep_series: whether to keep every trial's TrialResult

    Returns:
        SweepResult
    """

    if trials < 1:
        raise ValueError("trials must be at least 1")
    if len(cells) != len(row_values) * len(col_values) or not cells:
        raise ValueError("cells must fill a non-empty {0} x {1} grid".format(
            len(row_values), len(col_values)))

    jobs = []
    for offset, (pairing, params) in enumerate(cells):
        cell = first_cell + offset
        for trial in range(trials):
            jobs.append(TrialJob(pairing, params, cell, trial, cell * trials + trial,
                threshold, keep_series))

    summaries = run_jobs(jobs, threads, trials)

    shape = (len(row_values), len(col_values), trials, 2)
    raw = np.array([(x.final_a, x.final_b) for x in summaries], dtype=np.int64).reshape(shape)
    steps = np.array([(np.nan if x.steps_a is None else x.steps_a,
        np.nan if x.steps_b is None else x.steps_b) for x in summaries],
        dtype=np.float64).reshape(shape)

    mean = raw.mean(axis=2)
    std = raw.std(axis=2)

    series = None
    if keep_series:
        series = {}
        for offset in range(len(cells)):
            key = divmod(offset, len(col_values))
            series[key] = [x.result for x in summaries[offset * trials:(offset + 1) * trials]]

    return SweepResult(row_axis, tuple(row_values), col_axis, tuple(col_values),
        mean[..., 0], mean[..., 1], std[..., 0], std[..., 1], trials,
        cells[0][0].layer_a.n, raw, steps, threshold,
        [(job.cell, job.trial, job.trial_index) for job in jobs], series)

def sweep_tau_grid(pairing, tau_a_values, tau_b_values, base, trials, threads=1,
        first_cell=0, keep_series=False):
    """ dormancy heatmap: rows are tau_a values, columns tau_b values
    """

    if not len(tau_a_values) or not len(tau_b_values):
        raise ValueError("tau grids must not be empty")

    cells = [(pairing, replace(base, tau_a=tau_a, tau_b=tau_b))
        for tau_a in tau_a_values for tau_b in tau_b_values]

    return sweep_cells(cells, "tau_a", tau_a_values, "tau_b", tau_b_values, trials,
        threads, first_cell, keep_series=keep_series)

def sweep_beta(beta_b_values, tau_b_values, base, trials, layer=None, beta_a=0.001,
        threads=1, first_cell=0, layer_b=None, keep_series=False):
    """ small-world primacy heatmap on WSG-WSG pairings

    Contagion A's layer keeps rewiring probability beta_a and dormancy
    base.tau_a. Rows are tau_b values, columns beta_b values.

    Args:
        beta_b_values: rewiring probabilities for B's layer, within (0, 1]
        tau_b_values: dormancy rates for B
        base: SimParams
        trials: trials per cell
        layer: WSG GraphSpec template for A's layer (default 6400 nodes, k=4)
        beta_a: rewiring probability for A's layer
        threads: worker processes, or "auto"
        first_cell: index of the first cell
        layer_b: WSG GraphSpec template for B's layer, defaults to layer
        keep_series: whether to keep every trial's TrialResult
    """

    layer = layer or GraphSpec("WSG")
    layer_b = layer_b or layer
    if layer.kind != "WSG" or layer_b.kind != "WSG":
        raise ValueError("kind must be WSG for the beta sweep")
    if layer.n != layer_b.n:
        raise ValueError("both layers need the same n for the beta sweep")
    if not all(0 < x <= 1 for x in beta_b_values):
        raise ValueError("beta_b values must lie in (0,1]")

    layer_a = replace(layer, beta=beta_a)
    cells = [(Pairing(layer_a, replace(layer_b, beta=beta_b)), replace(base, tau_b=tau_b))
        for tau_b in tau_b_values for beta_b in beta_b_values]

    return sweep_cells(cells, "tau_b", tau_b_values, "beta_b", beta_b_values, trials,
        threads, first_cell, keep_series=keep_series)

def path_lengths(layer, beta_values, master_seed=0, sample_size=200):
    """ characteristic path length of one WSG instance per rewiring probability

    Returns:
        list of (beta, PathLength)
    """

    lengths = []
    for index, beta in enumerate(beta_values):
        sequence = np.random.SeedSequence(master_seed, spawn_key=(PATH_STREAM, index))
        seed_graph, seed_sample = (int(x) for x in sequence.generate_state(2))
        graph = generate_layer(replace(layer, beta=beta, seed=seed_graph))
        lengths.append((beta, mean_shortest_path(graph, sample_size, seed_sample)))

    return lengths

def scenario_synergy(base, alpha_values, pairing_set, trials, n=6400, threads=1,
        templates=None, keep_series=False):
    """ compare pairings across synergy exponents at fixed dormancy

    Each pairing gets its own SweepResult with rows of alpha values and a
    single column at base.tau_b.

    Args:
        base: SimParams
        alpha_values: synergy exponents, one row each
        pairing_set: pairing names such as "ERG-RRG"
        trials: trials per cell
        n: node count, when no templates are given
        threads: worker processes, or "auto"
        templates: Pairing of layer specs, retyped to each pairing's kinds
        keep_series: whether to keep every trial's TrialResult

    Returns:
        dict of pairing name to SweepResult, in pairing_set order
    """

    unknown = [x for x in pairing_set if x not in SYNERGY_PAIRINGS]
    if unknown:
        raise ValueError("pairings must be among {0}, not {1}".format(
            ", ".join(SYNERGY_PAIRINGS), ", ".join(unknown)))

    results = {}
    first_cell = 0
    for name in pairing_set:
        pairing = pairing_from_name(name, n, templates)
        cells = [(pairing, replace(base, alpha=alpha)) for alpha in alpha_values]
        results[name] = sweep_cells(cells, "alpha", alpha_values, "tau_b", [base.tau_b],
            trials, threads, first_cell, keep_series=keep_series)
        first_cell += len(cells)

    return results

def scenario_long_short(base, long_layer, tau_a_values, tau_lat_values, trials, n=6400,
        threads=1, lattice=None, keep_series=False):
    """ long-range layer (A) against a lattice (B) over a dormancy grid

    Rows are the long-range layer's tau_a, columns the lattice's tau_lat.

    Args:
        base: SimParams
        long_layer: GraphSpec for the long-range layer, or just its kind (then
            built on n nodes with default fields)
        tau_a_values: dormancy rates for the long-range contagion
        tau_lat_values: dormancy rates for the lattice contagion
        trials: trials per cell
        n: node count when long_layer is only a kind
        threads: worker processes, or "auto"
        lattice: LAT GraphSpec, defaulting to a lattice the size of long_layer
        keep_series: whether to keep every trial's TrialResult
    """

    if not isinstance(long_layer, GraphSpec):
        if long_layer not in LONG_RANGE_KINDS:
            raise ValueError("long_kind must be one of {0}, not {1}".format(
                ", ".join(LONG_RANGE_KINDS), long_layer))
        long_layer = GraphSpec(long_layer, n)
    if long_layer.kind not in LONG_RANGE_KINDS:
        raise ValueError("long_kind must be one of {0}, not {1}".format(
            ", ".join(LONG_RANGE_KINDS), long_layer.kind))

    lattice = lattice or GraphSpec("LAT", long_layer.n)
    if lattice.kind != "LAT":
        raise ValueError("lattice must be a LAT layer, not {0}".format(lattice.kind))
    if lattice.n != long_layer.n:
        raise ValueError("the lattice needs the long-range layer's n")

    pairing = Pairing(long_layer, lattice)
    sweep = sweep_tau_grid(pairing, tau_a_values, tau_lat_values, base, trials, threads,
        keep_series=keep_series)
    sweep.col_axis = "tau_lat"

    return sweep

def cell_branches(sweep, lower=0.2, upper=0.8):
    """ depth distribution of both contagions in every cell of a sweep

    Returns:
        dict of (row, col) to (BranchStats for A, BranchStats for B)
    """

    branches = {}
    for row in range(len(sweep.row_values)):
        for col in range(len(sweep.col_values)):
            finals = sweep.raw[row, col]
            branches[(row, col)] = tuple(branch_stats(finals[:, x], sweep.node_count,
                lower, upper) for x in (0, 1))

    return branches

def scenario_speed_order(base, kinds, trials, n=6400, threshold=0.5, threads=1,
        templates=None):
    """ how fast contagions spread on each kind of layer

    Every kind is paired with another instance of itself, and steps to the
    threshold are pooled over both contagions. templates is an optional
    Pairing of layer specs, retyped to every kind; without it each layer
    takes default fields on n nodes.

    Returns:
        tuple of the SweepResult (one row per kind, trial series kept) and a
        dict of kind to (median steps, censored count, DegreeStats of one
        instance)
    """

    templates = templates or Pairing(GraphSpec("ERG", n), GraphSpec("ERG", n))
    pairings = [Pairing(templates.layer_a.retyped(kind), templates.layer_b.retyped(kind))
        for kind in kinds]

    cells = [(pairing, base) for pairing in pairings]
    sweep = sweep_cells(cells, "kind", kinds, "tau_b", [base.tau_b], trials, threads,
        threshold=threshold, keep_series=True)

    summary = {}
    for row, (kind, pairing) in enumerate(zip(kinds, pairings)):
        steps = sweep.threshold_steps[row, 0].ravel()
        spec = pairing.layer_a
        instance = generate_layer(spec if spec.seed is not None else spec.with_seed(base.master_seed))
        summary[kind] = (censored_median(steps), int(np.isnan(steps).sum()),
            degree_stats(instance))

    return sweep, summary

def scenario_branching(base, sizes, trials, pairing=None, contagion="b", lower=0.2,
        upper=0.8, threads=1, keep_series=False):
    """ branching of one contagion's final depth at several network sizes

    Args:
        base: SimParams
        sizes: node counts to run at
        trials: trials per size, at least 2
        pairing: Pairing of layer templates, resized to every node count
            (default RRG for A and ERG for B)
        contagion: "a" or "b", whose final depths are summarised
        lower: depth fraction for the lower branch
        upper: depth fraction for the upper branch
        threads: worker processes, or "auto"
        keep_series: whether to keep every trial's TrialResult

    Returns:
        dict of node count to (SweepResult, BranchStats)
    """

    if trials < 2:
        raise ValueError("trials must be at least 2 for branch statistics")
    pairing = pairing or Pairing(GraphSpec("RRG"), GraphSpec("ERG"))

    results = {}
    for index, n in enumerate(sizes):
        sized = Pairing(pairing.layer_a.resized(n), pairing.layer_b.resized(n))
        sweep = sweep_cells([(sized, base)], "n", [n], "tau_b", [base.tau_b], trials,
            threads, first_cell=index, keep_series=keep_series)
        finals = sweep.raw[0, 0, :, 0 if contagion == "a" else 1]
        results[n] = (sweep, branch_stats(finals, n, lower, upper))

    return results
