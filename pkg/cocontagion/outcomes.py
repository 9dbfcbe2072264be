"""
Copyright (c) 2019 The cocontagion developers
Released under the MIT license, see LICENSE.

Summaries of trial outcomes: how fast a contagion spreads, and how the final
diffusion depths of repeated trials split into branches.
"""

from dataclasses import dataclass
from typing import List, Tuple

import numpy as np
from numpy.linalg import LinAlgError
from scipy.integrate import trapezoid
from scipy.signal import find_peaks
from scipy.stats import gaussian_kde, norm

# narrowest kernel allowed, as a fraction of the node count. Also used when
# every sample is identical and Silverman's rule gives zero.
MIN_BANDWIDTH = 0.01

# local maxima below this share of the highest density are not modes
MODE_FLOOR = 0.05

@dataclass(frozen=True)
class BranchStats:
    """ kernel density of final depths (as fractions of n) and its modes
    """
    grid: np.ndarray
    kde_grid: np.ndarray
    modes: List[Tuple[float, float]]
    upper_fraction: float
    lower_fraction: float
    bandwidth: float
    lower: float
    upper: float

def speed_metric(result, threshold_fraction=0.5, contagion="a"):
    """ first step at which a contagion's cumulative count reaches a share of n

    Args:
        result: TrialResult
        threshold_fraction: share of the node count, strictly between 0 and 1
        contagion: "a" or "b"

    Returns:
        step number, or None if the threshold was never reached (censored)
    """

    if not 0 < threshold_fraction < 1:
        raise ValueError("threshold_fraction must lie strictly between 0 and 1")

    series = result.series_a if contagion == "a" else result.series_b
    target = threshold_fraction * result.node_count
    for step, count in enumerate(series):
        if count >= target:
            return step

    return None

def censored_median(steps):
    """ median of steps-to-threshold values, counting censored ones (None or
    nan) as slower than any observed value
    """

    values = np.array([np.inf if x is None else x for x in steps], dtype=np.float64)
    values[np.isnan(values)] = np.inf

    return float(np.median(values))

def _density(depths, grid):
    """ Gaussian KDE with Silverman's bandwidth, floored at MIN_BANDWIDTH
    """

    fallback = norm.pdf(grid, loc=depths.mean(), scale=MIN_BANDWIDTH), MIN_BANDWIDTH
    if np.ptp(depths) == 0:
        return fallback

    try:
        kde = gaussian_kde(depths, bw_method="silverman")
    except LinAlgError:
        return fallback

    bandwidth = float(np.sqrt(kde.covariance[0, 0]))
    if bandwidth < MIN_BANDWIDTH:
        kde.set_bandwidth(MIN_BANDWIDTH / depths.std(ddof=1))
        bandwidth = MIN_BANDWIDTH

    return kde(grid), bandwidth

def branch_stats(final_depths, node_count, lower=0.2, upper=0.8, grid_size=512):
    """ estimate the distribution of final depths and pick out its branches

    The density is evaluated on [0, 1] and renormalised there, so kernel mass
    spilling past full or zero diffusion is folded back in. Modes are the
    local maxima (endpoints included) above MODE_FLOOR of the highest one;
    each mode's mass is the integral between the minima separating it from
    its neighbours.

    Args:
        final_depths: final adoption counts of the trials
        node_count: number of nodes, to scale the depths
        lower: depth fraction below which a trial is in the lower branch
        upper: depth fraction above which a trial is in the upper branch
        grid_size: number of evaluation points

    Returns:
        BranchStats

    Raises:
        ValueError with fewer than two samples
    """

    depths = np.asarray(final_depths, dtype=np.float64) / node_count
    if depths.size < 2:
        raise ValueError("branch statistics need at least 2 samples, got {0}".format(
            depths.size))

    grid = np.linspace(0.0, 1.0, grid_size)
    density, bandwidth = _density(depths, grid)
    density = density / trapezoid(density, grid)

    padded = np.concatenate(([-1.0], density, [-1.0]))
    peaks, _ = find_peaks(padded, height=MODE_FLOOR * density.max())
    peaks = peaks - 1

    cuts = [0]
    for left, right in zip(peaks[:-1], peaks[1:]):
        cuts.append(int(left + np.argmin(density[left:right + 1])))
    cuts.append(grid_size - 1)

    modes = []
    for peak, start, end in zip(peaks, cuts[:-1], cuts[1:]):
        mass = trapezoid(density[start:end + 1], grid[start:end + 1])
        modes.append((float(grid[peak]), float(mass)))

    return BranchStats(grid, density, modes, float(np.mean(depths > upper)),
        float(np.mean(depths < lower)), bandwidth, lower, upper)

def joint_upper_fraction(finals, node_count, upper=0.8):
    """ share of trials where both contagions passed the upper depth threshold

    Args:
        finals: array of shape (trials, 2) with the final A and B counts
        node_count: number of nodes
        upper: depth fraction
    """

    finals = np.asarray(finals, dtype=np.float64) / node_count

    return float(np.mean(np.all(finals > upper, axis=1)))
