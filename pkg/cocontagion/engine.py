"""
Copyright (c) 2019 The cocontagion developers
Released under the MIT license, see LICENSE.

Synchronous time stepping of a single co-contagion trial.

Every step has two phases. In the adoption phase each node looks at the
state from the start of the step: naive nodes adopt with the Hill
probability and then pick A or B by the density-weighted coin toss, singly
infected nodes may pick up the other contagion, and doubly infected nodes are
done. In the dormancy phase every active node may go dormant for each
contagion it spreads.

Random draws are indexed by (step, purpose, node) rather than consumed in
sequence, so the per-node reference loop and the vectorised step make
identical decisions, and node evaluation order can never change a result.
"""

import logging
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from cocontagion.dynamics import (SimState, adoption_prob, choice_prob_a,
    dormancy_draws, hill_term, local_densities)

logger = logging.getLogger(__name__)

# rows of the per-step draw matrix
ADOPT, CHOOSE, DORMANT_A, DORMANT_B = range(4)

# first element of every SeedSequence spawn key, to keep the graph, dynamics
# and path-sampling streams apart
GRAPH_STREAM, DYNAMICS_STREAM, PATH_STREAM = 0, 1, 2

EXTINCT, SATURATED, HORIZON = "extinct", "saturated", "horizon"

class DrawStream(object):
    """ the random numbers for one trial, a pure function of (master_seed, trial_index)
    """

    def __init__(self, master_seed, trial_index):
        self.master_seed = master_seed
        self.trial_index = trial_index

    def seed_generator(self):
        """ generator used to pick the initial node
        """
        sequence = np.random.SeedSequence(self.master_seed,
            spawn_key=(DYNAMICS_STREAM, self.trial_index))
        return np.random.default_rng(sequence)

    def step_draws(self, step, node_count):
        """ uniform draws for one step, shape (4, n): purpose by node
        """
        sequence = np.random.SeedSequence(self.master_seed,
            spawn_key=(DYNAMICS_STREAM, self.trial_index, step))
        return np.random.default_rng(sequence).random((4, node_count))

@dataclass(frozen=True)
class TrialResult:
    """ cumulative adoption counts of a trial, one entry per step from step 0
    """
    series_a: Tuple[int, ...]
    series_b: Tuple[int, ...]
    final_a: int
    final_b: int
    steps_run: int
    stop_reason: str
    node_count: int

    def rows(self):
        """ yields (step, count_a, count_b) for every recorded step
        """
        for step, (count_a, count_b) in enumerate(zip(self.series_a, self.series_b)):
            yield step, count_a, count_b

def seed_initial(multiplex, rng):
    """ infect one uniformly chosen node with both contagions, active for both

    Args:
        multiplex: Multiplex network
        rng: numpy Generator

    Returns:
        SimState at step 0
    """

    state = SimState.naive(multiplex.node_count)
    node = int(rng.integers(multiplex.node_count))
    for flags in (state.s_a, state.s_b, state.active_a, state.active_b):
        flags[node] = True

    return state.refresh_counts()

def step_reference(multiplex, state, params, draws):
    """ advance one step by looping over the nodes

    This is the plain transcription of the process, and the oracle for
    step_vectorized.

    Args:
        multiplex: Multiplex network
        state: SimState at the start of the step
        params: SimParams
        draws: (4, n) array of uniform draws from DrawStream.step_draws

    Returns:
        SimState for the next step
    """

    n = multiplex.node_count
    nxt = state.copy()
    new_a = np.zeros(n, dtype=bool)
    new_b = np.zeros(n, dtype=bool)

    for node in range(n):
        has_a, has_b = bool(state.s_a[node]), bool(state.s_b[node])
        if has_a and has_b:
            continue

        densities = local_densities(multiplex, state, node)
        if not draws[ADOPT, node] < adoption_prob(densities, has_a, has_b, params):
            continue

        if not has_a and not has_b:
            picks_a = draws[CHOOSE, node] < choice_prob_a(densities, params)
        else:
            picks_a = has_b

        if picks_a:
            nxt.s_a[node] = nxt.active_a[node] = new_a[node] = True
            nxt.count_a += 1
            nxt.active_count_a += 1
        else:
            nxt.s_b[node] = nxt.active_b[node] = new_b[node] = True
            nxt.count_b += 1
            nxt.active_count_b += 1

    for node in range(n):
        if nxt.active_a[node] and (params.expose_new_adopters or not new_a[node]):
            if draws[DORMANT_A, node] < params.tau_a:
                nxt.active_a[node] = False
                nxt.active_count_a -= 1
        if nxt.active_b[node] and (params.expose_new_adopters or not new_b[node]):
            if draws[DORMANT_B, node] < params.tau_b:
                nxt.active_b[node] = False
                nxt.active_count_b -= 1

    nxt.step = state.step + 1

    return nxt

def _layer_densities(layer, live):
    counts = layer.matrix @ live
    return np.divide(counts, layer.degrees, out=np.zeros(len(live)),
        where=layer.degrees > 0)

def step_vectorized(multiplex, state, params, draws):
    """ advance one step with whole-array operations

    With Delta the adoption indicator and gamma the choice of A (forced to B
    for nodes holding A, and to A for nodes holding B):

        s_A(t+1) = s_A(t) + (1 - s_A(t)) Delta gamma
        s_B(t+1) = s_B(t) + (1 - s_B(t)) Delta (1 - gamma)

    Takes the same arguments as step_reference and returns the identical
    state.
    """

    live_a = (state.s_a & state.active_a).astype(np.float64)
    live_b = (state.s_b & state.active_b).astype(np.float64)
    dens_a = _layer_densities(multiplex.layer_a, live_a)
    dens_b = _layer_densities(multiplex.canonical_b, live_b)

    term_a = hill_term(dens_a, params.k_a, params.alpha)
    term_b = hill_term(dens_b, params.k_b, params.alpha)
    x = np.where(state.s_a, 0.0, term_a) + np.where(state.s_b, 0.0, term_b)
    delta = draws[ADOPT] < x / (1.0 + x)

    total = term_a + term_b
    share_a = np.divide(term_a, total, out=np.zeros(len(total)), where=total > 0)
    naive = ~(state.s_a | state.s_b)
    gamma = np.where(naive, draws[CHOOSE] < share_a, state.s_b)

    new_a = delta & gamma & ~state.s_a
    new_b = delta & ~gamma & ~state.s_b

    adopted_a = int(np.count_nonzero(new_a))
    adopted_b = int(np.count_nonzero(new_b))
    nxt = SimState(state.s_a | new_a, state.s_b | new_b, state.active_a | new_a,
        state.active_b | new_b, state.step + 1, state.count_a + adopted_a,
        state.count_b + adopted_b, state.active_count_a + adopted_a,
        state.active_count_b + adopted_b)

    if params.expose_new_adopters:
        return dormancy_draws(nxt, params, draws[DORMANT_A:])
    return dormancy_draws(nxt, params, draws[DORMANT_A:], spared_a=new_a, spared_b=new_b)

def stop_reason(state, node_count, max_steps):
    """ why a trial ends at this state, or None to keep stepping

    Only reads the state's counts, never its flags.
    """
    if state.active_count_a == 0 and state.active_count_b == 0:
        return EXTINCT
    if state.count_a == node_count and state.count_b == node_count:
        return SATURATED
    if state.step >= max_steps:
        return HORIZON
    return None

def run_trial(multiplex, params, trial_index, stream=None):
    """ simulate one trial from a single doubly infected seed until it stops

    A trial stops when no node is active for either contagion (extinct),
    when every node holds both (saturated), or at params.max_steps (horizon).

    Args:
        multiplex: Multiplex network
        params: SimParams
        trial_index: index of the trial, which with params.master_seed fixes
            every random draw
        stream: source of the seed generator and per-step draws, by default
            DrawStream(params.master_seed, trial_index)

    Returns:
        TrialResult
    """

    n = multiplex.node_count
    stream = stream or DrawStream(params.master_seed, trial_index)
    step = step_vectorized if params.vectorized else step_reference

    state = seed_initial(multiplex, stream.seed_generator())
    series_a, series_b = [state.count_a], [state.count_b]
    reason = stop_reason(state, n, params.max_steps)
    while reason is None:
        state = step(multiplex, state, params, stream.step_draws(state.step + 1, n))
        series_a.append(state.count_a)
        series_b.append(state.count_b)
        reason = stop_reason(state, n, params.max_steps)

    logger.debug("trial %d stopped (%s) after %d steps with %d A and %d B",
        trial_index, reason, state.step, series_a[-1], series_b[-1])

    return TrialResult(tuple(series_a), tuple(series_b), series_a[-1], series_b[-1],
        state.step, reason, n)
