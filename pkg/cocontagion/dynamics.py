"""
Copyright (c) 2019 The cocontagion developers
Released under the MIT license, see LICENSE.

Per-node mathematics of co-contagion: local densities of active infected
neighbours, the multivariate Hill adoption probability, the density-weighted
choice between contagions for naive nodes, and dormancy.

The probability functions take scalars or numpy arrays, so the per-node
reference engine and the vectorised engine share the same arithmetic.
"""

import numbers
from collections import namedtuple
from dataclasses import dataclass
from typing import Optional

import numpy as np

Densities = namedtuple("Densities", ["dens_a", "dens_b"])

@dataclass(frozen=True)
class SimParams:
    """ parameters for a co-contagion trial

    alpha is the synergy exponent (below 1 synergistic, above 1
    antagonistic), k_a and k_b the attractiveness constants, tau_a and tau_b
    the per-step dormancy probabilities. expose_new_adopters sets whether
    nodes which adopted during a step face that step's dormancy draw.
    vectorized picks the engine's step implementation; both give identical
    results.
    """
    alpha: float = 1.0
    k_a: float = 1.34
    k_b: float = 1.34
    tau_a: float = 0.0
    tau_b: float = 0.0
    max_steps: int = 1000
    master_seed: int = 0
    expose_new_adopters: bool = True
    vectorized: bool = True

    def __post_init__(self):
        for name in ("alpha", "k_a", "k_b", "tau_a", "tau_b"):
            value = getattr(self, name)
            if not isinstance(value, numbers.Real) or isinstance(value, bool):
                raise ValueError("{0} must be a number".format(name))
        if not self.alpha > 0:
            raise ValueError("alpha must be positive")
        if not (self.k_a > 0 and self.k_b > 0):
            raise ValueError("{0} must be positive".format("k_a" if not self.k_a > 0 else "k_b"))
        for name in ("tau_a", "tau_b"):
            if not 0 <= getattr(self, name) <= 1:
                raise ValueError("{0} must lie in [0,1]".format(name))
        for name in ("max_steps", "master_seed"):
            value = getattr(self, name)
            if not isinstance(value, numbers.Integral) or isinstance(value, bool):
                raise ValueError("{0} must be an integer".format(name))
        if self.max_steps < 1:
            raise ValueError("max_steps must be at least 1")
        if self.master_seed < 0:
            raise ValueError("master_seed must not be negative")
        for name in ("expose_new_adopters", "vectorized"):
            if not isinstance(getattr(self, name), bool):
                raise ValueError("{0} must be true or false".format(name))

@dataclass
class SimState:
    """ infection and activity flags for every node

    s_a[i] is set once node i has adopted A, active_a[i] while it still
    spreads A (likewise for B). Activity implies infection, and infection is
    never lost.

    count_a and count_b hold the number of nodes infected with each
    contagion, active_count_a and active_count_b the number still spreading
    it. The steps update them from the nodes that changed; counts left as
    None are taken from the flags. Flags edited in place after construction
    need refresh_counts().
    """
    s_a: np.ndarray
    s_b: np.ndarray
    active_a: np.ndarray
    active_b: np.ndarray
    step: int = 0
    count_a: Optional[int] = None
    count_b: Optional[int] = None
    active_count_a: Optional[int] = None
    active_count_b: Optional[int] = None

    def __post_init__(self):
        if self.count_a is None:
            self.count_a = int(np.count_nonzero(self.s_a))
        if self.count_b is None:
            self.count_b = int(np.count_nonzero(self.s_b))
        if self.active_count_a is None:
            self.active_count_a = int(np.count_nonzero(self.active_a))
        if self.active_count_b is None:
            self.active_count_b = int(np.count_nonzero(self.active_b))

    @classmethod
    def naive(cls, node_count):
        flags = [np.zeros(node_count, dtype=bool) for _ in range(4)]
        return cls(*flags, 0, 0, 0, 0, 0)

    def refresh_counts(self):
        self.count_a = int(np.count_nonzero(self.s_a))
        self.count_b = int(np.count_nonzero(self.s_b))
        self.active_count_a = int(np.count_nonzero(self.active_a))
        self.active_count_b = int(np.count_nonzero(self.active_b))
        return self

    def copy(self):
        return SimState(self.s_a.copy(), self.s_b.copy(), self.active_a.copy(),
            self.active_b.copy(), self.step, self.count_a, self.count_b,
            self.active_count_a, self.active_count_b)

    def __len__(self):
        return len(self.s_a)

    def __eq__(self, other):
        if not isinstance(other, SimState):
            return NotImplemented
        return self.step == other.step and all(np.array_equal(getattr(self, x), getattr(other, x))
            for x in ("s_a", "s_b", "active_a", "active_b"))

    def is_consistent(self):
        """ check that no node is active for a contagion it never adopted
        """
        return not (np.any(self.active_a & ~self.s_a) or np.any(self.active_b & ~self.s_b))

def local_densities(multiplex, state, node):
    """ fraction of a node's neighbours which are infected and active, per layer

    Dormant neighbours don't count toward the numerator. A node without
    neighbours in a layer has density 0 there.

    Args:
        multiplex: Multiplex network
        state: SimState at the start of the step
        node: canonical node id

    Returns:
        Densities tuple
    """

    neighbours_a = multiplex.layer_a.adjacency[node]
    neighbours_b = multiplex.canonical_b.adjacency[node]

    live_a = sum(1 for j in neighbours_a if state.s_a[j] and state.active_a[j])
    live_b = sum(1 for j in neighbours_b if state.s_b[j] and state.active_b[j])

    dens_a = live_a / len(neighbours_a) if neighbours_a else 0.0
    dens_b = live_b / len(neighbours_b) if neighbours_b else 0.0

    return Densities(dens_a, dens_b)

def hill_term(density, constant, alpha):
    """ (density / constant) ** alpha, with 0 ** alpha = 0
    """
    return np.power(np.divide(density, constant), alpha)

def adoption_prob(densities, s_a, s_b, params):
    """ probability that a node adopts a contagion it lacks this step

    x = (1 - s_a) (dens_a / K_A)^alpha + (1 - s_b) (dens_b / K_B)^alpha and the
    probability is x / (1 + x). A node holding A can only pick up B, which
    reduces this to the single-contagion Hill function of dens_b; a node
    holding both adopts nothing.

    Args:
        densities: Densities (scalars or arrays)
        s_a: whether the node(s) already hold A
        s_b: whether the node(s) already hold B
        params: SimParams

    Returns:
        probability in [0, 1), or an array of them
    """

    term_a = hill_term(densities.dens_a, params.k_a, params.alpha)
    term_b = hill_term(densities.dens_b, params.k_b, params.alpha)

    x = np.where(s_a, 0.0, term_a) + np.where(s_b, 0.0, term_b)

    return x / (1.0 + x)

def choice_prob_a(densities, params):
    """ probability that a naive node which adopts picks A rather than B

    Only meaningful after an adoption, which needs a positive density in at
    least one layer.
    """

    term_a = hill_term(densities.dens_a, params.k_a, params.alpha)
    term_b = hill_term(densities.dens_b, params.k_b, params.alpha)
    total = term_a + term_b
    assert np.all(total > 0), "choice between contagions needs a positive density"

    return term_a / total

def choice_prob_b(densities, params):
    term_a = hill_term(densities.dens_a, params.k_a, params.alpha)
    term_b = hill_term(densities.dens_b, params.k_b, params.alpha)
    total = term_a + term_b
    assert np.all(total > 0), "choice between contagions needs a positive density"

    return term_b / total

def dormancy_draws(state, params, draws, spared_a=None, spared_b=None):
    """ send active nodes dormant with probability tau_a (for A) and tau_b (for B)

    Dormancy is permanent and leaves the infection flags alone, so a dormant
    node can still adopt the other contagion.

    Args:
        state: SimState
        params: SimParams
        draws: a numpy Generator, or a (2, n) array of uniform draws indexed
            by node, row 0 for A and row 1 for B
        spared_a: optional boolean mask of nodes exempt from the A draw
        spared_b: optional boolean mask of nodes exempt from the B draw

    Returns:
        new SimState
    """

    if isinstance(draws, np.random.Generator):
        draws = draws.random((2, len(state)))

    dormant_a = state.active_a & (draws[0] < params.tau_a)
    dormant_b = state.active_b & (draws[1] < params.tau_b)
    if spared_a is not None:
        dormant_a &= ~spared_a
    if spared_b is not None:
        dormant_b &= ~spared_b

    return SimState(state.s_a.copy(), state.s_b.copy(), state.active_a & ~dormant_a,
        state.active_b & ~dormant_b, state.step, state.count_a, state.count_b,
        state.active_count_a - int(np.count_nonzero(dormant_a)),
        state.active_count_b - int(np.count_nonzero(dormant_b)))
