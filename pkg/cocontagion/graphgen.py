"""
Copyright (c) 2019 The cocontagion developers
Released under the MIT license, see LICENSE.

Generators for the single-layer topologies that get paired into multiplex
networks: periodic square lattices (LAT), k-regular random graphs (RRG),
Erdos-Renyi graphs with a fixed edge count (ERG), growing power-law graphs
(PLG) and Watts-Strogatz small worlds (WSG). Every generator is a pure
function of its GraphSpec, so the same spec and seed always give the same
adjacency.
"""

import logging
import math
import numbers
from collections import namedtuple
from dataclasses import asdict, dataclass, replace
from typing import Optional

import networkx as nx
import numpy as np
from scipy import sparse
from scipy.stats import skew

logger = logging.getLogger(__name__)

KINDS = ("LAT", "RRG", "ERG", "PLG", "WSG")

# give up on the RRG pairing model after this many failed pairings
MAX_RRG_RESTARTS = 1000

PathLength = namedtuple("PathLength", ["mean", "connected"])
DegreeStats = namedtuple("DegreeStats", ["mean", "variance", "skewness", "maximum"])

class GenerationError(RuntimeError):
    """ raised when a random graph could not be constructed
    """

def _is_integer(value):
    return isinstance(value, numbers.Integral) and not isinstance(value, bool)

@dataclass(frozen=True)
class GraphSpec:
    """ parameters for generating one network layer

    Only the fields relevant to the kind are used: k for LAT, RRG and WSG,
    m_edges for ERG (defaults to n*k/2, so mean degree k), m_per_node and
    triad_prob for PLG, and beta for WSG. A seed of None means the caller
    derives one (see experiments.build_multiplex).
    """
    kind: str
    n: int = 6400
    k: int = 4
    m_edges: Optional[int] = None
    m_per_node: int = 2
    triad_prob: float = 0.0
    beta: float = 0.001
    seed: Optional[int] = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError("kind must be one of {0}, not {1!r}".format(
                ", ".join(KINDS), self.kind))

        for name in ("n", "k", "m_per_node"):
            if not _is_integer(getattr(self, name)):
                raise ValueError("{0} must be an integer".format(name))
        if self.n < 1:
            raise ValueError("n must be at least 1")
        if self.k < 0:
            raise ValueError("k must not be negative")
        if not 0 <= self.beta <= 1:
            raise ValueError("beta must lie in [0,1]")
        if not 0 <= self.triad_prob <= 1:
            raise ValueError("triad_prob must lie in [0,1]")
        if self.seed is not None and (not _is_integer(self.seed) or self.seed < 0):
            raise ValueError("seed must be a non-negative integer or null")

        if self.kind == "ERG" and self.m_edges is None:
            object.__setattr__(self, "m_edges", self.n * self.k // 2)

        getattr(self, "_check_" + self.kind.lower())()

    def _check_lat(self):
        side = math.isqrt(self.n)
        if side * side != self.n:
            raise ValueError("n must be a perfect square for LAT, not {0}".format(self.n))
        if side < 3:
            raise ValueError("n must be at least 9 for LAT, smaller tori have duplicate wrap edges")
        if self.k != 4:
            raise ValueError("k must be 4 for LAT")

    def _check_rrg(self):
        if (self.n * self.k) % 2 != 0:
            raise ValueError("k must make n*k even for RRG ({0}*{1} is odd)".format(
                self.n, self.k))
        if self.k >= self.n:
            raise ValueError("k must be less than n for RRG")

    def _check_erg(self):
        if not _is_integer(self.m_edges) or self.m_edges < 0:
            raise ValueError("m_edges must be a non-negative integer")
        if self.m_edges > self.n * (self.n - 1) // 2:
            raise ValueError("m_edges must be at most n(n-1)/2 = {0}".format(
                self.n * (self.n - 1) // 2))

    def _check_plg(self):
        if self.m_per_node < 1:
            raise ValueError("m_per_node must be at least 1")
        if self.n <= self.m_per_node:
            raise ValueError("n must exceed m_per_node for PLG")

    def _check_wsg(self):
        if self.k % 2 != 0:
            raise ValueError("k must be even for WSG")
        if self.k >= self.n:
            raise ValueError("k must be less than n for WSG")

    def with_seed(self, seed):
        return replace(self, seed=seed)

    def resized(self, n):
        """ the same kind of layer on n nodes, recomputing derived edge counts
        """
        return replace(self, n=n, m_edges=None)

    def retyped(self, kind):
        """ a layer of another kind, keeping the shared fields

        m_edges only carries over between ERG specs.
        """
        if kind == self.kind:
            return self
        return replace(self, kind=kind, m_edges=None)

    def to_dict(self):
        return asdict(self)

class LayerGraph(object):
    """ an immutable, simple, undirected graph on the nodes 0..n-1

    adjacency holds a sorted tuple of neighbours for every node. The scipy
    CSR adjacency matrix used by the vectorised engine is built lazily and
    cached.
    """

    def __init__(self, node_count, edges=()):
        if not _is_integer(node_count) or node_count < 1:
            raise ValueError("node_count must be a positive integer")

        neighbours = [set() for _ in range(node_count)]
        for i, j in edges:
            i, j = int(i), int(j)
            if i == j:
                raise ValueError("self-loop at node {0}".format(i))
            if not (0 <= i < node_count and 0 <= j < node_count):
                raise ValueError("edge ({0}, {1}) is outside 0..{2}".format(i, j, node_count - 1))
            neighbours[i].add(j)
            neighbours[j].add(i)

        self.node_count = node_count
        self.adjacency = tuple(tuple(sorted(x)) for x in neighbours)
        self.degrees = np.array([len(x) for x in self.adjacency], dtype=np.int64)
        self.degrees.flags.writeable = False
        self.edge_count = int(self.degrees.sum()) // 2
        self._matrix = None

    @classmethod
    def from_networkx(cls, graph):
        """ convert a networkx graph whose nodes are the integers 0..n-1
        """
        return cls(graph.number_of_nodes(), graph.edges())

    def to_networkx(self):
        graph = nx.Graph()
        graph.add_nodes_from(range(self.node_count))
        graph.add_edges_from(self.edges())
        return graph

    def edges(self):
        """ yields each edge once as (i, j) with i < j, in ascending order
        """
        for i, neighbours in enumerate(self.adjacency):
            for j in neighbours:
                if i < j:
                    yield (i, j)

    @property
    def matrix(self):
        if self._matrix is None:
            indptr = np.concatenate(([0], np.cumsum(self.degrees)))
            indices = np.fromiter((j for x in self.adjacency for j in x),
                dtype=np.int64, count=int(indptr[-1]))
            data = np.ones(len(indices), dtype=np.float64)
            self._matrix = sparse.csr_matrix((data, indices, indptr),
                shape=(self.node_count, self.node_count))
        return self._matrix

    def __len__(self):
        return self.node_count

    def __eq__(self, other):
        if not isinstance(other, LayerGraph):
            return NotImplemented
        return self.node_count == other.node_count and self.adjacency == other.adjacency

    def __ne__(self, other):
        equal = self.__eq__(other)
        return equal if equal is NotImplemented else not equal

    __hash__ = None

    def __repr__(self):
        return "LayerGraph(node_count={0}, edge_count={1})".format(self.node_count,
            self.edge_count)

def _check_kind(spec, kind):
    if spec.kind != kind:
        raise ValueError("kind must be {0} for this generator, not {1}".format(kind, spec.kind))

def gen_lattice(spec):
    """ square lattice with periodic boundaries (a torus), every node degree 4

    Node (row, col) of the grid becomes node row * side + col.
    """

    _check_kind(spec, "LAT")
    side = math.isqrt(spec.n)
    grid = nx.grid_2d_graph(side, side, periodic=True)
    mapping = {(row, col): row * side + col for row, col in grid}

    return LayerGraph.from_networkx(nx.relabel_nodes(grid, mapping))

def gen_rrg(spec):
    """ k-regular random graph from the configuration (pairing) model

    Every node contributes k stubs, the stubs are shuffled and paired off. If
    the pairing has a self-loop or a repeated edge, the whole pairing is
    thrown away and we start again.

    Raises:
        GenerationError if no simple pairing turns up within MAX_RRG_RESTARTS
    """

    _check_kind(spec, "RRG")
    rng = np.random.default_rng(spec.seed)
    n, k = spec.n, spec.k
    if k == 0:
        return LayerGraph(n)

    stubs = np.repeat(np.arange(n, dtype=np.int64), k)
    for attempt in range(MAX_RRG_RESTARTS):
        rng.shuffle(stubs)
        pairs = stubs.reshape(-1, 2)
        low, high = pairs.min(axis=1), pairs.max(axis=1)
        if np.any(low == high):
            continue

        keys = low * n + high
        if np.unique(keys).size < keys.size:
            continue

        logger.debug("RRG n=%d k=%d paired after %d restarts", n, k, attempt)
        return LayerGraph(n, zip(low.tolist(), high.tolist()))

    raise GenerationError("no simple {0}-regular pairing on {1} nodes after {2} "
        "restarts".format(k, n, MAX_RRG_RESTARTS))

def gen_erg(spec):
    """ Erdos-Renyi graph with exactly m_edges edges

    Unordered node pairs are drawn uniformly and kept if they are new, until
    m_edges distinct pairs have been collected.
    """

    _check_kind(spec, "ERG")
    rng = np.random.default_rng(spec.seed)
    n, m = spec.n, spec.m_edges

    chosen = set()
    edges = []
    while len(edges) < m:
        batch = rng.integers(0, n, size=(2 * (m - len(edges)) + 16, 2))
        for i, j in batch.tolist():
            if i == j:
                continue
            pair = (i, j) if i < j else (j, i)
            if pair in chosen:
                continue
            chosen.add(pair)
            edges.append(pair)
            if len(edges) == m:
                break

    return LayerGraph(n, edges)

def _preferential_target(rng, repeated, exclude):
    """ pick a node with probability proportional to its degree

    Args:
        rng: numpy Generator
        repeated: list holding every node once per edge end it has
        exclude: nodes which may not be picked
    """

    while True:
        node = repeated[int(rng.integers(len(repeated)))]
        if node not in exclude:
            return node

def gen_plg(spec):
    """ growing power-law graph by preferential attachment with triad formation

    Growth starts from a clique on m_per_node + 1 nodes. Each new node adds
    m_per_node edges: the first goes to a node picked proportional to degree;
    each further edge closes a triangle with the previous preferential target
    with probability triad_prob (if such a neighbour is free), otherwise it is
    another preferential pick. With the default triad_prob of 0 this is plain
    growing preferential attachment.
    """

    _check_kind(spec, "PLG")
    rng = np.random.default_rng(spec.seed)
    n, m = spec.n, spec.m_per_node

    neighbours = [set() for _ in range(n)]
    repeated = []

    def connect(u, v):
        neighbours[u].add(v)
        neighbours[v].add(u)
        repeated.extend((u, v))

    for u in range(m + 1):
        for v in range(u + 1, m + 1):
            connect(u, v)

    for source in range(m + 1, n):
        chosen = []
        target = None
        while len(chosen) < m:
            if target is not None and spec.triad_prob > 0 and rng.random() < spec.triad_prob:
                candidates = sorted(x for x in neighbours[target] if x not in chosen)
                if candidates:
                    chosen.append(candidates[int(rng.integers(len(candidates)))])
                    continue
            target = _preferential_target(rng, repeated, chosen)
            chosen.append(target)

        # attach after picking, so targets are drawn from the degrees before
        # this node arrived
        for target in chosen:
            connect(source, target)

    return LayerGraph(n, ((u, v) for u in range(n) for v in neighbours[u] if u < v))

def gen_wsg(spec):
    """ Watts-Strogatz small world

    Nodes sit on a ring, each joined to the k/2 nearest nodes on either side.
    Edges are visited in canonical order (node, then rightward offset) and
    each has its far endpoint rewired to a uniformly chosen node with
    probability beta. A rewire which would make a self-loop or repeat an
    existing edge is skipped, so the edge count is always n*k/2.
    """

    _check_kind(spec, "WSG")
    rng = np.random.default_rng(spec.seed)
    n, half = spec.n, spec.k // 2

    neighbours = [set() for _ in range(n)]
    for node in range(n):
        for offset in range(1, half + 1):
            other = (node + offset) % n
            neighbours[node].add(other)
            neighbours[other].add(node)

    coins = rng.random((n, half))
    targets = rng.integers(0, n, size=(n, half))

    rewired = 0
    for node, column in zip(*np.nonzero(coins < spec.beta)):
        node, column = int(node), int(column)
        far = (node + column + 1) % n
        new = int(targets[node, column])
        if new == node or new in neighbours[node]:
            continue

        neighbours[node].discard(far)
        neighbours[far].discard(node)
        neighbours[node].add(new)
        neighbours[new].add(node)
        rewired += 1

    logger.debug("WSG n=%d k=%d beta=%g rewired %d edges", n, spec.k, spec.beta, rewired)

    return LayerGraph(n, ((u, v) for u in range(n) for v in neighbours[u] if u < v))

GENERATORS = {"LAT": gen_lattice, "RRG": gen_rrg, "ERG": gen_erg, "PLG": gen_plg,
    "WSG": gen_wsg}

def generate_layer(spec):
    """ build the layer described by a GraphSpec
    """
    return GENERATORS[spec.kind](spec)

def mean_shortest_path(graph, sample_size=200, seed=None):
    """ estimate the characteristic path length by BFS from sampled sources

    Args:
        graph: LayerGraph
        sample_size: number of source nodes. If this is at least the node
            count, every node is used as a source and the value is exact.
        seed: seed for picking the sources

    Returns:
        PathLength tuple of the mean distance from the sources to every node
        they can reach, and whether every source reached the whole graph. For
        a disconnected graph the mean only covers pairs within components.
    """

    network = graph.to_networkx()
    n = graph.node_count
    if sample_size >= n:
        sources = range(n)
    else:
        rng = np.random.default_rng(seed)
        sources = sorted(rng.choice(n, size=sample_size, replace=False).tolist())

    total, pairs = 0, 0
    connected = True
    for source in sources:
        lengths = nx.single_source_shortest_path_length(network, source)
        if len(lengths) < n:
            connected = False
        total += sum(lengths.values())
        pairs += len(lengths) - 1

    mean = total / pairs if pairs > 0 else 0.0

    return PathLength(mean, connected)

def degree_stats(graph):
    """ summarise the degree distribution of a layer

    Returns:
        DegreeStats with the mean, population variance, sample skewness and
        maximum of the degree sequence. Skewness is 0 for a regular graph.
    """

    degrees = graph.degrees.astype(np.float64)
    variance = float(degrees.var())
    skewness = float(skew(degrees)) if variance > 0 else 0.0

    return DegreeStats(float(degrees.mean()), variance, skewness, int(graph.degrees.max()))

def write_edge_list(graph, path):
    """ save a layer as text: a '# n=<nodes>' header then one 'i j' line per edge
    """

    with open(path, "w") as output:
        output.write("# n={0}\n".format(graph.node_count))
        for i, j in graph.edges():
            output.write("{0} {1}\n".format(i, j))

def read_edge_list(path):
    """ load a layer saved by write_edge_list

    Raises:
        ValueError if the header line is missing or a line isn't a node pair
    """

    with open(path, "r") as handle:
        header = handle.readline().strip()
        if not header.startswith("# n="):
            raise ValueError("{0} lacks the '# n=<nodes>' header line".format(path))
        node_count = int(header[len("# n="):])

        edges = []
        for lineno, line in enumerate(handle, start=2):
            line = line.split()
            if not line:
                continue
            if len(line) != 2:
                raise ValueError("{0}:{1}: expected 'i j', got {2!r}".format(path,
                    lineno, " ".join(line)))
            edges.append((int(line[0]), int(line[1])))

    return LayerGraph(node_count, edges)
