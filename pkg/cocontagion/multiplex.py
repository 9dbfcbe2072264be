"""
Copyright (c) 2019 The cocontagion developers
Released under the MIT license, see LICENSE.

Edge-colored multiplex networks: two layers over the same set of nodes,
joined by a random one-to-one node correspondence.
"""

import networkx as nx
import numpy as np

from cocontagion.graphgen import LayerGraph

LAYERS = ("A", "B")

class Multiplex(object):
    """ two layers plus the node correspondence between them

    Node ids throughout the simulation are canonical, i.e. layer-A indices.
    Canonical node i is node map_ab[i] in layer B. The layer-B graph is
    relabelled into canonical ids once, here, so the dynamics never translate
    indices.
    """

    def __init__(self, layer_a, layer_b, map_ab):
        if layer_a.node_count != layer_b.node_count:
            raise ValueError("layers must have equal node counts ({0} != {1})".format(
                layer_a.node_count, layer_b.node_count))

        n = layer_a.node_count
        map_ab = np.array(map_ab, dtype=np.int64)
        if map_ab.shape != (n, ) or not np.array_equal(np.sort(map_ab), np.arange(n)):
            raise ValueError("map_ab must be a permutation of 0..{0}".format(n - 1))
        map_ab.flags.writeable = False

        inverse = np.empty(n, dtype=np.int64)
        inverse[map_ab] = np.arange(n)
        inverse.flags.writeable = False

        self.layer_a = layer_a
        self.layer_b = layer_b
        self.map_ab = map_ab
        self.map_ba = inverse

        relabelled = nx.relabel_nodes(layer_b.to_networkx(),
            dict(enumerate(inverse.tolist())))
        self.canonical_b = LayerGraph.from_networkx(relabelled)

    @property
    def node_count(self):
        return self.layer_a.node_count

    def layer(self, name):
        """ the layer graph in canonical node ids, for layer "A" or "B"
        """

        if name == "A":
            return self.layer_a
        elif name == "B":
            return self.canonical_b
        raise ValueError("layer must be one of {0}, not {1!r}".format(LAYERS, name))

    def __repr__(self):
        return "Multiplex(node_count={0}, edges_a={1}, edges_b={2})".format(
            self.node_count, self.layer_a.edge_count, self.layer_b.edge_count)

def pair_layers(layer_a, layer_b, seed=None):
    """ pair the nodes of two layers by a uniformly random permutation

    Args:
        layer_a: LayerGraph for contagion A
        layer_b: LayerGraph for contagion B, same node count
        seed: seed for the permutation

    Returns:
        Multiplex

    Raises:
        ValueError if the layers have different node counts
    """

    if layer_a.node_count != layer_b.node_count:
        raise ValueError("layers must have equal node counts ({0} != {1})".format(
            layer_a.node_count, layer_b.node_count))

    rng = np.random.default_rng(seed)

    return Multiplex(layer_a, layer_b, rng.permutation(layer_a.node_count))

def neighbors_of(multiplex, node, layer):
    """ neighbours of a node within one layer, in canonical node ids

    Raises:
        IndexError if node is not in 0..n-1
    """

    if not 0 <= node < multiplex.node_count:
        raise IndexError("node {0} is outside 0..{1}".format(node,
            multiplex.node_count - 1))

    return list(multiplex.layer(layer).adjacency[node])
