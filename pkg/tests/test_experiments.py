"""
Copyright (c) 2019 The cocontagion developers
Released under the MIT license, see LICENSE.
"""

import unittest
from dataclasses import replace

import numpy as np

from cocontagion.dynamics import SimParams
from cocontagion.experiments import (Pairing, build_multiplex, cell_branches,
    pairing_from_name, path_lengths, resolve_threads, scenario_branching,
    scenario_long_short, scenario_speed_order, scenario_synergy, sweep_beta,
    sweep_tau_grid)
from cocontagion.graphgen import GraphSpec

class TestBuildMultiplex(unittest.TestCase):
    """ check per-trial layer generation
    """

    def setUp(self):
        self.pairing = Pairing(GraphSpec("RRG", n=100), GraphSpec("ERG", n=100))

    def test_reproducible(self):
        """ each (cell, trial) has its own layers, fixed by the master seed
        """

        first = build_multiplex(self.pairing, 1, 0, 0)
        again = build_multiplex(self.pairing, 1, 0, 0)
        other = build_multiplex(self.pairing, 1, 0, 1)

        self.assertEqual(first.layer_a, again.layer_a)
        self.assertEqual(first.layer_b, again.layer_b)
        self.assertTrue(np.array_equal(first.map_ab, again.map_ab))
        self.assertNotEqual(first.layer_a, other.layer_a)

    def test_fixed_layer_seed(self):
        """ a layer spec with its own seed gives the same layer every trial
        """

        pairing = Pairing(GraphSpec("RRG", n=100, seed=9), GraphSpec("ERG", n=100))
        first = build_multiplex(pairing, 1, 0, 0)
        other = build_multiplex(pairing, 1, 0, 1)
        self.assertEqual(first.layer_a, other.layer_a)
        self.assertNotEqual(first.layer_b, other.layer_b)

    def test_pairing_from_name(self):
        pairing = pairing_from_name("ERG-PLG", 100)
        self.assertEqual((pairing.layer_a.kind, pairing.layer_b.kind), ("ERG", "PLG"))
        self.assertEqual(pairing.layer_b.n, 100)

        with self.assertRaises(ValueError):
            pairing_from_name("ERG", 100)

    def test_pairing_templates(self):
        """ templates keep their fields when retyped to the named kinds
        """

        templates = Pairing(GraphSpec("ERG", n=100, m_edges=60),
            GraphSpec("ERG", n=100, m_per_node=3, seed=5))

        same = pairing_from_name("ERG-ERG", templates=templates)
        self.assertEqual(same, templates)

        pairing = pairing_from_name("ERG-PLG", templates=templates)
        self.assertEqual(pairing.layer_a.m_edges, 60)
        self.assertEqual(pairing.layer_b.kind, "PLG")
        self.assertEqual(pairing.layer_b.m_per_node, 3)
        self.assertEqual(pairing.layer_b.seed, 5)
        self.assertIsNone(pairing.layer_b.m_edges)

    def test_resolve_threads(self):
        self.assertEqual(resolve_threads(3), 3)
        self.assertGreaterEqual(resolve_threads("auto"), 1)

class TestSweeps(unittest.TestCase):
    """ check accounting and aggregation of sweeps
    """

    def setUp(self):
        self.pairing = Pairing(GraphSpec("RRG", n=100), GraphSpec("ERG", n=100))
        self.params = SimParams(alpha=1.0, master_seed=4)

    def test_tau_grid(self):
        """ a 2x2 grid with 3 trials per cell runs 12 distinct trials
        """

        sweep = sweep_tau_grid(self.pairing, [0.0, 0.3], [0.1, 0.2], self.params, 3)

        self.assertEqual(sweep.shape, (2, 2))
        self.assertEqual(sweep.raw.shape, (2, 2, 3, 2))
        self.assertEqual(sweep.threshold_steps.shape, (2, 2, 3, 2))
        self.assertEqual(len(sweep.trial_keys), 12)
        self.assertEqual(sorted(x[2] for x in sweep.trial_keys), list(range(12)))
        self.assertEqual(sweep.axes, {"tau_a": (0.0, 0.3), "tau_b": (0.1, 0.2)})

        self.assertTrue(np.allclose(sweep.mean_final_a, sweep.raw[..., 0].mean(axis=2)))
        self.assertTrue(np.allclose(sweep.std_final_b, sweep.raw[..., 1].std(axis=2)))
        self.assertTrue(np.all(sweep.raw >= 1))
        self.assertTrue(np.all(sweep.raw <= 100))

    def test_single_trial_cells(self):
        """ one trial per cell has no spread
        """

        sweep = sweep_tau_grid(self.pairing, [0.1], [0.1, 0.2], self.params, 1)
        self.assertTrue(np.all(sweep.std_final_a == 0))
        self.assertTrue(np.all(sweep.std_final_b == 0))

    def test_thread_count_independence(self):
        """ worker processes don't change any result
        """

        serial = sweep_tau_grid(self.pairing, [0.0, 0.2], [0.1], self.params, 3, threads=1)
        parallel = sweep_tau_grid(self.pairing, [0.0, 0.2], [0.1], self.params, 3, threads=2)
        self.assertTrue(np.array_equal(serial.raw, parallel.raw))
        self.assertTrue(np.array_equal(serial.threshold_steps, parallel.threshold_steps,
            equal_nan=True))
        self.assertEqual(serial.trial_keys, parallel.trial_keys)

    def test_invalid_sweeps(self):
        with self.assertRaises(ValueError):
            sweep_tau_grid(self.pairing, [0.1], [0.1], self.params, 0)
        with self.assertRaises(ValueError):
            sweep_tau_grid(self.pairing, [], [0.1], self.params, 1)
        with self.assertRaises(ValueError):
            sweep_beta([0.0], [0.1], self.params, 1, GraphSpec("WSG", n=100))
        with self.assertRaises(ValueError):
            sweep_beta([0.1], [0.1], self.params, 1, GraphSpec("ERG", n=100))

    def test_beta_sweep(self):
        """ rows are tau_b values and columns beta_b values
        """

        sweep = sweep_beta([0.01, 0.1], [0.0], self.params, 2, GraphSpec("WSG", n=100))
        self.assertEqual((sweep.row_axis, sweep.col_axis), ("tau_b", "beta_b"))
        self.assertEqual(sweep.shape, (1, 2))

    def test_keep_series(self):
        """ kept series end on the recorded final depths of every trial
        """

        sweep = sweep_tau_grid(self.pairing, [0.1, 0.3], [0.2], self.params, 3,
            keep_series=True)
        self.assertEqual(sorted(sweep.series), [(0, 0), (1, 0)])

        for (row, col), results in sweep.series.items():
            self.assertEqual(len(results), 3)
            for trial, result in enumerate(results):
                self.assertEqual(result.series_a[0], 1)
                self.assertEqual(result.series_a[-1], sweep.raw[row, col, trial, 0])
                self.assertEqual(result.series_b[-1], sweep.raw[row, col, trial, 1])

        plain = sweep_tau_grid(self.pairing, [0.1, 0.3], [0.2], self.params, 3)
        self.assertIsNone(plain.series)
        self.assertTrue(np.array_equal(plain.raw, sweep.raw))

    def test_beta_sweep_layer_templates(self):
        """ B's layer comes from its own template, with beta from the grid
        """

        layer_a = GraphSpec("WSG", n=100, k=4)
        layer_b = GraphSpec("WSG", n=100, k=6)
        sweep = sweep_beta([0.1], [0.0], self.params, 2, layer_a, beta_a=0.01,
            layer_b=layer_b, keep_series=True)
        self.assertEqual(len(sweep.series[(0, 0)]), 2)

        with self.assertRaises(ValueError):
            sweep_beta([0.1], [0.0], self.params, 1, layer_a,
                layer_b=GraphSpec("WSG", n=64))

    def test_path_lengths(self):
        """ rewiring shortens the characteristic path length
        """

        layer = GraphSpec("WSG", n=100, k=4)
        lengths = path_lengths(layer, [0.0, 0.2], master_seed=1, sample_size=100)
        self.assertEqual([x[0] for x in lengths], [0.0, 0.2])
        self.assertAlmostEqual(lengths[0][1].mean, 1275 / 99)
        self.assertLess(lengths[1][1].mean, lengths[0][1].mean)

class TestScenarios(unittest.TestCase):
    """ check the scenario helpers on small networks
    """

    def setUp(self):
        self.params = SimParams(alpha=1.0, tau_a=0.05, tau_b=0.05, master_seed=2)

    def test_synergy(self):
        results = scenario_synergy(self.params, [0.5, 1.0], ["ERG-ERG", "ERG-RRG"], 2, n=100)
        self.assertEqual(list(results), ["ERG-ERG", "ERG-RRG"])
        self.assertEqual(results["ERG-RRG"].shape, (2, 1))
        self.assertIsNone(results["ERG-RRG"].series)

        # the two pairings use distinct cells, hence distinct trials
        keys = results["ERG-ERG"].trial_keys + results["ERG-RRG"].trial_keys
        self.assertEqual(len(set(x[2] for x in keys)), 8)

        with self.assertRaises(ValueError):
            scenario_synergy(self.params, [1.0], ["LAT-LAT"], 2, n=100)

    def test_synergy_templates(self):
        """ the layer templates, not defaults, build every pairing
        """

        params = replace(self.params, tau_a=0.0, tau_b=0.0, max_steps=100)
        templates = Pairing(GraphSpec("ERG", n=100, m_edges=60), GraphSpec("ERG", n=100))
        results = scenario_synergy(params, [1.0], ["ERG-ERG"], 2, templates=templates,
            keep_series=True)

        # 60 edges join at most 61 nodes into the seed's component
        self.assertLessEqual(results["ERG-ERG"].raw[..., 0].max(), 61)
        self.assertEqual(len(results["ERG-ERG"].series[(0, 0)]), 2)

    def test_long_short(self):
        sweep = scenario_long_short(self.params, "ERG", [0.0, 0.1], [0.05], 2, n=100)
        self.assertEqual(sweep.col_axis, "tau_lat")
        self.assertEqual(sweep.shape, (2, 1))

        with self.assertRaises(ValueError):
            scenario_long_short(self.params, "LAT", [0.0], [0.05], 2, n=100)
        with self.assertRaises(ValueError):
            scenario_long_short(self.params, GraphSpec("ERG", n=100), [0.0], [0.05], 2,
                lattice=GraphSpec("LAT", n=64))

    def test_long_short_layer_fields(self):
        """ the long-range layer's own fields change the outcome
        """

        params = replace(self.params, tau_a=0.0, tau_b=0.0, max_steps=200)
        sparse = scenario_long_short(params, GraphSpec("ERG", n=100, m_edges=60), [0.0],
            [0.0], 2)
        dense = scenario_long_short(params, GraphSpec("ERG", n=100, m_edges=2000), [0.0],
            [0.0], 2, lattice=GraphSpec("LAT", n=100))

        self.assertLessEqual(sparse.raw[..., 0].max(), 61)
        self.assertGreater(dense.raw[..., 0].min(), 61)
        self.assertNotEqual(sparse.mean_final_a[0, 0], dense.mean_final_a[0, 0])

    def test_cell_branches(self):
        """ every cell gets depth densities for both contagions
        """

        sweep = scenario_long_short(self.params, "ERG", [0.0, 0.1], [0.05, 0.1], 3, n=100,
            keep_series=True)
        branches = cell_branches(sweep, 0.3, 0.7)

        self.assertEqual(sorted(branches), [(0, 0), (0, 1), (1, 0), (1, 1)])
        for stats_a, stats_b in branches.values():
            self.assertEqual(len(stats_a.grid), 512)
            self.assertTrue(np.array_equal(stats_a.grid, stats_b.grid))
            self.assertGreaterEqual(len(stats_a.modes), 1)
            self.assertEqual((stats_b.lower, stats_b.upper), (0.3, 0.7))
        self.assertEqual(len(sweep.series[(1, 1)]), 3)

    def test_speed_order(self):
        sweep, summary = scenario_speed_order(self.params, ["RRG", "ERG"], 3, n=100)
        self.assertEqual(list(summary), ["RRG", "ERG"])
        self.assertEqual(len(sweep.series[(0, 0)]), 3)
        self.assertEqual(summary["RRG"][2].variance, 0.0)
        self.assertGreaterEqual(summary["ERG"][1], 0)

    def test_speed_order_templates(self):
        """ each kind is built from the layer templates
        """

        templates = Pairing(GraphSpec("ERG", n=100, k=6, m_edges=60),
            GraphSpec("ERG", n=100, k=6, m_edges=60))
        _, summary = scenario_speed_order(self.params, ["RRG", "ERG"], 2,
            templates=templates)

        self.assertAlmostEqual(summary["ERG"][2].mean, 1.2)
        self.assertEqual(summary["RRG"][2].mean, 6.0)
        self.assertEqual(summary["RRG"][2].variance, 0.0)

    def test_branching(self):
        results = scenario_branching(self.params, [64, 100], 4)
        self.assertEqual(sorted(results), [64, 100])

        sweep, stats = results[64]
        self.assertEqual(sweep.node_count, 64)
        self.assertEqual(sweep.raw.shape, (1, 1, 4, 2))
        self.assertEqual(len(stats.grid), 512)
        self.assertGreaterEqual(len(stats.modes), 1)
        self.assertIsNone(sweep.series)

        results = scenario_branching(self.params, [64], 2, keep_series=True)
        self.assertEqual(len(results[64][0].series[(0, 0)]), 2)

    def test_branching_needs_two_trials(self):
        with self.assertRaises(ValueError):
            scenario_branching(self.params, [64], 1)

class TestOwnDormancy(unittest.TestCase):
    """ check a contagion spreads less as its own dormancy rises
    """

    def test_monotone_in_own_dormancy(self):
        n = 400
        pairing = Pairing(GraphSpec("RRG", n=n), GraphSpec("ERG", n=n))
        params = SimParams(alpha=1.0, tau_b=0.05, master_seed=5, max_steps=400)
        sweep = sweep_tau_grid(pairing, [0.1, 0.3, 0.6, 1.0], [0.05], params, 20)

        depths = sweep.mean_final_a[:, 0]
        for shallow, deep in zip(depths[1:], depths[:-1]):
            self.assertLessEqual(shallow, deep + 0.02 * n)

        # going dormant at once leaves A on the seed and at most its 4 neighbours
        self.assertLessEqual(sweep.raw[-1, 0, :, 0].max(), 5)
