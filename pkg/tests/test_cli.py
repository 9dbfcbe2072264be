"""
Copyright (c) 2019 The cocontagion developers
Released under the MIT license, see LICENSE.
"""

import json
import os
import shutil
import tempfile
import unittest

from cocontagion.__main__ import main
from cocontagion.config import parse_config
from cocontagion.run_scenario import run

def read_outputs(folder):
    """ contents of every file in a folder, by file name
    """

    outputs = {}
    for name in sorted(os.listdir(folder)):
        with open(os.path.join(folder, name), "rb") as handle:
            outputs[name] = handle.read()
    return outputs

class TestRun(unittest.TestCase):
    """ check running scenarios end to end
    """

    def setUp(self):
        self.temp_dir = tempfile.mkdtemp()
        self.out_dir = os.path.join(self.temp_dir, "results")

        self.config_path = os.path.join(self.temp_dir, "config.json")
        with open(self.config_path, "w") as output:
            json.dump({"scenario": "tau_grid",
                "layer_a": {"kind": "RRG", "n": 64},
                "layer_b": {"kind": "ERG", "n": 64},
                "params": {"alpha": 1.0, "master_seed": 12},
                "grids": {"tau_a": [0.0, 0.1], "tau_b": [0.0, 0.2], "raw_cells": True},
                "trials": 2,
                "output_dir": self.out_dir}, output)

    def tearDown(self):
        shutil.rmtree(self.temp_dir)

    def test_tau_grid_accounting(self):
        """ a 2x2 grid with 2 trials per cell lists 8 trials in the manifest
        """

        self.assertEqual(run(parse_config(self.config_path)), 0)

        with open(os.path.join(self.out_dir, "manifest.json")) as handle:
            manifest = json.load(handle)
        self.assertEqual(len(manifest["trials"]), 8)
        self.assertEqual(len(set(x["trial_index"] for x in manifest["trials"])), 8)
        self.assertEqual(manifest["master_seed"], 12)
        self.assertEqual(manifest["config"]["layer_a"]["n"], 64)

        outputs = read_outputs(self.out_dir)
        for name in ["mean_final_a.csv", "mean_final_b.csv", "std_final_a.csv",
                "std_final_b.csv", "median_steps_a.csv", "cell_1_1.csv"]:
            self.assertIn(name, outputs)

        lines = outputs["mean_final_a.csv"].decode("utf8").splitlines()
        self.assertEqual(lines[0], "tau_a\\tau_b,0,0.20000000000000001")
        self.assertEqual(len(lines), 3)
        self.assertTrue(lines[2].startswith("0.10000000000000001,"))

        lines = outputs["cell_0_1.csv"].decode("utf8").splitlines()
        self.assertEqual(lines[0], "trial,final_a,final_b")
        self.assertEqual(len(lines), 3)

    def test_thread_independence(self):
        """ reruns give byte-identical files whatever the worker count
        """

        self.assertEqual(run(parse_config(self.config_path, flags={"threads": 1})), 0)
        serial = read_outputs(self.out_dir)

        self.assertEqual(run(parse_config(self.config_path, flags={"threads": 2})), 0)
        parallel = read_outputs(self.out_dir)

        self.assertEqual(serial, parallel)

    def test_single_trial(self):
        """ a single trial on a 3x3 lattice pairing is written and reproducible
        """

        overrides = ["layer_a.kind=\"LAT\"", "layer_b.kind=\"LAT\"", "layer_a.n=9",
            "layer_b.n=9"]
        flags = {"scenario": "single_trial", "output_dir": self.out_dir,
            "params.master_seed": 1}
        config = parse_config(overrides=overrides, flags=flags)

        self.assertEqual(run(config), 0)
        first = read_outputs(self.out_dir)
        self.assertEqual(run(config), 0)
        self.assertEqual(read_outputs(self.out_dir), first)

        lines = first["trial.csv"].decode("utf8").splitlines()
        self.assertEqual(lines[0], "step,count_a,count_b")
        self.assertEqual(lines[1], "0,1,1")
        self.assertEqual(lines[-1].split(",")[1:], ["9", "9"])

    def test_unwritable_output(self):
        """ an output path which is a file gives a nonzero exit status
        """

        blocked = os.path.join(self.temp_dir, "blocked")
        with open(blocked, "w") as output:
            output.write("not a folder\n")

        config = parse_config(self.config_path, flags={"output_dir": blocked})
        self.assertEqual(run(config), 1)

    def test_main_exit_codes(self):
        """ the command line exits 0 on success and 2 on a bad config
        """

        with self.assertRaises(SystemExit) as context:
            main(["--config", self.config_path, "--quiet", "--trials", "1"])
        self.assertEqual(context.exception.code, 0)

        with self.assertRaises(SystemExit) as context:
            main(["--config", self.config_path, "--quiet", "--set", "params.tau_a=1.5"])
        self.assertEqual(context.exception.code, 2)

    def long_short_config(self, m_edges, out_dir):
        return parse_config(overrides=["layer_a.n=100", "layer_b.n=100",
            "layer_a.m_edges={0}".format(m_edges), "params.max_steps=200",
            "grids.tau_a=[0.0]", "grids.tau_b=[0.0]", "grids.series=true"],
            flags={"scenario": "long_short", "trials": 2, "output_dir": out_dir,
            "params.master_seed": 3})

    def test_long_short_layer_fields(self):
        """ long_short runs the configured long-range layer, not a default one
        """

        sparse_dir = os.path.join(self.temp_dir, "sparse")
        dense_dir = os.path.join(self.temp_dir, "dense")
        self.assertEqual(run(self.long_short_config(60, sparse_dir)), 0)
        self.assertEqual(run(self.long_short_config(2000, dense_dir)), 0)

        sparse = read_outputs(sparse_dir)
        dense = read_outputs(dense_dir)
        self.assertNotEqual(sparse["mean_final_a.csv"], dense["mean_final_a.csv"])

        # 60 edges join at most 61 nodes into the seed's component
        depth = float(sparse["mean_final_a.csv"].decode("utf8").splitlines()[1].split(",")[1])
        self.assertLessEqual(depth, 61)

        manifest = json.loads(sparse["manifest.json"].decode("utf8"))
        self.assertEqual(manifest["config"]["layer_a"]["m_edges"], 60)

    def test_long_short_outputs(self):
        """ every cell gets its depth densities, modes and trial series
        """

        self.assertEqual(run(self.long_short_config(2000, self.out_dir)), 0)
        outputs = read_outputs(self.out_dir)

        lines = outputs["branch_0_0.csv"].decode("utf8").splitlines()
        self.assertEqual(lines[0], "depth,density_a,density_b")
        self.assertEqual(len(lines), 513)
        self.assertTrue(lines[1].startswith("0,"))

        lines = outputs["branch_modes.csv"].decode("utf8").splitlines()
        self.assertEqual(lines[0], "tau_a,tau_lat,contagion,mode,location,mass,"
            "upper_fraction,lower_fraction,bandwidth")
        self.assertGreaterEqual(len(lines), 3)
        self.assertEqual(set(x.split(",")[2] for x in lines[1:]), {"a", "b"})

        lines = outputs["series_0_0.csv"].decode("utf8").splitlines()
        self.assertEqual(lines[0], "trial,step,count_a,count_b")
        self.assertEqual(lines[1], "0,0,1,1")
        self.assertEqual(set(x.split(",")[0] for x in lines[1:]), {"0", "1"})
