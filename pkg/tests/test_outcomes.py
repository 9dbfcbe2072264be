"""
Copyright (c) 2019 The cocontagion developers
Released under the MIT license, see LICENSE.
"""

import math
import unittest

import numpy as np
from scipy.integrate import trapezoid

from cocontagion.engine import HORIZON, SATURATED, TrialResult
from cocontagion.outcomes import (MIN_BANDWIDTH, branch_stats, censored_median,
    joint_upper_fraction, speed_metric)

class TestSpeedMetric(unittest.TestCase):
    """ check steps to a depth threshold
    """

    def setUp(self):
        self.result = TrialResult((1, 2, 5, 8, 10), (1, 1, 2, 3, 4), 10, 4, 4, HORIZON, 10)

    def test_speed_metric(self):
        """ check the first step reaching the threshold, or None if never
        """

        self.assertEqual(speed_metric(self.result, 0.5, "a"), 2)
        self.assertEqual(speed_metric(self.result, 0.1, "a"), 0)
        self.assertEqual(speed_metric(self.result, 0.3, "b"), 3)
        self.assertIsNone(speed_metric(self.result, 0.5, "b"))

        jump = TrialResult((1, 1, 1, 10), (1, 1, 1, 10), 10, 10, 3, SATURATED, 10)
        self.assertEqual(speed_metric(jump, 0.5), 3)

        with self.assertRaises(ValueError):
            speed_metric(self.result, 1.0)

    def test_censored_median(self):
        """ censored trials count as slower than every observed trial
        """

        self.assertEqual(censored_median([1, None, 3]), 3.0)
        self.assertEqual(censored_median([4, 2, float("nan"), 1]), 3.0)
        self.assertTrue(math.isinf(censored_median([None, None, 1])))

class TestBranchStats(unittest.TestCase):
    """ check the kernel density of final depths and its modes
    """

    def test_two_branches(self):
        """ trials split between near-zero and near-full diffusion
        """

        n = 1000
        depths = np.concatenate([np.linspace(20, 80, 50), np.linspace(920, 980, 50)])
        stats = branch_stats(depths, n)

        self.assertEqual(len(stats.modes), 2)
        (low, low_mass), (high, high_mass) = stats.modes
        self.assertLess(abs(low - 0.05), 0.05)
        self.assertLess(abs(high - 0.95), 0.05)
        self.assertLess(abs(low_mass - 0.5), 0.02)
        self.assertLess(abs(high_mass - 0.5), 0.02)

        self.assertEqual(stats.upper_fraction, 0.5)
        self.assertEqual(stats.lower_fraction, 0.5)
        self.assertEqual((stats.lower, stats.upper), (0.2, 0.8))

        # the density is normalised on [0, 1]
        self.assertAlmostEqual(trapezoid(stats.kde_grid, stats.grid), 1.0)

    def test_single_branch(self):
        """ identical depths give one narrow mode at that depth
        """

        stats = branch_stats([300] * 20, 1000)
        self.assertEqual(len(stats.modes), 1)
        location, mass = stats.modes[0]
        self.assertLess(abs(location - 0.3), 0.005)
        self.assertAlmostEqual(mass, 1.0, places=6)
        self.assertEqual(stats.bandwidth, MIN_BANDWIDTH)

    def test_bandwidth_floor(self):
        """ nearly identical depths still get the minimum bandwidth
        """

        stats = branch_stats(np.linspace(5000, 5001, 20), 10000)
        self.assertAlmostEqual(stats.bandwidth, MIN_BANDWIDTH)
        self.assertEqual(len(stats.modes), 1)

    def test_fractions(self):
        stats = branch_stats([100, 100, 900, 500], 1000)
        self.assertEqual(stats.upper_fraction, 0.25)
        self.assertEqual(stats.lower_fraction, 0.5)

    def test_too_few_samples(self):
        with self.assertRaises(ValueError):
            branch_stats([500], 1000)

    def test_joint_upper_fraction(self):
        """ both contagions need to pass the upper threshold
        """

        finals = [[9, 9], [9, 1], [1, 1], [10, 10]]
        self.assertEqual(joint_upper_fraction(finals, 10), 0.5)
