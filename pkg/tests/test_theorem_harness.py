#!/usr/bin/env python3
"""
Tests for the theorem harness
"""

import sys
from pathlib import Path

# Add parent directory to path for imports
sys.path.insert(0, str(Path(__file__).parent.parent))

import unittest

from core.domain import INFINITY, Circle, CircleDomain, RealSlitComplement, RealSlitSet, UnitDisk
from core.errors import UnsupportedVariantError
from core.extremal_solver import SolverConfig
from core.theorem_harness import TheoremHarness, failure_count, riemann_grid, run_suite
from utils.config_loader import DEFAULT_CHECKS, ConfigLoader

FAST = SolverConfig(boundary_samples_per_component=256)


def harness_config(**harness):
    config = ConfigLoader.load(None)
    config['harness']['threads'] = 2
    config['harness'].update(harness)
    return config


def by_family(reports):
    families = {}
    for report in reports:
        families.setdefault(report.check_name.split('[')[0], []).append(report)
    return families


class TestHarnessOnDisk(unittest.TestCase):
    """Full suite on the unit disk at p = 0.3."""

    @classmethod
    def setUpClass(cls):
        cls.reports = TheoremHarness(harness_config()).run_suite(UnitDisk(), 0.3, FAST)
        cls.families = by_family(cls.reports)

    def test_all_checks_pass(self):
        failed = [r.to_dict() for r in self.reports if not r.passed]
        self.assertEqual(failure_count(self.reports), 0, msg=str(failed))

    def test_report_order_follows_check_list(self):
        order = [DEFAULT_CHECKS.index(r.check_name.split('[')[0]) for r in self.reports]
        self.assertEqual(order, sorted(order))

    def test_disk_only_checks_present(self):
        for name in ('riemann_equivalence', 'schwarz', 'koebe_expansion', 'uniqueness', 'extremal_gamma'):
            self.assertIn(name, self.families)
        self.assertNotIn('capacity_quarter_length', self.families)
        self.assertNotIn('strip_bound', self.families)

    def test_catalog_sizes(self):
        self.assertEqual(len(self.families['norm_preservation']), 13)
        self.assertEqual(len(self.families['composition_norm']), 13)
        self.assertEqual(len(self.families['valence']), 3)
        self.assertEqual(len(self.families['almost_surjectivity']), 4)


class TestHarnessOnSlits(unittest.TestCase):
    """Closed-form checks on a slit complement."""

    @classmethod
    def setUpClass(cls):
        domain = RealSlitComplement(RealSlitSet.from_intervals([(-1, 1)]))
        config = harness_config(strip_samples=2000)
        cls.reports = TheoremHarness(config).run_suite(domain, INFINITY)
        cls.families = by_family(cls.reports)

    def test_all_checks_pass(self):
        failed = [r.to_dict() for r in self.reports if not r.passed]
        self.assertEqual(failure_count(self.reports), 0, msg=str(failed))

    def test_slit_checks_present(self):
        self.assertIn('capacity_quarter_length', self.families)
        self.assertIn('strip_bound', self.families)
        self.assertNotIn('solver_convergence', self.families)
        self.assertNotIn('koebe_expansion', self.families)

    def test_capacity_error(self):
        self.assertLessEqual(self.families['capacity_quarter_length'][0].measured, 1e-6)

    def test_finite_base_point_unsupported(self):
        domain = RealSlitComplement(RealSlitSet.from_intervals([(-1, 1)]))
        with self.assertRaises(UnsupportedVariantError):
            TheoremHarness(harness_config()).prepare(domain, 2j)


class TestHarnessOnAnnulus(unittest.TestCase):
    """Valence m + 1 on a circle domain with one hole."""

    def test_selected_checks(self):
        config = harness_config(enabled_checks=['vanishing', 'unit_boundary_modulus', 'valence'])
        domain = CircleDomain(Circle(0j, 1.0), (Circle(0j, 0.25),))
        reports = TheoremHarness(config).run_suite(domain, 0.5, FAST)
        self.assertEqual(failure_count(reports), 0, msg=str([r.to_dict() for r in reports]))
        valence_reports = [r for r in reports if r.check_name.startswith('valence')]
        self.assertTrue(all(r.measured == 2 for r in valence_reports))


class TestHarnessFailures(unittest.TestCase):
    """Failing checks become reports instead of exceptions."""

    def test_non_convergence_is_reported(self):
        config = harness_config(enabled_checks=['solver_convergence', 'vanishing'])
        cfg = SolverConfig(boundary_samples_per_component=64, max_outer_iterations=1, angle_cuts=4)
        reports = TheoremHarness(config).run_suite(UnitDisk(), 0.3, cfg)
        self.assertFalse(reports[0].passed)
        self.assertEqual(reports[0].check_name, 'solver_convergence')

    def test_unknown_check_names_warn(self):
        with self.assertLogs('ahlfors', level='WARNING'):
            TheoremHarness(harness_config(enabled_checks=['vanishing', 'perpetual_motion']))

    def test_module_level_runner(self):
        config = harness_config(enabled_checks=['vanishing'])
        reports = run_suite(UnitDisk(), 0j, FAST, config=config)
        self.assertEqual(len(reports), 1)
        self.assertTrue(reports[0].passed)

    def test_riemann_grid(self):
        grid = riemann_grid()
        self.assertEqual(len(grid), 100)
        self.assertLessEqual(max(abs(grid)), 0.8 + 1e-12)


if __name__ == '__main__':
    unittest.main()
