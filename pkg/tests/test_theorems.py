#!/usr/bin/env python3
"""
Tests for the theorem checks and the test-function catalog
"""

import sys
from pathlib import Path

# Add parent directory to path for imports
sys.path.insert(0, str(Path(__file__).parent.parent))

import math
import unittest

import numpy as np

from core.basis import BasisSpec
from core.check_helper import create_check_report, failed_report
from core.closed_form import ahlfors_disk, ahlfors_exterior_disk, ahlfors_real_slit
from core.domain import INFINITY, Circle, CircleDomain, ExteriorUnitDisk, RealSlitComplement, RealSlitSet, UnitDisk
from core.errors import InvalidParameterError, PreconditionViolationError
from core.extremal_solver import SolverConfig, solve_extremal
from core.function_catalog import CATALOG_VERSION, catalog_names, disk_catalog, domain_catalog, sampled_norm
from core.functions import ComplexFunction, identity
from core.koebe import koebe_expand
from core.moebius import disk_automorphism
from modules.theorems import (
    check_almost_surjectivity,
    check_composition_norm,
    check_nonseparability,
    check_norm_preservation,
    check_schwarz,
    equispaced_unimodular,
    separation_family,
)

ANNULUS = CircleDomain(Circle(0j, 1.0), (Circle(0j, 0.25),))


def monomial(k):
    return ComplexFunction(lambda z: z ** k, lambda z: k * z ** (k - 1), name=f"z^{k}")


class TestCheckReport(unittest.TestCase):
    """Test report records."""

    def test_verdict_modes(self):
        self.assertTrue(create_check_report('a', 0.5, 1.0).passed)
        self.assertFalse(create_check_report('a', 1.5, 1.0).passed)
        self.assertTrue(create_check_report('b', 1.5, 1.0, mode='at_least').passed)
        self.assertFalse(create_check_report('c', math.nan, 1.0).passed)

    def test_to_dict(self):
        report = create_check_report('vanishing', 1e-6, 1e-4, witness=0.3 + 0.1j, detail='ok')
        record = report.to_dict()
        self.assertEqual(record['witness'], [0.3, 0.1])
        self.assertEqual(record['detail'], 'ok')
        self.assertTrue(record['passed'])

    def test_failed_report_is_json_safe(self):
        record = failed_report('valence', 2, InvalidParameterError('bad w')).to_dict()
        self.assertEqual(record['measured'], 'nan')
        self.assertFalse(record['passed'])
        self.assertIn('InvalidParameterError', record['detail'])


class TestSeparationFamily(unittest.TestCase):
    """Test f_s(z) = exp((z + s) / (z - s))."""

    def test_value_at_origin(self):
        self.assertAlmostEqual(complex(separation_family(1)(0j)), math.exp(-1), places=15)

    def test_limit_at_s(self):
        self.assertEqual(complex(separation_family(1j)(1j)), 0j)

    def test_bounded_in_disk(self):
        rng = np.random.default_rng(11)
        z = 0.999 * np.sqrt(rng.uniform(0, 1, 5000)) * np.exp(2j * math.pi * rng.uniform(0, 1, 5000))
        self.assertLess(np.max(np.abs(separation_family(-1)(z))), 1.0)

    def test_rejects_non_unimodular(self):
        with self.assertRaises(InvalidParameterError):
            separation_family(0.5)

    def test_pairwise_separation_on_disk(self):
        report = check_nonseparability(identity(), [1, -1], UnitDisk())
        self.assertTrue(report.passed)
        self.assertGreaterEqual(report.measured, 0.99)

    def test_four_points_on_disk(self):
        report = check_nonseparability(identity(), [1, 1j, -1, -1j], UnitDisk())
        self.assertTrue(report.passed)

    def test_single_parameter_is_vacuous(self):
        report = check_nonseparability(identity(), [1], UnitDisk())
        self.assertEqual(report.measured, 2.0)
        self.assertTrue(report.passed)

    def test_equispaced(self):
        values = equispaced_unimodular(8)
        self.assertEqual(len(values), 8)
        np.testing.assert_allclose(np.abs(values), 1.0, atol=1e-15)

    def test_detail_records_values_outside_the_disk(self):
        overshoot = ComplexFunction(lambda z: 1.2 * z, name="1.2z")
        mesh = np.array([0.0, 0.5, 1.0], dtype=complex)
        report = check_nonseparability(overshoot, [1j, -1j], UnitDisk(), mesh=mesh)
        self.assertIn("max|F|=1.200000000", report.detail)


class TestNormChecks(unittest.TestCase):
    """Test sampled sup-norm identities."""

    def test_norm_preservation_disk(self):
        report = check_norm_preservation(ahlfors_disk(0.3), monomial(2), UnitDisk())
        self.assertTrue(report.passed)
        self.assertLessEqual(report.measured, 2e-2)

    def test_composition_norm_disk(self):
        report = check_composition_norm(ahlfors_disk(0.3), monomial(5), UnitDisk())
        self.assertTrue(report.passed)
        self.assertGreaterEqual(report.measured, 0.98)

    def test_composition_norm_slit(self):
        domain = RealSlitComplement(RealSlitSet.from_intervals([(-1, 1)]))
        report = check_composition_norm(ahlfors_real_slit(domain.slits), monomial(3), domain)
        self.assertTrue(report.passed)

    def test_norm_gap_detects_shrinking_multiplier(self):
        half = ComplexFunction(lambda z: 0.5 * z, name="z/2")
        report = check_norm_preservation(half, monomial(1), UnitDisk())
        self.assertFalse(report.passed)

    def test_composition_detail_records_values_before_clipping(self):
        overshoot = ComplexFunction(lambda z: 1.2 * z, name="1.2z")
        mesh = np.array([0.0, 0.5, 1.0], dtype=complex)
        report = check_composition_norm(overshoot, monomial(2), UnitDisk(), mesh=mesh)
        self.assertIn("max|F|=1.200000000", report.detail)
        self.assertAlmostEqual(report.measured, 1.0, places=12)

    def test_composition_detail_on_the_disk(self):
        report = check_composition_norm(identity(), monomial(2), UnitDisk())
        self.assertIn("max|F|=", report.detail)
        self.assertLessEqual(float(report.detail.split("max|F|=")[1]), 1.0)


class TestAlmostSurjectivity(unittest.TestCase):
    """Test preimage search for radial segments."""

    def test_disk_identity(self):
        for k in range(4):
            report = check_almost_surjectivity(identity(), UnitDisk(), k * math.pi / 2, 0.8)
            self.assertTrue(report.passed, msg=report.detail)
            self.assertIsNotNone(report.witness)

    def test_exterior_disk(self):
        report = check_almost_surjectivity(ahlfors_exterior_disk(2), ExteriorUnitDisk(), 1.0, 0.8)
        self.assertTrue(report.passed)

    def test_shrunk_map_misses(self):
        half = ComplexFunction(lambda z: 0.5 * z, lambda z: 0.5 * np.ones_like(z), name="z/2")
        report = check_almost_surjectivity(half, UnitDisk(), 0.0, 0.8)
        self.assertFalse(report.passed)
        self.assertIsNone(report.witness)


class TestSchwarz(unittest.TestCase):
    """Test the Schwarz-lemma oracle."""

    def test_rotation_is_tight(self):
        rotation = ComplexFunction(lambda z: 1j * z, lambda z: 1j * np.ones_like(z), name="iz")
        report = check_schwarz(rotation)
        self.assertTrue(report.passed)
        self.assertAlmostEqual(report.measured, 0.0, places=12)

    def test_square_is_strict(self):
        report = check_schwarz(monomial(2))
        self.assertTrue(report.passed)
        self.assertLess(report.measured, 0.0)

    def test_koebe_expansion_inverse_direction(self):
        f = ComplexFunction(lambda z: 0.5 * z, lambda z: 0.5 * np.ones_like(z), name="z/2")
        expansion = koebe_expand(f, -0.75, 0j)
        self.assertTrue(check_schwarz(expansion).passed)

    def test_preconditions(self):
        with self.assertRaises(PreconditionViolationError):
            check_schwarz(disk_automorphism(-0.5))
        with self.assertRaises(PreconditionViolationError):
            check_schwarz(ComplexFunction(lambda z: 2 * z, name="2z"))


class TestFunctionCatalog(unittest.TestCase):
    """Test the fixed catalog of bounded test functions."""

    def test_catalog_is_versioned(self):
        self.assertEqual(CATALOG_VERSION, "1")
        names = catalog_names()
        self.assertEqual(len(names), 13)
        self.assertEqual(names[:2], ['z^1', 'z^2'])
        self.assertIn('separation[i]', names)

    def test_catalog_norms_are_one(self):
        for entry in disk_catalog():
            self.assertAlmostEqual(sampled_norm(entry), 1.0, delta=2e-2, msg=entry.name)

    def test_circle_domain_adds_hole_terms(self):
        entries = domain_catalog(ANNULUS, None)
        self.assertEqual(len(entries), 14)
        self.assertEqual(entries[-1].name, 'hole_term[0]')

    def test_composition_norm_over_catalog(self):
        F = ahlfors_disk(0.3)
        mesh = UnitDisk().interior_mesh(levels=14, n_angular=1024)
        for entry in disk_catalog():
            report = check_composition_norm(F, entry.function, UnitDisk(), norm=entry.sup_norm, mesh=mesh)
            self.assertTrue(report.passed, msg=entry.name)


class TestAnnulusTheorems(unittest.TestCase):
    """Theorem checks on a solver-computed Ahlfors function."""

    @classmethod
    def setUpClass(cls):
        cls.F = solve_extremal(ANNULUS, 0.5, BasisSpec(12), SolverConfig(boundary_samples_per_component=256))
        cls.mesh = ANNULUS.interior_mesh(levels=14, n_angular=1024)

    def test_norm_preservation_inverse_power(self):
        hole_term = ComplexFunction(lambda z: 0.25 / z, lambda z: -0.25 / z ** 2, name="0.25/z")
        report = check_norm_preservation(self.F, hole_term, ANNULUS, mesh=self.mesh)
        self.assertTrue(report.passed, msg=report.detail)

    def test_composition_with_separation_member(self):
        report = check_composition_norm(self.F, separation_family(1), ANNULUS, mesh=self.mesh)
        self.assertTrue(report.passed, msg=report.detail)

    def test_nonseparability(self):
        report = check_nonseparability(self.F, equispaced_unimodular(8), ANNULUS, mesh=self.mesh)
        self.assertTrue(report.passed)

    def test_almost_surjectivity(self):
        report = check_almost_surjectivity(self.F, ANNULUS, 0.0, 0.8, mesh=self.mesh)
        self.assertTrue(report.passed)
        self.assertTrue(ANNULUS.contains(report.witness))


class TestExteriorAtInfinity(unittest.TestCase):
    """Closed form at the point at infinity."""

    def test_composition_norm(self):
        report = check_composition_norm(ahlfors_exterior_disk(INFINITY), monomial(4), ExteriorUnitDisk())
        self.assertTrue(report.passed)


if __name__ == '__main__':
    unittest.main()
