#!/usr/bin/env python3
"""
Tests for domain validation, membership and boundary sampling
"""

import sys
from pathlib import Path

# Add parent directory to path for imports
sys.path.insert(0, str(Path(__file__).parent.parent))

import json
import math
import tempfile
import unittest

import numpy as np

from core.domain import (
    INFINITY,
    Circle,
    CircleDomain,
    ExteriorUnitDisk,
    RealSlitComplement,
    RealSlitSet,
    UnitDisk,
    contains,
    domain_from_dict,
    load_domain,
    sample_boundary,
    validate,
)
from core.errors import (
    DegenerateIntervalError,
    DomainSpecError,
    EmptySlitSetError,
    HoleExceedsOuterError,
    HoleTouchesOuterError,
    OverlappingHolesError,
    OverlappingSlitsError,
    TooFewSamplesError,
)

FIXTURES = Path(__file__).parent.parent / 'config' / 'domains'


def annulus(hole_radius=0.5):
    return CircleDomain(Circle(0j, 1.0), (Circle(0j, hole_radius),))


def discrete_winding(points, about):
    steps = np.roll(points, -1) - about
    return float(np.sum(np.angle(steps / (points - about)))) / (2 * math.pi)


class TestValidation(unittest.TestCase):
    """Test geometric invariants."""

    def test_unit_disk_is_valid(self):
        self.assertIsInstance(validate(UnitDisk()), UnitDisk)

    def test_hole_exceeds_outer(self):
        domain = CircleDomain(Circle(0j, 1.0), (Circle(0.5 + 0j, 0.6),))
        with self.assertRaises(HoleExceedsOuterError):
            validate(domain)

    def test_hole_touches_outer(self):
        domain = CircleDomain(Circle(0j, 1.0), (Circle(0.5 + 0j, 0.5),))
        with self.assertRaises(HoleTouchesOuterError):
            validate(domain)

    def test_overlapping_holes(self):
        domain = CircleDomain(Circle(0j, 1.0), (Circle(-0.1 + 0j, 0.2), Circle(0.2 + 0j, 0.2)))
        with self.assertRaises(OverlappingHolesError):
            validate(domain)

    def test_overlapping_slits(self):
        with self.assertRaises(OverlappingSlitsError):
            RealSlitSet.from_intervals([(0, 1), (0.5, 2)]).validate()

    def test_empty_and_degenerate_slits(self):
        with self.assertRaises(EmptySlitSetError):
            RealSlitSet(()).validate()
        with self.assertRaises(DegenerateIntervalError):
            RealSlitSet.from_intervals([(1, 1)]).validate()

    def test_slits_sorted_on_validation(self):
        slits = RealSlitSet.from_intervals([(2, 3), (0, 1)]).validate()
        self.assertEqual(slits.intervals, ((0.0, 1.0), (2.0, 3.0)))
        self.assertEqual(slits.total_length, 2.0)
        self.assertEqual(slits.min_gap(), 1.0)

    def test_geometry_errors_are_value_errors(self):
        with self.assertRaises(ValueError):
            validate(CircleDomain(Circle(0j, 1.0), (Circle(0j, 2.0),)))


class TestContains(unittest.TestCase):
    """Test open-set membership."""

    def test_unit_disk(self):
        self.assertTrue(contains(UnitDisk(), 0))
        self.assertFalse(contains(UnitDisk(), 1))
        self.assertFalse(contains(UnitDisk(), INFINITY))

    def test_exterior_disk(self):
        self.assertTrue(contains(ExteriorUnitDisk(), INFINITY))
        self.assertTrue(contains(ExteriorUnitDisk(), 2))
        self.assertFalse(contains(ExteriorUnitDisk(), 0.5j))

    def test_slit_complement(self):
        domain = RealSlitComplement(RealSlitSet.from_intervals([(-1, 1)]))
        self.assertFalse(contains(domain, 0))
        self.assertFalse(contains(domain, 1))
        self.assertTrue(contains(domain, 1j))
        self.assertTrue(contains(domain, 1.5))
        self.assertTrue(contains(domain, INFINITY))

    def test_annulus(self):
        domain = annulus()
        self.assertFalse(contains(domain, 0))
        self.assertFalse(contains(domain, 0.5))
        self.assertTrue(contains(domain, 0.75j))

    def test_closure_tolerance(self):
        self.assertTrue(UnitDisk().contains_closure(1.0))
        self.assertFalse(UnitDisk().contains_closure(1.01))


class TestSampleBoundary(unittest.TestCase):
    """Test oriented, weighted boundary discretizations."""

    def test_unit_disk_eight_points(self):
        grid = sample_boundary(UnitDisk(), 8)
        expected = np.exp(2j * math.pi * np.arange(8) / 8)
        np.testing.assert_allclose(grid.points, expected, atol=1e-15)
        np.testing.assert_allclose(grid.weights, math.pi / 4, rtol=1e-15)

    def test_too_few_samples(self):
        with self.assertRaises(TooFewSamplesError):
            sample_boundary(UnitDisk(), 4)

    def test_annulus_hole_clockwise(self):
        grid = sample_boundary(annulus(), 8)
        self.assertEqual(len(grid), 16)
        outer, hole = grid.component_slices()
        # Signed area via the shoelace sum.
        def signed_area(points):
            return 0.5 * float(np.sum(points.real * np.roll(points.imag, -1) - np.roll(points.real, -1) * points.imag))
        self.assertGreater(signed_area(grid.points[outer]), 0)
        self.assertLess(signed_area(grid.points[hole]), 0)

    def test_tangents_orthogonal_to_radius(self):
        domain = CircleDomain(Circle(0.2 + 0.1j, 2.0), (Circle(0.5 + 0.5j, 0.3), Circle(-0.7 - 0.2j, 0.4)))
        grid = sample_boundary(domain, 64)
        centers = np.array([0.2 + 0.1j, 0.5 + 0.5j, -0.7 - 0.2j])[grid.components]
        radial = grid.points - centers
        dots = (grid.tangents * np.conj(radial)).real / np.abs(radial)
        self.assertLessEqual(np.max(np.abs(dots)), 1e-12)
        np.testing.assert_allclose(np.abs(grid.tangents), 1.0, atol=1e-15)

    def test_weights_sum_to_circumference(self):
        domain = CircleDomain(Circle(0j, 1.5), (Circle(0.4j, 0.3),))
        grid = sample_boundary(domain, 100)
        for index, radius in zip(grid.component_slices(), (1.5, 0.3)):
            total = float(np.sum(grid.weights[index]))
            self.assertAlmostEqual(total / (2 * math.pi * radius), 1.0, delta=1e-10)
            self.assertTrue(np.all(grid.weights[index] > 0))

    def test_cauchy_integral_counts_winding(self):
        domain = CircleDomain(Circle(0j, 1.0), (Circle(-0.5 + 0j, 0.2), Circle(0.5 + 0j, 0.2)))
        grid = sample_boundary(domain, 512)
        for q, expected in ((0.1j, 2j * math.pi), (0.6j, 2j * math.pi), (1.5 + 0j, 0j), (-0.5 + 0j, 0j)):
            value = grid.contour_integral(1.0 / (grid.points - q))
            self.assertLessEqual(abs(value - expected), 1e-6, msg=f"q={q}")

    def test_slit_stadium_winds_negatively(self):
        domain = RealSlitComplement(RealSlitSet.from_intervals([(-1, 1)]))
        grid = sample_boundary(domain, 16)
        self.assertAlmostEqual(discrete_winding(grid.points, 0j), -1.0, places=9)
        self.assertTrue(np.all(domain.contains_array(grid.points)))

    def test_stadium_offset_and_perimeter(self):
        slits = RealSlitSet.from_intervals([(0, 1), (2, 3)])
        domain = RealSlitComplement(slits)
        self.assertAlmostEqual(domain.default_offset(), 2e-3, places=15)
        grid = sample_boundary(domain, 400)
        distances = slits.distance(grid.points)
        np.testing.assert_allclose(distances, 2e-3, rtol=1e-9)

    def test_iteration_yields_samples(self):
        samples = list(sample_boundary(UnitDisk(), 8))
        self.assertEqual(len(samples), 8)
        self.assertAlmostEqual(samples[2].point, 1j, places=15)
        self.assertAlmostEqual(samples[2].unit_tangent, -1 + 0j, places=15)


class TestMeshes(unittest.TestCase):
    """Test interior meshes and fill grids."""

    def test_mesh_inside_domain(self):
        for domain in (UnitDisk(), ExteriorUnitDisk(), annulus(0.25)):
            mesh = domain.interior_mesh(levels=6, n_angular=64)
            self.assertTrue(np.all(domain.contains_array(mesh)), msg=domain.variant)

    def test_mesh_approaches_boundary(self):
        mesh = UnitDisk().interior_mesh(levels=14, n_angular=128)
        self.assertGreater(np.max(np.abs(mesh)), 1 - 2.0 ** -13)

    def test_fill_grid_inside(self):
        grid = annulus(0.25).fill_grid(32)
        self.assertGreater(len(grid), 0)
        self.assertTrue(np.all(annulus(0.25).contains_array(grid)))


class TestDomainSpecification(unittest.TestCase):
    """Test JSON domain files."""

    def test_fixtures_load(self):
        expected = {
            'unit_disk.json': UnitDisk,
            'exterior_disk.json': ExteriorUnitDisk,
            'slit.json': RealSlitComplement,
            'two_slits.json': RealSlitComplement,
            'disk_no_holes.json': CircleDomain,
            'annulus.json': CircleDomain,
            'two_holes.json': CircleDomain,
        }
        for name, cls in expected.items():
            self.assertIsInstance(load_domain(FIXTURES / name), cls, msg=name)

    def test_round_trip_through_dict(self):
        domain = load_domain(FIXTURES / 'two_holes.json')
        self.assertEqual(domain_from_dict(domain.to_dict()).to_dict(), domain.to_dict())

    def test_unknown_variant(self):
        with self.assertRaises(DomainSpecError):
            domain_from_dict({'variant': 'square'})

    def test_unknown_field(self):
        with self.assertRaises(DomainSpecError):
            domain_from_dict({'variant': 'unit_disk', 'radius': 2})

    def test_malformed_circle(self):
        with self.assertRaises(DomainSpecError):
            domain_from_dict({'variant': 'circle_domain', 'outer': {'center': [0], 'radius': 1}})

    def test_invalid_geometry_from_file(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / 'bad.json'
            path.write_text(json.dumps({'variant': 'real_slit', 'slits': [[0, 1], [0.5, 2]]}))
            with self.assertRaises(OverlappingSlitsError):
                load_domain(path)

    def test_corrupted_file(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / 'broken.json'
            path.write_text('{"variant": ')
            with self.assertRaises(DomainSpecError):
                load_domain(path)

    def test_missing_file(self):
        with self.assertRaises(OSError):
            load_domain(FIXTURES / 'missing.json')


if __name__ == '__main__':
    unittest.main()
