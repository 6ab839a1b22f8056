#!/usr/bin/env python3
"""
Tests for Moebius transforms and the square-root branch
"""

import sys
from pathlib import Path

# Add parent directory to path for imports
sys.path.insert(0, str(Path(__file__).parent.parent))

import cmath
import math
import unittest

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from core.errors import BranchPointError, InvalidParameterError
from core.functions import complex_derivative
from core.moebius import (
    affine,
    disk_automorphism,
    from_coefficients,
    interchange,
    inversion,
    rotation,
    sqrt_branch,
)

UNIT_CIRCLE = np.exp(2j * math.pi * np.arange(256) / 256)


def inside_disk(max_modulus=0.95):
    return st.builds(
        lambda r, t: r * cmath.exp(1j * t),
        st.floats(min_value=0.0, max_value=max_modulus),
        st.floats(min_value=0.0, max_value=2 * math.pi),
    )


class TestDiskAutomorphism(unittest.TestCase):
    """Test z -> (z - p) / (1 - conj(p) z)."""

    def test_zero_is_identity(self):
        T = disk_automorphism(0)
        z = np.array([0.1, -0.3 + 0.2j, 0.7j])
        np.testing.assert_allclose(T(z), z, atol=1e-15)

    def test_base_point_maps_to_zero(self):
        self.assertEqual(disk_automorphism(0.5)(0.5), 0)

    def test_derivative_at_base_point(self):
        T = disk_automorphism(0.5)
        self.assertAlmostEqual(complex(T.derivative(0.5)), 4.0 / 3.0, places=12)
        self.assertAlmostEqual(complex(complex_derivative(T, 0.5)), 4.0 / 3.0, places=8)

    def test_rejects_boundary_parameter(self):
        with self.assertRaises(InvalidParameterError):
            disk_automorphism(1.0)
        with self.assertRaises(InvalidParameterError):
            disk_automorphism(0.6 + 0.8j)

    @given(inside_disk())
    @settings(max_examples=50, deadline=None)
    def test_unit_circle_preserved(self, p):
        T = disk_automorphism(p)
        self.assertLessEqual(np.max(np.abs(np.abs(T(UNIT_CIRCLE)) - 1.0)), 1e-12)

    @given(inside_disk())
    @settings(max_examples=50, deadline=None)
    def test_derivative_real_positive(self, p):
        slope = complex(disk_automorphism(p).derivative(p))
        self.assertAlmostEqual(slope.real, 1.0 / (1.0 - abs(p) ** 2), delta=1e-9 * slope.real)
        self.assertAlmostEqual(slope.imag, 0.0, delta=1e-9 * slope.real)


class TestInterchange(unittest.TestCase):
    """Test the involution swapping 0 and a."""

    def test_zero_parameter_is_negation(self):
        z = np.array([0.2, -0.5j, 0.3 + 0.3j])
        np.testing.assert_allclose(interchange(0)(z), -z, atol=1e-15)

    def test_swaps_zero_and_a(self):
        T = interchange(0.3)
        self.assertAlmostEqual(complex(T(0)), 0.3, places=15)
        self.assertAlmostEqual(abs(complex(T(0.3))), 0.0, places=15)

    def test_is_an_involution(self):
        T = interchange(0.3 + 0.4j)
        z = 0.1 - 0.2j
        self.assertAlmostEqual(abs(complex(T(T(z))) - z), 0.0, places=14)

    @given(inside_disk())
    @settings(max_examples=50, deadline=None)
    def test_unit_circle_preserved(self, a):
        T = interchange(a)
        self.assertLessEqual(np.max(np.abs(np.abs(T(UNIT_CIRCLE)) - 1.0)), 1e-12)

    def test_rejects_outside_parameter(self):
        with self.assertRaises(InvalidParameterError):
            interchange(1.2)


class TestComposition(unittest.TestCase):
    """Test coefficient arithmetic."""

    def setUp(self):
        rng = np.random.default_rng(7)
        self.grid = 0.9 * np.sqrt(rng.uniform(0, 1, 100)) * np.exp(2j * math.pi * rng.uniform(0, 1, 100))

    def test_compose_matches_sequential_evaluation(self):
        S = disk_automorphism(0.4 - 0.1j)
        T = interchange(-0.2 + 0.5j)
        composed = S.compose(T)
        self.assertLessEqual(np.max(np.abs(composed(self.grid) - S(T(self.grid)))), 1e-12)

    def test_inverse(self):
        T = disk_automorphism(0.3 + 0.2j)
        np.testing.assert_allclose(T.inverse()(T(self.grid)), self.grid, atol=1e-12)

    def test_automorphism_after_inversion(self):
        # (1/z - 1/2) / (1 - 1/(2z)) = -(z - 2) / (2z - 1)
        bare = disk_automorphism(0.5).compose(inversion())
        expected = from_coefficients(-1, 2, 2, -1)
        self.assertLessEqual(bare.coefficient_distance(expected), 1e-12)

    def test_rotation_and_affine(self):
        self.assertAlmostEqual(complex(rotation(math.pi / 2)(1.0)), 1j, places=15)
        self.assertAlmostEqual(complex(affine(2.0, 1.0)(0.5)), 2.0, places=15)

    def test_value_at_infinity(self):
        self.assertEqual(from_coefficients(1, -2, 2, -1).value_at_infinity(), 0.5)
        self.assertTrue(math.isinf(affine(2.0).value_at_infinity().real))

    def test_degenerate_coefficients(self):
        with self.assertRaises(InvalidParameterError):
            from_coefficients(1, 2, 2, 4)


class TestSqrtBranch(unittest.TestCase):
    """Test the witness-fixed square root."""

    def test_principal_cases(self):
        self.assertAlmostEqual(complex(sqrt_branch(1, 1)), 1.0, places=15)
        self.assertAlmostEqual(complex(sqrt_branch(4, 1)), 2.0, places=15)

    def test_witness_selects_sheet(self):
        root = complex(sqrt_branch(-1 + 0.01j, 1j))
        self.assertAlmostEqual(root.real, 0.0050, places=4)
        self.assertAlmostEqual(root.imag, 1.0000, places=4)

    def test_witness_root_has_nonnegative_real_part(self):
        for witness in (1, 1j, -1 + 0.1j, -0.5 - 2j):
            self.assertGreaterEqual(complex(sqrt_branch(witness, witness)).real, 0.0)

    @given(st.complex_numbers(min_magnitude=1e-3, max_magnitude=1e3, allow_nan=False, allow_infinity=False),
           inside_disk(0.99).filter(lambda w: abs(w) > 1e-3))
    @settings(max_examples=100, deadline=None)
    def test_squares_back(self, w, witness):
        root = complex(sqrt_branch(w, witness))
        self.assertLessEqual(abs(root * root - w), 1e-12 * max(1.0, abs(w)))

    def test_path_continuity(self):
        # Disk of radius 0.9 about 1 + i avoids 0.
        t = np.linspace(0, 6 * math.pi, 1000)
        path = (1 + 1j) + 0.9 * np.exp(1j * t) * np.linspace(0.1, 1, 1000)
        roots = sqrt_branch(path, 1 + 1j)
        self.assertLess(np.max(np.abs(np.diff(roots))), 0.1)

    def test_branch_point(self):
        with self.assertRaises(BranchPointError):
            sqrt_branch(0, 1)
        with self.assertRaises(BranchPointError):
            sqrt_branch(1, 0)


if __name__ == '__main__':
    unittest.main()
