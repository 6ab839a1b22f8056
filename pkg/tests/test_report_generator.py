#!/usr/bin/env python3
"""
Tests for output files
"""

import sys
from pathlib import Path

# Add parent directory to path for imports
sys.path.insert(0, str(Path(__file__).parent.parent))

import json
import tempfile
import unittest

import numpy as np

from core.check_helper import create_check_report
from core.closed_form import ahlfors_disk
from core.domain import UnitDisk
from core.extremal_solver import modulus_profile
from core.report_generator import ReportGenerator


class TestReportGenerator(unittest.TestCase):
    """Test solution, CSV, JSON-lines and SVG writers."""

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.out = Path(self.tmp.name)
        self.reporter = ReportGenerator({'output': {'directory': str(self.out / 'default')}})

    def tearDown(self):
        self.tmp.cleanup()

    def test_output_dir_created(self):
        directory = self.reporter.output_dir()
        self.assertTrue(directory.is_dir())
        override = self.reporter.output_dir(self.out / 'nested' / 'run')
        self.assertTrue(override.is_dir())

    def test_solution_json_sorted(self):
        path = self.reporter.write_solution(self.out / 'solution.json', {'gamma': 1.5, 'base_point': [0.3, 0]})
        text = path.read_text()
        self.assertLess(text.index('base_point'), text.index('gamma'))
        self.assertEqual(json.loads(text)['gamma'], 1.5)

    def test_boundary_modulus_header(self):
        rows = modulus_profile(ahlfors_disk(0.3), UnitDisk(), 16)
        path = self.reporter.write_boundary_modulus(self.out / 'boundary_modulus.csv', rows)
        lines = path.read_text().splitlines()
        self.assertEqual(lines[0], 'component,parameter,modulus')
        self.assertEqual(len(lines), 17)
        component, parameter, modulus = lines[1].split(',')
        self.assertEqual(component, '0')
        self.assertAlmostEqual(float(modulus), 1.0, places=12)

    def test_reports_one_json_object_per_line(self):
        reports = [
            create_check_report('vanishing', 1e-7, 1e-4, witness=0.3),
            create_check_report('valence[w=0+0i]', float('nan'), 1, passed=False),
        ]
        path = self.reporter.write_reports(self.out / 'report.jsonl', reports)
        lines = path.read_text().splitlines()
        self.assertEqual(len(lines), 2)
        self.assertEqual(json.loads(lines[0])['check_name'], 'vanishing')
        self.assertEqual(json.loads(lines[1])['measured'], 'nan')

    def test_image_grid_header(self):
        z = UnitDisk().fill_grid(16)
        path = self.reporter.write_image_grid(self.out / 'image_grid.csv', z, ahlfors_disk(0.0)(z))
        lines = path.read_text().splitlines()
        self.assertEqual(lines[0], 'z_re,z_im,F_re,F_im')
        self.assertEqual(len(lines), len(z) + 1)
        z_re, z_im, f_re, f_im = map(float, lines[1].split(','))
        self.assertAlmostEqual(z_re, f_re, places=15)
        self.assertAlmostEqual(z_im, f_im, places=15)

    def test_svg_plot(self):
        values = np.array([0.5 + 0.5j, 2.0 + 0j, -0.1j])
        path = self.reporter.write_image_plot(self.out / 'image_plot.svg', values, title='F(Ω) <disk>')
        svg = path.read_text()
        self.assertTrue(svg.startswith('<svg'))
        self.assertEqual(svg.count('r="1"'), 2)
        self.assertIn('&lt;disk&gt;', svg)

    def test_byte_deterministic(self):
        rows = modulus_profile(ahlfors_disk(0.5j), UnitDisk(), 64)
        first = self.reporter.write_boundary_modulus(self.out / 'a.csv', rows).read_bytes()
        second = self.reporter.write_boundary_modulus(self.out / 'b.csv', rows).read_bytes()
        self.assertEqual(first, second)


if __name__ == '__main__':
    unittest.main()
