"""
Report Generator
Writes solutions, check reports, CSV tables and the SVG image plot
"""

import csv
import json
from pathlib import Path
from typing import Dict, Iterable, List, Sequence, Tuple, Union

import numpy as np
from jinja2 import Environment

from core.check_helper import CheckReport
from utils.logger import get_logger

logger = get_logger(__name__)

PathLike = Union[str, Path]

BOUNDARY_HEADER = ["component", "parameter", "modulus"]
GRID_HEADER = ["z_re", "z_im", "F_re", "F_im"]

SVG_SIZE = 400
SVG_RADIUS = 180


def _number(value: float) -> str:
    """Shortest round-tripping text for a float."""
    return repr(float(value))


class ReportGenerator:
    """Generate the output files of one command."""

    def __init__(self, config: Dict):
        self.config = config
        self.output_config = config.get('output', {}) or {}

    def output_dir(self, override: PathLike = None) -> Path:
        directory = Path(override or self.output_config.get('directory', 'out'))
        directory.mkdir(parents=True, exist_ok=True)
        return directory

    def write_solution(self, path: PathLike, solution: Dict) -> Path:
        """solution.json with sorted keys."""
        path = Path(path)
        path.write_text(json.dumps(solution, indent=2, sort_keys=True) + "\n", encoding="utf-8")
        logger.info(f"Solution written: {path}")
        return path

    def write_boundary_modulus(self, path: PathLike, rows: Iterable[Tuple[int, float, float]]) -> Path:
        path = Path(path)
        with open(path, "w", newline="", encoding="utf-8") as f:
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(BOUNDARY_HEADER)
            for component, parameter, modulus in rows:
                writer.writerow([int(component), _number(parameter), _number(modulus)])
        logger.info(f"Boundary modulus profile written: {path}")
        return path

    def write_reports(self, path: PathLike, reports: Sequence[CheckReport]) -> Path:
        """One JSON object per line, in report order."""
        path = Path(path)
        lines = [json.dumps(report.to_dict(), sort_keys=True) for report in reports]
        path.write_text("".join(line + "\n" for line in lines), encoding="utf-8")
        logger.info(f"Check report written: {path} ({len(lines)} checks)")
        return path

    def write_image_grid(self, path: PathLike, z: np.ndarray, values: np.ndarray) -> Path:
        path = Path(path)
        with open(path, "w", newline="", encoding="utf-8") as f:
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(GRID_HEADER)
            for point, value in zip(z, values):
                writer.writerow([_number(point.real), _number(point.imag), _number(value.real), _number(value.imag)])
        logger.info(f"Image grid written: {path} ({len(z)} points)")
        return path

    def write_image_plot(self, path: PathLike, values: np.ndarray, title: str) -> Path:
        """Static SVG scatter of image points inside the unit circle."""
        path = Path(path)
        inside = values[np.abs(values) <= 1.0 + 1e-9]
        center = SVG_SIZE / 2
        points: List[Tuple[str, str]] = [
            (f"{center + SVG_RADIUS * w.real:.3f}", f"{center - SVG_RADIUS * w.imag:.3f}") for w in inside
        ]
        env = Environment(autoescape=True)
        template = env.from_string(self._get_svg_template())
        path.write_text(
            template.render(size=SVG_SIZE, center=center, radius=SVG_RADIUS, points=points, title=title),
            encoding="utf-8",
        )
        logger.info(f"Image plot written: {path} ({len(points)} points)")
        return path

    def _get_svg_template(self) -> str:
        return """<svg xmlns="http://www.w3.org/2000/svg" width="{{ size }}" height="{{ size }}" viewBox="0 0 {{ size }} {{ size }}">
  <title>{{ title }}</title>
  <rect width="{{ size }}" height="{{ size }}" fill="white"/>
  <circle cx="{{ center }}" cy="{{ center }}" r="{{ radius }}" fill="none" stroke="black" stroke-width="1"/>
  <g fill="steelblue" fill-opacity="0.6">
{%- for x, y in points %}
    <circle cx="{{ x }}" cy="{{ y }}" r="1"/>
{%- endfor %}
  </g>
</svg>
"""
