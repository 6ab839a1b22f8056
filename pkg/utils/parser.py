"""
Parser utilities for command-line points and values
"""

import math
from typing import List, Sequence, Union

from core.domain import INFINITY, BasePoint, is_infinity
from core.errors import InvalidParameterError

INFINITY_TOKENS = {'inf', 'infinity', '∞'}


class PointParser:
    """Parse complex numbers written as "re,im" and the point at infinity."""

    @staticmethod
    def parse_complex(text: str) -> complex:
        """Parse "re,im" (or a bare real) into a finite complex number."""
        parts = [p.strip() for p in str(text).split(',')]
        if len(parts) not in (1, 2) or any(not p for p in parts):
            raise InvalidParameterError(f"Expected 're,im', got {text!r}")
        try:
            values = [float(p) for p in parts]
        except ValueError as e:
            raise InvalidParameterError(f"Not a number in {text!r}") from e
        if not all(math.isfinite(v) for v in values):
            raise InvalidParameterError(f"Point {text!r} must be finite")
        return complex(values[0], values[1] if len(values) == 2 else 0.0)

    @staticmethod
    def parse_point(text: str) -> BasePoint:
        """Parse a base point: "re,im" or "inf"."""
        if str(text).strip().lower() in INFINITY_TOKENS:
            return INFINITY
        return PointParser.parse_complex(text)

    @staticmethod
    def from_pair(pair: Sequence[float]) -> complex:
        re_part, im_part = pair
        return complex(float(re_part), float(im_part))

    @staticmethod
    def to_json(point: BasePoint) -> Union[str, List[float]]:
        """"inf" or [re, im]."""
        if is_infinity(point):
            return 'inf'
        return [point.real, point.imag]


def parse_point(text: str) -> BasePoint:
    return PointParser.parse_point(text)
