"""
Rational basis for the finite-dimensional extremal problem
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from core.domain import (
    BasePoint,
    CircleDomain,
    Domain,
    ExteriorUnitDisk,
    UnitDisk,
    is_infinity,
)
from core.errors import InvalidParameterError, UnsupportedVariantError
from core.moebius import as_complex_array
from utils.logger import get_logger

logger = get_logger(__name__)

HoleDepth = Union[None, int, Tuple[int, ...]]


@dataclass(frozen=True)
class BasisSpec:
    """
    Basis truncation.

    Args:
        polynomial_degree: Highest power of (z - z0) / R for bounded domains
        hole_depth: Negative powers per hole; an int applies to every hole,
            None uses polynomial_degree
        poles: Points off the closed domain that get their own inverse powers
        pole_order: Inverse powers per pole
    """

    polynomial_degree: int = 12
    hole_depth: HoleDepth = None
    poles: Tuple[complex, ...] = ()
    pole_order: int = 2

    def __post_init__(self):
        if self.polynomial_degree < 0:
            raise InvalidParameterError("polynomial_degree must be nonnegative")
        depths = self.hole_depth if isinstance(self.hole_depth, tuple) else (self.hole_depth,)
        if any(d is not None and d < 0 for d in depths):
            raise InvalidParameterError("hole_depth must be nonnegative")
        if self.pole_order < 1:
            raise InvalidParameterError("pole_order must be positive")

    def enlarged(self, step: int) -> "BasisSpec":
        """Same truncation with `step` more powers at the outer circle and at every hole."""
        depth = self.hole_depth
        if isinstance(depth, tuple):
            depth = tuple(d + step for d in depth)
        elif depth is not None:
            depth = int(depth) + step
        return replace(self, polynomial_degree=self.polynomial_degree + step, hole_depth=depth)

    def with_poles(self, poles: Sequence[complex], order: Optional[int] = None) -> "BasisSpec":
        return replace(self, poles=tuple(complex(a) for a in poles), pole_order=order or self.pole_order)

    def depth_for(self, hole_index: int) -> int:
        if self.hole_depth is None:
            return self.polynomial_degree
        if isinstance(self.hole_depth, tuple):
            if hole_index >= len(self.hole_depth):
                raise InvalidParameterError(f"No hole depth given for hole {hole_index}")
            return self.hole_depth[hole_index]
        return int(self.hole_depth)

    @classmethod
    def from_config(cls, config: Dict) -> "BasisSpec":
        section = config.get("basis", {}) or {}
        depth = section.get("hole_depth")
        if isinstance(depth, list):
            depth = tuple(int(d) for d in depth)
        elif depth is not None:
            depth = int(depth)
        return cls(polynomial_degree=int(section.get("polynomial_degree", 12)), hole_depth=depth)


@dataclass(frozen=True)
class BasisTerm:
    """((z - center) / scale)**power for kind 'power', (scale / (z - center))**power for 'inverse'."""

    kind: str
    center: complex
    scale: float
    power: int

    @property
    def label(self) -> str:
        if self.power == 0:
            return "1"
        c = f"{self.center.real:g}{self.center.imag:+g}i"
        if self.kind == "power":
            return f"((z-({c}))/{self.scale:g})^{self.power}"
        return f"({self.scale:g}/(z-({c})))^{self.power}"

    def values(self, z: np.ndarray) -> np.ndarray:
        if self.kind == "power":
            return ((z - self.center) / self.scale) ** self.power
        return (self.scale / (z - self.center)) ** self.power

    def derivatives(self, z: np.ndarray) -> np.ndarray:
        k = self.power
        if k == 0:
            return np.zeros(z.shape, dtype=complex)
        if self.kind == "power":
            return (k / self.scale) * ((z - self.center) / self.scale) ** (k - 1)
        return (-k / self.scale) * (self.scale / (z - self.center)) ** (k + 1)

    def value_at_infinity(self) -> complex:
        if self.power == 0:
            return 1.0 + 0j
        if self.kind == "inverse":
            return 0j
        return complex(math.inf, 0.0)


class Basis:
    """Evaluators for a list of basis terms on a domain."""

    def __init__(self, domain: Domain, terms: Sequence[BasisTerm], spec: BasisSpec):
        self.domain = domain
        self.terms = list(terms)
        self.spec = spec

    @property
    def dimension(self) -> int:
        return len(self.terms)

    @property
    def labels(self) -> List[str]:
        return [t.label for t in self.terms]

    def evaluate(self, z) -> np.ndarray:
        """Matrix of term values, one row per point (a vector for scalar z)."""
        if is_infinity(z):
            return self.value_at_infinity()
        w = as_complex_array(z)
        flat = w.ravel()
        with np.errstate(divide="ignore", invalid="ignore"):
            matrix = np.stack([t.values(flat) for t in self.terms], axis=-1)
        return matrix[0] if w.ndim == 0 else matrix

    def derivative(self, z) -> np.ndarray:
        w = as_complex_array(z)
        flat = w.ravel()
        with np.errstate(divide="ignore", invalid="ignore"):
            matrix = np.stack([t.derivatives(flat) for t in self.terms], axis=-1)
        return matrix[0] if w.ndim == 0 else matrix

    def value_at_infinity(self) -> np.ndarray:
        return np.array([t.value_at_infinity() for t in self.terms], dtype=complex)

    def derivative_functional(self, base_point: BasePoint, n_points: int = 256) -> np.ndarray:
        """
        Vector d with h'(p) = d . coefficients.

        At infinity this is the circle-mean form of f'(infinity) applied to
        each term on |z| = 2.
        """
        if not is_infinity(base_point):
            return self.derivative(complex(base_point))
        theta = 2.0 * math.pi * np.arange(n_points) / n_points
        z = 2.0 * np.exp(1j * theta)
        values = self.evaluate(z)
        return np.mean((values - values.mean(axis=0)) * z[:, None], axis=0)


def build_basis(domain: Domain, spec: Optional[BasisSpec] = None, base_point: BasePoint = None) -> Basis:
    """
    Rational basis analytic on the closed domain.

    Args:
        domain: UnitDisk, ExteriorUnitDisk or CircleDomain
        spec: Truncation orders
        base_point: Used to pin f(infinity) = 0 on the exterior disk

    Returns:
        Basis
    """
    spec = spec or BasisSpec()
    terms: List[BasisTerm] = []

    if isinstance(domain, UnitDisk):
        terms = [BasisTerm("power", 0j, 1.0, k) for k in range(spec.polynomial_degree + 1)]
    elif isinstance(domain, CircleDomain):
        outer = domain.outer
        terms = [BasisTerm("power", outer.center, outer.radius, k) for k in range(spec.polynomial_degree + 1)]
        for j, hole in enumerate(domain.holes):
            terms += [BasisTerm("inverse", hole.center, hole.radius, k) for k in range(1, spec.depth_for(j) + 1)]
    elif isinstance(domain, ExteriorUnitDisk):
        if base_point is None or not is_infinity(base_point):
            terms.append(BasisTerm("power", 0j, 1.0, 0))
        terms += [BasisTerm("inverse", 0j, 1.0, k) for k in range(1, spec.depth_for(0) + 1)]
    else:
        raise UnsupportedVariantError(
            f"No solver basis for {domain.variant}; use the closed form instead"
        )

    for pole in spec.poles:
        if domain.contains_closure(pole):
            raise InvalidParameterError(f"Basis pole {pole} lies in the closed {domain.variant}")
        # scale is the distance to the boundary, so every pole term is bounded by 1 there
        reach = min(abs(abs(pole - c.center) - c.radius) for c in domain.components())
        terms += [BasisTerm("inverse", pole, reach, k) for k in range(1, spec.pole_order + 1)]

    logger.debug(f"Built basis of dimension {len(terms)} for {domain.variant}")
    return Basis(domain, terms, spec)
