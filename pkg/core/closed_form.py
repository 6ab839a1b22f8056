"""
Closed-form Ahlfors functions
Disk, exterior disk and real-slit complements, plus the derivative at infinity
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Dict, Optional, Tuple

import numpy as np

from core.domain import (
    INFINITY,
    BasePoint,
    Domain,
    ExteriorUnitDisk,
    RealSlitComplement,
    RealSlitSet,
    UnitDisk,
    is_infinity,
)
from core.errors import InvalidParameterError, NearSingularityError, NumericalInstabilityError
from core.moebius import (
    ComplexLike,
    MoebiusTransform,
    as_complex_array,
    disk_automorphism,
    inversion,
    restore_shape,
    rotation,
)
from utils.logger import get_logger

logger = get_logger(__name__)


@dataclass(frozen=True)
class QuadratureSpec:
    """Fixed-order Gauss-Legendre rule applied on every slit interval."""

    nodes_per_interval: int = 32
    rule: str = "gauss-legendre"
    tolerance: float = 1e-12
    floor_factor: float = 1e-9

    def __post_init__(self):
        if self.nodes_per_interval < 4:
            raise InvalidParameterError(
                f"nodes_per_interval must be at least 4, got {self.nodes_per_interval}"
            )
        if self.rule != "gauss-legendre":
            raise InvalidParameterError(f"Unsupported quadrature rule: {self.rule}")
        if not self.floor_factor > 0:
            raise InvalidParameterError("floor_factor must be positive")

    @classmethod
    def from_config(cls, config: Dict) -> "QuadratureSpec":
        section = config.get("quadrature", {}) or {}
        return cls(
            nodes_per_interval=int(section.get("nodes_per_interval", cls.nodes_per_interval)),
            tolerance=float(section.get("tolerance", cls.tolerance)),
            floor_factor=float(section.get("floor_factor", cls.floor_factor)),
        )


@lru_cache(maxsize=16)
def _gauss_legendre(n: int) -> Tuple[np.ndarray, np.ndarray]:
    nodes, weights = np.polynomial.legendre.leggauss(n)
    return nodes, weights


def _kernel_integral(slits: RealSlitSet, z: np.ndarray, n: int) -> np.ndarray:
    """Sum over intervals of the n-point rule for the integral of dt / (z - t)."""
    nodes, weights = _gauss_legendre(n)
    total = np.zeros(z.shape, dtype=complex)
    for a, b in slits.intervals:
        half, mid = 0.5 * (b - a), 0.5 * (b + a)
        t = mid + half * nodes
        total += np.sum((half * weights) / (z[..., None] - t), axis=-1)
    return total


def _exact_kernel_integral(slits: RealSlitSet, z: np.ndarray) -> np.ndarray:
    total = np.zeros(z.shape, dtype=complex)
    for a, b in slits.intervals:
        total += np.log((z - a) / (z - b))
    return total


def _kernel_derivative(slits: RealSlitSet, z: np.ndarray) -> np.ndarray:
    """d/dz of the kernel integral."""
    total = np.zeros(z.shape, dtype=complex)
    for a, b in slits.intervals:
        total += 1.0 / (z - a) - 1.0 / (z - b)
    return total


def _check_floor(slits: RealSlitSet, z: np.ndarray, quadrature: QuadratureSpec) -> None:
    floor = quadrature.floor_factor * slits.total_length
    distance = slits.distance(z)
    if np.any(distance < floor):
        worst = complex(z.ravel()[int(np.argmin(distance))])
        raise NearSingularityError(f"Point {worst} lies within {floor:.3g} of the slit set")


def strip_map(slits: RealSlitSet, z, quadrature: Optional[QuadratureSpec] = None):
    """
    h(z) = 1/2 * integral over E of dt / (z - t).

    Evaluated with Gauss-Legendre on each interval at n and 2n nodes. Where the
    two disagree by more than tolerance * max(1, |h|) the integral is taken
    from the logarithmic antiderivative instead.

    Args:
        slits: Slit set E
        z: Point(s) off E, or INFINITY
        quadrature: Quadrature settings

    Returns:
        h(z), complex or array
    """
    quadrature = quadrature or QuadratureSpec()
    if is_infinity(z):
        return 0j
    w = as_complex_array(z)
    _check_floor(slits, w, quadrature)

    n = quadrature.nodes_per_interval
    coarse = _kernel_integral(slits, w, n)
    fine = _kernel_integral(slits, w, 2 * n)
    unresolved = np.abs(fine - coarse) > quadrature.tolerance * np.maximum(1.0, np.abs(fine))
    if np.any(unresolved):
        logger.debug(f"strip_map: {int(np.count_nonzero(unresolved))} points near E use the exact kernel")
        fine = np.where(unresolved, _exact_kernel_integral(slits, w), fine)
    return restore_shape(0.5 * fine, z)


def strip_map_derivative(slits: RealSlitSet, z, quadrature: Optional[QuadratureSpec] = None):
    quadrature = quadrature or QuadratureSpec()
    w = as_complex_array(z)
    _check_floor(slits, w, quadrature)
    return restore_shape(0.5 * _kernel_derivative(slits, w), z)


@dataclass(frozen=True)
class AhlforsClosedForm:
    """
    An Ahlfors function given by a formula.

    Variants:
        disk: F is a disk automorphism
        exterior_disk: F is a Moebius map built from an automorphism and 1/z
        real_slit: F = (e^h - 1) / (e^h + 1) with h the strip map of E
    """

    variant: str
    base_point: BasePoint
    gamma: float
    transform: Optional[MoebiusTransform] = None
    slits: Optional[RealSlitSet] = None
    quadrature: QuadratureSpec = field(default_factory=QuadratureSpec)

    @property
    def domain(self) -> Domain:
        if self.variant == "disk":
            return UnitDisk()
        if self.variant == "exterior_disk":
            return ExteriorUnitDisk()
        return RealSlitComplement(self.slits)

    def __call__(self, z: ComplexLike):
        if is_infinity(z):
            return self.value_at_infinity()
        if self.transform is not None:
            return self.transform(z)
        h = strip_map(self.slits, z, self.quadrature)
        return restore_shape(np.tanh(0.5 * as_complex_array(h)), z)

    def derivative(self, z: ComplexLike):
        if self.transform is not None:
            return self.transform.derivative(z)
        w = as_complex_array(z)
        h = as_complex_array(strip_map(self.slits, w, self.quadrature))
        dh = as_complex_array(strip_map_derivative(self.slits, w, self.quadrature))
        t = np.tanh(0.5 * h)
        return restore_shape(0.5 * (1.0 - t * t) * dh, z)

    def value_at_infinity(self) -> complex:
        if self.transform is not None:
            return self.transform.value_at_infinity()
        return 0j

    def derivative_at_base(self) -> complex:
        """F'(p), or F'(infinity) for the point at infinity."""
        if is_infinity(self.base_point):
            return derivative_at_infinity(self, center=self._far_center(), radius=self._far_radius())
        return complex(self.derivative(self.base_point))

    def _far_center(self) -> complex:
        return complex(self.slits.center) if self.slits is not None else 0j

    def _far_radius(self) -> float:
        if self.slits is not None:
            return 2.0 * max(self.slits.half_width, 1e-300)
        return 2.0

    def descriptor(self) -> Dict:
        """JSON-ready description of the closed form."""
        desc: Dict = {
            "kind": "closed_form",
            "variant": self.variant,
            "gamma": self.gamma,
        }
        if self.transform is not None:
            desc["moebius"] = [[c.real, c.imag] for c in self.transform.coefficients]
        if self.slits is not None:
            desc["slits"] = self.slits.to_list()
            desc["quadrature"] = {
                "rule": self.quadrature.rule,
                "nodes_per_interval": self.quadrature.nodes_per_interval,
            }
        return desc


def ahlfors_disk(p: complex) -> AhlforsClosedForm:
    """Ahlfors function of the unit disk for the point p."""
    transform = disk_automorphism(p)
    gamma = 1.0 / (1.0 - abs(complex(p)) ** 2)
    return AhlforsClosedForm("disk", complex(p), gamma, transform=transform)


def ahlfors_exterior_disk(p) -> AhlforsClosedForm:
    """
    Ahlfors function of the exterior of the closed unit disk.

    For finite p the map is the disk automorphism at 1/p composed with 1/z,
    rotated so that F'(p) > 0. At p = 2 this is (z - 2) / (2z - 1). For the
    point at infinity it is 1/z with capacity 1.
    """
    if is_infinity(p):
        return AhlforsClosedForm("exterior_disk", INFINITY, 1.0, transform=inversion())
    p = complex(p)
    if not abs(p) > 1.0:
        raise InvalidParameterError(f"Exterior disk base point needs |p| > 1, got {p}")
    bare = disk_automorphism(1.0 / p).compose(inversion())
    slope = complex(bare.derivative(p))
    transform = rotation(-math.atan2(slope.imag, slope.real)).compose(bare)
    gamma = 1.0 / (abs(p) ** 2 - 1.0)
    logger.debug(f"Exterior disk map for p={p}: coefficients {transform.coefficients}")
    return AhlforsClosedForm("exterior_disk", p, gamma, transform=transform)


def capacity_real_slit(slits: RealSlitSet) -> float:
    """Analytic capacity of E on the real line: lambda(E) / 4."""
    return slits.validate().total_length / 4.0


def ahlfors_real_slit(slits: RealSlitSet, quadrature: Optional[QuadratureSpec] = None) -> AhlforsClosedForm:
    """Ahlfors function of the sphere minus E for the point at infinity."""
    slits = slits.validate()
    return AhlforsClosedForm(
        "real_slit",
        INFINITY,
        capacity_real_slit(slits),
        slits=slits,
        quadrature=quadrature or QuadratureSpec(),
    )


def derivative_at_infinity(
    f: Callable,
    center: complex = 0j,
    radius: float = 2.0,
    n_points: int = 256,
    f_inf: Optional[complex] = None,
    rtol: float = 1e-8,
    atol: float = 1e-14,
    max_doublings: int = 4,
) -> complex:
    """
    f'(infinity) as the mean of (f(z) - f(infinity)) (z - c) over a circle.

    The mean is the Laurent coefficient of 1/(z - c), which equals the limit
    of z (f(z) - f(infinity)). It is evaluated on circles of radius R and 2R;
    while the two disagree beyond rtol, R is doubled, at most max_doublings
    times.

    Args:
        f: Function analytic outside some disk about center
        center: Circle center
        radius: Starting radius R
        n_points: Trapezoidal points per circle
        f_inf: Known value at infinity (default: circle mean)
        max_doublings: Extra radius doublings after a disagreement

    Returns:
        f'(infinity)

    Raises:
        NumericalInstabilityError: No pair of consecutive radii agrees
    """
    theta = 2.0 * math.pi * np.arange(n_points) / n_points

    def estimate(r: float) -> complex:
        z = center + r * np.exp(1j * theta)
        values = as_complex_array(f(z))
        at_inf = np.mean(values) if f_inf is None else complex(f_inf)
        return complex(np.mean((values - at_inf) * (z - center)))

    r = float(radius)
    current = estimate(r)
    for doubling in range(max_doublings + 1):
        following = estimate(2.0 * r)
        if abs(current - following) <= rtol * max(abs(current), abs(following)) + atol * max(1.0, r):
            if doubling:
                logger.debug(f"f'(infinity) settled at R={r:g} after {doubling} doublings")
            return current
        r, current = 2.0 * r, following

    raise NumericalInstabilityError(
        f"f'(infinity) estimates disagree up to R={r:g}: {estimate(r / 2.0)} vs {current} "
        f"(started at R={radius})"
    )


def limit_at_infinity_richardson(
    f: Callable,
    f_inf: Optional[complex] = None,
    start: float = 1e3,
    ratio: float = 2.0,
    levels: int = 4,
    direction: complex = 1.0,
) -> complex:
    """Raw limit z (f(z) - f(infinity)) along a ray, Richardson-extrapolated in 1/|z|."""
    if f_inf is None:
        f_inf = f.value_at_infinity() if hasattr(f, "value_at_infinity") else complex(f(1e15 * direction))
    unit = complex(direction) / abs(direction)
    table = []
    for k in range(levels):
        z = start * ratio ** k * unit
        table.append([complex(z * (f(z) - f_inf))])
    for j in range(1, levels):
        factor = ratio ** j
        for k in range(j, levels):
            prev = table[k][j - 1]
            table[k].append((factor * prev - table[k - 1][j - 1]) / (factor - 1.0))
    return table[-1][-1]
