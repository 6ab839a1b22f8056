"""
Domain model
Planar domains, their validation and oriented boundary discretizations
"""

from __future__ import annotations

import json
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np

from core.errors import (
    DegenerateIntervalError,
    DomainSpecError,
    EmptySlitSetError,
    GeometryError,
    HoleExceedsOuterError,
    HoleTouchesOuterError,
    OverlappingHolesError,
    OverlappingSlitsError,
    TooFewSamplesError,
    UnsupportedVariantError,
)
from core.moebius import MoebiusTransform, affine, as_complex_array, inversion
from utils.logger import get_logger

logger = get_logger(__name__)

MIN_SAMPLES = 8
GEOMETRY_TOLERANCE = 1e-12
SLIT_MESH_FLOOR = 1e-8


class PointAtInfinity:
    """The point at infinity of the Riemann sphere."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "inf"

    def __reduce__(self):
        return (PointAtInfinity, ())


INFINITY = PointAtInfinity()

BasePoint = Union[complex, PointAtInfinity]


def is_infinity(point) -> bool:
    return point is INFINITY


# Boundary discretization

@dataclass(frozen=True)
class BoundarySample:
    """One oriented, weighted boundary point (domain on the left)."""

    point: complex
    unit_tangent: complex
    weight: float
    component: int = 0
    parameter: float = 0.0


@dataclass(frozen=True, eq=False)
class BoundaryGrid:
    """Vectorized list of BoundarySample values."""

    points: np.ndarray
    tangents: np.ndarray
    weights: np.ndarray
    components: np.ndarray
    parameters: np.ndarray

    def __len__(self) -> int:
        return len(self.points)

    def __getitem__(self, index: int) -> BoundarySample:
        return BoundarySample(
            point=complex(self.points[index]),
            unit_tangent=complex(self.tangents[index]),
            weight=float(self.weights[index]),
            component=int(self.components[index]),
            parameter=float(self.parameters[index]),
        )

    def __iter__(self) -> Iterator[BoundarySample]:
        for i in range(len(self)):
            yield self[i]

    @property
    def differentials(self) -> np.ndarray:
        """dz = tangent * ds for contour integrals."""
        return self.tangents * self.weights

    def component_slices(self) -> List[np.ndarray]:
        return [np.flatnonzero(self.components == c) for c in np.unique(self.components)]

    def contour_integral(self, values: np.ndarray) -> complex:
        return complex(np.sum(np.asarray(values) * self.differentials))


def _concat_grids(grids: Sequence[BoundaryGrid]) -> BoundaryGrid:
    return BoundaryGrid(
        points=np.concatenate([g.points for g in grids]),
        tangents=np.concatenate([g.tangents for g in grids]),
        weights=np.concatenate([g.weights for g in grids]),
        components=np.concatenate([g.components for g in grids]),
        parameters=np.concatenate([g.parameters for g in grids]),
    )


@dataclass(frozen=True)
class Circle:
    center: complex
    radius: float

    def to_dict(self) -> Dict:
        return {"center": [self.center.real, self.center.imag], "radius": self.radius}


@dataclass(frozen=True)
class CircleComponent:
    """Circle traversed counterclockwise (orientation +1) or clockwise (-1)."""

    center: complex
    radius: float
    orientation: int
    gap: float

    def shifted(self, delta: float) -> "CircleComponent":
        """Move the curve a distance delta into the domain."""
        return CircleComponent(self.center, self.radius - self.orientation * delta, self.orientation, self.gap)

    def sample(self, n: int, index: int) -> BoundaryGrid:
        theta = self.orientation * 2.0 * math.pi * np.arange(n) / n
        unit = np.exp(1j * theta)
        return BoundaryGrid(
            points=self.center + self.radius * unit,
            tangents=self.orientation * 1j * unit,
            weights=np.full(n, 2.0 * math.pi * self.radius / n),
            components=np.full(n, index, dtype=int),
            parameters=theta,
        )


@dataclass(frozen=True)
class StadiumComponent:
    """
    Clockwise stadium curve at distance offset around [left, right].

    Parameterized by arc length starting at left + i*offset: top edge to the
    right, right cap, bottom edge to the left, left cap.
    """

    left: float
    right: float
    offset: float
    gap: float

    @property
    def perimeter(self) -> float:
        return 2.0 * (self.right - self.left) + 2.0 * math.pi * self.offset

    def shifted(self, delta: float) -> "StadiumComponent":
        return StadiumComponent(self.left, self.right, self.offset + delta, self.gap)

    def sample(self, n: int, index: int) -> BoundaryGrid:
        length = self.right - self.left
        eps = self.offset
        cap = math.pi * eps
        s = self.perimeter * np.arange(n) / n
        points = np.empty(n, dtype=complex)
        tangents = np.empty(n, dtype=complex)

        top = s < length
        points[top] = self.left + s[top] + 1j * eps
        tangents[top] = 1.0

        right_cap = (s >= length) & (s < length + cap)
        phi = math.pi / 2 - (s[right_cap] - length) / eps
        points[right_cap] = self.right + eps * np.exp(1j * phi)
        tangents[right_cap] = -1j * np.exp(1j * phi)

        bottom = (s >= length + cap) & (s < 2 * length + cap)
        points[bottom] = self.right - (s[bottom] - length - cap) - 1j * eps
        tangents[bottom] = -1.0

        left_cap = s >= 2 * length + cap
        phi = -math.pi / 2 - (s[left_cap] - 2 * length - cap) / eps
        points[left_cap] = self.left + eps * np.exp(1j * phi)
        tangents[left_cap] = -1j * np.exp(1j * phi)

        return BoundaryGrid(
            points=points,
            tangents=tangents,
            weights=np.full(n, self.perimeter / n),
            components=np.full(n, index, dtype=int),
            parameters=s,
        )


Component = Union[CircleComponent, StadiumComponent]


# Real slit sets

@dataclass(frozen=True)
class RealSlitSet:
    """Finite union of disjoint closed real intervals."""

    intervals: Tuple[Tuple[float, float], ...]

    @classmethod
    def from_intervals(cls, intervals: Sequence[Sequence[float]]) -> "RealSlitSet":
        return cls(tuple((float(a), float(b)) for a, b in intervals))

    def validate(self) -> "RealSlitSet":
        if not self.intervals:
            raise EmptySlitSetError("Slit set must contain at least one interval")
        for left, right in self.intervals:
            if not right > left:
                raise DegenerateIntervalError(f"Slit [{left}, {right}] has non-positive length")
        ordered = sorted(self.intervals)
        for (a1, b1), (a2, b2) in zip(ordered, ordered[1:]):
            if a2 <= b1:
                raise OverlappingSlitsError(f"Slits [{a1}, {b1}] and [{a2}, {b2}] overlap")
        return RealSlitSet(tuple(ordered))

    @property
    def total_length(self) -> float:
        return float(sum(b - a for a, b in self.intervals))

    @property
    def hull(self) -> Tuple[float, float]:
        return (min(a for a, _ in self.intervals), max(b for _, b in self.intervals))

    @property
    def center(self) -> float:
        left, right = self.hull
        return 0.5 * (left + right)

    @property
    def half_width(self) -> float:
        left, right = self.hull
        return 0.5 * (right - left)

    def min_gap(self) -> float:
        ordered = sorted(self.intervals)
        gaps = [a2 - b1 for (_, b1), (a2, _) in zip(ordered, ordered[1:])]
        return min(gaps) if gaps else math.inf

    def distance(self, z) -> np.ndarray:
        """Euclidean distance from z to the set."""
        w = as_complex_array(z)
        result = np.full(w.shape, np.inf)
        for a, b in self.intervals:
            x = np.clip(w.real, a, b)
            result = np.minimum(result, np.abs(w - x))
        return result

    def contains(self, z) -> np.ndarray:
        w = as_complex_array(z)
        inside = np.zeros(w.shape, dtype=bool)
        for a, b in self.intervals:
            inside |= (w.imag == 0) & (w.real >= a) & (w.real <= b)
        return inside

    def to_list(self) -> List[List[float]]:
        return [[a, b] for a, b in self.intervals]


# Domains

class Domain(ABC):
    """A planar domain; the boundary is traversed with the domain on the left."""

    variant: str = ""
    contains_infinity: bool = False

    @abstractmethod
    def validate(self) -> "Domain":
        ...

    @abstractmethod
    def contains_array(self, z: np.ndarray) -> np.ndarray:
        """Vectorized open-set membership for finite points."""

    @abstractmethod
    def closure_array(self, z: np.ndarray, tol: float) -> np.ndarray:
        """Vectorized membership in the closed domain, with tolerance."""

    @abstractmethod
    def components(self, offset: Optional[float] = None) -> List[Component]:
        ...

    @abstractmethod
    def bounding_box(self) -> Tuple[float, float, float, float]:
        ...

    @abstractmethod
    def to_dict(self) -> Dict:
        ...

    @property
    def hole_count(self) -> int:
        """Number m of inner boundary curves."""
        return 0

    def contains(self, z) -> bool:
        if is_infinity(z):
            return self.contains_infinity
        return bool(self.contains_array(np.asarray([complex(z)]))[0])

    def contains_closure(self, z, tol: float = 1e-9) -> bool:
        if is_infinity(z):
            return self.contains_infinity
        return bool(self.closure_array(np.asarray([complex(z)]), tol)[0])

    def sample_boundary(self, n_per_component: int, offset: Optional[float] = None) -> BoundaryGrid:
        """
        Oriented trapezoidal discretization of the boundary.

        Args:
            n_per_component: Points per boundary component
            offset: Stadium offset for slit components (default 1e-3 * lambda(E))

        Returns:
            BoundaryGrid with n points per component
        """
        if n_per_component < MIN_SAMPLES:
            raise TooFewSamplesError(f"Need at least {MIN_SAMPLES} samples per component, got {n_per_component}")
        return _concat_grids([c.sample(n_per_component, i) for i, c in enumerate(self.components(offset))])

    def inset_boundary(self, fraction: float, n_per_component: int) -> BoundaryGrid:
        """Boundary contours pushed into the domain by fraction of each component's gap."""
        grids = []
        for i, component in enumerate(self.components()):
            grids.append(component.shifted(fraction * component.gap).sample(n_per_component, i))
        return _concat_grids(grids)

    def interior_mesh(self, levels: int = 14, n_angular: int = 1024) -> np.ndarray:
        """
        Boundary-refined mesh of the domain.

        Curves parallel to each boundary component at distances gap * 2**-k,
        k = 1..levels, plus a coarse fill grid of the bounding box.
        """
        chunks = []
        for component in self.components():
            for k in range(1, levels + 1):
                curve = component.shifted(component.gap * 2.0 ** (-k))
                chunks.append(curve.sample(n_angular, 0).points)
        chunks.append(self.fill_grid(33))
        chunks.extend(self._far_field_points(n_angular))
        mesh = np.concatenate(chunks)
        return mesh[self._safe_array(mesh)]

    def fill_grid(self, resolution: int) -> np.ndarray:
        """Row-major resolution x resolution box mesh intersected with the domain."""
        xmin, xmax, ymin, ymax = self.bounding_box()
        xs = np.linspace(xmin, xmax, resolution)
        ys = np.linspace(ymin, ymax, resolution)
        grid = (xs[None, :] + 1j * ys[:, None]).ravel()
        return grid[self._safe_array(grid)]

    def normalizing_map(self) -> MoebiusTransform:
        """Moebius map sending the domain into the closed unit disk."""
        raise UnsupportedVariantError(f"No normalizing Moebius map for {self.variant}")

    def _safe_array(self, z: np.ndarray) -> np.ndarray:
        return self.contains_array(z)

    def _far_field_points(self, n_angular: int) -> List[np.ndarray]:
        return []


def _circle_from_dict(data: Dict, what: str) -> Circle:
    if not isinstance(data, dict):
        raise DomainSpecError(f"{what} must be an object with 'center' and 'radius'")
    unknown = set(data) - {"center", "radius"}
    if unknown:
        raise DomainSpecError(f"Unknown fields in {what}: {sorted(unknown)}")
    try:
        x, y = data["center"]
        return Circle(complex(float(x), float(y)), float(data["radius"]))
    except (KeyError, TypeError, ValueError) as e:
        raise DomainSpecError(f"Malformed {what}: {e}") from e


@dataclass(frozen=True)
class UnitDisk(Domain):
    variant = "unit_disk"

    def validate(self) -> "UnitDisk":
        return self

    def contains_array(self, z):
        return np.abs(z) < 1.0

    def closure_array(self, z, tol):
        return np.abs(z) <= 1.0 + tol

    def components(self, offset=None):
        return [CircleComponent(0j, 1.0, +1, 1.0)]

    def bounding_box(self):
        return (-1.0, 1.0, -1.0, 1.0)

    def normalizing_map(self):
        return affine(1.0)

    def to_dict(self):
        return {"variant": self.variant}


@dataclass(frozen=True)
class ExteriorUnitDisk(Domain):
    """Exterior of the closed unit disk in the Riemann sphere."""

    variant = "exterior_unit_disk"
    contains_infinity = True

    def validate(self) -> "ExteriorUnitDisk":
        return self

    def contains_array(self, z):
        return np.abs(z) > 1.0

    def closure_array(self, z, tol):
        return np.abs(z) >= 1.0 - tol

    def components(self, offset=None):
        return [CircleComponent(0j, 1.0, -1, 1.0)]

    def bounding_box(self):
        return (-3.0, 3.0, -3.0, 3.0)

    def normalizing_map(self):
        return inversion()

    def to_dict(self):
        return {"variant": self.variant}

    def _far_field_points(self, n_angular):
        return [CircleComponent(0j, r, -1, 1.0).sample(n_angular, 0).points for r in (4.0, 16.0, 64.0)]


@dataclass(frozen=True)
class CircleDomain(Domain):
    """Open disk with finitely many disjoint closed circular holes removed."""

    outer: Circle
    holes: Tuple[Circle, ...] = ()

    variant = "circle_domain"

    def validate(self) -> "CircleDomain":
        if not self.outer.radius > 0:
            raise GeometryError(f"Outer radius must be positive, got {self.outer.radius}")
        for j, hole in enumerate(self.holes):
            if not hole.radius > 0:
                raise GeometryError(f"Hole {j} radius must be positive, got {hole.radius}")
            reach = abs(hole.center - self.outer.center) + hole.radius
            if reach > self.outer.radius + GEOMETRY_TOLERANCE:
                raise HoleExceedsOuterError(
                    f"Hole {j} reaches {reach:.6g} from the outer center, beyond radius {self.outer.radius:.6g}"
                )
            if reach >= self.outer.radius - GEOMETRY_TOLERANCE:
                raise HoleTouchesOuterError(f"Hole {j} touches the outer circle")
        for i in range(len(self.holes)):
            for j in range(i + 1, len(self.holes)):
                a, b = self.holes[i], self.holes[j]
                if abs(a.center - b.center) <= a.radius + b.radius + GEOMETRY_TOLERANCE:
                    raise OverlappingHolesError(f"Holes {i} and {j} overlap or touch")
        return self

    @property
    def hole_count(self) -> int:
        return len(self.holes)

    def contains_array(self, z):
        inside = np.abs(z - self.outer.center) < self.outer.radius
        for hole in self.holes:
            inside &= np.abs(z - hole.center) > hole.radius
        return inside

    def closure_array(self, z, tol):
        inside = np.abs(z - self.outer.center) <= self.outer.radius * (1.0 + tol)
        for hole in self.holes:
            inside &= np.abs(z - hole.center) >= hole.radius * (1.0 - tol)
        return inside

    def _outer_gap(self) -> float:
        gaps = [self.outer.radius]
        gaps += [self.outer.radius - abs(h.center - self.outer.center) - h.radius for h in self.holes]
        return min(gaps)

    def _hole_gap(self, j: int) -> float:
        hole = self.holes[j]
        gaps = [self.outer.radius - abs(hole.center - self.outer.center) - hole.radius, hole.radius]
        for i, other in enumerate(self.holes):
            if i != j:
                gaps.append(abs(other.center - hole.center) - other.radius - hole.radius)
        return min(gaps)

    def components(self, offset=None):
        comps: List[Component] = [CircleComponent(self.outer.center, self.outer.radius, +1, self._outer_gap())]
        for j, hole in enumerate(self.holes):
            comps.append(CircleComponent(hole.center, hole.radius, -1, self._hole_gap(j)))
        return comps

    def bounding_box(self):
        c, r = self.outer.center, self.outer.radius
        return (c.real - r, c.real + r, c.imag - r, c.imag + r)

    def normalizing_map(self):
        return affine(1.0 / self.outer.radius, -self.outer.center / self.outer.radius)

    def to_dict(self):
        return {
            "variant": self.variant,
            "outer": self.outer.to_dict(),
            "holes": [h.to_dict() for h in self.holes],
        }


@dataclass(frozen=True)
class RealSlitComplement(Domain):
    """Riemann sphere minus a finite union of real intervals."""

    slits: RealSlitSet = field(default_factory=lambda: RealSlitSet(((-1.0, 1.0),)))

    variant = "real_slit"
    contains_infinity = True

    def validate(self) -> "RealSlitComplement":
        return RealSlitComplement(self.slits.validate())

    def contains_array(self, z):
        return ~self.slits.contains(z)

    def closure_array(self, z, tol):
        return np.ones(np.shape(z), dtype=bool)

    def default_offset(self) -> float:
        offset = 1e-3 * self.slits.total_length
        return min(offset, self.slits.min_gap() / 4.0)

    def _component_gap(self) -> float:
        return min(self.slits.half_width, self.slits.min_gap() / 2.0)

    def components(self, offset=None):
        eps = self.default_offset() if offset is None else offset
        gap = self._component_gap()
        return [StadiumComponent(a, b, eps, gap) for a, b in self.slits.intervals]

    def interior_mesh(self, levels: int = 14, n_angular: int = 1024) -> np.ndarray:
        """
        Stadium curves at distances gap * 2**-k plus circles about every
        endpoint at radii gap * 2**-k, k = 1..2*levels.

        The endpoint circles resolve the square-root behavior of F there,
        where the stadiums alone stay too far from the image circle.
        """
        gap = self._component_gap()
        chunks = []
        for a, b in self.slits.intervals:
            for k in range(1, levels + 1):
                curve = StadiumComponent(a, b, gap * 2.0 ** (-k), 0.0)
                chunks.append(curve.sample(n_angular, 0).points)
            for endpoint in (a, b):
                for k in range(1, 2 * levels + 1):
                    circle = CircleComponent(complex(endpoint), gap * 2.0 ** (-k), -1, 0.0)
                    chunks.append(circle.sample(n_angular, 0).points)
        chunks.append(self.fill_grid(33))
        chunks.extend(self._far_field_points(n_angular))
        mesh = np.concatenate(chunks)
        return mesh[self._safe_array(mesh)]

    def bounding_box(self):
        c = self.slits.center
        half = 1.5 * max(self.slits.half_width, 1e-12)
        return (c - half, c + half, -half, half)

    def to_dict(self):
        return {"variant": self.variant, "slits": self.slits.to_list()}

    def _safe_array(self, z):
        return self.slits.distance(z) > SLIT_MESH_FLOOR * self.slits.total_length

    def _far_field_points(self, n_angular):
        c, w = self.slits.center, max(self.slits.half_width, 1e-12)
        return [CircleComponent(complex(c), r * w, -1, w).sample(n_angular, 0).points for r in (2.0, 8.0)]


# Module-level helpers

def validate(domain: Domain) -> Domain:
    """Return the domain if all geometric invariants hold."""
    return domain.validate()


def contains(domain: Domain, z) -> bool:
    return domain.contains(z)


def sample_boundary(domain: Domain, n_per_component: int, offset: Optional[float] = None) -> BoundaryGrid:
    return domain.sample_boundary(n_per_component, offset)


# JSON domain specification

_ALLOWED_FIELDS = {
    "unit_disk": {"variant"},
    "exterior_unit_disk": {"variant"},
    "circle_domain": {"variant", "outer", "holes"},
    "real_slit": {"variant", "slits"},
}


def domain_from_dict(data: Dict) -> Domain:
    """
    Build and validate a domain from its JSON specification.

    Args:
        data: Parsed JSON object

    Returns:
        Validated Domain
    """
    if not isinstance(data, dict):
        raise DomainSpecError("Domain specification must be a JSON object")
    variant = data.get("variant")
    if variant not in _ALLOWED_FIELDS:
        raise DomainSpecError(f"Unknown domain variant: {variant!r}")
    unknown = set(data) - _ALLOWED_FIELDS[variant]
    if unknown:
        raise DomainSpecError(f"Unknown fields for {variant}: {sorted(unknown)}")

    if variant == "unit_disk":
        domain: Domain = UnitDisk()
    elif variant == "exterior_unit_disk":
        domain = ExteriorUnitDisk()
    elif variant == "circle_domain":
        if "outer" not in data:
            raise DomainSpecError("circle_domain requires 'outer'")
        holes = data.get("holes", [])
        if not isinstance(holes, list):
            raise DomainSpecError("'holes' must be a list")
        domain = CircleDomain(
            outer=_circle_from_dict(data["outer"], "outer"),
            holes=tuple(_circle_from_dict(h, f"hole {j}") for j, h in enumerate(holes)),
        )
    else:
        slits = data.get("slits")
        if not isinstance(slits, list):
            raise DomainSpecError("real_slit requires a 'slits' list")
        try:
            intervals = [(float(a), float(b)) for a, b in slits]
        except (TypeError, ValueError) as e:
            raise DomainSpecError(f"Malformed slit interval: {e}") from e
        domain = RealSlitComplement(RealSlitSet.from_intervals(intervals))

    domain = domain.validate()
    logger.debug(f"Loaded domain {domain.to_dict()}")
    return domain


def load_domain(path: Union[str, Path]) -> Domain:
    """Read a JSON domain file; OSError propagates for missing files."""
    text = Path(path).read_text(encoding="utf-8")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise DomainSpecError(f"Invalid JSON in {path}: {e}") from e
    return domain_from_dict(data)
