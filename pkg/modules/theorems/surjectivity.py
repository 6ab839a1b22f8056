"""
Almost Surjectivity
Search for a preimage of a radial segment {r e^{it} : r0 <= r < 1}
"""

import cmath
from typing import Callable, Optional

import numpy as np

from core.check_helper import CheckReport, create_check_report
from core.domain import Domain
from core.errors import NearSingularityError
from core.functions import derivative_of
from utils.logger import get_logger

logger = get_logger(__name__)

HIT_TOLERANCE = 1e-3
NEWTON_STEPS = 25


def segment_distance(values: np.ndarray, t: float, r0: float) -> np.ndarray:
    """Distance from each value to the segment r e^{it}, r in [r0, 1]."""
    direction = cmath.exp(1j * t)
    radial = np.clip((values * direction.conjugate()).real, r0, 1.0)
    return np.abs(values - radial * direction)


def _newton(F: Callable, domain: Domain, start: complex, target: complex) -> complex:
    q, value = start, complex(F(start))
    for _ in range(NEWTON_STEPS):
        slope = complex(derivative_of(F, q))
        if slope == 0:
            break
        step = (value - target) / slope
        candidate = q - step
        if not domain.contains(candidate):
            break
        try:
            value = complex(F(candidate))
        except NearSingularityError:
            break
        q = candidate
        if abs(step) < 1e-14:
            break
    return q


def check_almost_surjectivity(
    F: Callable,
    domain: Domain,
    t: float,
    r0: float,
    mesh: Optional[np.ndarray] = None,
    tolerance: float = HIT_TOLERANCE,
) -> CheckReport:
    """
    Find q in the domain with F(q) within tolerance of the segment.

    The mesh point whose image is nearest to the segment midpoint seeds a
    Newton iteration toward that midpoint; the refining mesh itself is the
    fallback.
    """
    if mesh is None:
        mesh = domain.interior_mesh()
    target = 0.5 * (1.0 + r0) * cmath.exp(1j * t)
    images = np.asarray(F(mesh), dtype=complex)

    start = complex(mesh[int(np.argmin(np.abs(images - target)))])
    q = _newton(F, domain, start, target)
    distance = float(segment_distance(np.asarray([complex(F(q))]), t, r0)[0])

    if distance > tolerance:
        distances = segment_distance(images, t, r0)
        k = int(np.argmin(distances))
        if distances[k] < distance:
            q, distance = complex(mesh[k]), float(distances[k])

    logger.debug(f"Almost surjectivity t={t:.4f} r0={r0}: distance {distance:.3e} at {q}")
    return create_check_report(
        f"almost_surjectivity[t={t:.6g}]",
        distance,
        tolerance,
        witness=q if distance <= tolerance else None,
        detail=f"r0={r0:g}",
    )
