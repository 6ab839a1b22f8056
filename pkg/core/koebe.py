"""
Koebe derivative expansion
Square-root lift of a bounded function that omits a value, raising |f'(p)|
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from core.domain import Domain, UnitDisk, is_infinity
from core.errors import NumericalInstabilityError, OutOfDomainError, PreconditionViolationError
from core.functions import derivative_of
from core.moebius import (
    ComplexLike,
    MoebiusTransform,
    as_complex_array,
    interchange,
    restore_shape,
    sqrt_branch,
)
from utils.logger import get_logger

logger = get_logger(__name__)

INSET_FRACTIONS = (0.1, 0.01, 0.002)
MIN_CUT_GAP = 1e-3


@dataclass(frozen=True)
class KoebeExpansion:
    """H = h_{g(a)} o g o h_a o f with g the square root cut along cut_angle."""

    source: Callable
    omitted: complex
    base_point: complex
    cut_angle: float
    root: complex
    gain: float

    @property
    def inner(self) -> MoebiusTransform:
        return interchange(self.omitted)

    @property
    def outer(self) -> MoebiusTransform:
        return interchange(self.root)

    def _lifted(self, z: np.ndarray):
        u = self.inner(as_complex_array(self.source(z)))
        return u, sqrt_branch(u, self.omitted, self.cut_angle)

    def __call__(self, z: ComplexLike):
        w = as_complex_array(z)
        _, s = self._lifted(w)
        return restore_shape(as_complex_array(self.outer(s)), z)

    def derivative(self, z: ComplexLike):
        w = as_complex_array(z)
        f = as_complex_array(self.source(w))
        u, s = self._lifted(w)
        du = as_complex_array(self.inner.derivative(f)) * as_complex_array(derivative_of(self.source, w))
        ds = du / (2.0 * s)
        return restore_shape(as_complex_array(self.outer.derivative(s)) * ds, z)


def _discrete_winding(values: np.ndarray, slices: Sequence[np.ndarray]) -> float:
    """Total turning of the closed sampled curves about 0, in turns."""
    total = 0.0
    for index in slices:
        curve = values[index]
        total += float(np.sum(np.angle(np.roll(curve, -1) / curve)))
    return total / (2.0 * math.pi)


def _widest_gap_cut(arguments: np.ndarray) -> float:
    """Middle of the largest angular gap in a set of arguments."""
    ordered = np.sort(np.mod(arguments, 2.0 * math.pi))
    gaps = np.diff(np.concatenate([ordered, [ordered[0] + 2.0 * math.pi]]))
    k = int(np.argmax(gaps))
    if gaps[k] < MIN_CUT_GAP:
        raise PreconditionViolationError(
            "Sampled image of h_a o f surrounds 0; no single square-root branch fits"
        )
    return float(ordered[k] + 0.5 * gaps[k])


def koebe_expand(
    f: Callable,
    a: complex,
    p: complex,
    domain: Optional[Domain] = None,
    grid_points: int = 4096,
    fractions: Sequence[float] = INSET_FRACTIONS,
    tolerance: float = 1e-9,
) -> KoebeExpansion:
    """
    Lift f through the square root so that |H'(p)| > |f'(p)|.

    The preconditions are certified on samples: f(p) = 0, |f| <= 1 on inset
    boundary contours and a fill grid, and f - a has zero winding on every
    inset contour with no sample hitting a.

    Args:
        f: Analytic function on the domain
        a: Omitted value, |a| < 1
        p: Finite base point
        domain: Domain of f (default unit disk)
        grid_points: Samples per component on each inset contour

    Returns:
        KoebeExpansion with H(p) = 0 and the measured gain |H'(p)| / |f'(p)|

    Raises:
        PreconditionViolationError: A sampled precondition fails
        NumericalInstabilityError: The measured gain is not above 1
    """
    domain = domain or UnitDisk()
    if is_infinity(p) or not domain.contains(p):
        raise OutOfDomainError(f"Base point {p} must be a finite point of the {domain.variant}")
    p, a = complex(p), complex(a)
    h_a = interchange(a)

    if abs(complex(f(p))) > tolerance:
        raise PreconditionViolationError(f"f(p) = {complex(f(p))} is not 0")

    contours = [domain.inset_boundary(fraction, grid_points) for fraction in fractions]
    samples = np.concatenate([c.points for c in contours] + [domain.fill_grid(64)])
    values = as_complex_array(f(samples))
    if np.max(np.abs(values)) > 1.0 + tolerance:
        raise PreconditionViolationError(f"|f| reaches {np.max(np.abs(values)):.6g} > 1 on the sample grid")
    if np.min(np.abs(values - a)) < 1e-6:
        raise PreconditionViolationError(f"f comes within 1e-6 of the omitted value {a}")

    for fraction, contour in zip(fractions, contours):
        winding = _discrete_winding(as_complex_array(f(contour.points)) - a, contour.component_slices())
        if abs(winding) > 0.5:
            raise PreconditionViolationError(
                f"f takes the value {a} inside the contour at depth {fraction} (winding {winding:.3f})"
            )

    slope = complex(derivative_of(f, p))
    if abs(slope) <= tolerance:
        raise PreconditionViolationError("f'(p) vanishes; the expansion gain is undefined")

    lifted = as_complex_array(h_a(values))
    cut = _widest_gap_cut(np.concatenate([np.angle(lifted), [cmath.phase(a)]]))
    root = complex(sqrt_branch(a, a, cut))

    expansion = KoebeExpansion(f, a, p, cut, root, gain=0.0)
    gain = abs(complex(expansion.derivative(p))) / abs(slope)
    expansion = KoebeExpansion(f, a, p, cut, root, gain)
    if not gain > 1.0:
        raise NumericalInstabilityError(
            f"Koebe expansion at p={p}, a={a} did not increase the derivative (gain {gain:.12g})"
        )
    logger.debug(f"Koebe expansion at p={p}, a={a}: gain {gain:.9g}, cut angle {cut:.6g}")
    return expansion
