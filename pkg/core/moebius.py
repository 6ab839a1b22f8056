"""
Moebius transforms and square-root branches
Building blocks of every closed-form Ahlfors function
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Optional, Tuple, Union

import numpy as np

from core.errors import BranchPointError, InvalidParameterError

ComplexLike = Union[complex, float, np.ndarray]

TWO_PI = 2.0 * math.pi


def as_complex_array(z: ComplexLike) -> np.ndarray:
    """Convert scalars or sequences to a complex ndarray."""
    return np.asarray(z, dtype=complex)


def restore_shape(values: np.ndarray, like: ComplexLike):
    """Return a Python complex for scalar input, the array otherwise."""
    if np.ndim(like) == 0:
        return complex(values)
    return values


@dataclass(frozen=True)
class MoebiusTransform:
    """
    Rational map z -> (a z + b) / (c z + d).

    The kind and parameter fields record how the transform was built
    (disk_automorphism, interchange, rotation, inversion, affine, general).
    """

    a: complex
    b: complex
    c: complex
    d: complex
    kind: str = "general"
    parameter: complex = 0j

    def __post_init__(self):
        if abs(self.determinant) <= 1e-300:
            raise InvalidParameterError(
                f"Degenerate Moebius coefficients ({self.a}, {self.b}, {self.c}, {self.d})"
            )

    @property
    def determinant(self) -> complex:
        return self.a * self.d - self.b * self.c

    @property
    def coefficients(self) -> Tuple[complex, complex, complex, complex]:
        return (self.a, self.b, self.c, self.d)

    @property
    def matrix(self) -> np.ndarray:
        return np.array([[self.a, self.b], [self.c, self.d]], dtype=complex)

    def __call__(self, z: ComplexLike):
        w = as_complex_array(z)
        with np.errstate(divide="ignore", invalid="ignore"):
            values = (self.a * w + self.b) / (self.c * w + self.d)
        return restore_shape(values, z)

    def derivative(self, z: ComplexLike):
        w = as_complex_array(z)
        with np.errstate(divide="ignore", invalid="ignore"):
            values = self.determinant / (self.c * w + self.d) ** 2
        return restore_shape(values, z)

    def value_at_infinity(self) -> complex:
        """Limit of T(z) as z -> infinity (complex('inf') for a pole at infinity)."""
        if self.c == 0:
            return complex(math.inf, 0.0)
        return self.a / self.c

    def compose(self, inner: "MoebiusTransform") -> "MoebiusTransform":
        """Return self o inner by coefficient (matrix) arithmetic."""
        m = self.matrix @ inner.matrix
        return MoebiusTransform(m[0, 0], m[0, 1], m[1, 0], m[1, 1], kind="general")

    def inverse(self) -> "MoebiusTransform":
        return MoebiusTransform(self.d, -self.b, -self.c, self.a, kind="general")

    def normalized(self) -> "MoebiusTransform":
        """
        Scale coefficients to unit determinant.

        The remaining sign ambiguity is fixed by making the first coefficient
        of maximal modulus have positive real part (positive imaginary part
        when the real part vanishes).
        """
        scale = cmath.sqrt(self.determinant)
        coeffs = [x / scale for x in self.coefficients]
        pivot = max(coeffs, key=abs)
        if pivot.real < 0 or (pivot.real == 0 and pivot.imag < 0):
            coeffs = [-x for x in coeffs]
        return MoebiusTransform(*coeffs, kind=self.kind, parameter=self.parameter)

    def coefficient_distance(self, other: "MoebiusTransform") -> float:
        """Max coefficient deviation after projective normalization."""
        mine = np.array(self.normalized().coefficients)
        theirs = np.array(other.normalized().coefficients)
        return float(min(np.max(np.abs(mine - theirs)), np.max(np.abs(mine + theirs))))


def from_coefficients(a: complex, b: complex, c: complex, d: complex) -> MoebiusTransform:
    return MoebiusTransform(complex(a), complex(b), complex(c), complex(d))


def _check_inside_disk(value: complex, name: str) -> complex:
    value = complex(value)
    if not abs(value) < 1.0:
        raise InvalidParameterError(f"{name} must satisfy |{name}| < 1, got {value}")
    return value


def disk_automorphism(p: complex) -> MoebiusTransform:
    """Automorphism z -> (z - p) / (1 - conj(p) z) sending p to 0."""
    p = _check_inside_disk(p, "p")
    return MoebiusTransform(1.0 + 0j, -p, -p.conjugate(), 1.0 + 0j,
                            kind="disk_automorphism", parameter=p)


def interchange(a: complex) -> MoebiusTransform:
    """Involution z -> (a - z) / (1 - conj(a) z) swapping 0 and a."""
    a = _check_inside_disk(a, "a")
    return MoebiusTransform(-1.0 + 0j, a, -a.conjugate(), 1.0 + 0j,
                            kind="interchange", parameter=a)


def rotation(theta: float) -> MoebiusTransform:
    return MoebiusTransform(cmath.exp(1j * theta), 0j, 0j, 1.0 + 0j,
                            kind="rotation", parameter=complex(theta))


def inversion() -> MoebiusTransform:
    return MoebiusTransform(0j, 1.0 + 0j, 1.0 + 0j, 0j, kind="inversion")


def affine(scale: complex, shift: complex = 0j) -> MoebiusTransform:
    """z -> scale * z + shift."""
    return MoebiusTransform(complex(scale), complex(shift), 0j, 1.0 + 0j, kind="affine")


def _branch_argument(arguments, cut_angle: float):
    """Arguments reduced into the half-open window (cut - 2pi, cut]."""
    return cut_angle - np.mod(cut_angle - arguments, TWO_PI)


def sqrt_branch(
    w: ComplexLike,
    region_witness: complex = 1.0,
    cut_angle: Optional[float] = None,
):
    """
    Square root on a region avoiding 0, fixed by a witness point.

    The branch cut is the ray from 0 in direction cut_angle (by default the
    direction opposite to the witness, which makes the branch continuous on
    any region star-shaped about the witness). The sign is chosen so that the
    root of region_witness has nonnegative real part.

    Args:
        w: Point or array of points
        region_witness: A point of the region fixing the sheet
        cut_angle: Direction of the branch cut ray

    Returns:
        Root(s) r with r**2 == w
    """
    values = as_complex_array(w)
    if np.any(values == 0):
        raise BranchPointError("sqrt_branch is undefined at w = 0")
    witness = complex(region_witness)
    if witness == 0:
        raise BranchPointError("region witness must differ from 0")
    if cut_angle is None:
        cut_angle = cmath.phase(witness) + math.pi

    arguments = _branch_argument(np.angle(values), cut_angle)
    roots = np.sqrt(np.abs(values)) * np.exp(0.5j * arguments)

    witness_argument = float(_branch_argument(cmath.phase(witness), cut_angle))
    if math.cos(0.5 * witness_argument) < 0:
        roots = -roots
    return restore_shape(roots, w)
