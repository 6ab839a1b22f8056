"""
Separation Family
Singular inner functions exp((z + s) / (z - s)) and the pairwise separation check
"""

import itertools
import math
from typing import Callable, List, Optional, Sequence

import numpy as np

from core.check_helper import CheckReport, create_check_report
from core.domain import Domain
from core.errors import InvalidParameterError
from core.functions import ComplexFunction, clip_to_disk
from utils.logger import get_logger

logger = get_logger(__name__)

UNIMODULAR_TOLERANCE = 1e-12
SEPARATION_THRESHOLD = 0.99


def separation_family(s: complex) -> ComplexFunction:
    """
    f_s(z) = exp((z + s) / (z - s)) for a unimodular s.

    |f_s| < 1 in the open disk and f_s(z) -> 0 as z -> s radially; the value
    at z = s itself is taken as that limit.
    """
    s = complex(s)
    if abs(abs(s) - 1.0) > UNIMODULAR_TOLERANCE:
        raise InvalidParameterError(f"Separation parameter must be unimodular, got |s| = {abs(s)}")

    def func(z):
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            values = np.exp((z + s) / (z - s))
        return np.where(z == s, 0j, values)

    def deriv(z):
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            values = np.exp((z + s) / (z - s)) * (-2.0 * s) / (z - s) ** 2
        return np.where(z == s, 0j, values)

    return ComplexFunction(func, deriv, name=f"f_s[{s.real:g}{s.imag:+g}i]")


def equispaced_unimodular(count: int) -> List[complex]:
    return [complex(np.exp(2j * math.pi * k / count)) for k in range(count)]


def check_nonseparability(
    F: Callable,
    s_values: Sequence[complex],
    domain: Domain,
    mesh: Optional[np.ndarray] = None,
    threshold: float = SEPARATION_THRESHOLD,
) -> CheckReport:
    """
    Minimum over pairs of the sampled sup of |f_s1 o F - f_s2 o F|.

    A single s has no pairs and passes with the trivial bound 2.
    """
    if mesh is None:
        mesh = domain.interior_mesh(levels=14, n_angular=2048)
    raw = np.asarray(F(mesh), dtype=complex)
    reach = float(np.max(np.abs(raw)))
    images = clip_to_disk(raw)
    families = {s: separation_family(s)(images) for s in s_values}

    worst, witness = 2.0, None
    for s1, s2 in itertools.combinations(s_values, 2):
        gaps = np.abs(families[s1] - families[s2])
        k = int(np.argmax(gaps))
        if gaps[k] < worst:
            worst, witness = float(gaps[k]), complex(mesh[k])
    logger.debug(f"Non-separability over {len(s_values)} values: min pairwise sup {worst:.6f}")
    return create_check_report(
        "nonseparability",
        worst,
        threshold,
        witness=witness,
        mode="at_least",
        detail=f"{len(s_values)} separation parameters, max|F|={reach:.9f}",
    )
