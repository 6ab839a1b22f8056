"""
Schwarz Lemma
|f(z)| <= |z| and |f'(0)| <= 1 for self-maps of the disk fixing 0
"""

import math
from typing import Callable

import numpy as np

from core.check_helper import CheckReport, create_check_report
from core.errors import PreconditionViolationError
from core.functions import derivative_of

SLACK = 1e-9


def schwarz_grid(radial: int = 100, angular: int = 100) -> np.ndarray:
    radii = np.linspace(0.01, 0.999, radial)
    angles = 2.0 * math.pi * np.arange(angular) / angular
    return (radii[:, None] * np.exp(1j * angles)[None, :]).ravel()


def check_schwarz(f: Callable, grid: np.ndarray = None) -> CheckReport:
    """Largest excess |f(z)| - |z| over a 10,000-point polar grid."""
    grid = schwarz_grid() if grid is None else grid
    if abs(complex(f(0j))) > SLACK:
        raise PreconditionViolationError(f"Schwarz check needs f(0) = 0, got {complex(f(0j))}")
    values = np.abs(np.asarray(f(grid), dtype=complex))
    if values.max() > 1.0 + SLACK:
        raise PreconditionViolationError(f"Schwarz check needs |f| <= 1, got {values.max():.9g}")

    excess = values - np.abs(grid)
    k = int(np.argmax(excess))
    slope = abs(complex(derivative_of(f, 0j)))
    return create_check_report(
        "schwarz",
        float(excess[k]),
        SLACK,
        passed=bool(excess[k] <= SLACK and slope <= 1.0 + SLACK),
        witness=complex(grid[k]),
        detail=f"|f'(0)|={slope:.12f}",
    )
