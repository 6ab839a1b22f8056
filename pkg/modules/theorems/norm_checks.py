"""
Norm Checks
Sampled sup-norm identities ||F h|| = ||h|| and ||f o F|| = ||f||
"""

from typing import Callable, Optional

import numpy as np

from core.check_helper import CheckReport, create_check_report
from core.domain import Domain
from core.functions import clip_to_disk
from utils.logger import get_logger

logger = get_logger(__name__)

NORM_GAP_THRESHOLD = 2e-2
UPPER_SLACK = 1e-9


def _mesh(domain: Domain, n: int, mesh: Optional[np.ndarray]) -> np.ndarray:
    return domain.interior_mesh(levels=14, n_angular=n) if mesh is None else mesh


def check_norm_preservation(
    F: Callable,
    h: Callable,
    domain: Domain,
    n: int = 1024,
    mesh: Optional[np.ndarray] = None,
    name: str = "norm_preservation",
) -> CheckReport:
    """
    Compare sampled sup |F h| with sup |h| on a boundary-refined mesh.

    Args:
        F: Ahlfors function of the domain
        h: Bounded analytic test function
        domain: Domain of both
        n: Points per mesh curve
        mesh: Precomputed mesh (overrides n)

    Returns:
        CheckReport with the relative gap
    """
    points = _mesh(domain, n, mesh)
    h_values = np.abs(np.asarray(h(points), dtype=complex))
    product = np.abs(np.asarray(F(points), dtype=complex)) * h_values
    sup_h = float(h_values.max())
    k = int(np.argmax(product))
    gap = 0.0 if sup_h == 0 else abs(float(product[k]) - sup_h) / sup_h
    return create_check_report(
        name,
        gap,
        NORM_GAP_THRESHOLD,
        witness=complex(points[k]),
        detail=f"sup|Fh|={product[k]:.9f} sup|h|={sup_h:.9f}",
    )


def check_composition_norm(
    F: Callable,
    f: Callable,
    domain: Domain,
    norm: float = 1.0,
    n: int = 1024,
    mesh: Optional[np.ndarray] = None,
    name: str = "composition_norm",
) -> CheckReport:
    """Sampled sup |f o F| must lie in [norm - 2e-2, norm + 1e-9]."""
    points = _mesh(domain, n, mesh)
    images = np.asarray(F(points), dtype=complex)
    reach = float(np.max(np.abs(images)))
    if reach > 1.0:
        logger.debug(f"{name}: |F| reaches {reach:.9f} on the mesh; values are clipped to the disk")
    values = np.abs(np.asarray(f(clip_to_disk(images)), dtype=complex))
    k = int(np.argmax(values))
    sup = float(values[k])
    passed = norm - NORM_GAP_THRESHOLD <= sup <= norm + UPPER_SLACK
    return create_check_report(
        name,
        sup,
        norm - NORM_GAP_THRESHOLD,
        passed=passed,
        witness=complex(points[k]),
        detail=f"norm={norm:g} max|F|={reach:.9f}",
    )
