"""
Test-function catalog
Fixed, versioned set of bounded analytic functions on the disk and their
transport to the other supported domains
"""

from dataclasses import dataclass
from typing import Callable, List

import numpy as np

from core.domain import CircleDomain, Domain, RealSlitComplement
from core.functions import ComplexFunction, compose, multiply
from core.moebius import disk_automorphism
from modules.theorems.separation import separation_family

CATALOG_VERSION = "1"


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    function: Callable
    sup_norm: float = 1.0


def _monomial(k: int) -> ComplexFunction:
    return ComplexFunction(lambda z: z ** k, lambda z: k * z ** (k - 1), name=f"z^{k}")


def disk_catalog() -> List[CatalogEntry]:
    """The 13 disk functions: z^1..z^8, three Moebius composites, two separation members."""
    entries = [CatalogEntry(f"z^{k}", _monomial(k)) for k in range(1, 9)]

    t_half = disk_automorphism(0.5)
    t_imag = disk_automorphism(0.3j)
    entries.append(CatalogEntry("moebius[0.5]", t_half))
    entries.append(CatalogEntry("blaschke[0.3i]^2", multiply(t_imag, t_imag, name="blaschke[0.3i]^2")))
    entries.append(CatalogEntry(
        "blaschke[-0.4,0.6]",
        multiply(disk_automorphism(-0.4), disk_automorphism(0.6), name="blaschke[-0.4,0.6]"),
    ))

    entries.append(CatalogEntry("separation[1]", separation_family(1.0)))
    entries.append(CatalogEntry("separation[i]", separation_family(1j)))
    return entries


def _hole_term(center: complex, radius: float) -> ComplexFunction:
    return ComplexFunction(
        lambda z: radius / (z - center),
        lambda z: -radius / (z - center) ** 2,
        name=f"hole[{center.real:g}{center.imag:+g}i,{radius:g}]",
    )


def domain_catalog(domain: Domain, F: Callable) -> List[CatalogEntry]:
    """
    Catalog functions carried over to a domain.

    Circle domains and the exterior disk use their normalizing Moebius map;
    slit complements compose with the Ahlfors function F. Circle domains add
    the hole terms r_j / (z - c_j).
    """
    carrier = F if isinstance(domain, RealSlitComplement) else domain.normalizing_map()
    entries = [
        CatalogEntry(f"{entry.name}@{domain.variant}", compose(entry.function, carrier), entry.sup_norm)
        for entry in disk_catalog()
    ]
    if isinstance(domain, CircleDomain):
        for j, hole in enumerate(domain.holes):
            entries.append(CatalogEntry(f"hole_term[{j}]", _hole_term(hole.center, hole.radius)))
    return entries


def catalog_names() -> List[str]:
    return [entry.name for entry in disk_catalog()]


def sampled_norm(entry: CatalogEntry, radius: float = 1.0 - 2.0 ** -14, n: int = 4096) -> float:
    """Sup of |f| on a circle just inside the unit circle."""
    z = radius * np.exp(2j * np.pi * np.arange(n) / n)
    return float(np.max(np.abs(np.asarray(entry.function(z), dtype=complex))))
