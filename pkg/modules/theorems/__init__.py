"""
Theorem Checks Module
"""

from modules.theorems.norm_checks import check_composition_norm, check_norm_preservation
from modules.theorems.schwarz import check_schwarz
from modules.theorems.separation import check_nonseparability, equispaced_unimodular, separation_family
from modules.theorems.surjectivity import check_almost_surjectivity

__all__ = [
    'check_norm_preservation',
    'check_composition_norm',
    'separation_family',
    'equispaced_unimodular',
    'check_nonseparability',
    'check_almost_surjectivity',
    'check_schwarz',
]
