"""
Function representations shared by the closed forms, the solver and the checks
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Protocol, runtime_checkable

import numpy as np

from core.moebius import ComplexLike, as_complex_array, restore_shape


@runtime_checkable
class AnalyticFunction(Protocol):
    """Anything evaluable on complex arrays with an analytic derivative."""

    def __call__(self, z: ComplexLike): ...

    def derivative(self, z: ComplexLike): ...


def complex_derivative(func: Callable, z: ComplexLike, step: float = 1e-4):
    """Fourth-order central difference along the real axis."""
    w = as_complex_array(z)
    f = lambda x: as_complex_array(func(x))
    values = (-f(w + 2 * step) + 8 * f(w + step) - 8 * f(w - step) + f(w - 2 * step)) / (12 * step)
    return restore_shape(values, z)


@dataclass(frozen=True)
class ComplexFunction:
    """A vectorized callable with an optional exact derivative."""

    func: Callable
    deriv: Optional[Callable] = None
    name: str = "f"

    def __call__(self, z: ComplexLike):
        return restore_shape(as_complex_array(self.func(as_complex_array(z))), z)

    def derivative(self, z: ComplexLike):
        if self.deriv is None:
            return complex_derivative(self.func, z)
        return restore_shape(as_complex_array(self.deriv(as_complex_array(z))), z)


def derivative_of(f, z: ComplexLike):
    """Use f.derivative when available, finite differences otherwise."""
    if hasattr(f, "derivative"):
        return f.derivative(z)
    return complex_derivative(f, z)


def compose(outer, inner, name: Optional[str] = None) -> ComplexFunction:
    """outer o inner with the chain rule for the derivative."""
    return ComplexFunction(
        func=lambda z: outer(inner(z)),
        deriv=lambda z: derivative_of(outer, inner(z)) * derivative_of(inner, z),
        name=name or f"{getattr(outer, 'name', 'f')}∘{getattr(inner, 'name', 'g')}",
    )


def multiply(f, g, name: Optional[str] = None) -> ComplexFunction:
    return ComplexFunction(
        func=lambda z: f(z) * g(z),
        deriv=lambda z: derivative_of(f, z) * g(z) + f(z) * derivative_of(g, z),
        name=name or f"{getattr(f, 'name', 'f')}·{getattr(g, 'name', 'g')}",
    )


def scale(f, factor: complex, name: Optional[str] = None) -> ComplexFunction:
    return ComplexFunction(
        func=lambda z: factor * f(z),
        deriv=lambda z: factor * derivative_of(f, z),
        name=name or f"{factor}·{getattr(f, 'name', 'f')}",
    )


def constant(value: complex, name: Optional[str] = None) -> ComplexFunction:
    return ComplexFunction(
        func=lambda z: np.full(np.shape(z), value, dtype=complex),
        deriv=lambda z: np.zeros(np.shape(z), dtype=complex),
        name=name or f"const({value})",
    )


def identity() -> ComplexFunction:
    return ComplexFunction(func=lambda z: z, deriv=lambda z: np.ones(np.shape(z), dtype=complex), name="z")


def clip_to_disk(values: np.ndarray) -> np.ndarray:
    """Project values radially onto the closed unit disk."""
    values = np.asarray(values, dtype=complex)
    modulus = np.abs(values)
    return np.where(modulus > 1.0, values / np.maximum(modulus, 1.0), values)
