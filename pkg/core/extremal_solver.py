"""
Extremal Solver
Cutting-plane solution of sup Re h'(p) subject to |h| <= 1 on the boundary,
and argument-principle valence counting
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np
from scipy.optimize import linprog

from core.basis import Basis, BasisSpec, build_basis
from core.domain import BasePoint, Domain, is_infinity
from core.errors import (
    InternalSolverError,
    InvalidParameterError,
    MarginError,
    NonConvergenceError,
    OutOfDomainError,
    ResolutionError,
    UnsupportedVariantError,
)
from core.functions import derivative_of
from core.moebius import ComplexLike, as_complex_array, restore_shape
from utils.logger import get_logger

logger = get_logger(__name__)

_LP_STATUS_INFEASIBLE = 2
_LP_STATUS_UNBOUNDED = 3


@dataclass(frozen=True)
class SolverConfig:
    """Exchange-method settings."""

    boundary_samples_per_component: int = 512
    angle_cuts: int = 16
    max_outer_iterations: int = 60
    constraint_tolerance: float = 1e-6
    stall_tolerance: float = 1e-10
    check_refinement: int = 4
    max_cuts_per_iteration: int = 4096
    refinement_rounds: int = 8
    lp_method: str = "highs-ds"
    adaptive: bool = True
    modulus_band: float = 1e-3
    vanishing_tolerance: float = 5e-5
    enrichment_rounds: int = 3
    pole_order: int = 2
    pole_ratio: float = 0.4
    degree_step: int = 4
    max_polynomial_degree: int = 32

    def __post_init__(self):
        for name in (
            "boundary_samples_per_component",
            "angle_cuts",
            "max_outer_iterations",
            "check_refinement",
            "max_cuts_per_iteration",
            "refinement_rounds",
            "pole_order",
            "degree_step",
        ):
            if getattr(self, name) < 1:
                raise InvalidParameterError(f"{name} must be positive")
        if not 0 < self.constraint_tolerance < 1e-2:
            raise InvalidParameterError("constraint_tolerance must lie in (0, 1e-2)")
        if not self.stall_tolerance > 0:
            raise InvalidParameterError("stall_tolerance must be positive")
        if not 0 < self.modulus_band < 1:
            raise InvalidParameterError("modulus_band must lie in (0, 1)")
        if not self.vanishing_tolerance > 0:
            raise InvalidParameterError("vanishing_tolerance must be positive")
        if not 0 < self.pole_ratio < 1:
            raise InvalidParameterError("pole_ratio must lie in (0, 1)")
        if self.enrichment_rounds < 0 or self.max_polynomial_degree < 0:
            raise InvalidParameterError("enrichment_rounds and max_polynomial_degree must be nonnegative")

    @classmethod
    def from_config(cls, config: Dict, **overrides) -> "SolverConfig":
        """Build from the 'solver' section; keyword overrides that are not None win."""
        section = dict(config.get("solver", {}) or {})
        section.update({k: v for k, v in overrides.items() if v is not None})
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(section) - known
        if unknown:
            logger.warning(f"Ignoring unknown solver settings: {sorted(unknown)}")
        return cls(**{k: v for k, v in section.items() if k in known})


@dataclass
class SolverDiagnostics:
    iterations: int = 0
    max_boundary_modulus: float = 0.0
    modulus_deviation: float = math.inf
    base_residual: float = math.inf
    cut_count: int = 0
    polynomial_degree: int = 0
    pole_count: int = 0
    attempts: int = 0
    converged: bool = False
    objective_history: List[float] = field(default_factory=list)

    def to_dict(self) -> Dict:
        return asdict(self)


@dataclass(eq=False)
class AhlforsSolution:
    """Basis-coefficient representation of an extremal function."""

    basis: Basis
    coefficients: np.ndarray
    gamma: float
    base_point: BasePoint
    domain: Domain
    diagnostics: SolverDiagnostics

    def __call__(self, z: ComplexLike):
        if is_infinity(z):
            return self.value_at_infinity()
        w = as_complex_array(z)
        values = self.basis.evaluate(w.ravel()) @ self.coefficients
        return restore_shape(values.reshape(w.shape), z)

    def derivative(self, z: ComplexLike):
        w = as_complex_array(z)
        values = self.basis.derivative(w.ravel()) @ self.coefficients
        return restore_shape(values.reshape(w.shape), z)

    def value_at_infinity(self) -> complex:
        if not self.domain.contains_infinity:
            return complex(math.nan, math.nan)
        return complex(self.basis.value_at_infinity() @ self.coefficients)

    def derivative_at_base(self) -> complex:
        return complex(self.basis.derivative_functional(self.base_point) @ self.coefficients)

    def evaluate(self, z) -> complex:
        """h(z) for z in the closed domain."""
        if not self.domain.contains_closure(z):
            raise OutOfDomainError(f"{z} lies outside the closed {self.domain.variant}")
        return complex(self(z))

    def boundary_modulus_profile(self, n: int) -> List[Tuple[int, float, float]]:
        """(component, parameter, |h|) at n boundary points per component."""
        return modulus_profile(self, self.domain, n)

    def descriptor(self) -> Dict:
        return {
            "kind": "basis",
            "labels": self.basis.labels,
            "coefficients": [[c.real, c.imag] for c in self.coefficients],
            "gamma": self.gamma,
            "diagnostics": self.diagnostics.to_dict(),
        }


def modulus_profile(F, domain: Domain, n: int) -> List[Tuple[int, float, float]]:
    """|F| along the sampled boundary of any supported domain."""
    grid = domain.sample_boundary(n)
    moduli = np.abs(as_complex_array(F(grid.points)))
    return [
        (int(c), float(t), float(m))
        for c, t, m in zip(grid.components, grid.parameters, moduli)
    ]


def evaluate(sol: AhlforsSolution, z) -> complex:
    return sol.evaluate(z)


def boundary_modulus_profile(sol: AhlforsSolution, n: int) -> List[Tuple[int, float, float]]:
    return sol.boundary_modulus_profile(n)


def _cut_rows(phi: np.ndarray, angles: np.ndarray) -> np.ndarray:
    """Rows of Re(e^{-i theta} h) <= 1 in the variables [Re c, Im c]."""
    rotated = np.exp(-1j * angles)[:, None] * phi
    return np.hstack([rotated.real, -rotated.imag])


def _split(x: np.ndarray, n: int) -> np.ndarray:
    return x[:n] + 1j * x[n:]


def _normalize_phase(coefficients: np.ndarray, functional: np.ndarray) -> Tuple[np.ndarray, float]:
    slope = complex(functional @ coefficients)
    rotated = coefficients * np.exp(-1j * np.angle(slope))
    return rotated, abs(slope)


class ExtremalSolver:
    """
    Exchange method for the discretized extremal problem.

    The linear program maximizes Re h'(p) over basis coefficients subject to
    Re(e^{-i theta} h(zeta)) <= 1 for every accumulated cut (zeta, theta).
    After each solve the most violated points of a finer boundary grid add
    cuts at theta = arg h(zeta).

    In adaptive mode an exchange run is accepted only when |h| stays within
    modulus_band of 1 on the check grid and |h(p)| is below
    vanishing_tolerance. Otherwise the basis gains inverse powers at the
    reflections of the zeros of h across the boundary circles (the poles of
    the reflected continuation), and then more powers everywhere, until the
    targets hold or max_polynomial_degree is passed.
    """

    def __init__(self, domain: Domain, base_point: BasePoint, spec: Optional[BasisSpec] = None,
                 config: Optional[SolverConfig] = None):
        self.domain = domain
        self.base_point = base_point
        self.spec = spec or BasisSpec()
        self.config = config or SolverConfig()
        if not domain.contains(base_point):
            raise OutOfDomainError(f"Base point {base_point} is not in the {domain.variant}")
        self.basis: Basis = build_basis(domain, self.spec, base_point)

    def _linprog(self, objective: np.ndarray, rows: np.ndarray):
        return linprog(
            -objective,
            A_ub=rows,
            b_ub=np.ones(rows.shape[0]),
            bounds=(None, None),
            method=self.config.lp_method,
            options={"primal_feasibility_tolerance": 1e-10, "dual_feasibility_tolerance": 1e-10},
        )

    def solve(self) -> AhlforsSolution:
        cfg = self.config
        first = self._exchange(self.basis)
        if not cfg.adaptive:
            first.diagnostics.converged = True
            logger.info(f"Converged after {first.diagnostics.iterations} iterations: gamma={first.gamma:.12g}")
            return first

        spec, solution, best = self.spec, first, first
        attempts = 1
        while True:
            for round_index in range(cfg.enrichment_rounds + 1):
                solution.diagnostics.attempts = attempts
                if self._accurate(solution):
                    solution.diagnostics.converged = True
                    logger.info(
                        f"Converged after {attempts} exchange runs (degree {spec.polynomial_degree}, "
                        f"{len(spec.poles)} poles): gamma={solution.gamma:.12g}, "
                        f"max||h|-1|={solution.diagnostics.modulus_deviation:.3e}"
                    )
                    return solution
                if solution.diagnostics.modulus_deviation < best.diagnostics.modulus_deviation:
                    best = solution
                if round_index == cfg.enrichment_rounds:
                    break
                poles = reflected_poles(self._zeros(solution), self.domain, cfg.pole_ratio)
                if not poles:
                    break
                spec = spec.with_poles(poles, cfg.pole_order)
                solution = self._attempt(spec)
                attempts += 1
                if solution is None:
                    break

            if spec.polynomial_degree + cfg.degree_step > cfg.max_polynomial_degree:
                break
            spec = spec.enlarged(cfg.degree_step)
            solution = self._attempt(spec)
            attempts += 1
            if solution is None:
                break

        raise NonConvergenceError(
            f"Boundary modulus deviation {best.diagnostics.modulus_deviation:.3e} "
            f"and |h(p)| = {best.diagnostics.base_residual:.3e} miss their targets "
            f"({cfg.modulus_band:g}, {cfg.vanishing_tolerance:g}) up to degree {spec.polynomial_degree}",
            best=best,
        )

    def _accurate(self, solution: AhlforsSolution) -> bool:
        d = solution.diagnostics
        return d.modulus_deviation <= self.config.modulus_band and d.base_residual <= self.config.vanishing_tolerance

    def _attempt(self, spec: BasisSpec) -> Optional[AhlforsSolution]:
        try:
            return self._exchange(build_basis(self.domain, spec, self.base_point))
        except NonConvergenceError as e:
            logger.warning(f"Exchange run with degree {spec.polynomial_degree} and {len(spec.poles)} poles failed: {e}")
            return None

    def _zeros(self, solution: AhlforsSolution) -> np.ndarray:
        if self.domain.contains_infinity:
            # the only zero on the exterior disk is the base point
            return np.array([] if is_infinity(self.base_point) else [complex(self.base_point)])
        try:
            return locate_zeros(solution, self.domain,
                                self.config.boundary_samples_per_component * self.config.check_refinement)
        except ResolutionError as e:
            logger.debug(f"Zero location skipped: {e}")
            return np.array([], dtype=complex)

    def _exchange(self, basis: Basis) -> AhlforsSolution:
        cfg = self.config
        n = basis.dimension
        if n < 2:
            raise NonConvergenceError(f"Basis of dimension {n} is too small for the extremal problem")
        functional = basis.derivative_functional(self.base_point)
        if np.max(np.abs(functional)) <= 1e-14:
            raise NonConvergenceError(
                f"Basis of dimension {n} cannot represent a function with nonzero derivative at {self.base_point}"
            )

        samples = self.domain.sample_boundary(cfg.boundary_samples_per_component)
        check = self.domain.sample_boundary(cfg.boundary_samples_per_component * cfg.check_refinement)
        phi_samples = basis.evaluate(samples.points)
        phi_check = basis.evaluate(check.points)
        phi_base = basis.evaluate(self.base_point)

        angles = 2.0 * math.pi * np.arange(cfg.angle_cuts) / cfg.angle_cuts
        rows = _cut_rows(np.repeat(phi_samples, cfg.angle_cuts, axis=0), np.tile(angles, len(samples)))
        objective = np.concatenate([functional.real, -functional.imag])

        diagnostics = SolverDiagnostics(
            polynomial_degree=basis.spec.polynomial_degree,
            pole_count=len(basis.spec.poles),
        )
        best: Optional[AhlforsSolution] = None
        previous = -math.inf
        settled_rounds = 0

        logger.info(
            f"Solving extremal problem on {self.domain.variant} at p={self.base_point} "
            f"(dimension {n}, {rows.shape[0]} initial cuts)"
        )
        for iteration in range(1, cfg.max_outer_iterations + 1):
            result = self._linprog(objective, rows)
            if result.status in (_LP_STATUS_INFEASIBLE, _LP_STATUS_UNBOUNDED):
                raise InternalSolverError(f"Linear program status {result.status}: {result.message}")
            if not result.success:
                raise NonConvergenceError(f"Linear program failed: {result.message}", best=best)

            coefficients = _split(result.x, n)
            value = float(-result.fun)
            moduli = np.abs(phi_check @ coefficients)
            violation = float(moduli.max() - 1.0)

            diagnostics.iterations = iteration
            diagnostics.max_boundary_modulus = float(moduli.max())
            diagnostics.modulus_deviation = float(np.max(np.abs(moduli - 1.0)))
            diagnostics.base_residual = float(abs(phi_base @ coefficients))
            diagnostics.cut_count = rows.shape[0]
            diagnostics.objective_history.append(value)
            best = self._package(basis, coefficients, functional, diagnostics)
            logger.debug(f"iteration {iteration}: Re h'(p)={value:.12g}, max|h|-1={violation:.3e}, cuts={rows.shape[0]}")

            violated = np.flatnonzero(moduli > 1.0)
            if violation <= cfg.constraint_tolerance:
                settled_rounds += 1
                stalled = abs(value - previous) <= cfg.stall_tolerance * max(1.0, abs(value))
                if stalled or violated.size == 0 or settled_rounds > cfg.refinement_rounds:
                    logger.debug(
                        f"Exchange settled after {iteration} iterations: gamma={best.gamma:.12g}, "
                        f"max||h|-1|={diagnostics.modulus_deviation:.3e}, |h(p)|={diagnostics.base_residual:.3e}"
                    )
                    return best
            previous = value

            order = violated[np.argsort(-moduli[violated], kind="stable")][: cfg.max_cuts_per_iteration]
            new_rows = _cut_rows(phi_check[order], np.angle(phi_check[order] @ coefficients))
            rows = np.vstack([rows, new_rows])

        raise NonConvergenceError(
            f"No convergence within {cfg.max_outer_iterations} iterations "
            f"(max boundary modulus {diagnostics.max_boundary_modulus:.6g})",
            best=best,
        )

    def _package(self, basis: Basis, coefficients: np.ndarray, functional: np.ndarray,
                 diagnostics: SolverDiagnostics) -> AhlforsSolution:
        rotated, gamma = _normalize_phase(coefficients, functional)
        return AhlforsSolution(
            basis=basis,
            coefficients=rotated,
            gamma=gamma,
            base_point=self.base_point,
            domain=self.domain,
            diagnostics=diagnostics,
        )


def solve_extremal(domain: Domain, p: BasePoint, spec: Optional[BasisSpec] = None,
                   cfg: Optional[SolverConfig] = None) -> AhlforsSolution:
    """Ahlfors function of a circle domain, the unit disk or the exterior disk."""
    return ExtremalSolver(domain, p, spec, cfg).solve()


def locate_zeros(F, domain: Domain, n: int = 1024) -> np.ndarray:
    """
    Zeros of F in a bounded domain, with multiplicity.

    The power sums of the zeros are boundary moments of F'/F; Newton's
    identities turn them into a monic polynomial whose roots are returned.

    Raises:
        UnsupportedVariantError: For domains containing infinity
        ResolutionError: When the zero count is not near an integer
    """
    if domain.contains_infinity:
        raise UnsupportedVariantError(f"Zero location needs a bounded domain, got the {domain.variant}")
    x0, x1, y0, y1 = domain.bounding_box()
    center = complex(0.5 * (x0 + x1), 0.5 * (y0 + y1))
    radius = 0.5 * max(x1 - x0, y1 - y0)

    grid = domain.sample_boundary(n)
    ratio = as_complex_array(derivative_of(F, grid.points)) / as_complex_array(F(grid.points))
    u = (grid.points - center) / radius
    raw = grid.contour_integral(ratio) / (2j * math.pi)
    count = int(round(raw.real))
    if count < 1 or abs(raw - count) > 0.1:
        raise ResolutionError(f"Zero count {raw:.6g} is not near a positive integer; increase n")

    sums = [grid.contour_integral(u ** k * ratio) / (2j * math.pi) for k in range(1, count + 1)]
    elementary = [1.0 + 0j]
    for k in range(1, count + 1):
        elementary.append(sum((-1) ** (i - 1) * elementary[k - i] * sums[i - 1] for i in range(1, k + 1)) / k)
    roots = np.roots([(-1) ** k * e for k, e in enumerate(elementary)])
    return np.sort_complex(center + radius * roots)


def reflected_poles(zeros, domain: Domain, min_ratio: float = 0.4) -> Tuple[complex, ...]:
    """
    Reflections of the zeros across each boundary circle.

    An extremal function continues across a circle by z -> 1 / conj(F(z*)),
    so each reflected zero is a simple pole of the continuation. Reflections
    whose distance ratio to the circle (in the sense of the Laurent series
    at its center) is below min_ratio are dropped.
    """
    poles: List[complex] = []
    for component in domain.components():
        c, r = complex(component.center), float(component.radius)
        for a in np.atleast_1d(np.asarray(zeros, dtype=complex)):
            if not domain.contains(complex(a)):
                continue
            offset = complex(a) - c
            if abs(offset) <= 1e-12 * r:
                continue
            image = c + r * r / offset.conjugate()
            ratio = min(abs(image - c) / r, r / abs(image - c))
            if ratio < min_ratio or domain.contains_closure(image):
                continue
            if any(abs(image - q) <= 1e-9 * r for q in poles):
                continue
            poles.append(image)
    return tuple(poles)


def winding_integral(F, domain: Domain, w: complex, n: int = 1024) -> complex:
    """
    (1 / 2 pi i) times the boundary integral of F' / (F - w).

    With the domain on the left this counts zeros of F - w in the domain,
    including a zero at infinity when the domain contains it.
    """
    grid = domain.sample_boundary(n)
    values = as_complex_array(F(grid.points))
    slopes = as_complex_array(derivative_of(F, grid.points))
    return grid.contour_integral(slopes / (values - w)) / (2j * math.pi)


def valence(F, domain: Domain, w: complex, n: int = 1024, margin: float = 0.05) -> int:
    """
    Number of solutions of F(z) = w in the domain, with multiplicity.

    Args:
        F: Analytic function (closed form or solver output)
        domain: Domain of F
        w: Target value with |w| < 1 - margin
        n: Boundary samples per component
        margin: Required distance of w from the unit circle

    Returns:
        The rounded argument-principle count
    """
    w = complex(w)
    if abs(w) >= 1.0 - margin:
        raise MarginError(f"|w| = {abs(w):.6g} is within {margin} of the unit circle")
    raw = winding_integral(F, domain, w, n)
    count = round(raw.real)
    if abs(raw - count) > 0.1:
        raise ResolutionError(f"Argument-principle value {raw:.6g} is not near an integer; increase n")
    logger.debug(f"valence(w={w}) = {count} (raw {raw.real:.9f})")
    return int(count)
