"""
Theorem Harness
Runs every enabled theorem check against the Ahlfors function of a domain
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np
from rich.console import Console
from rich.progress import BarColumn, Progress, SpinnerColumn, TextColumn, TimeElapsedColumn

from core.basis import BasisSpec
from core.check_helper import CheckReport, create_check_report, failed_report
from core.closed_form import (
    AhlforsClosedForm,
    QuadratureSpec,
    ahlfors_disk,
    ahlfors_exterior_disk,
    ahlfors_real_slit,
    derivative_at_infinity,
    strip_map,
)
from core.domain import (
    BasePoint,
    Domain,
    ExteriorUnitDisk,
    RealSlitComplement,
    UnitDisk,
    is_infinity,
)
from core.errors import AhlforsError, NonConvergenceError, UnsupportedVariantError
from core.extremal_solver import AhlforsSolution, SolverConfig, solve_extremal, valence
from core.function_catalog import disk_catalog, domain_catalog
from core.functions import ComplexFunction, compose, derivative_of
from core.koebe import koebe_expand
from core.moebius import disk_automorphism
from modules.theorems import (
    check_almost_surjectivity,
    check_composition_norm,
    check_nonseparability,
    check_norm_preservation,
    check_schwarz,
    equispaced_unimodular,
)
from utils.config_loader import DEFAULT_CHECKS, ConfigLoader
from utils.logger import get_logger

console = Console(stderr=True)
logger = get_logger(__name__)

VANISHING_THRESHOLD = 1e-4
MODULUS_THRESHOLD = 2e-3
STADIUM_MODULUS_THRESHOLD = 5e-3
GAMMA_THRESHOLD = 1e-3
CAPACITY_THRESHOLD = 1e-6
RIEMANN_THRESHOLD = 1e-3
UNIQUENESS_THRESHOLD = 5e-4


@dataclass
class HarnessContext:
    """Everything the checks share for one (domain, p) pair."""

    domain: Domain
    base_point: BasePoint
    F: Optional[Callable]
    closed_form: Optional[AhlforsClosedForm]
    solution: Optional[AhlforsSolution]
    solver_config: SolverConfig
    basis_spec: BasisSpec
    mesh: Optional[np.ndarray]
    solver_error: Optional[Exception] = None

    @property
    def boundary_components(self) -> int:
        if isinstance(self.domain, RealSlitComplement):
            return len(self.domain.slits.intervals)
        return self.domain.hole_count + 1


def failure_count(reports: List[CheckReport]) -> int:
    return sum(1 for report in reports if not report.passed)


class TheoremHarness:
    """Config-driven runner for the theorem checks."""

    def __init__(self, config: Dict, show_progress: bool = False):
        self.config = config
        self.harness_config = config.get('harness', {}) or {}
        self.enabled_checks = self.harness_config.get('enabled_checks', DEFAULT_CHECKS)
        self.threads = int(self.harness_config.get('threads', 4))
        self.show_progress = show_progress

        self._checks: Dict[str, Callable[[HarnessContext], List[CheckReport]]] = {
            'solver_convergence': self._check_solver_convergence,
            'vanishing': self._check_vanishing,
            'unit_boundary_modulus': self._check_unit_boundary_modulus,
            'extremal_gamma': self._check_extremal_gamma,
            'capacity_quarter_length': self._check_capacity,
            'strip_bound': self._check_strip_bound,
            'riemann_equivalence': self._check_riemann_equivalence,
            'valence': self._check_valence,
            'norm_preservation': self._check_norm_preservation,
            'composition_norm': self._check_composition_norm,
            'nonseparability': self._check_nonseparability,
            'almost_surjectivity': self._check_almost_surjectivity,
            'koebe_expansion': self._check_koebe,
            'schwarz': self._check_schwarz,
            'uniqueness': self._check_uniqueness,
        }
        unknown = set(self.enabled_checks) - set(self._checks)
        if unknown:
            logger.warning(f"Unknown checks ignored: {sorted(unknown)}")

    # Setup

    def prepare(self, domain: Domain, p: BasePoint, solver_config: Optional[SolverConfig] = None,
                basis_spec: Optional[BasisSpec] = None) -> HarnessContext:
        """Compute the Ahlfors function the checks run against."""
        solver_config = solver_config or SolverConfig.from_config(self.config)
        basis_spec = basis_spec or BasisSpec.from_config(self.config)
        closed_form: Optional[AhlforsClosedForm] = None
        solution: Optional[AhlforsSolution] = None
        error: Optional[Exception] = None

        if isinstance(domain, RealSlitComplement):
            if not is_infinity(p):
                raise UnsupportedVariantError("Real-slit complements are handled for p = infinity only")
            closed_form = ahlfors_real_slit(domain.slits, QuadratureSpec.from_config(self.config))
            F: Optional[Callable] = closed_form
        else:
            if isinstance(domain, UnitDisk):
                closed_form = ahlfors_disk(p)
            elif isinstance(domain, ExteriorUnitDisk):
                closed_form = ahlfors_exterior_disk(p)
            try:
                solution = solve_extremal(domain, p, basis_spec, solver_config)
            except NonConvergenceError as e:
                logger.error(f"Solver did not converge: {e}")
                error, solution = e, e.best
            F = solution

        mesh = None
        if F is not None:
            mesh = domain.interior_mesh(
                levels=int(self.harness_config.get('mesh_levels', 14)),
                n_angular=int(self.harness_config.get('mesh_points', 1024)),
            )
        return HarnessContext(domain, p, F, closed_form, solution, solver_config, basis_spec, mesh, error)

    def run_suite(self, domain: Domain, p: BasePoint, solver_config: Optional[SolverConfig] = None,
                  basis_spec: Optional[BasisSpec] = None) -> List[CheckReport]:
        """
        Run all enabled checks.

        Args:
            domain: Validated domain
            p: Base point
            solver_config: Overrides the config's solver section
            basis_spec: Overrides the config's basis section

        Returns:
            Reports in the fixed check order
        """
        context = self.prepare(domain, p, solver_config, basis_spec)
        names = [name for name in DEFAULT_CHECKS if name in self.enabled_checks]
        logger.info(f"Running {len(names)} check families on {domain.variant} at p={p}")

        def run(name: str) -> List[CheckReport]:
            return self._run_check(name, context)

        with ThreadPoolExecutor(max_workers=max(1, self.threads)) as executor:
            if self.show_progress:
                results = self._run_with_progress(executor, run, names)
            else:
                results = list(executor.map(run, names))

        reports = [report for batch in results for report in batch]
        logger.info(f"{len(reports) - failure_count(reports)}/{len(reports)} checks passed")
        return reports

    def _run_with_progress(self, executor, run, names) -> List[List[CheckReport]]:
        with Progress(
            SpinnerColumn(),
            TextColumn("[progress.description]{task.description}"),
            BarColumn(),
            TextColumn("[progress.percentage]{task.percentage:>3.0f}%"),
            TimeElapsedColumn(),
            console=console
        ) as progress:
            task = progress.add_task("[cyan]Verifying theorems...", total=len(names))
            futures = [executor.submit(run, name) for name in names]
            results = []
            for future in futures:
                results.append(future.result())
                progress.update(task, advance=1)
        return results

    def _run_check(self, name: str, context: HarnessContext) -> List[CheckReport]:
        if context.F is None and name != 'solver_convergence':
            return [failed_report(name, math.nan, context.solver_error or RuntimeError("no function"))]
        try:
            return self._checks[name](context)
        except AhlforsError as e:
            logger.warning(f"Check {name} could not complete: {e}")
            return [failed_report(name, math.nan, e)]

    # Checks

    def _check_solver_convergence(self, ctx: HarnessContext) -> List[CheckReport]:
        if ctx.closed_form is not None and ctx.solution is None and ctx.solver_error is None:
            return []
        diagnostics = ctx.solution.diagnostics if ctx.solution is not None else None
        iterations = diagnostics.iterations if diagnostics else ctx.solver_config.max_outer_iterations
        converged = ctx.solver_error is None and diagnostics is not None and diagnostics.converged
        return [create_check_report(
            'solver_convergence',
            iterations,
            ctx.solver_config.max_outer_iterations,
            passed=converged,
            detail=str(ctx.solver_error) if ctx.solver_error else (
                f"cuts={diagnostics.cut_count}, degree={diagnostics.polynomial_degree}, "
                f"poles={diagnostics.pole_count}, runs={diagnostics.attempts}"
            ),
        )]

    def _check_vanishing(self, ctx: HarnessContext) -> List[CheckReport]:
        if is_infinity(ctx.base_point):
            value = ctx.F.value_at_infinity()
        else:
            value = complex(ctx.F(ctx.base_point))
        witness = None if is_infinity(ctx.base_point) else ctx.base_point
        return [create_check_report('vanishing', abs(value), VANISHING_THRESHOLD, witness=witness)]

    def _check_unit_boundary_modulus(self, ctx: HarnessContext) -> List[CheckReport]:
        if isinstance(ctx.domain, RealSlitComplement):
            slits = ctx.domain.slits
            sups = []
            for factor in (1e-2, 1e-3):
                offset = factor * slits.total_length
                grid = ctx.domain.sample_boundary(4096, offset=offset)
                sups.append(float(np.max(np.abs(ctx.F(grid.points)))))
            measured = 1.0 - sups[-1]
            return [create_check_report(
                'unit_boundary_modulus',
                measured,
                STADIUM_MODULUS_THRESHOLD,
                passed=bool(sups[0] < sups[1] < 1.0 and measured <= STADIUM_MODULUS_THRESHOLD),
                detail=f"stadium sups {sups[0]:.9f} -> {sups[1]:.9f}",
            )]

        grid = ctx.domain.sample_boundary(4096)
        deviation = np.abs(np.abs(ctx.F(grid.points)) - 1.0)
        k = int(np.argmax(deviation))
        return [create_check_report(
            'unit_boundary_modulus', float(deviation[k]), MODULUS_THRESHOLD, witness=complex(grid.points[k])
        )]

    def _check_extremal_gamma(self, ctx: HarnessContext) -> List[CheckReport]:
        if ctx.solution is None:
            return []
        if ctx.closed_form is None:
            return [create_check_report(
                'extremal_gamma', ctx.solution.gamma, 0.0,
                passed=ctx.solution.gamma > 0, detail="no closed form; gamma > 0 required",
            )]
        error = abs(ctx.solution.gamma - ctx.closed_form.gamma)
        return [create_check_report(
            'extremal_gamma', error, GAMMA_THRESHOLD,
            detail=f"solver {ctx.solution.gamma:.12g} vs closed form {ctx.closed_form.gamma:.12g}",
        )]

    def _check_capacity(self, ctx: HarnessContext) -> List[CheckReport]:
        if not isinstance(ctx.domain, RealSlitComplement):
            return []
        slits = ctx.domain.slits
        measured = derivative_at_infinity(
            ctx.F, center=complex(slits.center), radius=2.0 * slits.half_width, f_inf=0j
        )
        quarter = slits.total_length / 4.0
        return [create_check_report(
            'capacity_quarter_length', abs(measured - quarter), CAPACITY_THRESHOLD,
            detail=f"F'(inf)={measured.real:.12g}{measured.imag:+.3g}i, lambda/4={quarter:.12g}",
        )]

    def _check_strip_bound(self, ctx: HarnessContext) -> List[CheckReport]:
        if not isinstance(ctx.domain, RealSlitComplement):
            return []
        slits = ctx.domain.slits
        count = int(self.harness_config.get('strip_samples', 10000))
        rng = np.random.default_rng(int(self.harness_config.get('seed', 0)))
        half = 2.0 * max(slits.half_width, 1.0)
        points = np.empty(0, dtype=complex)
        while points.size < count:
            batch = slits.center + half * (rng.uniform(-1, 1, count) + 1j * rng.uniform(-1, 1, count))
            points = np.concatenate([points, batch[slits.distance(batch) >= 1e-3]])
        points = points[:count]
        imag = np.abs(np.asarray(strip_map(slits, points, ctx.closed_form.quadrature)).imag)
        k = int(np.argmax(imag))
        return [create_check_report(
            'strip_bound', float(imag[k]), math.pi / 2,
            passed=bool(imag[k] < math.pi / 2), witness=complex(points[k]),
        )]

    def _check_riemann_equivalence(self, ctx: HarnessContext) -> List[CheckReport]:
        if not isinstance(ctx.domain, UnitDisk) or ctx.solution is None:
            return []
        grid = riemann_grid()
        difference = np.abs(ctx.solution(grid) - ctx.closed_form(grid))
        k = int(np.argmax(difference))
        return [create_check_report(
            'riemann_equivalence', float(difference[k]), RIEMANN_THRESHOLD, witness=complex(grid[k])
        )]

    def _check_valence(self, ctx: HarnessContext) -> List[CheckReport]:
        n = int(self.harness_config.get('valence_samples', 2048))
        if isinstance(ctx.domain, RealSlitComplement):
            n = max(n, 8192)
        expected = ctx.boundary_components
        reports = []
        for pair in self.harness_config.get('valence_values', [[0.0, 0.0]]):
            w = complex(float(pair[0]), float(pair[1]))
            name = f"valence[w={w.real:g}{w.imag:+g}i]"
            try:
                count = valence(ctx.F, ctx.domain, w, n)
            except AhlforsError as e:
                reports.append(failed_report(name, expected, e))
                continue
            reports.append(create_check_report(
                name, count, expected, passed=count == expected, detail=f"expected {expected}"
            ))
        return reports

    def _check_norm_preservation(self, ctx: HarnessContext) -> List[CheckReport]:
        return [
            check_norm_preservation(ctx.F, entry.function, ctx.domain, mesh=ctx.mesh,
                                    name=f"norm_preservation[{entry.name}]")
            for entry in domain_catalog(ctx.domain, ctx.F)
        ]

    def _check_composition_norm(self, ctx: HarnessContext) -> List[CheckReport]:
        return [
            check_composition_norm(ctx.F, entry.function, ctx.domain, norm=entry.sup_norm, mesh=ctx.mesh,
                                   name=f"composition_norm[{entry.name}]")
            for entry in disk_catalog()
        ]

    def _check_nonseparability(self, ctx: HarnessContext) -> List[CheckReport]:
        count = int(self.harness_config.get('separation_count', 8))
        return [check_nonseparability(ctx.F, equispaced_unimodular(count), ctx.domain, mesh=ctx.mesh)]

    def _check_almost_surjectivity(self, ctx: HarnessContext) -> List[CheckReport]:
        angles = int(self.harness_config.get('surjectivity_angles', 4))
        r0 = float(self.harness_config.get('surjectivity_r0', 0.8))
        return [
            check_almost_surjectivity(ctx.F, ctx.domain, 2.0 * math.pi * k / angles, r0, mesh=ctx.mesh)
            for k in range(angles)
        ]

    def _koebe_source(self, ctx: HarnessContext) -> Tuple[ComplexFunction, complex]:
        F, p = ctx.F, ctx.base_point
        at_p = complex(F(p))
        source = ComplexFunction(
            lambda z: 0.5 * (np.asarray(F(z), dtype=complex) - at_p),
            lambda z: 0.5 * np.asarray(derivative_of(F, z), dtype=complex),
            name="F/2",
        )
        re_part, im_part = self.harness_config.get('koebe_omitted', [0.75, 0.0])
        return source, complex(float(re_part), float(im_part))

    def _check_koebe(self, ctx: HarnessContext) -> List[CheckReport]:
        if is_infinity(ctx.base_point):
            return []
        source, a = self._koebe_source(ctx)
        expansion = koebe_expand(source, a, ctx.base_point, ctx.domain)
        return [create_check_report(
            'koebe_expansion', expansion.gain, 1.0,
            passed=expansion.gain > 1.0, witness=ctx.base_point,
            detail=f"cut angle {expansion.cut_angle:.6f}",
        )]

    def _check_schwarz(self, ctx: HarnessContext) -> List[CheckReport]:
        if not isinstance(ctx.domain, UnitDisk):
            return []
        source, a = self._koebe_source(ctx)
        expansion = koebe_expand(source, a, ctx.base_point, ctx.domain)
        return [check_schwarz(compose(expansion, disk_automorphism(-ctx.base_point)))]

    def _check_uniqueness(self, ctx: HarnessContext) -> List[CheckReport]:
        if ctx.solution is None or ctx.solver_error is not None:
            return []
        config = replace(ctx.solver_config, angle_cuts=ctx.solver_config.angle_cuts + 8)
        second = solve_extremal(ctx.domain, ctx.base_point, ctx.basis_spec, config)
        grid = ctx.domain.fill_grid(16)[:100]
        difference = np.abs(ctx.solution(grid) - second(grid))
        k = int(np.argmax(difference))
        return [create_check_report(
            'uniqueness', float(difference[k]), UNIQUENESS_THRESHOLD, witness=complex(grid[k]),
            detail=f"angle cuts {ctx.solver_config.angle_cuts} vs {config.angle_cuts}",
        )]


def riemann_grid() -> np.ndarray:
    """100 disk points on radii up to 0.8."""
    radii = np.linspace(0.08, 0.8, 10)
    angles = 2.0 * math.pi * np.arange(10) / 10
    return (radii[:, None] * np.exp(1j * angles)[None, :]).ravel()


def run_suite(domain: Domain, p: BasePoint, cfg: Optional[SolverConfig] = None,
              config: Optional[Dict] = None, basis_spec: Optional[BasisSpec] = None) -> List[CheckReport]:
    """Run the full theorem suite with default harness settings."""
    harness = TheoremHarness(config or ConfigLoader.load(None))
    return harness.run_suite(domain, p, cfg, basis_spec)
