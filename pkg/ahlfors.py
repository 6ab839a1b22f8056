#!/usr/bin/env python3
"""
Ahlfors toolkit
Main Entry Point
"""

import argparse
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Dict, List, Optional, Tuple

from rich.console import Console
from rich.markup import escape
from rich.panel import Panel

from core.basis import BasisSpec
from core.closed_form import QuadratureSpec, ahlfors_disk, ahlfors_exterior_disk, ahlfors_real_slit
from core.domain import INFINITY, BasePoint, Domain, ExteriorUnitDisk, RealSlitComplement, UnitDisk, load_domain
from core.errors import AhlforsError, InvalidParameterError, UnsupportedVariantError
from core.extremal_solver import SolverConfig, modulus_profile, solve_extremal, valence
from core.report_generator import ReportGenerator
from core.theorem_harness import TheoremHarness, failure_count
from utils.config_loader import ConfigLoader
from utils.logger import setup_from_config, setup_logger
from utils.parser import PointParser

__version__ = "1.0.0"

console = Console(stderr=True)
logger = setup_logger()

COMMANDS = ('compute', 'capacity', 'valence', 'verify', 'grid')
EXIT_OK, EXIT_IO, EXIT_VERIFY = 0, 1, 4
MIN_RESOLUTION = 16


@dataclass(frozen=True)
class RunManifest:
    """One CLI invocation."""

    command: str
    domain_file: Path
    base_point: Optional[BasePoint]
    output_dir: Optional[Path]
    degree: Optional[int] = None
    hole_depth: Optional[int] = None
    samples: Optional[int] = None
    resolution: int = 64
    value: Optional[complex] = None
    method: str = 'auto'


def parse_arguments(argv=None) -> argparse.Namespace:
    """Parse command line arguments."""
    parser = argparse.ArgumentParser(
        prog='ahlfors',
        description="Ahlfors functions and analytic capacity of planar domains",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  Solve the extremal problem on the unit disk:
    ahlfors compute --domain config/domains/unit_disk.json --point 0.3,0

  Capacity of a slit set:
    ahlfors capacity --domain config/domains/slit.json --point inf

  Run the theorem suite on an annulus:
    ahlfors verify --domain config/domains/annulus.json --point 0.5,0 --degree 20

Exit codes: 0 ok, 1 I/O, 2 invalid input, 3 numerical failure, 4 failed checks
        """
    )

    parser.add_argument('command', choices=COMMANDS, help='Operation to run')
    parser.add_argument('--domain', required=True, help='JSON domain specification')
    parser.add_argument('--point', help='Base point "re,im" or "inf"')
    parser.add_argument('--out', help='Output directory (overrides config)')
    parser.add_argument('--degree', type=int, help='Polynomial degree of the solver basis')
    parser.add_argument('--hole-depth', type=int, help='Negative powers per hole')
    parser.add_argument('--samples', type=int, help='Boundary samples per component')
    parser.add_argument('--resolution', type=int, default=64, help='Grid resolution for the grid command')
    parser.add_argument('--value', help='Target value "re,im" for the valence command')
    parser.add_argument(
        '--method',
        choices=('auto', 'solver', 'closed-form'),
        default='auto',
        help='Use a closed form when available (auto), or force one path'
    )
    parser.add_argument(
        '-c', '--config',
        default='config/config.yaml',
        help='Configuration file path (default: config/config.yaml)'
    )
    parser.add_argument('-v', '--verbose', action='store_true', help='Enable verbose output')
    parser.add_argument('--version', action='version', version=f'ahlfors {__version__}')

    return parser.parse_args(argv)


def build_manifest(args: argparse.Namespace) -> RunManifest:
    domain_file = Path(args.domain)
    if not domain_file.is_file():
        raise FileNotFoundError(f"Domain file not found: {domain_file}")
    return RunManifest(
        command=args.command,
        domain_file=domain_file,
        base_point=PointParser.parse_point(args.point) if args.point else None,
        output_dir=Path(args.out) if args.out else None,
        degree=args.degree,
        hole_depth=args.hole_depth,
        samples=args.samples,
        resolution=args.resolution,
        value=PointParser.parse_complex(args.value) if args.value else None,
        method=args.method,
    )


def resolve_base_point(manifest: RunManifest, domain: Domain) -> BasePoint:
    if manifest.base_point is not None:
        return manifest.base_point
    if domain.contains_infinity:
        return INFINITY
    raise InvalidParameterError(f"--point is required for the {domain.variant}")


def solver_settings(manifest: RunManifest, config: Dict) -> Tuple[SolverConfig, BasisSpec]:
    solver_config = SolverConfig.from_config(config, boundary_samples_per_component=manifest.samples)
    spec = BasisSpec.from_config(config)
    spec = BasisSpec(
        polynomial_degree=manifest.degree if manifest.degree is not None else spec.polynomial_degree,
        hole_depth=manifest.hole_depth if manifest.hole_depth is not None else spec.hole_depth,
    )
    return solver_config, spec


def compute_function(manifest: RunManifest, domain: Domain, p: BasePoint, config: Dict) -> Tuple[Callable, float, Dict]:
    """
    Ahlfors function for (domain, p).

    Returns:
        (F, gamma, descriptor)
    """
    closed = None
    if manifest.method != 'solver':
        if isinstance(domain, RealSlitComplement):
            if p is not INFINITY:
                raise UnsupportedVariantError("Real-slit complements are handled for p = inf only")
            closed = ahlfors_real_slit(domain.slits, QuadratureSpec.from_config(config))
        elif isinstance(domain, UnitDisk):
            closed = ahlfors_disk(p)
        elif isinstance(domain, ExteriorUnitDisk):
            closed = ahlfors_exterior_disk(p)
        elif manifest.method == 'closed-form':
            raise UnsupportedVariantError(f"No closed form for the {domain.variant}")

    if closed is not None:
        gamma = abs(closed.derivative_at_base())
        logger.info(f"Closed form ({closed.variant}): gamma={gamma:.12g}")
        return closed, gamma, closed.descriptor()

    solver_config, spec = solver_settings(manifest, config)
    solution = solve_extremal(domain, p, spec, solver_config)
    return solution, solution.gamma, solution.descriptor()


def cmd_compute(manifest: RunManifest, domain: Domain, config: Dict, reporter: ReportGenerator) -> int:
    p = resolve_base_point(manifest, domain)
    F, gamma, descriptor = compute_function(manifest, domain, p, config)
    out = reporter.output_dir(manifest.output_dir)
    reporter.write_solution(out / 'solution.json', {
        'domain': domain.to_dict(),
        'base_point': PointParser.to_json(p),
        'gamma': gamma,
        'function': descriptor,
    })
    samples = manifest.samples or int(config.get('solver', {}).get('boundary_samples_per_component', 512))
    reporter.write_boundary_modulus(out / 'boundary_modulus.csv', modulus_profile(F, domain, samples))
    print(f"gamma={gamma:.12g}")
    return EXIT_OK


def cmd_capacity(manifest: RunManifest, domain: Domain, config: Dict, reporter: ReportGenerator) -> int:
    p = resolve_base_point(manifest, domain)
    _, gamma, _ = compute_function(manifest, domain, p, config)
    print(f"gamma={gamma:.12g}")
    return EXIT_OK


def cmd_valence(manifest: RunManifest, domain: Domain, config: Dict, reporter: ReportGenerator) -> int:
    if manifest.value is None:
        raise InvalidParameterError("--value is required for the valence command")
    p = resolve_base_point(manifest, domain)
    F, _, _ = compute_function(manifest, domain, p, config)
    n = int(config.get('harness', {}).get('valence_samples', 2048))
    if isinstance(domain, RealSlitComplement):
        n = max(n, 8192)
    print(f"valence={valence(F, domain, manifest.value, n)}")
    return EXIT_OK


def summary_lines(reports) -> List[str]:
    """Panel rows, with check names escaped for rich markup."""
    return [f"[bold]{'✓' if r.passed else '✗'}[/bold] {escape(r.check_name)}: {r.measured:.6g}" for r in reports]


def cmd_verify(manifest: RunManifest, domain: Domain, config: Dict, reporter: ReportGenerator,
               verbose: bool = False) -> int:
    p = resolve_base_point(manifest, domain)
    solver_config, spec = solver_settings(manifest, config)
    harness = TheoremHarness(config, show_progress=verbose)
    reports = harness.run_suite(domain, p, solver_config, spec)
    out = reporter.output_dir(manifest.output_dir)
    reporter.write_reports(out / 'report.jsonl', reports)

    failures = failure_count(reports)
    console.print(Panel(
        "\n".join(summary_lines(reports)),
        title=f"Verification: {len(reports) - failures}/{len(reports)} passed",
        border_style="green" if failures == 0 else "red"
    ))
    return EXIT_OK if failures == 0 else EXIT_VERIFY


def cmd_grid(manifest: RunManifest, domain: Domain, config: Dict, reporter: ReportGenerator) -> int:
    if manifest.resolution < MIN_RESOLUTION:
        raise InvalidParameterError(f"--resolution must be at least {MIN_RESOLUTION}, got {manifest.resolution}")
    p = resolve_base_point(manifest, domain)
    F, _, _ = compute_function(manifest, domain, p, config)
    z = domain.fill_grid(manifest.resolution)
    values = F(z)
    out = reporter.output_dir(manifest.output_dir)
    reporter.write_image_grid(out / 'image_grid.csv', z, values)
    reporter.write_image_plot(out / 'image_plot.svg', values, title=f"F(Ω) for {domain.variant}")
    return EXIT_OK


def run(manifest: RunManifest, config: Dict, verbose: bool = False) -> int:
    domain = load_domain(manifest.domain_file)
    reporter = ReportGenerator(config)
    if manifest.command == 'verify':
        return cmd_verify(manifest, domain, config, reporter, verbose)
    handlers = {
        'compute': cmd_compute,
        'capacity': cmd_capacity,
        'valence': cmd_valence,
        'grid': cmd_grid,
    }
    return handlers[manifest.command](manifest, domain, config, reporter)


def main(argv=None) -> int:
    """Main execution function."""
    global logger
    args = parse_arguments(argv)
    try:
        config = ConfigLoader.load(args.config)
        logger = setup_from_config(config, verbose=args.verbose)
        manifest = build_manifest(args)
        return run(manifest, config, verbose=args.verbose)

    except AhlforsError as e:
        logger.error(f"{type(e).__name__}: {e}", exc_info=args.verbose)
        console.print(f"[bold red]Error:[/bold red] {e}")
        return e.exit_code
    except OSError as e:
        logger.error(f"I/O error: {e}", exc_info=args.verbose)
        console.print(f"[bold red]Error:[/bold red] {e}")
        return EXIT_IO
    except KeyboardInterrupt:
        console.print("\n[bold yellow]Interrupted by user[/bold yellow]")
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
