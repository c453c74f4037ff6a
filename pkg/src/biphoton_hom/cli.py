"""Command-line front end.

Examples::

    biphoton-hom sweep-tau -o dip.csv
    biphoton-hom sweep-tau --xi 1.5707963 -o peak.csv
    biphoton-hom sweep-xi --steps 9 -o xi.csv
    biphoton-hom filtered --filter-center 1e9 --filter-width 1e7 --tau-min 0 --tau-max 5e-9 -o beat.csv
    biphoton-hom noon --n 2 --phi-min 0 --phi-max 6.2831853 --steps 101 -o noon.csv
    biphoton-hom fit -i dip.csv

Exit status: 0 success, 1 I/O or file-format failure, 2 usage error,
3 degenerate (flat) curve handed to ``fit``.
"""

from __future__ import annotations

import argparse
import math
import sys
import time
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .analysis import DegenerateCurveError, fit_gaussian_envelope
from .correlation import (analytic_curve, analytic_filtered_coincidence, ensemble_coincidence,
                          filtered_coincidence, noon_correlation, xi_sweep, CorrelationCurve)
from .csvio import CsvFormatError, read_csv, write_csv, write_noon
from .ensemble import BandPass, GaussianSpectrum, MonteCarlo, Quadrature
from .model import PhaseConfig

EXIT_OK, EXIT_IO, EXIT_USAGE, EXIT_DEGENERATE = 0, 1, 2, 3


@dataclass
class RunConfig:
    subcommand: str
    xi: float = 0.0
    zeta: float = math.pi / 2
    sigma: float = 1e9
    convention: str = "paper"
    tau_min: float = -5e-9
    tau_max: float = 5e-9
    steps: int = 201
    method: str = "quad"
    samples: int = 100_000
    seed: int = 0
    nodes: int = 2001
    truncation: float = 3.0
    filter_center: Optional[float] = None
    filter_width: Optional[float] = None
    xi_min: float = 0.0
    xi_max: float = math.pi / 2
    tau: float = 0.0
    n: int = 2
    phi_min: float = 0.0
    phi_max: float = 2 * math.pi
    output: Optional[str] = None
    input: Optional[str] = None

    def plan(self):
        if self.method == "mc":
            return MonteCarlo(self.samples, self.seed)
        if self.method == "quad":
            return Quadrature(self.nodes)
        return None


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="biphoton-hom",
        description="Phase-controlled Hong-Ou-Mandel coincidence simulator.")
    sub = parser.add_subparsers(dest="subcommand", required=True, metavar="COMMAND")

    phases = argparse.ArgumentParser(add_help=False)
    phases.add_argument("--xi", type=float, default=0.0, help="control phase at input a [rad]")
    phases.add_argument("--zeta", type=float, default=math.pi / 2,
                        help="idler phase relative to signal [rad] (default pi/2)")
    phases.add_argument("--convention", choices=("paper", "si"), default="paper",
                        help="delay phase df*tau ('paper') or 2*pi*df*tau ('si')")

    ensemble = argparse.ArgumentParser(add_help=False)
    ensemble.add_argument("--method", choices=("quad", "mc", "analytic"), default="quad")
    ensemble.add_argument("--samples", type=int, default=100_000, help="Monte Carlo pair count")
    ensemble.add_argument("--seed", type=int, default=0, help="Monte Carlo seed (u64)")
    ensemble.add_argument("--nodes", type=int, default=2001, help="quadrature nodes (odd, >= 3)")

    gaussian = argparse.ArgumentParser(add_help=False)
    gaussian.add_argument("--sigma", type=float, default=1e9, help="spectral std dev [Hz]")
    gaussian.add_argument("--truncation", type=float, default=3.0,
                          help="spectrum cut-off in multiples of sigma")

    delay = argparse.ArgumentParser(add_help=False)
    delay.add_argument("--tau-min", type=float, default=-5e-9, help="[s]")
    delay.add_argument("--tau-max", type=float, default=5e-9, help="[s]")

    steps = argparse.ArgumentParser(add_help=False)
    steps.add_argument("--steps", type=int, default=201, help="grid points (>= 2)")

    out = argparse.ArgumentParser(add_help=False)
    out.add_argument("-o", "--output", default=None, help="CSV path (default: stdout)")

    sub.add_parser("sweep-tau", parents=[phases, ensemble, gaussian, delay, steps, out],
                   help="coincidence versus delay over a Gaussian spectrum")
    p = sub.add_parser("sweep-xi", parents=[phases, ensemble, gaussian, steps, out],
                       help="coincidence versus control phase at fixed delay")
    p.add_argument("--xi-min", type=float, default=0.0)
    p.add_argument("--xi-max", type=float, default=math.pi / 2)
    p.add_argument("--tau", type=float, default=0.0, help="fixed delay [s]")
    p = sub.add_parser("filtered", parents=[phases, ensemble, delay, steps, out],
                       help="coincidence versus delay behind a two-band spectral filter")
    p.add_argument("--filter-center", type=float, default=None, help="band centre |df| [Hz]")
    p.add_argument("--filter-width", type=float, default=None, help="full band width [Hz]")
    p = sub.add_parser("noon", parents=[steps, out], help="N00N-state correlation curve")
    p.add_argument("--n", type=int, default=2, help="N00N order (>= 1)")
    p.add_argument("--phi-min", type=float, default=0.0)
    p.add_argument("--phi-max", type=float, default=2 * math.pi)
    p = sub.add_parser("fit", parents=[out], help="fit a Gaussian envelope to a tau curve CSV")
    p.add_argument("-i", "--input", required=True, help="curve CSV written by sweep-tau/filtered")
    return parser


def _validate(parser: argparse.ArgumentParser, cfg: RunConfig) -> None:
    def bad(flag, msg):
        parser.error(f"argument {flag}: {msg}")

    for flag in ("xi", "zeta", "sigma", "tau_min", "tau_max", "truncation", "xi_min",
                 "xi_max", "tau", "phi_min", "phi_max"):
        if not math.isfinite(getattr(cfg, flag)):
            bad("--" + flag.replace("_", "-"), "must be finite")
    if cfg.subcommand != "fit" and cfg.steps < 2:
        bad("--steps", f"must be >= 2, got {cfg.steps}")
    if cfg.subcommand in ("sweep-tau", "filtered") and not cfg.tau_min < cfg.tau_max:
        bad("--tau-max", f"must exceed --tau-min ({cfg.tau_min} >= {cfg.tau_max})")
    if cfg.subcommand == "sweep-xi" and not cfg.xi_min < cfg.xi_max:
        bad("--xi-max", "must exceed --xi-min")
    if cfg.subcommand == "noon":
        if cfg.n < 1:
            bad("--n", f"must be >= 1, got {cfg.n}")
        if not cfg.phi_min < cfg.phi_max:
            bad("--phi-max", "must exceed --phi-min")
    if cfg.subcommand in ("sweep-tau", "sweep-xi", "filtered"):
        if cfg.method == "mc" and cfg.samples < 1:
            bad("--samples", f"must be >= 1, got {cfg.samples}")
        if cfg.method == "quad" and (cfg.nodes < 3 or cfg.nodes % 2 == 0):
            bad("--nodes", f"must be odd and >= 3, got {cfg.nodes}")
        if not 0 <= cfg.seed < 2 ** 64:
            bad("--seed", "must be an unsigned 64-bit integer")
    if cfg.subcommand in ("sweep-tau", "sweep-xi"):
        if not cfg.sigma > 0:
            bad("--sigma", f"must be positive, got {cfg.sigma}")
        if not cfg.truncation > 0:
            bad("--truncation", f"must be positive, got {cfg.truncation}")
    if cfg.subcommand == "filtered":
        if cfg.filter_center is None:
            bad("--filter-center", "is required for 'filtered'")
        if cfg.filter_width is None:
            bad("--filter-width", "is required for 'filtered'")
        if not cfg.filter_center > 0:
            bad("--filter-center", f"must be positive, got {cfg.filter_center}")
        if not cfg.filter_width > 0:
            bad("--filter-width", f"must be positive, got {cfg.filter_width}")
        if cfg.method == "analytic" and cfg.filter_center < 0.5 * cfg.filter_width:
            bad("--filter-width", "closed form needs --filter-width <= 2 * --filter-center")


def _looks_negative_number(token: str) -> bool:
    if not token.startswith("-"):
        return False
    try:
        float(token)
    except ValueError:
        return False
    return True


def _attach_negative_values(argv: Sequence[str]) -> list[str]:
    # argparse only recognises plain negative decimals as values; glue
    # "--flag -5e-9" into "--flag=-5e-9" so scientific notation works
    out: list[str] = []
    it = iter(argv)
    for token in it:
        if token.startswith("--") and "=" not in token:
            nxt = next(it, None)
            if nxt is not None and _looks_negative_number(nxt):
                out.append(f"{token}={nxt}")
                continue
            out.append(token)
            if nxt is not None:
                out.append(nxt)
            continue
        out.append(token)
    return out


def parse_args(argv: Optional[Sequence[str]] = None) -> RunConfig:
    """Parse ``argv`` into a :class:`RunConfig`; exits with status 2 on bad input."""
    parser = _build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    ns = parser.parse_args(_attach_negative_values(argv))
    fields = {k: v for k, v in vars(ns).items() if k in RunConfig.__dataclass_fields__}
    cfg = RunConfig(**fields)
    _validate(parser, cfg)
    return cfg


def _delay_grid(cfg: RunConfig) -> np.ndarray:
    return np.linspace(cfg.tau_min, cfg.tau_max, cfg.steps)


def _emit(obj, cfg: RunConfig, writer=write_csv, *args) -> None:
    dest = sys.stdout if cfg.output in (None, "-") else cfg.output
    writer(obj, *args, dest)


def _run_sweep_tau(cfg: RunConfig) -> int:
    phases = PhaseConfig(cfg.xi, cfg.zeta, cfg.convention)
    grid = _delay_grid(cfg)
    if cfg.method == "analytic":
        curve = analytic_curve(phases, cfg.sigma, grid)
    else:
        curve = ensemble_coincidence(phases, GaussianSpectrum(cfg.sigma, cfg.truncation),
                                     cfg.plan(), grid)
    _emit(curve, cfg)
    return len(curve)


def _run_sweep_xi(cfg: RunConfig) -> int:
    grid = np.linspace(cfg.xi_min, cfg.xi_max, cfg.steps)
    sweep = xi_sweep(cfg.zeta, cfg.sigma, grid, cfg.tau, convention=cfg.convention,
                     plan=cfg.plan(), truncation=cfg.truncation)
    _emit(sweep, cfg)
    return grid.size


def _run_filtered(cfg: RunConfig) -> int:
    phases = PhaseConfig(cfg.xi, cfg.zeta, cfg.convention)
    band = BandPass(cfg.filter_center, cfg.filter_width)
    grid = _delay_grid(cfg)
    if cfg.method == "analytic":
        r = np.atleast_1d(analytic_filtered_coincidence(phases, band, grid))
        meta = {"method": "analytic", **phases.describe(), **band.describe()}
        curve = CorrelationCurve(grid, r, np.zeros_like(r), meta)
    else:
        curve = filtered_coincidence(phases, band, cfg.plan(), grid)
    _emit(curve, cfg)
    return len(curve)


def _run_noon(cfg: RunConfig) -> int:
    phi = np.linspace(cfg.phi_min, cfg.phi_max, cfg.steps)
    r = noon_correlation(cfg.n, phi)
    _emit(phi, cfg, write_noon, r, cfg.n)
    return phi.size


def _run_fit(cfg: RunConfig) -> int:
    curve = read_csv(cfg.input)
    fit = fit_gaussian_envelope(curve)
    print(f"b={fit.b!r} a={fit.a!r} c={fit.c!r} rms_residual={fit.rms_residual!r} "
          f"converged={str(fit.converged).lower()} iterations={fit.iterations}")
    if cfg.output not in (None, "-"):
        write_csv(fit, cfg.output)
    return len(curve)


_DISPATCH = {
    "sweep-tau": _run_sweep_tau,
    "sweep-xi": _run_sweep_xi,
    "filtered": _run_filtered,
    "noon": _run_noon,
    "fit": _run_fit,
}


def run(config: RunConfig) -> int:
    """Execute a parsed configuration and return the process exit status."""
    start = time.perf_counter()
    try:
        points = _DISPATCH[config.subcommand](config)
    except DegenerateCurveError as exc:
        print(f"biphoton-hom: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except (OSError, CsvFormatError) as exc:
        print(f"biphoton-hom: {exc}", file=sys.stderr)
        return EXIT_IO
    method = {"noon": "closed-form", "fit": "gauss-newton"}.get(config.subcommand, config.method)
    print(f"{config.subcommand}: method={method} points={points} "
          f"wall={time.perf_counter() - start:.3f}s", file=sys.stderr)
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    return run(parse_args(argv))


if __name__ == "__main__":
    sys.exit(main())
