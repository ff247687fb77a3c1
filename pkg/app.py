"""
Command-line entry point: symbol JSON or example preset in, reports out.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence
import argparse
import json
import logging
import os
import sys

import pandas as pd

from config import get_config
from conditions import (CheckResult, Status, check_dvc_prime, check_iac, classify, search_iac,
                        spectrum_estimate)
from conditions.report import UNIT_COVER, Verdict
from conformal import EXAMPLES, ExampleSymbol, example_symbol
from operators import (adjoint_eigenvector, basis_span_check, eigenvectors, gs_evidence, orbit_simulate,
                       section_eigenvalues, toeplitz_section)
from symbols import load_symbol, resolvent, save_symbol
from utils.error_handler import (EXIT_FAIL, EXIT_INCONCLUSIVE, EXIT_PASS, AnalysisError, SchemaError,
                                 cli_error_handler)
from utils.io import write_csv, write_json
from valence import adaptive_region_map, build_curve, general_position, preimage_count

# Configure logging
logging.basicConfig(level=logging.INFO,
                   format='%(asctime)s - %(name)s - %(levelname)s - %(message)s')
logger = logging.getLogger(__name__)

EIGEN_N = 512
SPECTRUM_EIGS = 128

VERDICT_EXIT = {
    Verdict.CERTIFIED_MVC: EXIT_PASS,
    Verdict.CERTIFIED_IAC: EXIT_PASS,
    Verdict.CERTIFIED_DVC: EXIT_PASS,
    Verdict.NECESSARY_FAILED: EXIT_FAIL,
    Verdict.INCONCLUSIVE: EXIT_INCONCLUSIVE,
}
STATUS_EXIT = {Status.PASS: EXIT_PASS, Status.FAIL: EXIT_FAIL, Status.INCONCLUSIVE: EXIT_INCONCLUSIVE}


class CliParser(argparse.ArgumentParser):
    """Argument errors become configuration errors (exit 4) instead of argparse's exit 2."""

    def error(self, message: str):
        raise SchemaError(f"Invalid arguments: {message}")


@dataclass
class RunConfig:
    """Everything that determines a run; echoed into every report."""

    command: str
    symbol_file: Optional[str] = None
    example: Optional[str] = None
    params: Dict[str, Any] = field(default_factory=dict)
    grid_n: Optional[int] = None
    mesh: Optional[float] = None
    rho: float = 1.0
    lambdas: List[complex] = field(default_factory=list)
    out: Optional[str] = None
    seed: Optional[int] = None
    settings: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data.pop("out")
        return data


def parse_lambda(text: str) -> complex:
    """Parse "RE,IM" (or a bare real number)."""
    try:
        parts = [float(p) for p in text.split(",")]
    except ValueError as e:
        raise SchemaError(f"Cannot parse lambda '{text}', expected RE,IM") from e
    if len(parts) == 1:
        return complex(parts[0], 0.0)
    if len(parts) == 2:
        return complex(parts[0], parts[1])
    raise SchemaError(f"Cannot parse lambda '{text}', expected RE,IM")


def read_params(value: str) -> Dict[str, Any]:
    """
    Parse --params: a path to a JSON file, or an inline JSON object.

    Raises:
        SchemaError: If the file cannot be read or the text is not a JSON object
    """
    text, source = value, "--params"
    if os.path.isfile(value):
        source = value
        try:
            with open(value, "r", encoding="utf-8") as f:
                text = f.read()
        except OSError as e:
            raise SchemaError(f"Cannot read params file {value}: {e}") from e
    try:
        params = json.loads(text)
    except json.JSONDecodeError as e:
        raise SchemaError(f"{source} is not valid JSON: {e.msg}", {"column": e.colno}) from e
    if not isinstance(params, dict):
        raise SchemaError(f"{source} must hold a JSON object, got {type(params).__name__}")
    return params


def _example_params(args: argparse.Namespace) -> Dict[str, Any]:
    params: Dict[str, Any] = {}
    if args.params:
        params.update(read_params(args.params))
    if args.alpha is not None:
        params["alpha"] = args.alpha
    if args.n is not None:
        params["n"] = args.n
        params["N"] = args.n
    if args.eps is not None:
        params["eps"] = args.eps
    return params


def run_config(args: argparse.Namespace) -> RunConfig:
    settings = get_config()
    if args.grid is not None:
        settings["GRID_N"] = args.grid
    if args.mesh is not None:
        settings["CURVE_MESH"] = args.mesh
    if args.seed is not None:
        settings["SEED"] = args.seed
    return RunConfig(command=args.command, symbol_file=args.symbol, example=args.example,
                     params=_example_params(args), grid_n=args.grid, mesh=args.mesh, rho=args.rho,
                     lambdas=[parse_lambda(t) for t in args.lam or []], out=args.out,
                     seed=args.seed if args.seed is not None else settings["SEED"], settings=settings)


def load_input(cfg: RunConfig) -> ExampleSymbol:
    """
    Resolve the symbol source of a run.

    Raises:
        SchemaError: If neither or both of --symbol and --example are given
    """
    if bool(cfg.symbol_file) == bool(cfg.example):
        raise SchemaError("Give exactly one of --symbol FILE and --example ID")
    if cfg.symbol_file:
        return ExampleSymbol(id=os.path.basename(cfg.symbol_file), symbol=load_symbol(cfg.symbol_file))
    return example_symbol(cfg.example, cfg.params)


def _witnesses(ex: ExampleSymbol, cfg: RunConfig) -> List[complex]:
    candidates = cfg.lambdas or list(ex.hints)
    out = []
    for lam in candidates:
        try:
            if preimage_count(ex.symbol, lam, 1.0) == 0:
                out.append(complex(lam))
        except AnalysisError as e:
            logger.warning(f"Skipping lambda = {lam}: {e.message}")
    return out


def _output_path(cfg: RunConfig, name: str) -> Optional[str]:
    return os.path.join(cfg.out, name) if cfg.out else None


def emit(cfg: RunConfig, name: str, body: Dict[str, Any], tables: Optional[Dict[str, Any]] = None) -> None:
    """Print the JSON report and, with --out, write it and its CSV tables."""
    report = {"run_config": cfg.to_dict(), **body}
    if cfg.out:
        for filename, rows in (tables or {}).items():
            write_csv(rows, os.path.join(cfg.out, filename))
        report["files"] = sorted([name] + list(tables or {}))
    sys.stdout.write(write_json(report, _output_path(cfg, name)))


def eigen_table(ex: ExampleSymbol, lambdas: Sequence[complex], n: int) -> List[Dict[str, Any]]:
    rows = []
    for lam in lambdas:
        for result in eigenvectors(ex.symbol, lam, n):
            rows.append(result.to_dict())
    return rows


# Subcommands

def cmd_analyze(cfg: RunConfig) -> int:
    ex = load_input(cfg)
    report = classify(ex.symbol, lambdas=cfg.lambdas or None, grid_n=cfg.grid_n, mesh=cfg.mesh, hints=ex.hints)
    body: Dict[str, Any] = {"example": ex.to_dict(), "report": report.to_dict()}
    tables: Dict[str, Any] = {}
    if report.region_map is not None:
        body["regions"] = report.region_map.to_dict()
        estimate = spectrum_estimate(report.region_map, ex.symbol.N, ex.symbol)
        body["spectrum"] = {**estimate.to_dict(), "mask": "spectrum.csv"}
        tables["spectrum.csv"] = estimate.frame()
    if report.spe_ok:
        try:
            body["eigen"] = eigen_table(ex, [report.spe.lambda0, report.spe.lambda1], EIGEN_N)
        except AnalysisError as e:
            logger.warning(f"Eigenvector table skipped: {e.message}")
            body["eigen"] = []
            body["report"]["errors"].append({"step": "eigen", **e.to_dict()})
    emit(cfg, "report.json", body, tables)
    return VERDICT_EXIT[report.verdict]


def _plane(ex: ExampleSymbol, cfg: RunConfig, plane: str):
    if plane == "h":
        if ex.h is None:
            raise SchemaError(f"Example '{ex.id}' carries no analytic map h")
        return ex.h
    if plane == "resolvent":
        if not cfg.lambdas:
            raise SchemaError("--plane resolvent needs --lambda")
        return resolvent(ex.symbol, cfg.lambdas[0])
    return ex.symbol


def cmd_regions(cfg: RunConfig, plane: str = "symbol") -> int:
    ex = load_input(cfg)
    target = _plane(ex, cfg, plane)
    cover = UNIT_COVER if plane == "symbol" else None
    rmap = adaptive_region_map(target, cfg.rho, cfg.grid_n, cfg.mesh, cover=cover)
    gp = general_position(target, rmap.curve)
    body = {"example": ex.to_dict(), "plane": plane, "regions": rmap.to_dict(),
            "general_position": gp.to_dict()}
    emit(cfg, "regions.json", body, {"regions.csv": rmap.grid_frame()})
    return EXIT_PASS


def cmd_curve(cfg: RunConfig, plane: str = "symbol") -> int:
    ex = load_input(cfg)
    target = _plane(ex, cfg, plane)
    curve = build_curve(target, cfg.rho, cfg.mesh)
    body = {"example": ex.to_dict(), "plane": plane, "curve": curve.to_dict()}
    emit(cfg, "curve.json", body, {"curve.csv": curve.to_rows()})
    return EXIT_PASS


def _check_iac(ex: ExampleSymbol, cfg: RunConfig) -> CheckResult:
    lambdas = _witnesses(ex, cfg)
    if len(lambdas) == 1:
        return check_iac(ex.symbol, lambdas[0])
    return search_iac(ex.symbol, lambdas)


def cmd_check(cfg: RunConfig, condition: str = "all") -> int:
    ex = load_input(cfg)
    body: Dict[str, Any] = {"example": ex.to_dict(), "condition": condition}
    if condition == "iac" and (cfg.lambdas or ex.hints):
        result = _check_iac(ex, cfg)
        body["iac"] = result.to_dict()
        emit(cfg, "check.json", body)
        return STATUS_EXIT[result.status]
    if condition == "dvcprime":
        if ex.h is None:
            raise SchemaError(f"Example '{ex.id}' carries no analytic map h for dvcprime")
        hmap = adaptive_region_map(ex.h, 1.0, cfg.grid_n, cfg.mesh)
        result = check_dvc_prime(ex.h, hmap, general_position(ex.h, hmap.curve))
        body["dvcprime"] = result.to_dict()
        emit(cfg, "check.json", body)
        return STATUS_EXIT[result.status]

    report = classify(ex.symbol, lambdas=cfg.lambdas or None, grid_n=cfg.grid_n, mesh=cfg.mesh, hints=ex.hints)
    full = report.to_dict()
    if condition == "all":
        body["report"] = full
        code = VERDICT_EXIT[report.verdict]
    elif condition == "necessary":
        body["necessary"] = full["necessary"]
        code = EXIT_PASS if report.n_valent_ok else EXIT_FAIL
    elif condition == "spe":
        body["spe"] = full["spe"]
        code = EXIT_PASS if report.spe_ok else EXIT_INCONCLUSIVE
    else:
        result: CheckResult = getattr(report, condition)
        body[condition] = result.to_dict()
        code = STATUS_EXIT[result.status]
    body["errors"] = full["errors"]
    emit(cfg, "check.json", body)
    return code


def cmd_spectrum(cfg: RunConfig, eigs: int = SPECTRUM_EIGS) -> int:
    ex = load_input(cfg)
    rmap = adaptive_region_map(ex.symbol, 1.0, cfg.grid_n, cfg.mesh, cover=UNIT_COVER)
    estimate = spectrum_estimate(rmap, ex.symbol.N, ex.symbol)
    body: Dict[str, Any] = {"example": ex.to_dict(), "spectrum": estimate.to_dict()}
    tables: Dict[str, Any] = {"spectrum.csv": estimate.frame()}
    if eigs > 0:
        cloud = section_eigenvalues(toeplitz_section(ex.symbol, eigs))
        body["section_eigenvalues"] = {"n": eigs, "note": "finite-section diagnostic, not the spectrum"}
        tables["section_eigenvalues.csv"] = pd.DataFrame({"re": cloud.real, "im": cloud.imag})
    emit(cfg, "spectrum.json", body, tables)
    return EXIT_PASS


def cmd_orbit(cfg: RunConfig, size: int = 256, steps: int = 200, eps: float = 0.1) -> int:
    ex = load_input(cfg)
    result = orbit_simulate(ex.symbol, size, steps, cfg.seed, eps)
    emit(cfg, "orbit.json", {"example": ex.to_dict(), "orbit": result.summary}, {"orbit.csv": result.frame})
    return EXIT_PASS


def cmd_eigen(cfg: RunConfig, size: int = EIGEN_N, mu: Optional[str] = None, evidence: int = 0) -> int:
    ex = load_input(cfg)
    body: Dict[str, Any] = {"example": ex.to_dict(), "basis_span": basis_span_check(ex.symbol)}
    if mu is not None:
        body["adjoint"] = adjoint_eigenvector(ex.symbol, parse_lambda(mu), size).to_dict()
        emit(cfg, "eigen.json", body)
        return EXIT_PASS
    if evidence > 0:
        report = classify(ex.symbol, grid_n=cfg.grid_n, mesh=cfg.mesh, hints=ex.hints)
        span = gs_evidence(ex.symbol, report, m=evidence, n=size)
        body["span_evidence"] = span.to_dict()
        emit(cfg, "eigen.json", body, {"evidence.csv": span.frame()})
        return EXIT_PASS
    lambdas = _witnesses(ex, cfg)
    if not lambdas:
        raise SchemaError("No admissible lambda: pass --lambda RE,IM outside the closed range")
    rows = eigen_table(ex, lambdas, size)
    body["eigen"] = rows
    table = [{"lambda_re": r["lambda"].real, "lambda_im": r["lambda"].imag, "n": r["n"], "residual": r["residual"],
              "tail_bound": r["tail_bound"]} for r in rows]
    emit(cfg, "eigen.json", body, {"eigen.csv": table})
    return EXIT_PASS


def cmd_example(cfg: RunConfig) -> int:
    ex = load_input(cfg)
    path = _output_path(cfg, "symbol.json")
    if path:
        os.makedirs(cfg.out, exist_ok=True)
        save_symbol(ex.symbol, path)
    emit(cfg, "example.json", {"example": ex.to_dict()})
    return EXIT_PASS


def build_parser() -> argparse.ArgumentParser:
    common = CliParser(add_help=False)
    common.add_argument("--symbol", help="Symbol JSON file")
    common.add_argument("--example", choices=sorted(EXAMPLES), help="Example preset")
    common.add_argument("--params", help="Example parameters: a JSON file or an inline JSON object")
    common.add_argument("--alpha", type=float, help="rolewicz: coefficient of 1/z")
    common.add_argument("--n", type=int, help="ex2/ex3: power")
    common.add_argument("--eps", type=float, help="ex3: perturbation size")
    common.add_argument("--grid", type=int, help="Region-map cells per side")
    common.add_argument("--mesh", type=float, help="Curve spacing relative to the curve diameter")
    common.add_argument("--rho", type=float, default=1.0, help="Circle radius for curves and maps")
    common.add_argument("--lambda", dest="lam", action="append", help="Spectral parameter RE,IM (repeatable)")
    common.add_argument("--out", help="Output directory")
    common.add_argument("--seed", type=int, help="Random seed")

    parser = CliParser(description="Hypercyclicity analysis of Toeplitz operators with rational-plus-analytic symbols")
    sub = parser.add_subparsers(dest="command", parser_class=CliParser)
    sub.required = True
    sub.add_parser("analyze", parents=[common], help="Full classification report")
    for name in ("regions", "curve"):
        p = sub.add_parser(name, parents=[common])
        p.add_argument("--plane", choices=["symbol", "h", "resolvent"], default="symbol")
    p = sub.add_parser("check", parents=[common], help="Run one condition check")
    p.add_argument("--condition", choices=["necessary", "spe", "mvc", "iac", "dvc", "dvcprime", "all"],
                   default="all")
    p = sub.add_parser("spectrum", parents=[common])
    p.add_argument("--eigs", type=int, default=SPECTRUM_EIGS, help="Section size for the eigenvalue cloud")
    p = sub.add_parser("orbit", parents=[common])
    p.add_argument("--size", type=int, default=256)
    p.add_argument("--steps", type=int, default=200)
    p.add_argument("--cell", type=float, default=0.1, help="Coverage cell size")
    p = sub.add_parser("eigen", parents=[common])
    p.add_argument("--size", type=int, default=EIGEN_N)
    p.add_argument("--mu", help="Adjoint eigenvector at conj(mu), RE,IM")
    p.add_argument("--evidence", type=int, default=0, metavar="M",
                   help="Span evidence with M lambdas on each witness circle")
    sub.add_parser("example", parents=[common])
    return parser


COMMANDS: Dict[str, Callable[[RunConfig, argparse.Namespace], int]] = {
    "analyze": lambda cfg, args: cmd_analyze(cfg),
    "regions": lambda cfg, args: cmd_regions(cfg, args.plane),
    "curve": lambda cfg, args: cmd_curve(cfg, args.plane),
    "check": lambda cfg, args: cmd_check(cfg, args.condition),
    "spectrum": lambda cfg, args: cmd_spectrum(cfg, args.eigs),
    "orbit": lambda cfg, args: cmd_orbit(cfg, args.size, args.steps, args.cell),
    "eigen": lambda cfg, args: cmd_eigen(cfg, args.size, args.mu, args.evidence),
    "example": lambda cfg, args: cmd_example(cfg),
}


@cli_error_handler
def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    Parse arguments and run one subcommand.

    Returns:
        int: 0 pass, 2 fail, 3 inconclusive, 1 computational error, 4 configuration error
    """
    args = build_parser().parse_args(argv)
    cfg = run_config(args)
    logger.info(f"Running {cfg.command}")
    return COMMANDS[cfg.command](cfg, args)


if __name__ == '__main__':
    sys.exit(main())
