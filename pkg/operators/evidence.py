"""
Numerical evidence that eigenvectors around the spe witnesses span H^2.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Dict, List, Tuple
import logging

import numpy as np
import pandas as pd
from scipy import linalg

import config
from conditions.report import ConditionReport
from operators.eigen import eigenvector, monomial_specs, validate_lambda
from operators.toeplitz import toeplitz_section
from symbols.core import Symbol
from utils.error_handler import AnalysisError, LambdaNotInHole
from valence.curve import build_curve

# Configure logging
logging.basicConfig(level=logging.INFO,
                   format='%(asctime)s - %(name)s - %(levelname)s - %(message)s')
logger = logging.getLogger(__name__)

EVIDENCE_NOTE = "evidence, not a certificate"


@dataclass
class SpanEvidence:
    """Least-squares residuals of e_0..e_{J-1} against eigenvector spans of growing size."""

    lambdas: List[complex]
    rows: List[Dict[str, Any]] = field(default_factory=list)
    skipped: List[Dict[str, Any]] = field(default_factory=list)
    n: int = 0

    def frame(self) -> pd.DataFrame:
        return pd.DataFrame(self.rows, columns=["m", "j", "residual"])

    def max_residual(self, m: int) -> float:
        values = [r["residual"] for r in self.rows if r["m"] == m]
        return float(max(values)) if values else float("nan")

    def to_dict(self) -> Dict[str, Any]:
        sizes = sorted({r["m"] for r in self.rows})
        return {
            "n": self.n,
            "lambdas": self.lambdas,
            "max_residual": {str(m): self.max_residual(m) for m in sizes},
            "rows": self.rows,
            "skipped": self.skipped,
            "note": EVIDENCE_NOTE,
        }


def _circle_points(center: complex, radius: float, count: int) -> List[complex]:
    t = 2.0 * np.pi * (np.arange(count) + 0.5) / count
    return [complex(center + radius * np.exp(1j * a)) for a in t]


def evidence_lambdas(sym: Symbol, lambda0: complex, lambda1: complex, m: int) -> Tuple[List[complex], List[complex]]:
    """
    m spectral parameters on a circle around lambda0 and m on a circle around lambda1.

    Each radius is half the distance to the nearer of the curve and the unit circle.
    """
    curve = build_curve(sym, 1.0, intersections=False)
    r0 = 0.5 * min(float(np.min(np.abs(curve.values - lambda0))), 1.0 - abs(lambda0))
    r1 = 0.5 * min(float(np.min(np.abs(curve.values - lambda1))), abs(lambda1) - 1.0)
    return _circle_points(lambda0, r0, m), _circle_points(lambda1, r1, m)


def gs_evidence(sym: Symbol, report: ConditionReport, m: int = 12, n: int = 512, J: int = 8) -> SpanEvidence:
    """
    Check numerically that eigenvectors at lambdas near lambda0 and lambda1 approximate e_0..e_{J-1}.

    For m' in {m/4, m/2, m} the first m' lambdas of each circle contribute all N monomial
    eigenvectors; each e_j is projected onto their span by least squares.

    Args:
        sym (Symbol): Symbol
        report (ConditionReport): Classification carrying the spe witnesses
        m (int): Number of lambdas per circle
        n (int): Truncation length
        J (int): Number of basis vectors tested

    Returns:
        SpanEvidence: Residual table

    Raises:
        LambdaNotInHole: If the report has no spe witnesses
    """
    if not report.spe_ok:
        raise LambdaNotInHole("Span evidence needs zero-count witnesses inside and outside the disk")
    inner, outer = evidence_lambdas(sym, report.spe.lambda0, report.spe.lambda1, m)
    lambdas = inner + outer
    section = toeplitz_section(sym, n)
    evidence = SpanEvidence(lambdas=lambdas, n=n)

    def columns_at(lam: complex) -> Tuple[complex, List[np.ndarray], str]:
        try:
            validate_lambda(sym, lam)
            vectors = [eigenvector(sym, spec, n, section, validate=False).coeffs
                       for spec in monomial_specs(sym, lam)]
            return lam, [v / np.linalg.norm(v) for v in vectors], ""
        except AnalysisError as e:
            return lam, [], e.message

    with ThreadPoolExecutor(max_workers=config.get_thread_count()) as executor:
        results = list(executor.map(columns_at, lambdas))

    blocks: List[List[np.ndarray]] = []  # inner circle first, then outer
    for lam, vectors, reason in results:
        if reason:
            logger.warning(f"Skipping lambda = {lam}: {reason}")
            evidence.skipped.append({"lambda": lam, "reason": reason})
        blocks.append(vectors)

    sizes = sorted({max(1, m // 4), max(1, m // 2), m})
    for size in sizes:
        chosen = blocks[:size] + blocks[m: m + size]
        cols = [v for block in chosen for v in block]
        if not cols:
            continue
        A = np.column_stack(cols)
        for j in range(min(J, n)):
            target = np.zeros(n, dtype=complex)
            target[j] = 1.0
            x, *_ = linalg.lstsq(A, target)
            evidence.rows.append({"m": size, "j": j, "residual": float(np.linalg.norm(A @ x - target))})
        logger.info(f"Span evidence with {size} lambdas per circle: max residual {evidence.max_residual(size):.3g}")
    return evidence
