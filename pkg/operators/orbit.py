"""
Orbit simulation of finite sections with renormalized iterates.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Dict, Optional
import logging

import numpy as np
import pandas as pd

import config
from operators.toeplitz import toeplitz_section
from symbols.core import Symbol
from utils.error_handler import Overflow

# Configure logging
logging.basicConfig(level=logging.INFO,
                   format='%(asctime)s - %(name)s - %(levelname)s - %(message)s')
logger = logging.getLogger(__name__)

GROWTH_CAP = 1e12


@dataclass
class OrbitResult:
    """Per-step log norms and coverage of the leading two coordinates."""

    frame: pd.DataFrame
    summary: Dict[str, Any]

    def to_dict(self) -> Dict[str, Any]:
        return {"summary": self.summary, "steps": self.frame.to_dict(orient="records")}


def initial_vector(n: int, seed: int) -> np.ndarray:
    """Complex Gaussian coefficients damped by 2^-k."""
    rng = np.random.default_rng(seed)
    x = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return x * 0.5 ** np.arange(n)


def orbit_simulate(sym: Symbol, n: int = 256, steps: int = 200, seed: Optional[int] = None,
                   eps: float = 0.1) -> OrbitResult:
    """
    Iterate x -> T_n x from a random start, renormalizing every step.

    The true iterate is e^L * x_hat with L the accumulated log norm. Coverage
    counts the distinct eps-cells visited by its leading two coordinates,
    restricted to points of modulus between eps and 1. Finite sections never
    witness hypercyclicity; this is a diagnostic.

    Args:
        sym (Symbol): Symbol
        n (int): Section size
        steps (int): Number of iterations
        seed (Optional[int]): RNG seed, config.SEED when omitted
        eps (float): Cell size

    Returns:
        OrbitResult: Step table and summary

    Raises:
        Overflow: If a single step grows the norm by more than 1e12
    """
    seed = config.SEED if seed is None else int(seed)
    section = toeplitz_section(sym, n)
    x = initial_vector(n, seed)
    L = float(np.log(np.linalg.norm(x)))
    x = x / np.linalg.norm(x)
    cells = set()
    rows = []
    leading = []
    collapsed = False
    for step in range(1, steps + 1):
        y = section.apply(x)
        norm = float(np.linalg.norm(y))
        if norm == 0.0 or not np.isfinite(norm):
            if norm == 0.0:
                collapsed = True
                logger.info(f"Orbit collapsed to zero at step {step}")
                break
            raise Overflow(f"Orbit norm is not finite at step {step}", {"step": step})
        if norm > GROWTH_CAP:
            raise Overflow(f"Step {step} grew the norm by {norm:.3g}", {"step": step, "growth": norm})
        L += float(np.log(norm))
        x = y / norm
        with np.errstate(over="ignore"):
            actual = np.exp(L) * x[:2]
        for c in actual:
            if np.isfinite(c) and eps <= abs(c) <= 1.0:
                cells.add((int(np.floor(c.real / eps)), int(np.floor(c.imag / eps))))
        leading.append(actual)
        rows.append({"step": step, "log_norm_growth": L, "coverage": len(cells)})

    frame = pd.DataFrame(rows, columns=["step", "log_norm_growth", "coverage"])
    spread = 0.0
    if leading:
        points = np.concatenate(leading)
        points = points[np.isfinite(points)]
        if points.size:
            spread = float(np.max(np.abs(points)) - np.min(np.abs(points)))
    summary = {
        "n": n,
        "steps": len(rows),
        "seed": seed,
        "eps": eps,
        "collapsed": collapsed,
        "final_log_norm": L,
        "coverage": len(cells),
        "coordinate_spread": spread,
        "note": "finite sections cannot be hypercyclic; coverage is a diagnostic only",
    }
    logger.info(f"Orbit of {len(rows)} steps: coverage {len(cells)} cells, log norm {L:.3g}")
    return OrbitResult(frame=frame, summary=summary)
