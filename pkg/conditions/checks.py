"""
The necessary condition, the spectral condition on holes, and the three
sufficient conditions (maximal valence, increasing argument, descending
valence chains), plus the region-based spectrum estimate.
"""
from __future__ import annotations

from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Sequence, Tuple
import logging

import numpy as np
import pandas as pd

import config
from symbols.core import MapBase, Symbol, resolvent
from utils.error_handler import AnalysisError, LambdaInRange, LambdaNotInHole, TooCloseToCurve
from valence.counting import preimage_count, preimage_counts
from valence.curve import BoundaryCurve, GeneralPositionReport, build_curve, general_position
from valence.regions import RegionMap, adaptive_region_map

# Configure logging
logging.basicConfig(level=logging.INFO,
                   format='%(asctime)s - %(name)s - %(levelname)s - %(message)s')
logger = logging.getLogger(__name__)

SPE_MARGIN = 1e-3
CROSSING_SAMPLES = 64
IAC_MAX_SAMPLES = 2 ** 20
SMOOTHNESS_NOTE = "arc smoothness is judged from sampled curvature only; C2 regularity is not certified"


class Status(str, Enum):
    PASS = "pass"
    FAIL = "fail"
    INCONCLUSIVE = "inconclusive"


@dataclass
class CheckResult:
    """Tri-state outcome of a condition check with its evidence."""

    name: str
    status: Status
    details: Dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.status == Status.PASS

    def to_dict(self) -> Dict[str, Any]:
        return {"status": self.status.value, **self.details}


@dataclass
class NecessaryResult:
    ok: bool
    max_count: int
    witness: Optional[Dict[str, Any]] = None

    def to_dict(self) -> Dict[str, Any]:
        return {"ok": self.ok, "max_count": self.max_count, "witness": self.witness}


@dataclass
class SpeResult:
    ok: bool
    lambda0: Optional[complex] = None
    lambda1: Optional[complex] = None

    def to_dict(self) -> Dict[str, Any]:
        return {"ok": self.ok, "lambda0": self.lambda0, "lambda1": self.lambda1}


def rho_plus(sym: MapBase) -> float:
    """Radius slightly past the unit circle used for closed-disk counts."""
    return float(min(1.01, 0.5 * (1.0 + sym.analytic_radius)))


def crossing_counts(sym: MapBase, curve: BoundaryCurve, limit: int = CROSSING_SAMPLES) -> List[Tuple[complex, int]]:
    """
    Preimage counts in the four sectors around transversal self-intersections.

    Around a crossing the counts are a, a+1, a+1, a+2, so these sample points find
    intermediate valences even when the regions are too thin for a grid.
    """
    found: List[Tuple[complex, int]] = []
    crossings = [s for s in curve.self_intersections if s.refined and s.angle > 0]
    crossings = sorted(crossings, key=lambda s: -s.angle)[:limit]
    if not crossings:
        return found
    points = np.array([s.point for s in curve.self_intersections])
    scale = 1e-4 * max(curve.diameter, 1e-12)
    for s in crossings:
        others = np.abs(points - s.point)
        others = others[others > 0]
        delta = min(scale, 0.25 * float(others.min())) if others.size else scale
        z1, z2 = curve.radius * np.exp(1j * s.t1), curve.radius * np.exp(1j * s.t2)
        a = 1j * z1 * sym.eval_derivative(z1)
        b = 1j * z2 * sym.eval_derivative(z2)
        a, b = a / abs(a), b / abs(b)
        for u in (a + b, a - b, -(a + b), b - a):
            if abs(u) == 0:
                continue
            w = s.point + delta * u / abs(u)
            try:
                found.append((complex(w), preimage_count(sym, w, curve.radius, curve=curve)))
            except AnalysisError:
                continue
    return found


def check_necessary(rmap: RegionMap, N: int, extra: Sequence[Tuple[complex, int]] = ()) -> NecessaryResult:
    """
    The symbol must be N-valent: no component may have more than N preimages.

    Args:
        rmap (RegionMap): Map at rho = 1
        N (int): Pole count of the symbol in the disk
        extra (Sequence[Tuple[complex, int]]): Additional (point, count) samples

    Returns:
        NecessaryResult: Flag, maximal count and a witness when violated
    """
    counted = [c for c in rmap.components if c.k >= 0]
    max_k = max((c.k for c in counted), default=0)
    witness = None
    over = [c for c in counted if c.k > N]
    if over:
        worst = max(over, key=lambda c: c.k)
        witness = {"component": worst.id, "k": worst.k,
                   "w": complex(rmap.to_value(np.array([worst.representative]))[0])}
    for point, count in extra:
        max_k = max(max_k, count)
        if count > N and witness is None:
            witness = {"component": None, "k": count, "w": complex(rmap.to_value(np.array([point]))[0])}
    return NecessaryResult(ok=witness is None, max_count=max_k, witness=witness)


def check_spe(rmap: RegionMap, sym: Optional[MapBase] = None) -> SpeResult:
    """
    Look for zero-count points inside the disk and outside its closure.

    The deepest admissible cell (largest clearance from the band) is chosen on
    each side; with a symbol the witnesses are re-counted directly.

    Args:
        rmap (RegionMap): Map covering the closed disk and some of its exterior
        sym (Optional[MapBase]): Symbol used to re-count the witnesses

    Returns:
        SpeResult: Flag and witnesses lambda0 (|.| < 1), lambda1 (|.| > 1)
    """
    zero = [c.id for c in rmap.components if c.k == 0]
    if not zero:
        return SpeResult(ok=False)
    floor = 1.5 * max(rmap.dx, rmap.dy)
    rows, cols = np.nonzero(np.isin(rmap.labels, zero) & (rmap.clearance >= floor))
    if rows.size == 0:
        return SpeResult(ok=False)
    depth = rmap.clearance[rows, cols]
    values = rmap.to_value(rmap.cell_centers(rows, cols))
    finite = np.isfinite(values)
    picks: List[Optional[complex]] = []
    for side in (finite & (np.abs(values) < 1.0 - SPE_MARGIN), finite & (np.abs(values) > 1.0 + SPE_MARGIN)):
        candidates = np.flatnonzero(side)
        choice = None
        for idx in candidates[np.argsort(-depth[candidates], kind="stable")][:8]:
            lam = complex(values[idx])
            if sym is not None:
                try:
                    if preimage_count(sym, lam, 1.0) != 0:
                        continue
                except AnalysisError:
                    continue
            choice = lam
            break
        picks.append(choice)
    return SpeResult(ok=picks[0] is not None and picks[1] is not None, lambda0=picks[0], lambda1=picks[1])


def check_mvc(sym: Symbol, N: Optional[int] = None, rmap: Optional[RegionMap] = None,
              grid_n: Optional[int] = None, mesh: Optional[float] = None,
              center: Optional[complex] = None) -> CheckResult:
    """
    Maximal valence on the closed disk: every attained value is attained N times.

    Counts are taken at rho_plus, just past the unit circle. With `center`
    the map is built for the resolvent at that point (same counts, better
    scaled plane).

    Args:
        sym (Symbol): Symbol
        N (Optional[int]): Pole count (defaults to the symbol's)
        rmap (Optional[RegionMap]): Prebuilt map at rho_plus
        grid_n (Optional[int]): Grid size when the map is built here
        mesh (Optional[float]): Curve mesh
        center (Optional[complex]): Resolvent center for the working plane

    Returns:
        CheckResult: pass, fail with a counterexample, or inconclusive for A(D)-only tails
    """
    N = sym.degree if N is None else N
    if sym.analytic_radius <= 1.0:
        return CheckResult("mvc", Status.INCONCLUSIVE,
                           {"reason": "tail only known in A(D); no counts on the closed disk"})
    rp = rho_plus(sym)
    target = sym if center is None else resolvent(sym, center, check=False)
    if rmap is None:
        curve = build_curve(target, rp, mesh)
        rmap = adaptive_region_map(target, rp, grid_n, curve=curve)
    for point, count in crossing_counts(target, rmap.curve):
        if count >= 1 and count != N:
            w = complex(rmap.to_value(np.array([point]))[0])
            return CheckResult("mvc", Status.FAIL, {"rho_plus": rp, "counterexample": w, "count": count,
                                                    "source": "crossing"})
    for comp in rmap.components:
        if comp.k >= 1 and comp.k != N:
            w = complex(rmap.to_value(np.array([comp.representative]))[0])
            return CheckResult("mvc", Status.FAIL, {"rho_plus": rp, "counterexample": w, "count": comp.k,
                                                    "source": "component", "component": comp.id})
    details: Dict[str, Any] = {"rho_plus": rp, "k_values": sorted({c.k for c in rmap.components})}
    if rmap.dropped:
        details["warning"] = f"{len(rmap.dropped)} fragments below grid resolution were not counted"
    return CheckResult("mvc", Status.PASS, details)


def _turning_bound(values: np.ndarray) -> float:
    step = np.roll(values, -1) - values
    turn = np.abs(np.angle(np.roll(step, -1) / step))
    length = 0.5 * (np.abs(step) + np.abs(np.roll(step, -1)))
    return float(np.max(turn / np.maximum(length, 1e-300)))


def check_iac(sym: Symbol, lam: complex, samples: Optional[int] = None) -> CheckResult:
    """
    Increasing argument: t -> arg h_lambda(e^{it}) must be strictly increasing.

    Args:
        sym (Symbol): Symbol
        lam (complex): Spectral parameter outside the closure of the range
        samples (Optional[int]): Initial sample count (doubled while phase steps are large)

    Returns:
        CheckResult: Status with lambda, minimal arg-derivative and total increment

    Raises:
        LambdaInRange: If lambda is (nearly) attained by the symbol
    """
    h = resolvent(sym, lam)
    n = config.IAC_SAMPLES if samples is None else int(samples)
    while True:
        t = 2.0 * np.pi * np.arange(n) / n
        z = np.exp(1j * t)
        values, slopes = h.evaluate_with_derivative(z)
        phase = np.unwrap(np.angle(np.append(values, values[0])))
        steps = np.diff(phase)
        if np.max(np.abs(steps)) < 0.25 * np.pi or n >= IAC_MAX_SAMPLES:
            break
        n *= 2
    derivative = (z * slopes / values).real
    total = float(phase[-1] - phase[0])
    winding = int(round(total / (2.0 * np.pi)))
    min_derivative = float(np.min(derivative))
    ok = (float(np.min(steps)) > 0 and min_derivative > config.DERIVATIVE_MIN and winding >= 1
          and abs(total - 2.0 * np.pi * winding) < 1e-6)
    details = {"lambda": complex(lam), "min_derivative": min_derivative, "total_increment": total,
               "winding": winding, "zeros_expected": sym.degree, "samples": n,
               "curvature_bound": _turning_bound(values), "note": SMOOTHNESS_NOTE}
    return CheckResult("iac", Status.PASS if ok else Status.FAIL, details)


def iac_lattice(rmap: RegionMap, lambda0: Optional[complex] = None, count: int = 16) -> List[complex]:
    """
    Sample lambdas spread over the zero-count component holding lambda0
    (or over all zero-count components).
    """
    if lambda0 is not None:
        comp = rmap.component_of_value(lambda0)
        ids = [comp.id] if comp is not None and comp.k == 0 else []
    else:
        ids = [c.id for c in rmap.components if c.k == 0]
    if not ids:
        return []
    floor = 2.0 * max(rmap.dx, rmap.dy)
    rows, cols = np.nonzero(np.isin(rmap.labels, ids) & (rmap.clearance >= floor))
    if rows.size == 0:
        return []
    picks = np.unique(np.linspace(0, rows.size - 1, count).astype(int))
    values = rmap.to_value(rmap.cell_centers(rows[picks], cols[picks]))
    out = [complex(lambda0)] if lambda0 is not None else []
    out.extend(complex(v) for v in values if np.isfinite(v))
    return out[:count]


def search_iac(sym: Symbol, lambdas: Sequence[complex]) -> CheckResult:
    """
    Run check_iac over a set of lambdas in parallel and keep the best.

    A failure means no lambda passed; it is not a disproof.
    """
    lambdas = [complex(lam) for lam in lambdas]
    if not lambdas:
        return CheckResult("iac", Status.INCONCLUSIVE, {"reason": "no admissible lambda to try"})

    def run(lam: complex):
        try:
            return check_iac(sym, lam)
        except LambdaInRange as e:
            return CheckResult("iac", Status.INCONCLUSIVE, {"lambda": lam, "reason": e.message})

    with ThreadPoolExecutor(max_workers=config.get_thread_count()) as executor:
        results = list(executor.map(run, lambdas))
    tried = [r for r in results if "min_derivative" in r.details]
    if not tried:
        return CheckResult("iac", Status.INCONCLUSIVE, {"reason": "every candidate lambda lies in the range",
                                                        "lambdas_tried": len(lambdas)})
    passing = [r for r in tried if r.passed]
    best = max(passing or tried, key=lambda r: r.details["min_derivative"])
    details = dict(best.details)
    details["lambdas_tried"] = len(lambdas)
    details["lambdas_passing"] = len(passing)
    return CheckResult("iac", Status.PASS if passing else Status.FAIL, details)


def descending_chains(rmap: RegionMap, target: int) -> Dict[int, List[int]]:
    """
    Breadth-first search from a zero-count component up strictly ascending counts.

    Returns:
        Dict[int, List[int]]: For every reachable component, the chain
            G_k, G_{k-1}, ..., G_1, target
    """
    parent: Dict[int, Optional[int]] = {target: None}
    queue = deque([target])
    while queue:
        current = queue.popleft()
        k = rmap.components[current].k
        for nxt in rmap.neighbors(current):
            if nxt not in parent and rmap.components[nxt].k == k + 1:
                parent[nxt] = current
                queue.append(nxt)
    chains: Dict[int, List[int]] = {}
    for cid in parent:
        if cid == target:
            continue
        chain = [cid]
        while parent[chain[-1]] is not None:
            chain.append(parent[chain[-1]])
        chains[cid] = chain
    return chains


def validate_chain(rmap: RegionMap, chain: Sequence[int]) -> bool:
    """Consecutive components adjacent and counts descending by exactly one down to zero."""
    if not chain or rmap.components[chain[-1]].k != 0:
        return False
    for a, b in zip(chain, chain[1:]):
        if not rmap.has_edge(a, b) or rmap.components[a].k != rmap.components[b].k + 1:
            return False
    return True


def _chain_check(name: str, rmap: RegionMap, targets: Dict[str, int],
                 gp: Optional[GeneralPositionReport]) -> CheckResult:
    certificates: Dict[str, Dict[str, List[int]]] = {}
    blocked: List[Dict[str, Any]] = []
    trees = {label: descending_chains(rmap, target) for label, target in targets.items()}
    for comp in rmap.components:
        if comp.k < 1:
            continue
        chains = {label: tree.get(comp.id) for label, tree in trees.items()}
        missing = [label for label, chain in chains.items() if chain is None]
        if missing:
            blocked.append({"component": comp.id, "k": comp.k, "targets": missing,
                            "representative": comp.representative})
        else:
            certificates[str(comp.id)] = chains
    details: Dict[str, Any] = {"targets": targets, "certificates": certificates, "blocked": blocked}
    if gp is not None:
        details["general_position"] = gp.ok
    if gp is not None and not gp.ok:
        details["warning"] = "map is not of general position; chain search is not a certificate"
        return CheckResult(name, Status.INCONCLUSIVE, details)
    if rmap.unresolved_arcs:
        details["unresolved_arcs"] = rmap.unresolved_arcs
    return CheckResult(name, Status.FAIL if blocked else Status.PASS, details)


def _hole_of(rmap: RegionMap, lam: complex, label: str) -> int:
    comp = rmap.component_of_value(lam)
    if comp is None or comp.k != 0:
        raise LambdaNotInHole(f"{label} = {complex(lam)} is not inside a zero-count component",
                              {"lambda": complex(lam), "k": None if comp is None else comp.k})
    return comp.id


def check_dvc(sym: MapBase, rmap: RegionMap, lambda0: complex, lambda1: complex,
              gp: Optional[GeneralPositionReport] = None) -> CheckResult:
    """
    Descending valence chains: every component with k >= 1 reaches, through
    components with counts decreasing by one, both the hole of lambda0 and
    the hole of lambda1.

    Args:
        sym (MapBase): Symbol (or the resolvent the map was built from)
        rmap (RegionMap): Map at rho = 1, symbol or resolvent coordinates
        lambda0 (complex): Witness in the disk
        lambda1 (complex): Witness outside the closed disk
        gp (Optional[GeneralPositionReport]): General-position diagnostics (computed when omitted)

    Returns:
        CheckResult: Status with per-component chain certificates or blocked components

    Raises:
        LambdaNotInHole: If a witness is not in a zero-count component
    """
    targets = {"lambda0": _hole_of(rmap, lambda0, "lambda0"), "lambda1": _hole_of(rmap, lambda1, "lambda1")}
    if gp is None:
        gp = general_position(sym, rmap.curve)
    return _chain_check("dvc", rmap, targets, gp)


def check_dvc_prime(h: MapBase, rmap: RegionMap, gp: Optional[GeneralPositionReport] = None) -> CheckResult:
    """
    Chains down to the unbounded zero-count component of an analytic map h.

    Args:
        h (MapBase): Analytic map (or resolvent) the map was built from
        rmap (RegionMap): Its region map at rho = 1
        gp (Optional[GeneralPositionReport]): General-position diagnostics (computed when omitted)

    Returns:
        CheckResult: Status with certificates or blocked components
    """
    outer = rmap.unbounded
    if outer is None or outer.k != 0:
        return CheckResult("dvc_prime", Status.INCONCLUSIVE,
                           {"reason": "unbounded component missing or has nonzero count"})
    if gp is None:
        gp = general_position(h, rmap.curve)
    return _chain_check("dvc_prime", rmap, {"unbounded": outer.id}, gp)


@dataclass
class SpectrumEstimate:
    """Cells of the complement of Phi(D, N): counts below N, band cells resolved by direct counting."""

    mask: np.ndarray
    rmap: RegionMap
    N: int

    @property
    def fraction(self) -> float:
        return float(self.mask.mean())

    def _values(self) -> np.ndarray:
        rows, cols = np.nonzero(self.mask)
        return self.rmap.to_value(self.rmap.cell_centers(rows, cols))

    def meets_circle(self) -> bool:
        tol = np.hypot(self.rmap.dx, self.rmap.dy)
        return bool(np.any(np.abs(np.abs(self._values()) - 1.0) <= tol))

    def meets_outside(self) -> bool:
        return bool(np.any(np.abs(self._values()) > 1.0))

    def frame(self) -> pd.DataFrame:
        rows, cols = np.indices(self.mask.shape)
        centers = self.rmap.cell_centers(rows.ravel(), cols.ravel())
        return pd.DataFrame({"x": centers.real, "y": centers.imag, "in_spectrum": self.mask.ravel().astype(int)})

    def to_dict(self) -> Dict[str, Any]:
        return {"N": self.N, "grid_n": self.rmap.grid_n, "bbox": list(self.rmap.bbox),
                "cells": int(self.mask.sum()), "fraction": self.fraction,
                "meets_circle": self.meets_circle(), "meets_outside_disk": self.meets_outside()}


def spectrum_estimate(rmap: RegionMap, N: int, sym: Optional[MapBase] = None) -> SpectrumEstimate:
    """
    Estimate the spectrum as the cells where fewer than N preimages exist.

    Band cells are counted directly when the map's symbol is supplied; cells
    whose center sits on the curve stay in the mask (the spectrum is closed).

    Args:
        rmap (RegionMap): Map at rho = 1
        N (int): Pole count
        sym (Optional[MapBase]): Map the region map was built from

    Returns:
        SpectrumEstimate: Cell mask plus summary
    """
    low = [c.id for c in rmap.components if 0 <= c.k < N]
    mask = np.isin(rmap.labels, low)
    band = rmap.labels < 0
    if sym is None:
        mask |= band
    else:
        rows, cols = np.nonzero(band)
        counts = preimage_counts(sym, rmap.cell_centers(rows, cols), rmap.rho, curve=rmap.curve, strict=False)
        mask[rows, cols] = counts < N
    logger.info(f"Spectrum estimate covers {int(mask.sum())} of {mask.size} cells")
    return SpectrumEstimate(mask=mask, rmap=rmap, N=N)
