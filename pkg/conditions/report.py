"""
Classification pipeline: curve, region maps, every condition check, verdict.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Callable, Dict, List, Optional, Sequence
import logging

import numpy as np

from conditions.checks import (CheckResult, NecessaryResult, SpeResult, Status, check_dvc, check_mvc,
                               check_necessary, check_spe, crossing_counts, iac_lattice, search_iac)
from symbols.core import Symbol, resolvent
from utils.error_handler import AnalysisError
from valence.counting import preimage_count
from valence.curve import build_curve, general_position
from valence.regions import RegionMap, adaptive_region_map

# Configure logging
logging.basicConfig(level=logging.INFO,
                   format='%(asctime)s - %(name)s - %(levelname)s - %(message)s')
logger = logging.getLogger(__name__)

UNIT_COVER = (1.25, -1.25, 1.25j, -1.25j)


class Verdict(str, Enum):
    CERTIFIED_MVC = "certified_MVC"
    CERTIFIED_IAC = "certified_IAC"
    CERTIFIED_DVC = "certified_DVC"
    NECESSARY_FAILED = "necessary_failed"
    INCONCLUSIVE = "inconclusive"


@dataclass
class ConditionReport:
    """Outcome of every check plus the verdict they imply."""

    N: int
    necessary: NecessaryResult
    spe: SpeResult
    mvc: CheckResult
    iac: CheckResult
    dvc: CheckResult
    verdict: Verdict = Verdict.INCONCLUSIVE
    general_position: Optional[Dict[str, Any]] = None
    norm_lower_bound: float = 0.0
    notes: List[str] = field(default_factory=list)
    errors: List[Dict[str, Any]] = field(default_factory=list)
    region_map: Optional[RegionMap] = field(default=None, repr=False)
    working_map: Optional[RegionMap] = field(default=None, repr=False)

    @property
    def n_valent_ok(self) -> bool:
        return self.necessary.ok

    @property
    def spe_ok(self) -> bool:
        return self.spe.ok

    def to_dict(self) -> Dict[str, Any]:
        return {
            "N": self.N,
            "verdict": self.verdict.value,
            "n_valent_ok": self.n_valent_ok,
            "necessary": self.necessary.to_dict(),
            "spe_ok": self.spe_ok,
            "spe": self.spe.to_dict(),
            "mvc": self.mvc.to_dict(),
            "iac": self.iac.to_dict(),
            "dvc": self.dvc.to_dict(),
            "general_position": self.general_position,
            "norm_lower_bound": self.norm_lower_bound,
            "notes": self.notes,
            "errors": self.errors,
        }


def decide(necessary: NecessaryResult, spe: SpeResult, mvc: CheckResult, iac: CheckResult,
           dvc: CheckResult) -> Verdict:
    """Apply the verdict rules: necessary failure first, then MVC > IAC > DVC under spe."""
    if not necessary.ok:
        return Verdict.NECESSARY_FAILED
    if not spe.ok:
        return Verdict.INCONCLUSIVE
    if mvc.passed:
        return Verdict.CERTIFIED_MVC
    if iac.passed:
        return Verdict.CERTIFIED_IAC
    if dvc.passed:
        return Verdict.CERTIFIED_DVC
    return Verdict.INCONCLUSIVE


def _skipped(name: str, reason: str) -> CheckResult:
    return CheckResult(name, Status.INCONCLUSIVE, {"reason": reason})


def _guard(name: str, errors: List[Dict[str, Any]], fn: Callable[[], CheckResult]) -> CheckResult:
    try:
        return fn()
    except AnalysisError as e:
        logger.warning(f"{name} check could not complete: {e.message}")
        errors.append({"step": name, **e.to_dict()})
        return _skipped(name, e.message)


def _zero_count(sym: Symbol, lam: Optional[complex]) -> bool:
    if lam is None:
        return False
    try:
        return preimage_count(sym, lam, 1.0) == 0
    except AnalysisError:
        return False


def _pick_lambda0(sym: Symbol, hinted: Sequence[complex], found: Optional[complex]) -> Optional[complex]:
    for lam in list(hinted) + [0j, found]:
        if lam is not None and abs(lam) < 1.0 and _zero_count(sym, lam):
            return complex(lam)
    return None


def _pick_lambda1(sym: Symbol, hinted: Sequence[complex], found: Sequence[Optional[complex]]) -> Optional[complex]:
    for lam in list(hinted) + list(found):
        if lam is not None and abs(lam) > 1.0 and _zero_count(sym, lam):
            return complex(lam)
    return None


def classify(sym: Symbol, lambdas: Optional[Sequence[complex]] = None, grid_n: Optional[int] = None,
             mesh: Optional[float] = None, hints: Sequence[complex] = ()) -> ConditionReport:
    """
    Run every check on a symbol and derive the verdict.

    The coarse map is built for the symbol itself. Once a zero-count point
    lambda0 in the disk is known, the MVC and DVC maps are built for the
    resolvent at lambda0, whose plane keeps holes and islands at comparable
    scales; counts are the same in both planes.

    Args:
        sym (Symbol): Symbol to classify
        lambdas (Optional[Sequence[complex]]): Explicit IAC lambdas (lattice when omitted)
        grid_n (Optional[int]): Grid size for region maps
        mesh (Optional[float]): Curve mesh
        hints (Sequence[complex]): Candidate spe witnesses tried before the map search

    Returns:
        ConditionReport: Checks, verdict and any step errors
    """
    N = sym.degree
    errors: List[Dict[str, Any]] = []
    notes: List[str] = []

    curve = build_curve(sym, 1.0, mesh)
    sup = float(np.max(np.abs(curve.values)))
    if sup < 1.0:
        notes.append(f"sup|Phi| on the circle is {sup:.6g} < 1: the operator is a contraction, "
                     f"so no orbit can be dense")
    rmap = adaptive_region_map(sym, 1.0, grid_n, curve=curve, cover=UNIT_COVER)
    logger.info(f"Symbol map: {len(rmap.components)} components, max k = {rmap.max_k}, N = {N}")

    necessary = check_necessary(rmap, N, crossing_counts(sym, curve))
    if not necessary.ok:
        skip = "skipped: the symbol is not N-valent"
        report = ConditionReport(N=N, necessary=necessary, spe=SpeResult(ok=False), mvc=_skipped("mvc", skip),
                                 iac=_skipped("iac", skip), dvc=_skipped("dvc", skip),
                                 verdict=Verdict.NECESSARY_FAILED, norm_lower_bound=sup, notes=notes,
                                 errors=errors, region_map=rmap)
        logger.info(f"Verdict: {report.verdict.value}")
        return report

    coarse = check_spe(rmap, sym)
    lambda0 = _pick_lambda0(sym, [h for h in hints if abs(h) < 1.0], coarse.lambda0)
    wmap: Optional[RegionMap] = None
    h0 = None
    found1: List[Optional[complex]] = [coarse.lambda1]
    if lambda0 is not None:
        h0 = resolvent(sym, lambda0, check=False)
        wmap = adaptive_region_map(h0, 1.0, grid_n, curve=build_curve(h0, 1.0, mesh))
        found1.insert(0, check_spe(wmap, sym).lambda1)
    lambda1 = _pick_lambda1(sym, [h for h in hints if abs(h) > 1.0], found1)
    spe = SpeResult(ok=lambda0 is not None and lambda1 is not None, lambda0=lambda0, lambda1=lambda1)

    mvc = _guard("mvc", errors, lambda: check_mvc(sym, N, grid_n=grid_n, mesh=mesh, center=lambda0))

    if lambdas is None:
        candidates = [h for h in hints if _zero_count(sym, h)]
        candidates += iac_lattice(wmap if wmap is not None else rmap, lambda0)
        lambdas = list(dict.fromkeys(candidates))
    iac = _guard("iac", errors, lambda: search_iac(sym, lambdas))

    gp_dict = None
    if spe.ok and wmap is not None:
        gp = general_position(h0, wmap.curve)
        gp_dict = gp.to_dict()
        dvc = _guard("dvc", errors, lambda: check_dvc(sym, wmap, lambda0, lambda1, gp))
    else:
        dvc = _skipped("dvc", "no spe witnesses in and outside the disk")

    verdict = decide(necessary, spe, mvc, iac, dvc)
    logger.info(f"Verdict: {verdict.value}")
    return ConditionReport(N=N, necessary=necessary, spe=spe, mvc=mvc, iac=iac, dvc=dvc, verdict=verdict,
                           general_position=gp_dict, norm_lower_bound=sup, notes=notes, errors=errors,
                           region_map=rmap, working_map=wmap)

