"""
Boundary curves t -> Phi(rho e^{it}): adaptive sampling, self-intersections
and the general-position diagnostics.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional
import logging

import numpy as np
from scipy.optimize import minimize_scalar

import config
from symbols.core import MapBase
from utils.error_handler import MeshOverflow
from valence.counting import check_radius

# Configure logging
logging.basicConfig(level=logging.INFO,
                   format='%(asctime)s - %(name)s - %(levelname)s - %(message)s')
logger = logging.getLogger(__name__)

INITIAL_SAMPLES = 1024
MAX_INTERSECTIONS = 4096
MAX_BUCKET = 64
NEWTON_STEPS = 30


def _cross(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return (np.conj(a) * b).imag


@dataclass(frozen=True)
class SelfIntersection:
    """Crossing of the curve with itself at parameters t1 < t2."""

    t1: float
    t2: float
    point: complex
    angle: float
    refined: bool = True
    simple: bool = True

    def to_dict(self) -> Dict[str, Any]:
        return {"t1": self.t1, "t2": self.t2, "point": [self.point.real, self.point.imag],
                "angle_deg": self.angle, "refined": self.refined, "simple": self.simple}


@dataclass
class BoundaryCurve:
    """Adaptively sampled image of the circle |z| = radius."""

    radius: float
    t: np.ndarray
    values: np.ndarray
    derivatives: np.ndarray
    mesh: float
    refinements: int = 0
    self_intersections: List[SelfIntersection] = field(default_factory=list)
    overlapping: bool = False

    @property
    def size(self) -> int:
        return int(self.t.size)

    @property
    def diameter(self) -> float:
        return float(np.hypot(np.ptp(self.values.real), np.ptp(self.values.imag)))

    @property
    def spacing(self) -> float:
        """Largest distance between adjacent samples, closing segment included."""
        return float(np.max(np.abs(np.roll(self.values, -1) - self.values)))

    @property
    def band(self) -> float:
        return 2.0 * self.spacing

    def tangents(self) -> np.ndarray:
        """d/dt of the curve at the samples."""
        return 1j * self.radius * np.exp(1j * self.t) * self.derivatives

    def bbox(self) -> tuple:
        return (float(self.values.real.min()), float(self.values.real.max()),
                float(self.values.imag.min()), float(self.values.imag.max()))

    def curvature_bound(self) -> float:
        """Largest discrete turning angle per unit arc length."""
        step = np.roll(self.values, -1) - self.values
        turn = np.abs(np.angle(np.roll(step, -1) / step))
        length = 0.5 * (np.abs(step) + np.abs(np.roll(step, -1)))
        return float(np.max(turn / np.maximum(length, 1e-300)))

    def to_rows(self) -> List[Dict[str, float]]:
        return [{"t": float(t), "re": float(v.real), "im": float(v.imag)} for t, v in zip(self.t, self.values)]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "radius": self.radius,
            "samples": self.size,
            "refinements": self.refinements,
            "diameter": self.diameter,
            "spacing": self.spacing,
            "band": self.band,
            "overlapping": self.overlapping,
            "self_intersections": [s.to_dict() for s in self.self_intersections],
        }


def _refine_samples(sym: MapBase, rho: float, target: float):
    n = INITIAL_SAMPLES
    t = 2.0 * np.pi * np.arange(n) / n
    values, slopes = sym.evaluate_with_derivative(rho * np.exp(1j * t))
    passes = 0
    while True:
        gaps = np.abs(np.roll(values, -1) - values)
        bad = gaps > target
        if not np.any(bad):
            break
        if t.size + int(bad.sum()) > config.MAX_CURVE_SAMPLES:
            raise MeshOverflow(f"Curve sampling needs more than {config.MAX_CURVE_SAMPLES} samples",
                               {"samples": int(t.size), "target_spacing": target})
        t_next = np.append(t[1:], t[0] + 2.0 * np.pi)
        mids = 0.5 * (t[bad] + t_next[bad])
        new_values, new_slopes = sym.evaluate_with_derivative(rho * np.exp(1j * mids))
        t = np.concatenate([t, mids])
        values = np.concatenate([values, new_values])
        slopes = np.concatenate([slopes, new_slopes])
        order = np.argsort(t, kind="stable")
        t, values, slopes = t[order], values[order], slopes[order]
        passes += 1
    return t, values, slopes, passes


def _candidate_pairs(start: np.ndarray, end: np.ndarray, cell: float):
    """Pairs of non-adjacent segments sharing a hash cell (segment length <= cell)."""
    n = start.size
    lo_x = np.floor(np.minimum(start.real, end.real) / cell).astype(np.int64)
    hi_x = np.floor(np.maximum(start.real, end.real) / cell).astype(np.int64)
    lo_y = np.floor(np.minimum(start.imag, end.imag) / cell).astype(np.int64)
    hi_y = np.floor(np.maximum(start.imag, end.imag) / cell).astype(np.int64)
    seg = np.arange(n)
    span = np.int64(1) << 31
    keys = []
    for xs in (lo_x, hi_x):
        for ys in (lo_y, hi_y):
            keys.append(np.stack([xs * span + ys, seg], axis=1))
    table = np.unique(np.concatenate(keys), axis=0)
    key, owner = table[:, 0], table[:, 1]
    pairs = []
    crowded = False
    for gap in range(1, MAX_BUCKET + 1):
        if gap >= key.size:
            break
        same = key[gap:] == key[:-gap]
        if not np.any(same):
            break
        if gap == MAX_BUCKET:
            crowded = True
            break
        pairs.append(np.stack([owner[:-gap][same], owner[gap:][same]], axis=1))
    if not pairs:
        return np.zeros((0, 2), dtype=np.int64), crowded
    pairs = np.sort(np.concatenate(pairs), axis=1)
    apart = (pairs[:, 1] - pairs[:, 0] > 1) & ~((pairs[:, 0] == 0) & (pairs[:, 1] == n - 1))
    pairs = np.unique(pairs[apart], axis=0)
    return pairs, crowded


def _newton(sym: MapBase, rho: float, t1: np.ndarray, t2: np.ndarray):
    """Solve curve(t1) = curve(t2) by 2-D Newton, vectorized over crossings."""
    converged = np.zeros(t1.shape, dtype=bool)
    for _ in range(NEWTON_STEPS):
        z1, z2 = rho * np.exp(1j * t1), rho * np.exp(1j * t2)
        f1, d1 = sym.evaluate_with_derivative(z1)
        f2, d2 = sym.evaluate_with_derivative(z2)
        a = 1j * z1 * d1
        b = -1j * z2 * d2
        r = f1 - f2
        det = _cross(a, b)
        safe = np.abs(det) > 1e-300
        # Cramer's rule for [a b] (dt1, dt2) = -r over the reals
        dt1 = np.where(safe, -_cross(r, b) / np.where(safe, det, 1.0), 0.0)
        dt2 = np.where(safe, -_cross(a, r) / np.where(safe, det, 1.0), 0.0)
        t1 = t1 + dt1
        t2 = t2 + dt2
        converged = safe & (np.abs(dt1) < 1e-10) & (np.abs(dt2) < 1e-10)
        if np.all(converged):
            break
    return t1, t2, converged


def find_self_intersections(sym: MapBase, curve: BoundaryCurve) -> None:
    """
    Locate self-intersections by a hashed segment sweep, then polish with Newton.

    Results are stored on the curve; a curve with more crossings than the
    listing cap (multiply traced curves) is flagged as overlapping.
    """
    start = curve.values
    end = np.roll(curve.values, -1)
    cell = max(curve.spacing, 1e-300)
    pairs, crowded = _candidate_pairs(start, end, cell)
    if pairs.size == 0:
        curve.self_intersections = []
        curve.overlapping = crowded
        return
    i, j = pairs[:, 0], pairs[:, 1]
    r, s = end[i] - start[i], end[j] - start[j]
    qp = start[j] - start[i]
    denom = _cross(r, s)
    nonzero = np.abs(denom) > 1e-300
    denom = np.where(nonzero, denom, 1.0)
    u = _cross(qp, s) / denom
    v = _cross(qp, r) / denom
    hit = nonzero & (u >= 0) & (u < 1) & (v >= 0) & (v < 1)
    i, j, u, v = i[hit], j[hit], u[hit], v[hit]
    overlapping = crowded or i.size > MAX_INTERSECTIONS
    if i.size > MAX_INTERSECTIONS:
        i, j, u, v = i[:MAX_INTERSECTIONS], j[:MAX_INTERSECTIONS], u[:MAX_INTERSECTIONS], v[:MAX_INTERSECTIONS]

    t_end = np.append(curve.t[1:], curve.t[0] + 2.0 * np.pi)
    t1 = curve.t[i] + u * (t_end[i] - curve.t[i])
    t2 = curve.t[j] + v * (t_end[j] - curve.t[j])
    raw_points = start[i] + u * (end[i] - start[i])
    if overlapping:
        refined_t1, refined_t2, ok = t1, t2, np.zeros(t1.shape, dtype=bool)
    else:
        refined_t1, refined_t2, ok = _newton(sym, curve.radius, t1.copy(), t2.copy())
        drift = np.abs(refined_t1 - t1) + np.abs(refined_t2 - t2)
        ok &= drift < 10.0 * np.maximum(t_end[i] - curve.t[i], t_end[j] - curve.t[j])
        refined_t1 = np.where(ok, refined_t1, t1)
        refined_t2 = np.where(ok, refined_t2, t2)

    two_pi = 2.0 * np.pi
    refined_t1, refined_t2 = np.mod(refined_t1, two_pi), np.mod(refined_t2, two_pi)
    lo, hi = np.minimum(refined_t1, refined_t2), np.maximum(refined_t1, refined_t2)
    z_lo, z_hi = curve.radius * np.exp(1j * lo), curve.radius * np.exp(1j * hi)
    p_lo, d_lo = sym.evaluate_with_derivative(z_lo)
    _, d_hi = sym.evaluate_with_derivative(z_hi)
    turn = np.abs(np.angle((1j * z_lo * d_lo) / (1j * z_hi * d_hi)))
    angles = np.degrees(np.minimum(turn, np.pi - turn))
    points = np.where(ok, p_lo, raw_points)

    found: List[SelfIntersection] = []
    seen = set()
    for k in np.argsort(lo, kind="stable"):
        key = (round(float(lo[k]), 8), round(float(hi[k]), 8))
        if key in seen:
            continue
        seen.add(key)
        found.append(SelfIntersection(float(lo[k]), float(hi[k]), complex(points[k]), float(angles[k]),
                                      refined=bool(ok[k])))
    # a point hit by more than two parameters is not a simple crossing
    tol = 1e-9 * max(curve.diameter, 1e-300)
    location = np.array([s.point for s in found])
    for idx, item in enumerate(found):
        if np.sum(np.abs(location - item.point) < tol) > 1:
            found[idx] = SelfIntersection(item.t1, item.t2, item.point, item.angle, item.refined, simple=False)
    curve.self_intersections = found
    curve.overlapping = overlapping


def build_curve(sym: MapBase, rho: float = 1.0, mesh: Optional[float] = None,
                intersections: bool = True) -> BoundaryCurve:
    """
    Sample the boundary curve adaptively and locate its self-intersections.

    Args:
        sym (MapBase): Symbol, resolvent or analytic map
        rho (float): Circle radius
        mesh (Optional[float]): Maximal adjacent spacing relative to the curve diameter
        intersections (bool): Whether to run the self-intersection search

    Returns:
        BoundaryCurve: The sampled curve

    Raises:
        MeshOverflow: If the sample cap is exceeded
    """
    mesh = config.CURVE_MESH if mesh is None else float(mesh)
    check_radius(sym, rho)
    t0 = 2.0 * np.pi * np.arange(INITIAL_SAMPLES) / INITIAL_SAMPLES
    coarse = sym.evaluate(rho * np.exp(1j * t0))
    diameter = float(np.hypot(np.ptp(coarse.real), np.ptp(coarse.imag)))
    target = mesh * max(diameter, 1e-12)
    t, values, slopes, passes = _refine_samples(sym, rho, target)
    curve = BoundaryCurve(radius=float(rho), t=t, values=values, derivatives=slopes, mesh=mesh,
                          refinements=passes)
    if intersections:
        find_self_intersections(sym, curve)
    logger.info(f"Built curve at rho={rho}: {curve.size} samples, "
                f"{len(curve.self_intersections)} self-intersections")
    return curve


@dataclass
class GeneralPositionReport:
    """Diagnostics for the general-position hypothesis."""

    ok: bool
    simple_transversal: bool
    derivative_ok: bool
    analytic_ok: bool
    intersections: int
    min_angle: Optional[float]
    derivative_min: float
    witnesses: Dict[str, Any] = field(default_factory=dict)
    warnings: List[str] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "ok": self.ok,
            "simple_transversal": self.simple_transversal,
            "derivative_ok": self.derivative_ok,
            "analytic_ok": self.analytic_ok,
            "intersections": self.intersections,
            "min_angle_deg": self.min_angle,
            "derivative_min": self.derivative_min,
            "witnesses": self.witnesses,
            "warnings": self.warnings,
        }


def _critical_points(sym: MapBase, curve: BoundaryCurve, margin: float) -> List[complex]:
    """Points of the circle where |Phi'| dips below the margin, polished by a bounded minimizer."""
    size = np.abs(curve.derivatives)
    low = np.flatnonzero(size < 10.0 * margin)
    points: List[complex] = []
    if low.size == 0:
        return points
    runs = np.split(low, np.flatnonzero(np.diff(low) > 1) + 1)
    for run in runs:
        k = run[int(np.argmin(size[run]))]
        a = curve.t[max(k - 1, 0)]
        b = curve.t[min(k + 1, curve.size - 1)]
        best_t, best = float(curve.t[k]), float(size[k])
        if b > a:
            result = minimize_scalar(lambda s: abs(sym.eval_derivative(curve.radius * np.exp(1j * s))),
                                     bounds=(a, b), method="bounded", options={"xatol": 1e-12})
            if result.fun < best:
                best_t, best = float(result.x), float(result.fun)
        if best < margin:
            z = complex(curve.radius * np.exp(1j * best_t))
            if not any(abs(z - p) < 1e-6 for p in points):
                points.append(z)
    return points


def general_position(sym: MapBase, curve: BoundaryCurve) -> GeneralPositionReport:
    """
    Check the general-position hypothesis on a curve built at rho = 1.

    Args:
        sym (MapBase): The map the curve was built from
        curve (BoundaryCurve): Curve at radius 1

    Returns:
        GeneralPositionReport: Booleans plus witnesses (never raises). A map not
            known to be analytic past the unit circle is never in general position.
    """
    warnings: List[str] = []
    if abs(curve.radius - 1.0) > 1e-12:
        warnings.append(f"curve radius is {curve.radius}, not 1")
    analytic_ok = sym.analytic_radius > 1.0
    if not analytic_ok:
        warnings.append("map is not known to be analytic past the unit circle")
    margin = config.DERIVATIVE_MIN
    crossings = curve.self_intersections
    bad = [s for s in crossings
           if not (s.refined and s.simple and s.angle >= config.TRANSVERSALITY_MIN_DEG)]
    simple = not curve.overlapping and not bad
    critical = _critical_points(sym, curve, margin)
    derivative_min = float(np.min(np.abs(curve.derivatives)))
    derivative_ok = not critical and derivative_min > margin
    witnesses: Dict[str, Any] = {}
    if bad:
        witnesses["non_transversal"] = [s.to_dict() for s in bad[:16]]
    if curve.overlapping:
        warnings.append("curve is multiply traced or overlaps itself")
    if critical:
        witnesses["critical_points"] = [[z.real, z.imag] for z in critical]
    min_angle = min((s.angle for s in crossings), default=None)
    report = GeneralPositionReport(ok=simple and derivative_ok and analytic_ok, simple_transversal=simple,
                                   derivative_ok=derivative_ok, analytic_ok=analytic_ok,
                                   intersections=len(crossings), min_angle=min_angle, derivative_min=derivative_min,
                                   witnesses=witnesses, warnings=warnings)
    if not report.ok:
        logger.warning(f"General position fails: simple_transversal={simple}, derivative_ok={derivative_ok}, "
                       f"analytic_ok={analytic_ok}")
    return report
