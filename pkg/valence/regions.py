"""
Region decomposition of the plane off the boundary curve: components of
constant preimage count, holes, and the adjacency graph between components.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple
import logging

import numpy as np
import pandas as pd
from scipy import ndimage

import config
from symbols.core import MapBase, ResolventSymbol
from utils.error_handler import GridTooCoarse, ParamInvalid, TooCloseToCurve
from valence.counting import preimage_count, preimage_counts
from valence.curve import BoundaryCurve, build_curve

# Configure logging
logging.basicConfig(level=logging.INFO,
                   format='%(asctime)s - %(name)s - %(levelname)s - %(message)s')
logger = logging.getLogger(__name__)

MIN_CELLS = 4
MAX_GRID = 4096
ARC_SAMPLES = 5
OVERLAP_SAMPLES = 64
SIDE_OFFSET = 1e-6


@dataclass(frozen=True)
class Component:
    id: int
    k: int
    representative: complex
    bounded: bool
    cells: int

    def to_dict(self) -> Dict[str, Any]:
        return {"id": self.id, "k": self.k, "representative": [self.representative.real, self.representative.imag],
                "bounded": self.bounded, "cells": self.cells}


@dataclass(frozen=True)
class Adjacency:
    """Two components sharing the arc of the curve with parameters in [t0, t1]."""

    a: int
    b: int
    t0: float
    t1: float
    point: complex

    def to_dict(self) -> Dict[str, Any]:
        return {"a": self.a, "b": self.b, "arc": [self.t0, self.t1], "point": [self.point.real, self.point.imag]}


@dataclass
class RegionMap:
    """
    Grid labelling of the plane around the curve.

    labels[row, col] holds a component id, or -1 for cells within the curve
    band. When `center` is set the map lives in resolvent coordinates
    v = 1 / (w - center) of the symbol plane.
    """

    bbox: Tuple[float, float, float, float]
    grid_n: int
    labels: np.ndarray
    clearance: np.ndarray
    components: List[Component]
    adjacency: List[Adjacency]
    curve: BoundaryCurve
    band: float
    rho: float
    center: Optional[complex] = None
    dropped: List[Dict[str, Any]] = field(default_factory=list)
    unresolved_arcs: int = 0
    warnings: List[str] = field(default_factory=list)

    @property
    def dx(self) -> float:
        return (self.bbox[1] - self.bbox[0]) / self.grid_n

    @property
    def dy(self) -> float:
        return (self.bbox[3] - self.bbox[2]) / self.grid_n

    def cell_centers(self, rows: np.ndarray, cols: np.ndarray) -> np.ndarray:
        x = self.bbox[0] + (np.asarray(cols) + 0.5) * self.dx
        y = self.bbox[2] + (np.asarray(rows) + 0.5) * self.dy
        return x + 1j * y

    def cell_of(self, v: complex) -> Optional[Tuple[int, int]]:
        col = int(np.floor((v.real - self.bbox[0]) / self.dx))
        row = int(np.floor((v.imag - self.bbox[2]) / self.dy))
        if 0 <= row < self.grid_n and 0 <= col < self.grid_n:
            return row, col
        return None

    @property
    def unbounded(self) -> Optional[Component]:
        return next((c for c in self.components if not c.bounded), None)

    def component(self, cid: int) -> Component:
        return self.components[cid]

    def component_at(self, v: complex) -> Optional[Component]:
        """Component containing a map-plane point (None inside the band)."""
        cell = self.cell_of(complex(v))
        if cell is None:
            return self.unbounded
        cid = int(self.labels[cell])
        return self.components[cid] if cid >= 0 else None

    def locate(self, w: complex) -> Optional[complex]:
        """Map-plane point of a symbol-plane value (None stands for infinity)."""
        w = complex(w)
        if self.center is None:
            return w
        if w == self.center:
            return None
        return 1.0 / (w - self.center)

    def to_value(self, v: np.ndarray) -> np.ndarray:
        """Symbol-plane values of map-plane points."""
        v = np.asarray(v, dtype=complex)
        if self.center is None:
            return v
        with np.errstate(divide="ignore", invalid="ignore"):
            return self.center + 1.0 / v

    def component_of_value(self, w: complex) -> Optional[Component]:
        v = self.locate(w)
        if v is None:
            return self.unbounded
        return self.component_at(v)

    @property
    def max_k(self) -> int:
        return max((c.k for c in self.components), default=0)

    def holes(self) -> List[Component]:
        return [c for c in self.components if c.bounded and c.k == 0]

    def neighbors(self, cid: int) -> List[int]:
        out = set()
        for edge in self.adjacency:
            if edge.a == cid:
                out.add(edge.b)
            elif edge.b == cid:
                out.add(edge.a)
        return sorted(out)

    def has_edge(self, a: int, b: int) -> bool:
        return b in self.neighbors(a)

    def legend(self) -> Dict[int, int]:
        """Cell count per k value."""
        out: Dict[int, int] = {}
        for c in self.components:
            out[c.k] = out.get(c.k, 0) + c.cells
        return dict(sorted(out.items()))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "bbox": list(self.bbox),
            "grid_n": self.grid_n,
            "rho": self.rho,
            "band": self.band,
            "coordinates": "symbol" if self.center is None else {"resolvent_center": [self.center.real,
                                                                                      self.center.imag]},
            "components": [c.to_dict() for c in self.components],
            "adjacency": [e.to_dict() for e in self.adjacency],
            "legend": {str(k): v for k, v in self.legend().items()},
            "holes": [c.id for c in self.holes()],
            "dropped": self.dropped,
            "unresolved_arcs": self.unresolved_arcs,
            "warnings": self.warnings,
        }

    def grid_frame(self) -> pd.DataFrame:
        """Cell table (x, y, component_id, k) in row-major order."""
        rows, cols = np.indices(self.labels.shape)
        centers = self.cell_centers(rows.ravel(), cols.ravel())
        ids = self.labels.ravel()
        k_of = np.array([c.k for c in self.components] + [-1], dtype=int)
        return pd.DataFrame({"x": centers.real, "y": centers.imag, "component_id": ids, "k": k_of[ids]})


def _bounding_box(curve: BoundaryCurve, cover: Optional[Sequence[complex]]) -> Tuple[float, float, float, float]:
    xmin, xmax, ymin, ymax = curve.bbox()
    if cover:
        pts = np.asarray(cover, dtype=complex)
        xmin, xmax = min(xmin, pts.real.min()), max(xmax, pts.real.max())
        ymin, ymax = min(ymin, pts.imag.min()), max(ymax, pts.imag.max())
    width = max(xmax - xmin, 1e-12)
    height = max(ymax - ymin, 1e-12)
    cx, cy = 0.5 * (xmin + xmax), 0.5 * (ymin + ymax)
    return (cx - 0.625 * width, cx + 0.625 * width, cy - 0.625 * height, cy + 0.625 * height)


def _band_mask(curve: BoundaryCurve, bbox, grid_n: int, band: float) -> np.ndarray:
    xmin, xmax, ymin, ymax = bbox
    dx, dy = (xmax - xmin) / grid_n, (ymax - ymin) / grid_n
    start = curve.values
    end = np.roll(start, -1)
    pieces = np.maximum(np.ceil(np.abs(end - start) / (0.5 * min(dx, dy))).astype(np.int64), 1)
    owner = np.repeat(np.arange(start.size), pieces)
    first = np.cumsum(pieces) - pieces
    frac = (np.arange(owner.size) - first[owner]) / pieces[owner]
    points = start[owner] + frac * (end[owner] - start[owner])
    cols = np.clip(np.floor((points.real - xmin) / dx).astype(np.int64), 0, grid_n - 1)
    rows = np.clip(np.floor((points.imag - ymin) / dy).astype(np.int64), 0, grid_n - 1)
    mask = np.zeros((grid_n, grid_n), dtype=bool)
    mask[rows, cols] = True
    rx = int(np.ceil(band / dx + 0.75))
    ry = int(np.ceil(band / dy + 0.75))
    yy, xx = np.ogrid[-ry:ry + 1, -rx:rx + 1]
    structure = (xx / max(rx, 1)) ** 2 + (yy / max(ry, 1)) ** 2 <= 1.0
    return ndimage.binary_dilation(mask, structure=structure)


def _side_count(sym: MapBase, curve: BoundaryCurve, point: complex) -> Optional[int]:
    try:
        return preimage_count(sym, point, curve.radius, curve=curve)
    except TooCloseToCurve:
        return None


def _adjacency(sym: MapBase, rmap: RegionMap, offset: float) -> Tuple[List[Adjacency], int]:
    curve = rmap.curve
    two_pi = 2.0 * np.pi
    if curve.overlapping or not curve.self_intersections:
        cuts = np.linspace(0.0, two_pi, OVERLAP_SAMPLES + 1) if curve.overlapping else np.array([0.0, two_pi])
        arcs = list(zip(cuts[:-1], cuts[1:]))
    else:
        cuts = np.unique(np.concatenate([[s.t1, s.t2] for s in curve.self_intersections]))
        arcs = list(zip(cuts, np.append(cuts[1:], cuts[0] + two_pi)))
    tiny = SIDE_OFFSET * max(curve.diameter, 1e-12)
    edges: Dict[Tuple[int, int], Adjacency] = {}
    unresolved = 0
    for a, b in arcs:
        tries = 1 if b - a < 1e-6 else ARC_SAMPLES
        found = False
        for i in range(tries):
            s = a + (b - a) * (i + 0.5) / tries
            z = curve.radius * np.exp(1j * s)
            p, dp = sym.evaluate_with_derivative(np.array([z]))
            tangent = 1j * z * dp[0]
            if abs(tangent) == 0:
                continue
            normal = 1j * tangent / abs(tangent)
            sides = []
            for sign in (1.0, -1.0):
                comp = rmap.component_at(p[0] + sign * offset * normal)
                near = _side_count(sym, curve, p[0] + sign * tiny * normal)
                sides.append(comp if comp is not None and near == comp.k else None)
            if sides[0] is None or sides[1] is None or sides[0].id == sides[1].id:
                continue
            key = (min(sides[0].id, sides[1].id), max(sides[0].id, sides[1].id))
            if key not in edges:
                edges[key] = Adjacency(key[0], key[1], float(a % two_pi), float(b % two_pi), complex(p[0]))
            found = True
            break
        if not found:
            unresolved += 1
    return [edges[key] for key in sorted(edges)], unresolved


def region_map(sym: MapBase, rho: float = 1.0, grid_n: Optional[int] = None, mesh: Optional[float] = None,
               curve: Optional[BoundaryCurve] = None, strict: bool = True,
               cover: Optional[Sequence[complex]] = None) -> RegionMap:
    """
    Split the plane off the boundary curve into components of constant preimage count.

    Args:
        sym (MapBase): Symbol, resolvent or analytic map
        rho (float): Circle radius
        grid_n (Optional[int]): Cells per side (at most 4096)
        mesh (Optional[float]): Curve mesh used when the curve is built here
        curve (Optional[BoundaryCurve]): Prebuilt curve at radius rho
        strict (bool): Raise GridTooCoarse on fragments instead of dropping them
        cover (Optional[Sequence[complex]]): Extra points the box must contain

    Returns:
        RegionMap: Components, holes and adjacency

    Raises:
        GridTooCoarse: If a component has fewer than 4 cells (strict mode)
        ParamInvalid: If grid_n is out of range
    """
    grid_n = config.GRID_N if grid_n is None else int(grid_n)
    if not 8 <= grid_n <= MAX_GRID:
        raise ParamInvalid(f"grid_n must lie in [8, {MAX_GRID}], got {grid_n}")
    if curve is None or abs(curve.radius - rho) > 1e-15:
        curve = build_curve(sym, rho, mesh)
    band = curve.band
    bbox = _bounding_box(curve, cover)
    mask = _band_mask(curve, bbox, grid_n, band)
    raw, count = ndimage.label(~mask)
    sizes = np.bincount(raw.ravel(), minlength=count + 1)
    small = [i for i in range(1, count + 1) if sizes[i] < MIN_CELLS]
    dx, dy = (bbox[1] - bbox[0]) / grid_n, (bbox[3] - bbox[2]) / grid_n
    dropped: List[Dict[str, Any]] = []
    if small:
        centroids = ndimage.center_of_mass(np.ones_like(raw), raw, small)
        for i, (r, c) in zip(small, centroids):
            dropped.append({"cells": int(sizes[i]),
                            "center": [bbox[0] + (c + 0.5) * dx, bbox[2] + (r + 0.5) * dy]})
        if strict:
            raise GridTooCoarse(f"{len(small)} components have fewer than {MIN_CELLS} cells at grid {grid_n}",
                                {"grid_n": grid_n, "fragments": dropped[:16]})
        logger.warning(f"Dropping {len(small)} fragments smaller than {MIN_CELLS} cells at grid {grid_n}")
    keep = [i for i in range(1, count + 1) if sizes[i] >= MIN_CELLS]
    lookup = np.full(count + 1, -1, dtype=np.int64)
    lookup[keep] = np.arange(len(keep))
    labels = lookup[raw]

    clearance = ndimage.distance_transform_edt(labels >= 0, sampling=(dy, dx))
    positions = ndimage.maximum_position(clearance, raw, keep) if keep else []
    border = set(np.unique(np.concatenate([labels[0], labels[-1], labels[:, 0], labels[:, -1]])).tolist())
    reps = np.array([bbox[0] + (c + 0.5) * dx + 1j * (bbox[2] + (r + 0.5) * dy) for r, c in positions],
                    dtype=complex)
    counts = preimage_counts(sym, reps, rho, curve=curve, strict=False) if reps.size else np.zeros(0, dtype=int)
    components = [Component(id=i, k=int(counts[i]), representative=complex(reps[i]), bounded=i not in border,
                            cells=int(sizes[keep[i]])) for i in range(len(keep))]

    center = complex(sym.lam) if isinstance(sym, ResolventSymbol) else None
    rmap = RegionMap(bbox=bbox, grid_n=grid_n, labels=labels, clearance=clearance, components=components,
                     adjacency=[], curve=curve, band=band, rho=float(rho), center=center, dropped=dropped)
    if any(c.k < 0 for c in components):
        rmap.warnings.append("some representatives could not be counted")
    rx = np.ceil(band / dx + 0.75) + 1.0
    ry = np.ceil(band / dy + 0.75) + 1.0
    offset = max(2.0 * band, float(np.hypot(rx * dx, ry * dy)))
    rmap.adjacency, rmap.unresolved_arcs = _adjacency(sym, rmap, offset)
    jumps = [e for e in rmap.adjacency if abs(components[e.a].k - components[e.b].k) != 1]
    if jumps:
        rmap.warnings.append(f"{len(jumps)} adjacency edges with |dk| != 1")
        logger.warning(f"{len(jumps)} adjacency edges join components whose counts differ by more than one")
    logger.info(f"Region map at grid {grid_n}: {len(components)} components, {len(rmap.adjacency)} edges, "
                f"legend {rmap.legend()}")
    return rmap


def adaptive_region_map(sym: MapBase, rho: float = 1.0, grid_n: Optional[int] = None,
                        mesh: Optional[float] = None, curve: Optional[BoundaryCurve] = None,
                        cover: Optional[Sequence[complex]] = None) -> RegionMap:
    """
    region_map that retries once at twice the grid on GridTooCoarse, then
    falls back to dropping fragments with a warning.
    """
    grid_n = config.GRID_N if grid_n is None else int(grid_n)
    if curve is None or abs(curve.radius - rho) > 1e-15:
        curve = build_curve(sym, rho, mesh)
    try:
        return region_map(sym, rho, grid_n, curve=curve, cover=cover)
    except GridTooCoarse as e:
        logger.warning(f"{e.message}; retrying")
    if 2 * grid_n <= MAX_GRID:
        try:
            return region_map(sym, rho, 2 * grid_n, curve=curve, cover=cover)
        except GridTooCoarse:
            pass
    rmap = region_map(sym, rho, grid_n, curve=curve, strict=False, cover=cover)
    rmap.warnings.append(f"fragments dropped at grid {grid_n}")
    return rmap


def verify_component_counts(sym: MapBase, rmap: RegionMap, samples: int = 32, seed: int = 0) -> Dict[int, bool]:
    """
    Re-count random cells of every component and check they agree with its k.

    Returns:
        Dict[int, bool]: Component id to agreement flag
    """
    rng = np.random.default_rng(seed)
    out: Dict[int, bool] = {}
    for comp in rmap.components:
        rows, cols = np.nonzero(rmap.labels == comp.id)
        pick = rng.choice(rows.size, size=min(samples, rows.size), replace=False)
        points = rmap.cell_centers(rows[pick], cols[pick])
        counts = preimage_counts(sym, points, rmap.rho, curve=rmap.curve, strict=False)
        counts = counts[counts >= 0]
        out[comp.id] = bool(np.all(counts == comp.k))
    return out
