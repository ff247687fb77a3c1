"""
Valence geometry: preimage counts, boundary curves and region maps.
"""
from typing import Optional, Tuple
import logging

from symbols.core import MapBase
from valence.counting import companion_count, preimage_count, preimage_counts, winding_number
from valence.curve import BoundaryCurve, GeneralPositionReport, build_curve, general_position
from valence.regions import RegionMap, adaptive_region_map, region_map, verify_component_counts

# Configure logging
logging.basicConfig(level=logging.INFO,
                   format='%(asctime)s - %(name)s - %(levelname)s - %(message)s')
logger = logging.getLogger(__name__)


def analyze_valence(sym: MapBase, rho: float = 1.0, grid_n: Optional[int] = None,
                    mesh: Optional[float] = None) -> Tuple[BoundaryCurve, RegionMap, GeneralPositionReport]:
    """
    Build the boundary curve, its region map and the general-position report.

    Args:
        sym (MapBase): Symbol, resolvent or analytic map
        rho (float): Circle radius
        grid_n (Optional[int]): Grid size
        mesh (Optional[float]): Curve mesh

    Returns:
        Tuple[BoundaryCurve, RegionMap, GeneralPositionReport]: Curve, map and diagnostics
    """
    curve = build_curve(sym, rho, mesh)
    rmap = adaptive_region_map(sym, rho, grid_n, mesh, curve=curve)
    report = general_position(sym, curve)
    logger.info(f"Valence analysis: {len(rmap.components)} components, general position {report.ok}")
    return curve, rmap, report
