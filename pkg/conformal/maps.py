"""
Conformal maps used by the example constructions: rectangle to disk,
disk onto a sector of an annulus, and finite Blaschke products.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence
import logging

import numpy as np

from symbols.expressions import (Affine, Blaschke, Compose, Exp, Expr, Identity, Log, Mobius,
                                 RectangleDisk)
from utils.error_handler import ParamInvalid

# Configure logging
logging.basicConfig(level=logging.INFO,
                   format='%(asctime)s - %(name)s - %(levelname)s - %(message)s')
logger = logging.getLogger(__name__)

SECTOR_RATIO_MAX = 2.0 * np.sqrt(2.0) - 1.0


@dataclass(frozen=True)
class ConformalMap:
    """A forward map with its inverse, both as expression trees."""

    forward: Expr
    inverse: Optional[Expr] = None
    name: str = ""

    def __call__(self, z):
        return self.forward.evaluate(z)

    def evaluate(self, z) -> np.ndarray:
        return self.forward.evaluate(z)

    def derivative(self, z) -> np.ndarray:
        return self.forward.derivative(z)

    def invert(self, w) -> np.ndarray:
        if self.inverse is None:
            raise ParamInvalid(f"Map '{self.name}' has no inverse")
        return self.inverse.evaluate(w)


@dataclass(frozen=True)
class SectorAnnulusParams:
    """Parameters of the sector {r < |z| < R, -pi/4 + alpha < arg z < pi - alpha} and of the g, h steps."""

    r: float
    R: float
    alpha: float
    eps: float = 0.0
    beta: float = 0.0
    rho: float = 0.995

    def validate(self) -> "SectorAnnulusParams":
        """
        Check the admissible parameter ranges.

        Returns:
            SectorAnnulusParams: self

        Raises:
            ParamInvalid: If any constraint fails
        """
        problems = []
        if not 0 < self.r < self.R < SECTOR_RATIO_MAX * self.r:
            problems.append(f"need 0 < r < R < {SECTOR_RATIO_MAX:.4f} r, got r={self.r}, R={self.R}")
        if not 0 < self.alpha < np.pi / 8:
            problems.append(f"need 0 < alpha < pi/8, got {self.alpha}")
        if not 0 < self.rho < 1:
            problems.append(f"need 0 < rho < 1, got {self.rho}")
        if self.eps < 0:
            problems.append(f"need eps >= 0, got {self.eps}")
        if problems:
            raise ParamInvalid("Invalid sector parameters: " + "; ".join(problems))
        return self

    @property
    def theta_min(self) -> float:
        return -np.pi / 4 + self.alpha

    @property
    def theta_max(self) -> float:
        return np.pi - self.alpha


def rectangle_to_disk(width: float, height: float) -> ConformalMap:
    """
    Conformal bijection from the centered rectangle onto the unit disk.

    Args:
        width (float): Side along the real axis
        height (float): Side along the imaginary axis

    Returns:
        ConformalMap: Forward (rectangle to disk) and inverse (disk to rectangle)

    Raises:
        AspectOverflow: If width/height lies outside [1e-3, 1e3]
    """
    forward = RectangleDisk(Identity(), width, height, inverse=False)
    inverse = RectangleDisk(Identity(), width, height, inverse=True)
    return ConformalMap(forward=forward, inverse=inverse, name=f"rectangle_{width:g}x{height:g}")


def disk_automorphism(a: complex) -> Mobius:
    """z -> (z + a) / (1 + conj(a) z), sending 0 to a."""
    a = complex(a)
    return Mobius(Identity(), 1.0, a, np.conj(a), 1.0)


def sector_annulus_map(params: SectorAnnulusParams, base_point: Optional[complex] = None) -> ConformalMap:
    """
    Map of the unit disk onto the sector of an annulus.

    Built as exp(center + rectangle map inverse), since the logarithm of the
    sector is the rectangle [log r, log R] x (theta_min, theta_max). With a
    base point, a disk automorphism is applied first so that 0 goes to it.

    Args:
        params (SectorAnnulusParams): Sector parameters
        base_point (Optional[complex]): Point of the sector that 0 should map to

    Returns:
        ConformalMap: The map and its inverse
    """
    params.validate()
    width = float(np.log(params.R / params.r))
    height = params.theta_max - params.theta_min
    center = complex(0.5 * np.log(params.r * params.R), 0.5 * (params.theta_min + params.theta_max))
    rect = rectangle_to_disk(width, height)
    inner: Expr = Identity()
    outer_inverse: Expr = rect.forward
    if base_point is not None:
        a = complex(rect.forward.evaluate(np.array([np.log(complex(base_point)) - center]))[0])
        inner = disk_automorphism(a)
        # inverse of z -> (z + a)/(1 + conj(a) z) is z -> (z - a)/(1 - conj(a) z)
        outer_inverse = Mobius(rect.forward, 1.0, -a, -np.conj(a), 1.0)
    forward = Exp(Affine(Compose(rect.inverse, inner), 1.0, center))
    inverse = Compose(outer_inverse, Affine(Log(Identity()), 1.0, -center))
    return ConformalMap(forward=forward, inverse=inverse, name="sector_annulus")


def blaschke(zeros: Sequence[complex], unimodular: complex = 1.0) -> Expr:
    """
    Finite Blaschke product u * prod (z - a) / (1 - conj(a) z).

    Args:
        zeros (Sequence[complex]): Zeros in the open unit disk
        unimodular (complex): Unimodular factor

    Returns:
        Expr: The product as an expression

    Raises:
        ZeroOutsideDisk: If a zero has modulus >= 1 or |unimodular| != 1
    """
    return Blaschke(Identity(), list(zeros), unimodular)
