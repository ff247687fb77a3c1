"""
Example symbols: the closed-form and conformal constructions, the
Figure 1 and Figure 2 fixtures, and a few classical operators.

Symbols defined as 1/F are put in R(1/z) + tail form by locating the zeros
of F in the disk and peeling the principal parts of 1/F there.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from functools import lru_cache
from math import comb
from typing import Any, Callable, Dict, List, Optional, Tuple
import logging

import numpy as np
from scipy import fft

import config
from conditions.checks import Status, check_dvc_prime, check_spe
from conformal.maps import ConformalMap, SectorAnnulusParams, blaschke, sector_annulus_map
from symbols.core import AnalyticMap, MapBase, Symbol, make_symbol
from symbols.expressions import (Add, Affine, Compose, Const, Expr, Identity, Mobius, Mul, Power, Reciprocal,
                                 ScaleArg, expr_from_dict, polynomial)
from utils.error_handler import AnalysisError, ParamInvalid, PeelFailure
from valence.counting import preimage_count
from valence.curve import general_position
from valence.regions import region_map

# Configure logging
logging.basicConfig(level=logging.INFO,
                   format='%(asctime)s - %(name)s - %(levelname)s - %(message)s')
logger = logging.getLogger(__name__)

CAUCHY_SAMPLES = 512
NEWTON_SEEDS = 32
NEWTON_STEPS = 80
CHECK_RADIUS = 1.0 - 1e-3
CHECK_LOG2 = 16
COEFF_CUTOFF = 1e-13

FIGURE_SECTOR = {"r": 0.5, "R": 0.9, "alpha": 0.3, "eps": 0.05}
# Shift directions for the g step, tried in order. 1 + i puts Psi(0) near arg pi/8;
# -1 + i lies on the symmetry axis of Psi^2, opposite its doubly covered wedge.
SHIFT_DIRECTIONS: Tuple[complex, ...] = (complex(1.0, 1.0), complex(-1.0, 1.0))
FIGURE_GRID = 1024
BETA_STEPS = 26
RHO_CANDIDATES = (config.EXAMPLE_RHO, 0.999, 0.9995, 0.9999, 0.99995, 0.99999,
                  1 - 5e-6, 1 - 1e-6, 1 - 1e-7, 1 - 1e-8, 1 - 1e-9)

PSI_PRESETS: Dict[str, Callable[[], Expr]] = {
    "identity": Identity,
    "half": lambda: polynomial([0.0, 0.5]),
    "quadratic": lambda: polynomial([0.0, 0.5, 0.05]),
}


@dataclass(frozen=True)
class ExampleSymbol:
    """A constructed symbol with the analytic map it came from and witness hints."""

    id: str
    symbol: Symbol
    h: Optional[MapBase] = None
    hints: Tuple[complex, ...] = ()
    params: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return {"id": self.id, "params": self.params, "hints": list(self.hints), "symbol": self.symbol.to_dict()}


# Principal-part peeling

def _circle(center: complex, radius: float, n: int = CAUCHY_SAMPLES) -> Tuple[np.ndarray, np.ndarray]:
    offset = radius * np.exp(2j * np.pi * np.arange(n) / n)
    return center + offset, offset


def _local_winding(F: Expr, center: complex, radius: float) -> int:
    z, _ = _circle(center, radius)
    values = F.evaluate(z)
    turns = np.sum(np.angle(np.roll(values, -1) / values)) / (2.0 * np.pi)
    return int(round(turns))


def locate_zeros(F: Expr, tol: float = 1e-10) -> List[Tuple[complex, int]]:
    """
    Zeros of an analytic F in the unit disk, with multiplicities.

    The total is taken from the winding of F on the circle; Newton runs from a
    seed grid, and each distinct limit gets its multiplicity from a small
    circle around it. Positions are then polished with the first moment of
    F'/F over that circle.

    Args:
        F (Expr): Function analytic on the closed disk, nonzero on the circle
        tol (float): Relative residual accepted for a Newton limit

    Returns:
        List[Tuple[complex, int]]: (zero, multiplicity) pairs

    Raises:
        PeelFailure: If the zeros found do not account for the winding number
    """
    fmap = AnalyticMap(expr=F, analytic_radius=1.0)
    try:
        total = preimage_count(fmap, 0.0, 1.0)
    except AnalysisError as e:
        raise PeelFailure(f"Cannot count zeros on the unit circle: {e.message}") from e
    if total == 0:
        return []
    scale = max(1.0, float(np.median(np.abs(F.evaluate(np.exp(2j * np.pi * np.arange(256) / 256))))))

    xs = np.linspace(-1.0, 1.0, NEWTON_SEEDS + 2)[1:-1]
    z = (xs[None, :] + 1j * xs[:, None]).ravel()
    z = z[np.abs(z) < 0.98]
    with np.errstate(all="ignore"):
        for _ in range(NEWTON_STEPS):
            f, df = F.evaluate_with_derivative(z)
            step = f / df
            z = np.where(np.isfinite(step), z - step, z)
            z = z[np.abs(z) < 1.0]
        residual = np.abs(F.evaluate(z))
    limits = z[np.isfinite(residual) & (residual <= tol * scale)]

    distinct: List[complex] = []
    for p in sorted(limits.tolist(), key=lambda c: (round(c.real, 6), round(c.imag, 6))):
        if all(abs(p - q) > 1e-6 for q in distinct):
            distinct.append(complex(p))

    zeros: List[Tuple[complex, int]] = []
    for i, p in enumerate(distinct):
        others = [abs(p - q) for j, q in enumerate(distinct) if j != i]
        radius = 0.5 * min(others + [1.0 - abs(p)])
        m = _local_winding(F, p, radius)
        if m <= 0:
            continue
        ring, offset = _circle(p, radius)
        f, df = F.evaluate_with_derivative(ring)
        p = p + complex(np.mean(offset * offset * df / f)) / m
        zeros.append((0j if abs(p) < 1e-12 else p, m))
    found = sum(m for _, m in zeros)
    if found != total:
        raise PeelFailure(f"Located {found} zeros in the disk but the winding number is {total}",
                          {"zeros": [[p.real, p.imag, m] for p, m in zeros]})
    return zeros


def _laurent(phi: Expr, p: complex, radius: float, order: int) -> np.ndarray:
    ring, offset = _circle(p, radius)
    values = phi.evaluate(ring)
    return np.array([np.mean(values * offset ** j) for j in range(1, order + 1)])


def _tail_is_analytic(tail: Expr) -> Tuple[bool, np.ndarray]:
    size = 2 ** CHECK_LOG2
    z = CHECK_RADIUS * np.exp(2j * np.pi * np.arange(size) / size)
    coeffs = fft.fft(tail.evaluate(z)) / size
    scale = max(1.0, float(np.max(np.abs(coeffs))))
    negative = np.abs(coeffs[size // 2:])
    return bool(np.max(negative) <= 1e-8 * scale), coeffs[:64] / CHECK_RADIUS ** np.arange(64)


def peel_principal_parts(F: Expr, analytic_radius: float, shift: complex = 0.0) -> Symbol:
    """
    Write shift + 1/F as R(1/z) + tail.

    Args:
        F (Expr): Analytic on a neighborhood of the closed disk, zeros in the disk allowed
        analytic_radius (float): Radius claimed for the residual tail
        shift (complex): Constant added to 1/F

    Returns:
        Symbol: The decomposed symbol

    Raises:
        PeelFailure: If the residual tail is still singular in the disk
    """
    phi = Reciprocal(F)
    zeros = locate_zeros(F)
    poly: List[complex] = [complex(shift)]
    poles: List[Tuple[complex, List[complex]]] = []
    principal: List[Expr] = []
    for i, (p, m) in enumerate(zeros):
        others = [abs(p - q) for j, (q, _) in enumerate(zeros) if j != i]
        radius = 0.5 * min(others + [1.0 - abs(p)])
        coeffs = _laurent(phi, p, radius, m)
        cutoff = COEFF_CUTOFF * max(1.0, float(np.max(np.abs(coeffs))))
        coeffs = np.where(np.abs(coeffs) < cutoff, 0.0, coeffs)
        for j, a in enumerate(coeffs, start=1):
            if a != 0:
                principal.append(Affine(Power(Affine(Identity(), 1.0, -p), -j), a, 0.0))
        if p == 0:
            poly.extend([0j] * max(0, m + 1 - len(poly)))
            for j, a in enumerate(coeffs, start=1):
                poly[j] += a
            continue
        eta = 1.0 / p
        alphas = [0j] * m
        for j, a in enumerate(coeffs, start=1):
            scaled = a * (-p) ** (-j)
            poly[0] += scaled
            for k in range(1, j + 1):
                alphas[k - 1] += scaled * comb(j, k) * eta ** k
        while alphas and alphas[-1] == 0:
            alphas.pop()
        if alphas:
            poles.append((eta, alphas))
    while len(poly) > 1 and poly[-1] == 0:
        poly.pop()

    tail: Expr = phi if not principal else Add(phi, Affine(Add(*principal), -1.0, 0.0))
    ok, taylor = _tail_is_analytic(tail)
    if not ok:
        raise PeelFailure("Residual tail keeps negative Fourier modes after peeling",
                          {"zeros": [[p.real, p.imag, m] for p, m in zeros]})
    if np.all(np.abs(taylor[1:]) <= 1e-12 * max(1.0, float(np.max(np.abs(taylor))))):
        c0 = complex(taylor[0]) if abs(taylor[0]) > 1e-12 else 0j
        poly[0] += c0
        tail = Const(0.0)
    poly[0] = poly[0] if abs(poly[0]) > COEFF_CUTOFF else 0j
    logger.info(f"Peeled {len(zeros)} poles, N1 = {len(poly) - 1}, {len(poles)} rational poles")
    return make_symbol(poly, poles, tail, analytic_radius)


def univalence_evidence(expr: Expr, samples: int = 2048, radius: float = 1.0 - 1e-12) -> Dict[str, Any]:
    """
    Sampled evidence that a map of the disk is univalent.

    Boundary images must be pairwise distinct (spacing above 1e-10 of the
    image diameter) and |derivative| must stay above DERIVATIVE_MIN on 512
    interior points. Samples sit at `radius`, just inside the circle where
    the inverse elliptic maps are finite.

    Args:
        expr (Expr): Map of the disk
        samples (int): Boundary sample count
        radius (float): Sampling radius

    Returns:
        Dict[str, Any]: min_spacing, min_derivative, samples and the ok flag
    """
    t = 2.0 * np.pi * np.arange(samples) / samples
    edge = expr.evaluate(radius * np.exp(1j * t))
    diff = np.abs(edge[:, None] - edge[None, :])
    np.fill_diagonal(diff, np.inf)
    rng = np.random.default_rng(config.SEED)
    inner = np.sqrt(rng.uniform(0.0, 0.98, 512)) * np.exp(2j * np.pi * rng.uniform(0.0, 1.0, 512))
    min_spacing = float(np.min(diff))
    min_derivative = float(np.min(np.abs(expr.derivative(inner))))
    diameter = float(np.hypot(np.ptp(edge.real), np.ptp(edge.imag)))
    ok = bool(np.all(np.isfinite(edge)) and min_spacing > 1e-10 * diameter
              and min_derivative > config.DERIVATIVE_MIN)
    if not ok:
        logger.warning(f"Univalence evidence fails: spacing {min_spacing:.3g}, derivative {min_derivative:.3g}")
    return {"samples": samples, "min_spacing": min_spacing, "min_derivative": min_derivative, "ok": ok}


# Presets

def _psi(params: Dict[str, Any], default: str) -> Expr:
    value = params.get("psi", default)
    if isinstance(value, dict):
        return expr_from_dict(value)
    if value not in PSI_PRESETS:
        raise ParamInvalid(f"Unknown psi preset '{value}'", {"known": sorted(PSI_PRESETS)})
    return PSI_PRESETS[value]()


def _checked_univalent(psi: Expr) -> Dict[str, Any]:
    evidence = univalence_evidence(psi)
    if not evidence["ok"]:
        raise ParamInvalid("psi does not look univalent on the disk", evidence)
    return evidence


def _checked_radius(F: Expr, radius: float) -> float:
    """Shrink the claimed radius until F has no zeros between the unit circle and it."""
    inside = preimage_count(AnalyticMap(expr=F, analytic_radius=1.0), 0.0, 1.0)
    while radius > 1.0 + 1e-6:
        try:
            if preimage_count(AnalyticMap(expr=F, analytic_radius=radius), 0.0, radius) == inside:
                return radius
        except AnalysisError:
            pass
        radius = 1.0 + 0.5 * (radius - 1.0)
    raise ParamInvalid("Inner function vanishes on or just outside the unit circle")


def rolewicz(params: Dict[str, Any]) -> ExampleSymbol:
    alpha = complex(params.get("alpha", 2.0))
    sym = make_symbol([0.0, alpha], analytic_radius=2.0)
    return ExampleSymbol("rolewicz", sym, hints=(0j, complex(0.5 * (1.0 + abs(alpha)))), params={"alpha": alpha})


def tridiagonal(params: Dict[str, Any]) -> ExampleSymbol:
    a = complex(params.get("a", 2.0))
    b = complex(params.get("b", 1.0))
    sym = make_symbol([0.0, a], tail=polynomial([0.0, b]), analytic_radius=2.0)
    return ExampleSymbol("tridiagonal", sym, hints=(0j, complex(abs(a))), params={"a": a, "b": b})


def necessary_fail(params: Dict[str, Any]) -> ExampleSymbol:
    """a/z + b z with |b| > |a|: values inside the boundary ellipse are taken twice while N = 1."""
    a = complex(params.get("a", 1.0))
    b = complex(params.get("b", 2.0))
    if abs(b) <= abs(a):
        raise ParamInvalid(f"need |b| > |a| for a doubly covered value, got a={a}, b={b}")
    sym = make_symbol([0.0, a], tail=polynomial([0.0, b]), analytic_radius=2.0)
    return ExampleSymbol("necessary_fail", sym, params={"a": a, "b": b})


def ex1(params: Dict[str, Any]) -> ExampleSymbol:
    """1 / (Psi o B) for a univalent Psi with Psi(0) = 0 and a finite Blaschke product B."""
    psi = _psi(params, "quadratic")
    univalence = _checked_univalent(psi)
    zeros = [complex(*a) if isinstance(a, (list, tuple)) else complex(a) for a in params.get("zeros", [0.0, 0.0])]
    unimodular = complex(params.get("unimodular", 1.0))
    B = blaschke(zeros, unimodular)
    F = Compose(psi, B)
    radius = float(params.get("analytic_radius", 1.5))
    reflected = [1.0 / abs(a) for a in zeros if a != 0]
    if reflected:
        radius = min(radius, 0.5 * (1.0 + min(reflected)))
    radius = _checked_radius(F, radius)
    sym = peel_principal_parts(F, radius)
    return ExampleSymbol("ex1", sym, params={"zeros": zeros, "unimodular": unimodular, "analytic_radius": radius,
                                           "univalence": univalence})


def ex2(params: Dict[str, Any]) -> ExampleSymbol:
    """1 / Psi^N."""
    psi = _psi(params, "half")
    univalence = _checked_univalent(psi)
    n = int(params.get("N", 3))
    if n < 1:
        raise ParamInvalid(f"N must be positive, got {n}")
    F = Power(psi, n)
    radius = _checked_radius(F, float(params.get("analytic_radius", 2.0)))
    sym = peel_principal_parts(F, radius)
    return ExampleSymbol("ex2", sym, params={"N": n, "analytic_radius": radius, "univalence": univalence})


def ex3(params: Dict[str, Any]) -> ExampleSymbol:
    """
    lambda + 1 / (z^n (1 + eps Psi)).

    With Psi = z the expansion is explicit:
    c_j = (-eps)^(n-j), c_0 = lambda + (-eps)^n and the tail is
    (-eps)^(n+1) z / (1 + eps z).
    """
    n = int(params.get("n", 3))
    eps = float(params.get("eps", 0.01))
    lam = complex(params.get("lam", 0.5))
    if n < 1 or eps < 0:
        raise ParamInvalid(f"need n >= 1 and eps >= 0, got n={n}, eps={eps}")
    record = {"n": n, "eps": eps, "lam": lam}
    hints: Tuple[complex, ...] = (lam,)
    direction = lam / abs(lam) if lam != 0 else 1.0
    hints += (lam + 0.9 / (1.0 + eps) * direction,)
    if "psi" in params:
        F = Mul(Power(Identity(), n), Add(Const(1.0), Affine(_psi(params, "identity"), eps, 0.0)))
        radius = _checked_radius(F, float(params.get("analytic_radius", 1.5)))
        sym = peel_principal_parts(F, radius, shift=lam)
        return ExampleSymbol("ex3", sym, hints=hints, params={**record, "analytic_radius": radius})
    poly = [(-eps) ** (n - j) for j in range(n + 1)]
    poly[0] += lam
    tail: Expr = Const(0.0)
    if eps > 0:
        tail = Affine(Mobius(Identity(), 1.0, 0.0, eps, 1.0), (-eps) ** (n + 1), 0.0)
    radius = 2.0 if eps == 0 else min(2.0, 0.5 * (1.0 + 1.0 / eps))
    sym = make_symbol(poly, tail=tail, analytic_radius=radius)
    return ExampleSymbol("ex3", sym, hints=hints, params=record)



# Figure fixtures

def shift_root(S: complex, eps: float) -> complex:
    """Root of zeta^2 (1 + eps zeta) = S next to the principal square root of S."""
    zeta = complex(np.sqrt(complex(S)))
    for _ in range(50):
        value = zeta * zeta * (1.0 + eps * zeta) - S
        zeta -= value / (2.0 * zeta + 3.0 * eps * zeta * zeta)
    return zeta


def _relative_arg(values: np.ndarray, params: SectorAnnulusParams) -> np.ndarray:
    middle = 0.5 * (params.theta_min + params.theta_max)
    return np.angle(values * np.exp(-1j * middle))


def angular_reach(psi: ConformalMap, params: SectorAnnulusParams, rho: float) -> float:
    """Angle between the images under Psi(rho .) of the preimages of the two radial edge midpoints."""
    height = params.theta_max - params.theta_min
    middle = complex(0.5 * np.log(params.r * params.R), 0.5 * (params.theta_min + params.theta_max))
    edges = np.exp(middle + np.array([-0.5j, 0.5j]) * height)
    p = psi.invert(edges)
    p = p / np.abs(p)
    angles = _relative_arg(psi(rho * p), params)
    return float(angles[1] - angles[0])


def auto_rho(psi: ConformalMap, params: SectorAnnulusParams) -> float:
    """
    First shrink factor whose image keeps more than half of the angular
    excess of the sector over pi.

    Raises:
        ParamInvalid: If no candidate reaches far enough
    """
    height = params.theta_max - params.theta_min
    needed = np.pi + 0.5 * (height - np.pi)
    for rho in RHO_CANDIDATES:
        if angular_reach(psi, params, rho) >= needed:
            return float(rho)
    raise ParamInvalid(f"No rho in {RHO_CANDIDATES[0]}..{RHO_CANDIDATES[-1]} reaches angle {needed:.4f}")


def figure_map(params: SectorAnnulusParams, direction: complex = SHIFT_DIRECTIONS[0],
               rho: Optional[float] = None) -> Tuple[Expr, float, complex]:
    """
    h(z) = [(1 + eps Psi(rho z)) Psi(rho z)^2 - beta direction]^2 with Psi(0) at the root of the bracket.

    Returns:
        Tuple[Expr, float, complex]: h as an expression, rho, and Psi(0)
    """
    S = params.beta * complex(direction)
    zeta0 = shift_root(S, params.eps)
    if not (params.r < abs(zeta0) < params.R and params.theta_min < np.angle(zeta0) < params.theta_max):
        raise ParamInvalid(f"Shift {S} has no root inside the sector", {"root": [zeta0.real, zeta0.imag]})
    psi = sector_annulus_map(params, base_point=zeta0)
    if rho is None:
        rho = auto_rho(psi, params)
    params = replace(params, rho=rho).validate()
    g = Compose(polynomial([-S, 0.0, 1.0, params.eps]), ScaleArg(psi.forward, rho))
    return Power(g, 2), rho, zeta0


def _figure_pattern(kind: str, h: AnalyticMap, grid_n: int) -> Optional[complex]:
    """Inverse of lambda1 when the region graph of h has the wanted shape, else None."""
    try:
        hmap = region_map(h, 1.0, grid_n, strict=False)
    except AnalysisError as e:
        logger.info(f"Region map failed: {e.message}")
        return None
    gp = general_position(h, hmap.curve)
    if not gp.ok or hmap.max_k != 2:
        return None
    chains = check_dvc_prime(h, hmap, gp)
    if kind == "fig1":
        if not chains.passed or not any(c.k == 1 for c in hmap.components):
            return None
    elif chains.status != Status.FAIL:
        return None
    return check_spe(hmap).lambda0


def _target_modulus(kind: str, r1: float, r2: float) -> float:
    middle = 0.5 * (r1 + r2)
    return middle + 0.5 * (r2 - middle) if kind == "fig1" else r1 + 0.5 * (middle - r1)


@lru_cache(maxsize=16)
def _figure_fixture(kind: str, r: float, R: float, alpha: float, eps: float, directions: Tuple[complex, ...],
                    beta: Optional[float], rho: Optional[float], grid_n: int) -> ExampleSymbol:
    base = SectorAnnulusParams(r=r, R=R, alpha=alpha, eps=eps, beta=beta or 0.0,
                               rho=rho or config.EXAMPLE_RHO).validate()
    tried: List[List[float]] = []
    for direction in directions:
        if beta is not None:
            betas = [beta]
        else:
            r1, r2 = r * r, R * R
            target = _target_modulus(kind, r1, r2)
            grid = np.linspace(r1, r2, BETA_STEPS)[1:-1]
            grid = grid[np.argsort(np.abs(grid - target), kind="stable")]
            betas = [float(s) / abs(direction) for s in grid]
        for b in betas:
            tried.append([direction.real, direction.imag, b])
            try:
                expr, used_rho, zeta0 = figure_map(replace(base, beta=b), direction, rho)
            except ParamInvalid as e:
                logger.info(f"beta = {b:.6g} rejected: {e.message}")
                continue
            univalence = univalence_evidence(sector_annulus_map(replace(base, beta=b), base_point=zeta0).forward)
            if not univalence["ok"]:
                logger.info(f"beta = {b:.6g}: sector map fails the univalence check")
                continue
            radius = 0.5 * (1.0 + 1.0 / used_rho)
            h = AnalyticMap(expr=expr, analytic_radius=radius)
            v = _figure_pattern(kind, h, grid_n)
            if v is None:
                logger.info(f"direction = {direction}, beta = {b:.6g}: region graph does not match {kind}")
                continue
            sym = peel_principal_parts(expr, radius)
            record = {"r": r, "R": R, "alpha": alpha, "eps": eps, "beta": b, "rho": used_rho,
                      "direction": direction, "base_point": zeta0, "univalence": univalence}
            logger.info(f"{kind}: direction = {direction}, beta = {b:.6g}, rho = {used_rho}")
            return ExampleSymbol(kind, sym, h=h, hints=(0j, 1.0 / v), params=record)
    raise ParamInvalid(f"No shift reproduces the {kind} region pattern", {"tried": tried})


def figure(kind: str, params: Dict[str, Any]) -> ExampleSymbol:
    values = {**FIGURE_SECTOR, **{k: params[k] for k in FIGURE_SECTOR if k in params}}
    directions = SHIFT_DIRECTIONS
    if "direction" in params:
        direction = params["direction"]
        if isinstance(direction, (list, tuple)):
            direction = complex(*direction)
        directions = (complex(direction),)
    beta = params.get("beta")
    rho = params.get("rho")
    return _figure_fixture(kind, float(values["r"]), float(values["R"]), float(values["alpha"]),
                           float(values["eps"]), directions, None if beta is None else float(beta),
                           None if rho is None else float(rho), int(params.get("grid", FIGURE_GRID)))


EXAMPLES: Dict[str, Callable[[Dict[str, Any]], ExampleSymbol]] = {
    "ex1": ex1,
    "ex2": ex2,
    "ex3": ex3,
    "ex4": lambda params: replace(figure("fig1", params), id="ex4"),
    "ex5": lambda params: replace(figure("fig2", params), id="ex5"),
    "fig1": lambda params: figure("fig1", params),
    "fig2": lambda params: figure("fig2", params),
    "rolewicz": rolewicz,
    "tridiagonal": tridiagonal,
    "necessary_fail": necessary_fail,
}


def example_symbol(example_id: str, params: Optional[Dict[str, Any]] = None) -> ExampleSymbol:
    """
    Build a preset example.

    Args:
        example_id (str): One of EXAMPLES
        params (Optional[Dict[str, Any]]): Free choices of the construction

    Returns:
        ExampleSymbol: Symbol plus hints and the parameters actually used

    Raises:
        ParamInvalid: For unknown ids or inadmissible parameters
        PeelFailure: If principal parts cannot be separated
    """
    if example_id not in EXAMPLES:
        raise ParamInvalid(f"Unknown example '{example_id}'", {"known": sorted(EXAMPLES)})
    return EXAMPLES[example_id](dict(params or {}))
