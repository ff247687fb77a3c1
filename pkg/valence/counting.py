"""
Preimage counting by the argument principle, plus the companion-matrix
root count used as an independent oracle for all-rational symbols.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from typing import Any, Optional, Sequence, Tuple
import logging

import numpy as np
from numpy.polynomial import polynomial as P

import config
from symbols.core import MapBase, Symbol
from utils.error_handler import DomainViolation, PhaseUnresolved, PoleHit, TooCloseToCurve

# Configure logging
logging.basicConfig(level=logging.INFO,
                   format='%(asctime)s - %(name)s - %(levelname)s - %(message)s')
logger = logging.getLogger(__name__)

BASE_SAMPLES = 1024
HALF_PI = 0.5 * np.pi


def check_radius(sym: MapBase, rho: float) -> None:
    """
    Validate a counting radius.

    Raises:
        DomainViolation: If rho is not positive or exceeds the analytic radius
        PoleHit: If a pole lies on the circle |z| = rho
    """
    if rho <= 0:
        raise DomainViolation(f"Counting radius must be positive, got {rho}")
    if rho > sym.analytic_radius * (1.0 + 1e-12):
        raise DomainViolation(f"Counting radius {rho} exceeds analytic radius {sym.analytic_radius}")
    near = sym.poles_near_circle(rho)
    if near:
        raise PoleHit(f"Pole on the counting circle |z| = {rho}", {"poles": [[p.real, p.imag] for p in near]})


def circle_samples(sym: MapBase, rho: float, n: int = BASE_SAMPLES) -> Tuple[np.ndarray, np.ndarray]:
    t = 2.0 * np.pi * np.arange(n) / n
    return t, sym.evaluate(rho * np.exp(1j * t))


def winding_number(sym: MapBase, w: complex, rho: float, t: np.ndarray, values: np.ndarray,
                   band: Optional[float] = None, max_depth: Optional[int] = None) -> int:
    """
    Winding number of t -> sym(rho e^{it}) about w.

    Phase increments are summed over the given samples; any interval whose
    increment exceeds pi/2, or whose chord is long compared to its distance
    from w, is bisected with fresh evaluations.

    Args:
        sym (MapBase): Map to trace
        w (complex): Point to wind around
        rho (float): Circle radius
        t (np.ndarray): Sorted parameters in [0, 2 pi)
        values (np.ndarray): sym(rho e^{it}) at t
        band (Optional[float]): Refuse points closer than this to the samples
        max_depth (Optional[int]): Bisection depth cap

    Returns:
        int: Winding number

    Raises:
        TooCloseToCurve: If w lies within the band (or on the curve)
        PhaseUnresolved: If bisection exceeds the depth cap
    """
    max_depth = config.PHASE_MAX_DEPTH if max_depth is None else max_depth
    w = complex(w)
    d = values - w
    dist = np.abs(d)
    scale = max(1.0, float(np.max(np.abs(values))))
    tiny = 1e-13 * scale
    nearest = float(np.min(dist))
    if nearest <= tiny or (band is not None and nearest < band):
        raise TooCloseToCurve(f"w = {w} lies within {max(band or 0.0, tiny):.3g} of the boundary curve",
                              {"w": [w.real, w.imag], "distance": nearest})

    d_next = np.roll(d, -1)
    t_next = np.append(t[1:], t[0] + 2.0 * np.pi)
    steps = np.angle(d_next / d)
    chord = np.abs(d_next - d)
    bad = (np.abs(steps) > HALF_PI) | (chord > 0.5 * np.minimum(dist, np.roll(dist, -1)))
    total = float(np.sum(steps[~bad]))

    for k in np.flatnonzero(bad):
        stack = [(float(t[k]), float(t_next[k]), complex(d[k]), complex(d_next[k]), 0)]
        while stack:
            a, b, da, db, depth = stack.pop()
            step = float(np.angle(db / da))
            if abs(step) <= HALF_PI and abs(db - da) <= 0.5 * min(abs(da), abs(db)):
                total += step
                continue
            if depth >= max_depth:
                raise PhaseUnresolved(f"Phase bisection exceeded depth {max_depth} near t = {a:.6g}",
                                      {"w": [w.real, w.imag], "t": a})
            m = 0.5 * (a + b)
            dm = sym.eval(rho * np.exp(1j * m)) - w
            if abs(dm) <= tiny:
                raise TooCloseToCurve(f"w = {w} lies on the boundary curve at t = {m:.12g}",
                                      {"w": [w.real, w.imag], "t": m})
            stack.append((a, m, da, dm, depth + 1))
            stack.append((m, b, dm, db, depth + 1))

    turns = total / (2.0 * np.pi)
    winding = int(round(turns))
    if abs(turns - winding) > 0.25:
        raise PhaseUnresolved(f"Total phase {total:.6g} is not a multiple of 2 pi", {"w": [w.real, w.imag]})
    return winding


def _samples_for(sym: MapBase, rho: float, curve: Any) -> Tuple[np.ndarray, np.ndarray]:
    if curve is not None and abs(curve.radius - rho) <= 1e-15:
        return curve.t, curve.values
    return circle_samples(sym, rho)


def preimage_count(sym: MapBase, w: complex, rho: float = 1.0, curve: Any = None,
                   band: Optional[float] = None) -> int:
    """
    Number of solutions of sym(z) = w in |z| < rho, with multiplicity.

    Computed as the winding number of the image of |z| = rho about w plus
    the number of poles inside the circle.

    Args:
        sym (MapBase): Symbol, resolvent or analytic map
        w (complex): Target value
        rho (float): Disk radius
        curve (Any): Optional BoundaryCurve at this radius whose samples are reused
        band (Optional[float]): Ambiguity band around the curve

    Returns:
        int: Preimage count

    Raises:
        TooCloseToCurve: If w is within the band of the curve
        PhaseUnresolved: If the phase cannot be resolved
    """
    check_radius(sym, rho)
    t, values = _samples_for(sym, rho, curve)
    return winding_number(sym, w, rho, t, values, band=band) + sym.pole_count(rho)


def preimage_counts(sym: MapBase, ws: Sequence[complex], rho: float = 1.0, curve: Any = None,
                    band: Optional[float] = None, strict: bool = True) -> np.ndarray:
    """
    Vector form of preimage_count, spread over a thread pool.

    Args:
        sym (MapBase): Map
        ws (Sequence[complex]): Target values
        rho (float): Disk radius
        curve (Any): Optional BoundaryCurve reused for samples
        band (Optional[float]): Ambiguity band
        strict (bool): Raise on points near the curve instead of returning -1

    Returns:
        np.ndarray: Counts in input order (-1 for refused points when not strict)
    """
    check_radius(sym, rho)
    t, values = _samples_for(sym, rho, curve)
    poles = sym.pole_count(rho)
    ws = np.atleast_1d(np.asarray(ws, dtype=complex))

    def count(w: complex) -> int:
        try:
            return winding_number(sym, w, rho, t, values, band=band) + poles
        except TooCloseToCurve:
            if strict:
                raise
            return -1

    if ws.size <= 8:
        return np.array([count(w) for w in ws], dtype=int)
    with ThreadPoolExecutor(max_workers=config.get_thread_count()) as executor:
        return np.fromiter(executor.map(count, ws), dtype=int, count=ws.size)


# Companion-matrix oracle

def _monomial(k: int) -> np.ndarray:
    return np.concatenate([np.zeros(k, dtype=complex), [1.0]])


def cleared_numerator(sym: Symbol, w: complex, tail_coeffs: Sequence[complex] = (0.0,)) -> np.ndarray:
    """
    Ascending coefficients of z^N1 Q(z) (Phi(z) - w) for a polynomial tail.

    Q(z) = prod (1 - eta_l z)^{k_l}; multiplying through clears every pole, so
    the roots of the result are exactly the solutions of Phi(z) = w.

    Args:
        sym (Symbol): Symbol whose tail equals the polynomial given by tail_coeffs
        w (complex): Target value
        tail_coeffs (Sequence[complex]): Ascending tail coefficients

    Returns:
        np.ndarray: Polynomial coefficients, trailing zeros trimmed
    """
    rational = sym.rational
    n1 = rational.N1
    factors = [P.polypow([1.0, -pole.eta], pole.order) for pole in rational.poles]

    def product(skip: Optional[int] = None) -> np.ndarray:
        out = np.array([1.0 + 0j])
        for i, f in enumerate(factors):
            if i != skip:
                out = P.polymul(out, f)
        return out

    Q = product()
    total = np.zeros(1, dtype=complex)
    for k, c in enumerate(rational.poly_coeffs):
        total = P.polyadd(total, c * P.polymul(_monomial(n1 - k), Q))
    for i, pole in enumerate(rational.poles):
        others = product(skip=i)
        for j, alpha in enumerate(pole.alphas, start=1):
            term = P.polymul(_monomial(n1 + j), P.polymul(P.polypow([1.0, -pole.eta], pole.order - j), others))
            total = P.polyadd(total, alpha * term)
    tail = np.array(tail_coeffs, dtype=complex).copy()
    tail[0] -= w
    total = P.polyadd(total, P.polymul(tail, P.polymul(_monomial(n1), Q)))
    return P.polytrim(total, tol=0)


def companion_count(sym: Symbol, w: complex, rho: float = 1.0, tail_coeffs: Sequence[complex] = (0.0,)) -> int:
    """Count roots of the cleared numerator inside |z| < rho (companion-matrix eigenvalues)."""
    coeffs = cleared_numerator(sym, w, tail_coeffs)
    if coeffs.size <= 1:
        return 0
    roots = P.polyroots(coeffs)
    return int(np.sum(np.abs(roots) < rho))
