"""
Eigenvectors of T_Phi for lambda outside the closed range, and eigenvectors
of the adjoint built from Cauchy kernels at N+1 preimages of one value.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple
import logging

import numpy as np
from numpy.polynomial import polynomial as P
from scipy import linalg

import config
from conditions.checks import rho_plus
from operators.toeplitz import ToeplitzSection, toeplitz_section
from symbols.core import Symbol, make_symbol
from symbols.fourier import fourier_coefficients
from utils.error_handler import (AnalysisError, CancellationFailure, LambdaInRange, MultiplePreimagesCollide,
                                 PreimageSearchFailed, SchemaError)
from valence.counting import preimage_count
from valence.curve import build_curve

# Configure logging
logging.basicConfig(level=logging.INFO,
                   format='%(asctime)s - %(name)s - %(levelname)s - %(message)s')
logger = logging.getLogger(__name__)

CANCEL_TOL = 1e-10
SEED_GRID = 64
SEED_RADIUS = 1.0 - 1e-4
NEWTON_STEPS = 60
PREIMAGE_TOL = 1e-10
COLLIDE_TOL = 1e-6


def denominator_polynomial(sym: Symbol) -> np.ndarray:
    """Ascending coefficients of Q(z) = prod (1 - eta_l z)^{k_l}."""
    Q = np.array([1.0 + 0j])
    for pole in sym.rational.poles:
        Q = P.polymul(Q, P.polypow([1.0, -pole.eta], pole.order))
    return Q


@dataclass(frozen=True)
class EigenvectorSpec:
    """lambda with the polynomials p (degree < N2) and q (degree < N1) of the numerator z^N1 p + Q q."""

    lam: complex
    p_coeffs: Tuple[complex, ...] = ()
    q_coeffs: Tuple[complex, ...] = ()

    def validate(self, sym: Symbol) -> "EigenvectorSpec":
        for name, coeffs, bound in (("p", self.p_coeffs, sym.N2), ("q", self.q_coeffs, sym.N1)):
            nonzero = np.flatnonzero(np.abs(np.asarray(coeffs, dtype=complex)))
            if nonzero.size and nonzero[-1] >= bound:
                raise SchemaError(f"deg {name} must be at most {bound - 1}, got {nonzero[-1]}")
        return self

    def numerator(self, sym: Symbol) -> np.ndarray:
        p = np.asarray(self.p_coeffs or (0j,), dtype=complex)
        q = np.asarray(self.q_coeffs or (0j,), dtype=complex)
        shifted = np.concatenate([np.zeros(sym.N1, dtype=complex), p])
        return P.polyadd(shifted, P.polymul(denominator_polynomial(sym), q))

    def to_dict(self) -> Dict[str, Any]:
        return {"lambda": self.lam, "p": list(self.p_coeffs), "q": list(self.q_coeffs)}


def monomial_specs(sym: Symbol, lam: complex) -> List[EigenvectorSpec]:
    """The N basis choices: p = z^a for a < N2, then q = z^b for b < N1."""
    specs = []
    for a in range(sym.N2):
        specs.append(EigenvectorSpec(complex(lam), tuple([0j] * a + [1.0 + 0j]), ()))
    for b in range(sym.N1):
        specs.append(EigenvectorSpec(complex(lam), (), tuple([0j] * b + [1.0 + 0j])))
    return specs


@dataclass
class EigenvectorResult:
    spec: EigenvectorSpec
    coeffs: np.ndarray = field(repr=False)
    residual: float
    tail_bound: float

    @property
    def n(self) -> int:
        return int(self.coeffs.size)

    def to_dict(self) -> Dict[str, Any]:
        return {"lambda": self.spec.lam, "p": list(self.spec.p_coeffs), "q": list(self.spec.q_coeffs),
                "n": self.n, "residual": self.residual, "tail_bound": self.tail_bound}


def validate_lambda(sym: Symbol, lam: complex) -> None:
    """
    lambda must have no preimage in the closed disk and keep two curve bands of distance.

    Raises:
        LambdaInRange: Otherwise
    """
    curve = build_curve(sym, 1.0, intersections=False)
    radii = [1.0] + ([rho_plus(sym)] if sym.analytic_radius > 1.0 else [])
    for rho in radii:
        try:
            count = preimage_count(sym, lam, rho, curve=curve if rho == 1.0 else None,
                                   band=2.0 * curve.band if rho == 1.0 else None)
        except AnalysisError as e:
            raise LambdaInRange(f"lambda = {complex(lam)} is too close to the boundary curve: {e.message}",
                                {"lambda": complex(lam)}) from e
        if count != 0:
            raise LambdaInRange(f"lambda = {complex(lam)} has {count} preimages in |z| < {rho}",
                                {"lambda": complex(lam), "rho": rho, "count": count})


def tail_taylor(sym: Symbol, n: int) -> np.ndarray:
    """First n Taylor coefficients of the analytic tail."""
    if sym.tail.is_zero():
        return np.zeros(n, dtype=complex)
    tail_only = make_symbol((0j,), (), sym.tail, sym.analytic_radius)
    return fourier_coefficients(tail_only, 0, n - 1).values.copy()


def cleared_denominator(sym: Symbol, lam: complex, n: int) -> np.ndarray:
    """
    Taylor coefficients 0..n-1 of z^N1 Q (Phi - lambda).

    The product of z^N1 Q with the Laurent series of R(1/z) is formed
    explicitly; its negative-index terms must cancel.

    Raises:
        CancellationFailure: If negative-index terms survive or the constant term vanishes
    """
    zq = np.concatenate([np.zeros(sym.N1, dtype=complex), denominator_polynomial(sym)])
    depth = zq.size - 1
    span = 4 * depth + 8
    laurent = sym.rational.negative_coefficients(span)[::-1]  # indices -span..0
    series = np.concatenate([laurent, tail_taylor(sym, n + depth)[1:]])
    series[span] += tail_taylor(sym, 1)[0] - lam
    product = np.convolve(zq, series)  # index of z^m sits at m + span
    scale = max(1.0, float(np.max(np.abs(product))))
    leftover = np.abs(product[span - depth: span]) if depth else np.zeros(0)
    if leftover.size and np.max(leftover) > CANCEL_TOL * scale:
        raise CancellationFailure(f"Negative powers of z^N1 Q Phi do not cancel (max {np.max(leftover):.3g})")
    D = product[span: span + n]
    if abs(D[0]) <= CANCEL_TOL * scale:
        raise CancellationFailure(f"z^N1 Q (Phi - lambda) vanishes at 0 for lambda = {complex(lam)}",
                                  {"lambda": complex(lam)})
    return D


def eigenvector(sym: Symbol, spec: EigenvectorSpec, n: int, section: Optional[ToeplitzSection] = None,
                validate: bool = True) -> EigenvectorResult:
    """
    Taylor coefficients of f = (z^N1 p + Q q) / (z^N1 Q (Phi - lambda)).

    Args:
        sym (Symbol): Symbol
        spec (EigenvectorSpec): lambda and numerator polynomials
        n (int): Number of coefficients
        section (Optional[ToeplitzSection]): Prebuilt section of size n for the residual
        validate (bool): Check lambda against the region counts first

    Returns:
        EigenvectorResult: Coefficients with ||T_n f - lambda f|| / ||f|| and a truncation estimate

    Raises:
        LambdaInRange: If lambda is attained on the closed disk
        CancellationFailure: If the cleared denominator is inconsistent
    """
    spec.validate(sym)
    if validate:
        validate_lambda(sym, spec.lam)
    D = cleared_denominator(sym, spec.lam, n)
    numerator = np.zeros(n, dtype=complex)
    top = spec.numerator(sym)[:n]
    numerator[: top.size] = top
    lower = linalg.toeplitz(D, np.zeros(n, dtype=complex))
    coeffs = linalg.solve_triangular(lower, numerator, lower=True)

    section = section if section is not None and section.n == n else toeplitz_section(sym, n)
    norm = float(np.linalg.norm(coeffs))
    residual = float(np.linalg.norm(section.apply(coeffs) - spec.lam * coeffs) / norm)
    back = np.abs(section.coeffs[: n - 1])  # indices -(n-1)..-1
    edge = min(n, 64)
    tail_bound = float(np.linalg.norm(coeffs[-edge:]) * np.sum(back) / norm)
    return EigenvectorResult(spec=spec, coeffs=coeffs, residual=residual, tail_bound=tail_bound)


def eigenvectors(sym: Symbol, lam: complex, n: int) -> List[EigenvectorResult]:
    """All N monomial eigenvectors at one lambda, sharing a section."""
    validate_lambda(sym, lam)
    section = toeplitz_section(sym, n)
    return [eigenvector(sym, spec, n, section, validate=False) for spec in monomial_specs(sym, lam)]


def basis_span_check(sym: Symbol) -> Dict[str, Any]:
    """
    Solve (p, q) -> z^N1 p + Q q for each monomial z^j, j < N.

    Returns:
        Dict[str, Any]: Condition number, per-monomial residuals, invertibility flag
    """
    N = sym.N
    if N == 0:
        return {"N": 0, "condition_number": 1.0, "residuals": [], "max_residual": 0.0, "invertible": True}
    columns = []
    for spec in monomial_specs(sym, 0j):
        column = np.zeros(N, dtype=complex)
        values = spec.numerator(sym)
        column[: min(N, values.size)] = values[:N]
        columns.append(column)
    M = np.column_stack(columns)
    identity = np.eye(N, dtype=complex)
    solution = linalg.solve(M, identity)
    residuals = [float(np.linalg.norm(M @ solution[:, j] - identity[:, j])) for j in range(N)]
    cond = float(np.linalg.cond(M))
    return {"N": N, "condition_number": cond, "residuals": residuals, "max_residual": max(residuals),
            "invertible": bool(np.isfinite(cond) and cond < 1e12)}


# Adjoint eigenvectors

@dataclass
class AdjointEigenSpec:
    mu: complex
    preimages: Tuple[complex, ...]
    betas: Tuple[complex, ...]
    residual: float = float("nan")
    n: int = 0

    def coefficients(self, n: int) -> np.ndarray:
        """Taylor coefficients of sum beta_m k_{z_m}, k_z(w) = 1 / (1 - conj(z) w)."""
        powers = np.arange(n)
        out = np.zeros(n, dtype=complex)
        for beta, z in zip(self.betas, self.preimages):
            out += beta * np.conj(z) ** powers
        return out

    def to_dict(self) -> Dict[str, Any]:
        return {"mu": self.mu, "preimages": list(self.preimages), "betas": list(self.betas),
                "residual": self.residual, "n": self.n}


def _safe_newton(sym: Symbol, mu: complex, z: np.ndarray) -> np.ndarray:
    poles = [loc for loc, _ in sym.pole_locations()]
    with np.errstate(all="ignore"):
        for _ in range(NEWTON_STEPS):
            keep = np.abs(z) < SEED_RADIUS
            for loc in poles:
                keep &= np.abs(z - loc) > 10 * config.POLE_TOL
            z = z[keep]
            if z.size == 0:
                break
            value, slope = sym.evaluate_with_derivative(z)
            step = (value - mu) / slope
            z = np.where(np.isfinite(step), z - step, z)
    keep = np.abs(z) < 1.0
    for loc in poles:
        keep &= np.abs(z - loc) > 10 * config.POLE_TOL
    return z[keep]


def find_preimages(sym: Symbol, mu: complex) -> List[complex]:
    """
    Distinct solutions of Phi(z) = mu in the disk, Newton from a 64 x 64 seed grid.

    Raises:
        MultiplePreimagesCollide: If the count includes a multiple root
        PreimageSearchFailed: If Newton finds fewer solutions than the count
    """
    expected = preimage_count(sym, mu, 1.0)
    xs = np.linspace(-SEED_RADIUS, SEED_RADIUS, SEED_GRID)
    seeds = (xs[None, :] + 1j * xs[:, None]).ravel()
    z = _safe_newton(sym, complex(mu), seeds[np.abs(seeds) < SEED_RADIUS])
    if z.size:
        scale = max(1.0, abs(mu))
        z = z[np.abs(sym.evaluate(z) - mu) <= PREIMAGE_TOL * scale]
    distinct: List[complex] = []
    for p in sorted(z.tolist(), key=lambda c: (round(c.real, 8), round(c.imag, 8))):
        if all(abs(p - q) > 1e-8 for q in distinct):
            distinct.append(complex(p))
    close = [(a, b) for i, a in enumerate(distinct) for b in distinct[i + 1:] if abs(a - b) < COLLIDE_TOL]
    if close or len(distinct) < expected:
        slopes = [abs(sym.eval_derivative(p)) for p in distinct]
        if close or any(s < 1e-6 for s in slopes):
            raise MultiplePreimagesCollide(f"mu = {complex(mu)} has a multiple preimage",
                                           {"preimages": distinct, "count": expected})
        raise PreimageSearchFailed(f"Found {len(distinct)} of {expected} preimages of mu = {complex(mu)}",
                                   {"preimages": distinct})
    return distinct


def _correction_matrix(sym: Symbol, points: Sequence[complex]) -> np.ndarray:
    """
    Coordinates of (R*(z) - R*(1/b)) / (1 - b z), b = conj(z_m), in the basis
    z^i (i < N1) and (z - conj(eta_l))^{-i} (i <= k_l).
    """
    c = np.array(sym.rational.poly_coeffs)
    rows = sym.N
    A = np.zeros((rows, len(points)), dtype=complex)
    for m, zm in enumerate(points):
        b = np.conj(zm)
        for i in range(sym.N1):
            A[i, m] = -sum(np.conj(c[k]) / b ** (k - i) for k in range(i + 1, sym.N1 + 1))
        row = sym.N1
        for pole in sym.rational.poles:
            e = np.conj(pole.eta)
            for i in range(1, pole.order + 1):
                A[row, m] = sum(np.conj(pole.alphas[j - 1]) * b ** (j - i) / (1.0 - b * e) ** (j - i + 1)
                                for j in range(i, pole.order + 1))
                row += 1
    return A


def adjoint_eigenvector(sym: Symbol, mu: complex, n: int = 1024) -> AdjointEigenSpec:
    """
    Eigenvector of the adjoint section at conj(mu) from N+1 preimages of mu.

    T_{conj Phi} k_z = conj(Phi(z)) k_z + (correction in an N-dimensional span),
    so some nontrivial combination of N+1 kernels has all corrections cancel.

    Args:
        sym (Symbol): Symbol
        mu (complex): Value attained at least N+1 times in the disk
        n (int): Section size for the residual

    Returns:
        AdjointEigenSpec: Preimages, coefficients and ||T_n f - conj(mu) f|| / ||f||

    Raises:
        PreimageSearchFailed: If fewer than N+1 preimages are found
        MultiplePreimagesCollide: If preimages coincide
    """
    mu = complex(mu)
    points = find_preimages(sym, mu)
    if len(points) < sym.N + 1:
        raise PreimageSearchFailed(f"mu = {mu} has {len(points)} preimages, {sym.N + 1} needed",
                                   {"preimages": points})
    points = points[: sym.N + 1]
    if sym.N == 0:
        betas = np.ones(1, dtype=complex)
    else:
        A = _correction_matrix(sym, points)
        scale = np.linalg.norm(A, axis=0)
        scale[scale == 0] = 1.0
        kernel = linalg.null_space(A / scale)
        betas = kernel[:, 0] / scale
        betas = betas / np.max(np.abs(betas))
    spec = AdjointEigenSpec(mu=mu, preimages=tuple(points), betas=tuple(complex(b) for b in betas), n=n)
    adjoint = toeplitz_section(sym, n).conjugate()
    f = spec.coefficients(n)
    spec.residual = float(np.linalg.norm(adjoint.apply(f) - np.conj(mu) * f) / np.linalg.norm(f))
    logger.info(f"Adjoint eigenvector at mu = {mu}: residual {spec.residual:.3g} at n = {n}")
    return spec
