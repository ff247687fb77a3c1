"""
Symbols Phi(z) = R(1/z) + phi(z), their resolvents and plain analytic maps.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, List, Optional, Sequence, Tuple
import logging

import numpy as np
from numpy.polynomial import polynomial as P

import config
from symbols.expressions import Const, Expr
from utils.error_handler import DomainViolation, LambdaInRange, PoleHit, SchemaError

# Configure logging
logging.basicConfig(level=logging.INFO,
                   format='%(asctime)s - %(name)s - %(levelname)s - %(message)s')
logger = logging.getLogger(__name__)

Pair = Tuple[np.ndarray, np.ndarray]


@dataclass(frozen=True)
class Pole:
    """A pole eta of R with principal-part coefficients alpha_1..alpha_k."""

    eta: complex
    alphas: Tuple[complex, ...]

    @property
    def order(self) -> int:
        return len(self.alphas)


@dataclass(frozen=True)
class RationalPart:
    """
    R(w) = sum_k c_k w^k + sum_l sum_j alpha_{l,j} (w - eta_l)^{-j}.

    Evaluated at w = 1/z, each pole term is rewritten as (z / (1 - eta z))^j,
    which stays finite at z = 0.
    """

    poly_coeffs: Tuple[complex, ...] = (0j,)
    poles: Tuple[Pole, ...] = ()

    def __post_init__(self):
        coeffs = tuple(complex(c) for c in self.poly_coeffs) or (0j,)
        object.__setattr__(self, "poly_coeffs", coeffs)
        poles = tuple(Pole(complex(p.eta), tuple(complex(a) for a in p.alphas)) for p in self.poles)
        object.__setattr__(self, "poles", poles)
        if len(coeffs) > 1 and coeffs[-1] == 0:
            raise SchemaError("Leading polynomial coefficient must be nonzero", {"N1": len(coeffs) - 1})
        etas = [p.eta for p in poles]
        for p in poles:
            if abs(p.eta) <= 1.0:
                raise SchemaError(f"Pole {p.eta} must lie outside the closed unit disk")
            if p.order == 0 or p.alphas[-1] == 0:
                raise SchemaError(f"Pole {p.eta} needs a nonzero leading coefficient")
        for i in range(len(etas)):
            for j in range(i + 1, len(etas)):
                if etas[i] == etas[j]:
                    raise SchemaError(f"Poles must be distinct, {etas[i]} repeated")

    @property
    def N1(self) -> int:
        return len(self.poly_coeffs) - 1

    @property
    def N2(self) -> int:
        return sum(p.order for p in self.poles)

    @property
    def N(self) -> int:
        return self.N1 + self.N2

    def evaluate_with_derivative(self, z: np.ndarray) -> Pair:
        """
        Evaluate R(1/z) and d/dz R(1/z) in closed form.

        Args:
            z (np.ndarray): Nonzero points off the pole set

        Returns:
            Pair: (values, derivatives)
        """
        z = np.asarray(z, dtype=complex)
        c = np.array(self.poly_coeffs)
        if self.N1 > 0:
            w = 1.0 / z
            value = P.polyval(w, c)
            slope = -P.polyval(w, P.polyder(c)) * w * w
        else:
            value = np.full(z.shape, c[0], dtype=complex)
            slope = np.zeros(z.shape, dtype=complex)
        for pole in self.poles:
            den = 1.0 - pole.eta * z
            base = z / den
            dbase = 1.0 / (den * den)
            power = np.ones(z.shape, dtype=complex)
            for j, alpha in enumerate(pole.alphas, start=1):
                # power holds base^(j-1)
                slope = slope + alpha * j * power * dbase
                power = power * base
                value = value + alpha * power
        return value, slope

    def pole_locations(self) -> List[Tuple[complex, int]]:
        """Poles of R(1/z) in the z-plane with their orders."""
        locations = [(0j, self.N1)] if self.N1 > 0 else []
        locations.extend((1.0 / p.eta, p.order) for p in self.poles)
        return locations

    def negative_coefficients(self, n_neg: int) -> np.ndarray:
        """
        Fourier coefficients of R(1/z) on the circle at indices 0, -1, ..., -n_neg.

        Expands (1/z - eta)^{-j} = (-eta)^{-j} sum_n C(n+j-1, j-1) (eta z)^{-n}.

        Args:
            n_neg (int): Number of negative indices

        Returns:
            np.ndarray: out[n] is the coefficient at index -n
        """
        from scipy.special import binom

        out = np.zeros(n_neg + 1, dtype=complex)
        head = min(n_neg, self.N1)
        out[:head + 1] += np.array(self.poly_coeffs[:head + 1])
        n = np.arange(n_neg + 1)
        for pole in self.poles:
            geometric = pole.eta ** (-n.astype(float))
            for j, alpha in enumerate(pole.alphas, start=1):
                out += alpha * (-pole.eta) ** (-j) * binom(n + j - 1, j - 1) * geometric
        return out

    def conjugate_evaluate(self, z: np.ndarray) -> np.ndarray:
        """
        R*(z) = sum conj(c_k) z^k + sum conj(alpha_{l,j}) (z - conj(eta_l))^{-j}.

        On the circle its coefficient at index k is the conjugate of the
        coefficient of R(1/z) at index -k.
        """
        z = np.asarray(z, dtype=complex)
        value = P.polyval(z, np.conj(np.array(self.poly_coeffs)))
        for pole in self.poles:
            inv = 1.0 / (z - np.conj(pole.eta))
            for j, alpha in enumerate(pole.alphas, start=1):
                value = value + np.conj(alpha) * inv ** j
        return value

    def to_dict(self) -> dict:
        return {
            "poly": [[c.real, c.imag] for c in self.poly_coeffs],
            "poles": [{"eta": [p.eta.real, p.eta.imag], "alphas": [[a.real, a.imag] for a in p.alphas]}
                      for p in self.poles],
        }


class MapBase:
    """Shared evaluation helpers for Symbol-like maps used by the geometry engine."""

    analytic_radius: float = 1.0

    def evaluate_with_derivative(self, z: Any) -> Pair:
        raise NotImplementedError

    def evaluate(self, z: Any) -> np.ndarray:
        return self.evaluate_with_derivative(z)[0]

    def derivative(self, z: Any) -> np.ndarray:
        return self.evaluate_with_derivative(z)[1]

    def pole_locations(self) -> List[Tuple[complex, int]]:
        return []

    def pole_count(self, rho: float) -> int:
        """Number of poles (with multiplicity) in |z| < rho."""
        return sum(order for loc, order in self.pole_locations() if abs(loc) < rho)

    def poles_near_circle(self, rho: float, tol: float = 1e-9) -> List[complex]:
        return [loc for loc, _ in self.pole_locations() if abs(abs(loc) - rho) < tol]

    @property
    def degree(self) -> int:
        """Poles inside the unit disk: N for symbols, 0 for analytic maps."""
        return self.pole_count(1.0)

    def eval(self, z: complex) -> complex:
        return complex(self.evaluate(np.atleast_1d(np.asarray(z, dtype=complex)))[0])

    def eval_derivative(self, z: complex) -> complex:
        return complex(self.derivative(np.atleast_1d(np.asarray(z, dtype=complex)))[0])

    def _check_domain(self, z: np.ndarray) -> None:
        if z.size and np.max(np.abs(z)) > self.analytic_radius * (1.0 + 1e-12):
            worst = complex(z.flat[int(np.argmax(np.abs(z)))])
            raise DomainViolation(f"|z| = {abs(worst):.6g} exceeds analytic radius {self.analytic_radius}",
                                  {"z": [worst.real, worst.imag]})

    def _check_finite(self, z: np.ndarray, values: np.ndarray) -> None:
        bad = ~np.isfinite(values)
        if np.any(bad):
            where = complex(z[bad].flat[0])
            raise DomainViolation(f"Evaluation is not finite at z = {where}", {"z": [where.real, where.imag]})


@dataclass(frozen=True)
class Symbol(MapBase):
    """Phi(z) = R(1/z) + tail(z) with the radius up to which the tail is claimed analytic."""

    rational: RationalPart = field(default_factory=RationalPart)
    tail: Expr = field(default_factory=lambda: Const(0.0))
    analytic_radius: float = 1.0

    def __post_init__(self):
        if self.analytic_radius < 1.0:
            raise SchemaError(f"analytic_radius must be >= 1, got {self.analytic_radius}")

    @property
    def N1(self) -> int:
        return self.rational.N1

    @property
    def N2(self) -> int:
        return self.rational.N2

    @property
    def N(self) -> int:
        return self.rational.N

    def pole_locations(self) -> List[Tuple[complex, int]]:
        return self.rational.pole_locations()

    def evaluate_with_derivative(self, z: Any) -> Pair:
        """
        Evaluate Phi and Phi' at the given points.

        Args:
            z (Any): Complex scalar or array

        Returns:
            Pair: (values, derivatives)

        Raises:
            PoleHit: If a point lies within the pole tolerance of a pole
            DomainViolation: If a point lies beyond the analytic radius
        """
        z = np.asarray(z, dtype=complex)
        self._check_domain(z)
        for loc, _ in self.pole_locations():
            close = np.abs(z - loc) < config.POLE_TOL
            if np.any(close):
                raise PoleHit(f"z = {loc} is a pole of the symbol", {"pole": [loc.real, loc.imag]})
        r, dr = self.rational.evaluate_with_derivative(z)
        if self.tail.is_zero():
            return r, dr
        t, dt = self.tail.evaluate_with_derivative(z)
        self._check_finite(z, t)
        return r + t, dr + dt

    def to_dict(self) -> dict:
        data = self.rational.to_dict()
        data["tail"] = self.tail.to_dict()
        data["analytic_radius"] = self.analytic_radius
        return data


@dataclass(frozen=True)
class AnalyticMap(MapBase):
    """A pole-free analytic map h given by an expression tree (e.g. the h of the DVC' examples)."""

    expr: Expr = field(default_factory=lambda: Const(0.0))
    analytic_radius: float = 1.0

    def evaluate_with_derivative(self, z: Any) -> Pair:
        z = np.asarray(z, dtype=complex)
        self._check_domain(z)
        value, slope = self.expr.evaluate_with_derivative(z)
        self._check_finite(z, value)
        return value, slope


@dataclass(frozen=True)
class ResolventSymbol(MapBase):
    """h_lambda(z) = 1 / (Phi(z) - lambda)."""

    base: Symbol
    lam: complex

    @property
    def analytic_radius(self) -> float:
        return self.base.analytic_radius

    def evaluate_with_derivative(self, z: Any) -> Pair:
        phi, dphi = self.base.evaluate_with_derivative(z)
        inv = 1.0 / (phi - self.lam)
        return inv, -dphi * inv * inv

    def recenter(self, mu: complex) -> Tuple[complex, complex, complex]:
        """
        Coefficients (c1, c2, c3) with h_mu = c1 + c2 / (h_lambda - c3).

        Args:
            mu (complex): New spectral parameter, different from lambda

        Returns:
            Tuple[complex, complex, complex]: c1, c2, c3
        """
        a = complex(self.lam) - complex(mu)
        if a == 0:
            raise SchemaError("recenter needs mu different from lambda")
        return 1.0 / a, -1.0 / (a * a), -1.0 / a


def _range_samples(sym: Symbol, n_angles: int = 1024) -> np.ndarray:
    t = 2.0 * np.pi * np.arange(n_angles) / n_angles
    radii = np.concatenate([np.linspace(0.05, 0.95, 19), [1.0]])
    z = (radii[:, None] * np.exp(1j * t)[None, :]).ravel()
    keep = np.ones(z.shape, dtype=bool)
    for loc, _ in sym.pole_locations():
        keep &= np.abs(z - loc) > 1e-6
    return z[keep]


def resolvent(sym: Symbol, lam: complex, check: bool = True) -> ResolventSymbol:
    """
    Build the resolvent symbol h_lambda = 1 / (Phi - lambda).

    Args:
        sym (Symbol): Base symbol
        lam (complex): Spectral parameter
        check (bool): Sample boundary and interior samples for near-attainment

    Returns:
        ResolventSymbol: The resolvent wrapper

    Raises:
        LambdaInRange: If some sample has |Phi(z) - lambda| below the resolvent tolerance
    """
    lam = complex(lam)
    if check:
        z = _range_samples(sym)
        gap = np.abs(sym.evaluate(z) - lam)
        i = int(np.argmin(gap))
        if gap[i] < config.RESOLVENT_TOL:
            raise LambdaInRange(f"lambda = {lam} is attained near z = {complex(z[i])}",
                                {"lambda": [lam.real, lam.imag], "gap": float(gap[i])})
    return ResolventSymbol(base=sym, lam=lam)


def evaluate(sym: MapBase, z: complex) -> complex:
    """Phi(z) at a single point."""
    return sym.eval(z)


def evaluate_derivative(sym: MapBase, z: complex) -> complex:
    """Phi'(z) at a single point."""
    return sym.eval_derivative(z)


def make_symbol(poly: Sequence[complex] = (0j,), poles: Sequence[Tuple[complex, Sequence[complex]]] = (),
                tail: Optional[Expr] = None, analytic_radius: float = 1.0) -> Symbol:
    """
    Convenience constructor from plain Python values.

    Args:
        poly (Sequence[complex]): c_0..c_N1
        poles (Sequence[Tuple[complex, Sequence[complex]]]): (eta, alphas) pairs
        tail (Optional[Expr]): Analytic tail, zero when omitted
        analytic_radius (float): Claimed analyticity radius

    Returns:
        Symbol: The symbol
    """
    rational = RationalPart(tuple(poly), tuple(Pole(eta, tuple(alphas)) for eta, alphas in poles))
    return Symbol(rational=rational, tail=tail if tail is not None else Const(0.0),
                  analytic_radius=float(analytic_radius))
