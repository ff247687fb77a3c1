"""
Jacobi elliptic functions of complex argument.

scipy.special.ellipj only accepts real arguments; complex values are obtained
from the addition formula with the imaginary part evaluated at the
complementary parameter. The inverse uses Carlson's symmetric integral R_F.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple

import numpy as np
from scipy import special

_NOME_TERMS = np.arange(0, 24, dtype=float)


@dataclass(frozen=True)
class EllipticParameters:
    """Parameter m, complementary parameter m1 = 1 - m and quarter periods K, K'."""

    m: float
    m1: float
    K: float
    Kp: float

    @property
    def k(self) -> float:
        return float(np.sqrt(self.m))


def _theta2(q: float) -> float:
    return float(2.0 * np.sum(q ** ((_NOME_TERMS + 0.5) ** 2)))


def _theta3(q: float) -> float:
    return float(1.0 + 2.0 * np.sum(q ** ((_NOME_TERMS[1:]) ** 2)))


def nome_parameters(period_ratio: float) -> EllipticParameters:
    """
    Elliptic parameters whose quarter-period ratio K'/K equals period_ratio.

    The nome q = exp(-pi K'/K) (or its complement) is always taken on the
    side where it is small so the theta series converge in a few terms.

    Args:
        period_ratio (float): Target ratio K'/K, positive

    Returns:
        EllipticParameters: m, m1, K, K'
    """
    if period_ratio >= 1.0:
        q = float(np.exp(-np.pi * period_ratio))
        t2, t3 = _theta2(q), _theta3(q)
        m = (t2 / t3) ** 4
        K = 0.5 * np.pi * t3 ** 2
        return EllipticParameters(m=m, m1=1.0 - m, K=K, Kp=K * period_ratio)
    q1 = float(np.exp(-np.pi / period_ratio))
    t2, t3 = _theta2(q1), _theta3(q1)
    m1 = (t2 / t3) ** 4
    Kp = 0.5 * np.pi * t3 ** 2
    return EllipticParameters(m=1.0 - m1, m1=m1, K=Kp / period_ratio, Kp=Kp)


def sn_cn_dn(u: np.ndarray, params: EllipticParameters) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Complex Jacobi sn, cn, dn.

    Args:
        u (np.ndarray): Complex arguments
        params (EllipticParameters): Parameter set

    Returns:
        Tuple[np.ndarray, np.ndarray, np.ndarray]: sn(u), cn(u), dn(u)
    """
    u = np.asarray(u, dtype=complex)
    s, c, d, _ = special.ellipj(u.real, params.m)
    s1, c1, d1, _ = special.ellipj(u.imag, params.m1)
    delta = c1 ** 2 + params.m * s ** 2 * s1 ** 2
    sn = (s * d1 + 1j * c * d * s1 * c1) / delta
    cn = (c * c1 - 1j * s * d * s1 * d1) / delta
    dn = (d * c1 * d1 - 1j * params.m * s * c * s1) / delta
    return sn, cn, dn


def arcsn(w: np.ndarray, m: float, upper: bool = True) -> np.ndarray:
    """
    Inverse of sn on a closed half-plane.

    With upper=True the closed upper half-plane goes onto [-K, K] x [0, K'];
    with upper=False the lower half-plane goes onto the reflected rectangle.
    Real w sit on the branch cut of R_F, so the sign of Im u is fixed explicitly.

    Args:
        w (np.ndarray): Complex values
        m (float): Parameter
        upper (bool): Which half-plane w belongs to

    Returns:
        np.ndarray: u with sn(u) = w
    """
    w = np.asarray(w, dtype=complex)
    u = w * special.elliprf(1.0 - w * w, 1.0 - m * w * w, np.ones_like(w))
    sign = 1.0 if upper else -1.0
    return u.real + 1j * sign * np.abs(u.imag)
