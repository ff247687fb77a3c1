"""
Finite Toeplitz sections of T_Phi on the monomial basis of H^2.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Optional
import logging

import numpy as np
from scipy import fft, linalg

from symbols.core import Symbol
from symbols.fourier import fourier_coefficients

# Configure logging
logging.basicConfig(level=logging.INFO,
                   format='%(asctime)s - %(name)s - %(levelname)s - %(message)s')
logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ToeplitzSection:
    """
    n x n section with entry (i, j) equal to the symbol coefficient i - j.

    `coeffs` holds indices -(n-1)..(n-1) left to right. Products use either
    the dense matrix or a circulant embedding of size 2^m >= 2n.
    """

    n: int
    coeffs: np.ndarray

    def __post_init__(self):
        coeffs = np.asarray(self.coeffs, dtype=complex)
        if coeffs.shape != (2 * self.n - 1,):
            raise ValueError(f"Section of size {self.n} needs {2 * self.n - 1} coefficients, got {coeffs.shape}")
        object.__setattr__(self, "coeffs", coeffs)

    def coefficient(self, k: int) -> complex:
        if abs(k) >= self.n:
            return 0j
        return complex(self.coeffs[k + self.n - 1])

    @property
    def fft_size(self) -> int:
        return 1 << int(np.ceil(np.log2(2 * self.n)))

    @cached_property
    def _circulant_fft(self) -> np.ndarray:
        size = self.fft_size
        column = np.zeros(size, dtype=complex)
        column[: self.n] = self.coeffs[self.n - 1:]
        if self.n > 1:
            column[size - self.n + 1:] = self.coeffs[: self.n - 1]
        return fft.fft(column)

    @cached_property
    def matrix(self) -> np.ndarray:
        column = self.coeffs[self.n - 1:]
        row = self.coeffs[: self.n][::-1]
        return linalg.toeplitz(column, row)

    def dense(self) -> np.ndarray:
        return self.matrix.copy()

    def apply_dense(self, x: np.ndarray) -> np.ndarray:
        return self.matrix @ np.asarray(x, dtype=complex)

    def apply_fft(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=complex)
        return fft.ifft(self._circulant_fft * fft.fft(x, n=self.fft_size))[: self.n]

    def apply(self, x: np.ndarray, method: str = "fft") -> np.ndarray:
        """
        Multiply a coefficient vector by the section.

        Args:
            x (np.ndarray): Vector of length n
            method (str): "fft" or "dense"

        Returns:
            np.ndarray: Product of length n
        """
        if method == "dense":
            return self.apply_dense(x)
        if method == "fft":
            return self.apply_fft(x)
        raise ValueError(f"Unknown apply method '{method}'")

    def conjugate(self) -> "ToeplitzSection":
        """Section of T with the conjugate symbol: coefficient k becomes conj(coefficient -k)."""
        return ToeplitzSection(self.n, np.conj(self.coeffs[::-1]))


def toeplitz_section(sym: Symbol, n: int) -> ToeplitzSection:
    """
    Build the n x n section of T_Phi from the Fourier coefficients of Phi.

    Args:
        sym (Symbol): Symbol
        n (int): Section size

    Returns:
        ToeplitzSection: The section

    Raises:
        NonConvergence: If the Fourier coefficients do not settle
    """
    if n < 1:
        raise ValueError(f"Section size must be positive, got {n}")
    fc = fourier_coefficients(sym, n - 1, n - 1)
    logger.info(f"Built Toeplitz section of size {n} (FFT size {fc.fft_size})")
    return ToeplitzSection(n, fc.values)


def backward_shift_apply(f_coeffs: np.ndarray, k: int) -> np.ndarray:
    """(S*)^k f: drop the first k Taylor coefficients."""
    if k < 0:
        raise ValueError(f"Shift power must be nonnegative, got {k}")
    return np.array(f_coeffs, dtype=complex)[k:]


def shift_matrix(n: int) -> np.ndarray:
    """Section of the backward shift: ones on the superdiagonal."""
    return np.eye(n, k=1, dtype=complex)


def operator_sum_section(sym: Symbol, n: int) -> np.ndarray:
    """
    Section of R(T_{1/z}) assembled from shift algebra:
    sum c_k (S*)^k + sum alpha_{l,j} ((S* - eta_l)^{-1})^j.

    Upper-triangular Toeplitz sections form an algebra, so the inverse of
    the truncated S* - eta equals the truncation of the inverse.

    Args:
        sym (Symbol): Symbol whose rational part is used
        n (int): Section size

    Returns:
        np.ndarray: Dense n x n matrix
    """
    shift = shift_matrix(n)
    out = np.zeros((n, n), dtype=complex)
    power = np.eye(n, dtype=complex)
    for c in sym.rational.poly_coeffs:
        out += c * power
        power = power @ shift
    for pole in sym.rational.poles:
        inverse = linalg.solve_triangular(shift - pole.eta * np.eye(n), np.eye(n, dtype=complex))
        term = np.eye(n, dtype=complex)
        for alpha in pole.alphas:
            term = term @ inverse
            out += alpha * term
    return out


def rational_section(sym: Symbol, n: int) -> ToeplitzSection:
    """Section of the antianalytic part R(1/z) alone, from its closed-form coefficients."""
    negative = sym.rational.negative_coefficients(n - 1)
    coeffs = np.zeros(2 * n - 1, dtype=complex)
    coeffs[: n] = negative[::-1]
    return ToeplitzSection(n, coeffs)


def section_eigenvalues(section: ToeplitzSection, limit: Optional[int] = None) -> np.ndarray:
    """
    Eigenvalues of a (possibly smaller) leading section, sorted by modulus then angle.

    Finite sections of non-normal Toeplitz operators need not approximate
    the spectrum; the cloud is a diagnostic only.
    """
    size = section.n if limit is None else min(limit, section.n)
    values = linalg.eigvals(section.matrix[:size, :size])
    order = np.lexsort((np.angle(values), np.round(np.abs(values), 12)))
    return values[order]
