"""
Fourier coefficients of a symbol restricted to the unit circle.
"""
from __future__ import annotations

from dataclasses import dataclass
import logging

import numpy as np
from scipy import fft

import config
from symbols.core import Symbol
from utils.error_handler import NonConvergence

# Configure logging
logging.basicConfig(level=logging.INFO,
                   format='%(asctime)s - %(name)s - %(levelname)s - %(message)s')
logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FourierCoefficients:
    """Coefficients indexed -n_neg..n_pos, stored left to right."""

    values: np.ndarray
    n_neg: int
    n_pos: int
    fft_size: int

    def __getitem__(self, k: int) -> complex:
        if k < -self.n_neg or k > self.n_pos:
            return 0j
        return complex(self.values[k + self.n_neg])

    def indices(self) -> np.ndarray:
        return np.arange(-self.n_neg, self.n_pos + 1)

    def as_dict(self) -> dict:
        return {int(k): self[int(k)] for k in self.indices()}


def _fft_coefficients(sym: Symbol, log2_size: int, n_neg: int, n_pos: int) -> np.ndarray:
    size = 2 ** log2_size
    z = np.exp(2j * np.pi * np.arange(size) / size)
    spectrum = fft.fft(sym.evaluate(z)) / size
    k = np.arange(-n_neg, n_pos + 1)
    return spectrum[k % size]


def fourier_coefficients(sym: Symbol, n_neg: int, n_pos: int) -> FourierCoefficients:
    """
    Fourier coefficients of Phi on the circle by FFT with doubling control.

    The FFT size doubles until no requested coefficient moves by more than
    the Fourier tolerance; the negative indices are then checked against the
    closed-form expansion of the rational part.

    Args:
        sym (Symbol): Symbol, analytic on a neighborhood of the circle
        n_neg (int): Number of negative indices requested
        n_pos (int): Number of positive indices requested

    Returns:
        FourierCoefficients: Coefficients at -n_neg..n_pos

    Raises:
        NonConvergence: If doubling has not settled by 2^FOURIER_MAX_LOG2 samples,
            or if the two computations of the negative coefficients disagree
    """
    needed = n_neg + n_pos + 1
    log2_size = max(6, int(np.ceil(np.log2(2 * needed))))
    if log2_size > config.FOURIER_MAX_LOG2:
        raise NonConvergence(f"{needed} coefficients need more than 2^{config.FOURIER_MAX_LOG2} samples")
    previous = _fft_coefficients(sym, log2_size, n_neg, n_pos)
    while True:
        if log2_size + 1 > config.FOURIER_MAX_LOG2:
            raise NonConvergence(f"Fourier coefficients did not settle by 2^{config.FOURIER_MAX_LOG2} samples",
                                 {"n_neg": n_neg, "n_pos": n_pos})
        log2_size += 1
        current = _fft_coefficients(sym, log2_size, n_neg, n_pos)
        change = float(np.max(np.abs(current - previous)))
        if change <= config.FOURIER_TOL:
            break
        previous = current

    if n_neg > 0:
        closed = sym.rational.negative_coefficients(n_neg)[1:][::-1]
        gap = float(np.max(np.abs(current[:n_neg] - closed)))
        if gap > config.FOURIER_TOL:
            raise NonConvergence(f"FFT and closed-form negative coefficients differ by {gap:.3g}",
                                 {"gap": gap})
        current = current.copy()
        current[:n_neg] = closed
    logger.debug(f"Fourier coefficients settled at 2^{log2_size} samples")
    return FourierCoefficients(values=current, n_neg=n_neg, n_pos=n_pos, fft_size=2 ** log2_size)
