"""
Tests for Toeplitz sections, eigenvectors, span evidence and orbits.
"""
import time

import numpy as np
import pytest

from conditions import classify
from conformal import example_symbol
from operators import (EigenvectorSpec, adjoint_eigenvector, backward_shift_apply, basis_span_check, eigenvector,
                       eigenvectors, find_preimages, gs_evidence, operator_sum_section, orbit_simulate,
                       rational_section, section_eigenvalues, shift_matrix, toeplitz_section)
from symbols.core import make_symbol
from utils.error_handler import (LambdaInRange, LambdaNotInHole, MultiplePreimagesCollide, Overflow,
                                 PreimageSearchFailed, SchemaError)


def test_rolewicz_section_is_scaled_shift(rolewicz):
    section = toeplitz_section(rolewicz, 8)
    assert section.matrix.shape == (8, 8)
    assert section.coefficient(-1) == pytest.approx(2.0)
    assert section.coefficient(9) == 0
    np.testing.assert_allclose(section.matrix, 2.0 * shift_matrix(8), atol=1e-12)


def test_fft_product_matches_dense(with_pole, rng):
    section = toeplitz_section(with_pole, 64)
    x = rng.standard_normal(64) + 1j * rng.standard_normal(64)
    np.testing.assert_allclose(section.apply(x), section.apply(x, method="dense"), rtol=0, atol=1e-12)
    with pytest.raises(ValueError):
        section.apply(x, method="sparse")


def test_backward_shift():
    np.testing.assert_array_equal(backward_shift_apply(np.array([1.0, 2.0, 3.0]), 1), [2.0, 3.0])
    assert backward_shift_apply(np.array([1.0, 2.0]), 3).size == 0
    with pytest.raises(ValueError):
        backward_shift_apply(np.array([1.0]), -1)


def test_shift_algebra_matches_fourier_section(with_pole):
    n = 32
    np.testing.assert_allclose(operator_sum_section(with_pole, n), toeplitz_section(with_pole, n).matrix, atol=1e-9)
    np.testing.assert_allclose(rational_section(with_pole, n).matrix, toeplitz_section(with_pole, n).matrix,
                               atol=1e-9)


def test_rational_section_ignores_tail(tridiagonal):
    np.testing.assert_allclose(rational_section(tridiagonal, 6).matrix, 2.0 * shift_matrix(6), atol=1e-14)


def test_conjugate_section_is_adjoint(with_pole):
    section = toeplitz_section(with_pole, 12)
    np.testing.assert_allclose(section.conjugate().matrix, section.matrix.conj().T)


def test_section_eigenvalues_of_tridiagonal(tridiagonal):
    values = section_eigenvalues(toeplitz_section(tridiagonal, 32), limit=16)
    assert values.size == 16
    expected = np.sort(np.abs(2.0 * np.sqrt(2.0) * np.cos(np.arange(1, 17) * np.pi / 17)))
    np.testing.assert_allclose(np.abs(values), expected, atol=1e-8)
    np.testing.assert_allclose(values.imag, 0.0, atol=1e-6)


def test_rolewicz_eigenvectors(rolewicz):
    [at_zero] = eigenvectors(rolewicz, 0.0, 64)
    np.testing.assert_allclose(at_zero.coeffs, np.r_[0.5, np.zeros(63)], atol=1e-14)
    assert at_zero.residual < 1e-12
    result = eigenvector(rolewicz, EigenvectorSpec(1.0, (), (1.0,)), 64)
    np.testing.assert_allclose(result.coeffs, 0.5 ** (np.arange(64) + 1), rtol=1e-12)
    assert result.residual < 1e-12
    assert result.to_dict()["n"] == 64


def test_tridiagonal_eigenvector(tridiagonal):
    [result] = eigenvectors(tridiagonal, 0.0, 64)
    np.testing.assert_allclose(result.coeffs[:5], [0.5, 0.0, -0.25, 0.0, 0.125], atol=1e-12)
    assert result.residual < 1e-10


def test_eigenvectors_are_linear_in_the_numerator():
    ex = example_symbol("ex3", {"n": 3, "eps": 0.01, "lam": 0.5})
    sym = ex.symbol
    q1, q2 = (1.0, 0.0, 0.0), (0.0, 1.0, 2.0)
    f1 = eigenvector(sym, EigenvectorSpec(0.5, (), q1), 64)
    f2 = eigenvector(sym, EigenvectorSpec(0.5, (), q2), 64)
    both = eigenvector(sym, EigenvectorSpec(0.5, (), (1.0, 1.0, 2.0)), 64)
    np.testing.assert_allclose(both.coeffs, f1.coeffs + f2.coeffs, atol=1e-12)
    np.testing.assert_allclose(f1.coeffs[:4], [1.0, 0.01, 0.0, 0.0], atol=1e-12)
    np.testing.assert_allclose(f2.coeffs[:4], [0.0, 1.0, 2.01, 0.02], atol=1e-12)
    assert max(f1.residual, f2.residual, both.residual) < 1e-9


def test_eigenvector_rejects_bad_input(rolewicz):
    with pytest.raises(LambdaInRange):
        eigenvector(rolewicz, EigenvectorSpec(3.0, (), (1.0,)), 32)
    with pytest.raises(SchemaError):
        eigenvector(rolewicz, EigenvectorSpec(0.0, (1.0,), ()), 32)
    with pytest.raises(SchemaError):
        eigenvector(rolewicz, EigenvectorSpec(0.0, (), (0.0, 1.0)), 32)


def test_basis_span_check(with_pole, rolewicz):
    report = basis_span_check(with_pole)
    assert report["N"] == 4
    assert report["invertible"]
    assert report["max_residual"] < 1e-10
    assert basis_span_check(rolewicz)["invertible"]


def test_adjoint_eigenvector(doubly_covered):
    spec = adjoint_eigenvector(doubly_covered, 0.0, n=256)
    np.testing.assert_allclose(sorted(p.imag for p in spec.preimages), [-np.sqrt(0.5), np.sqrt(0.5)], atol=1e-10)
    np.testing.assert_allclose(np.abs(spec.betas), [1.0, 1.0], atol=1e-8)
    assert spec.residual < 1e-8
    assert spec.coefficients(256).shape == (256,)


def test_adjoint_failures(doubly_covered, rolewicz):
    with pytest.raises(MultiplePreimagesCollide):
        find_preimages(doubly_covered, 2.0 * np.sqrt(2.0))
    with pytest.raises(PreimageSearchFailed):
        adjoint_eigenvector(rolewicz, 3.0, n=64)


def test_span_evidence_for_rolewicz(rolewicz):
    report = classify(rolewicz, grid_n=128)
    evidence = gs_evidence(rolewicz, report, m=12, n=512)
    assert evidence.skipped == []
    assert evidence.max_residual(12) < 1e-6
    frame = evidence.frame()
    by_size = frame.pivot(index="j", columns="m", values="residual")
    sizes = sorted(by_size.columns)
    for small, large in zip(sizes, sizes[1:]):
        assert np.all(by_size[large] <= by_size[small] + 1e-12)
    assert evidence.to_dict()["note"] == "evidence, not a certificate"


def test_span_evidence_needs_witnesses(contraction):
    report = classify(contraction, grid_n=128)
    with pytest.raises(LambdaNotInHole):
        gs_evidence(contraction, report)


def test_orbit_coverage(rolewicz, contraction):
    grows = orbit_simulate(rolewicz, n=256, steps=200, seed=7)
    shrinks = orbit_simulate(contraction, n=256, steps=200, seed=7)
    assert grows.summary["coverage"] > shrinks.summary["coverage"]
    assert shrinks.summary["final_log_norm"] < -100
    assert list(grows.frame.columns) == ["step", "log_norm_growth", "coverage"]
    again = orbit_simulate(rolewicz, n=256, steps=200, seed=7)
    assert again.summary == grows.summary


def test_orbit_overflow():
    with pytest.raises(Overflow):
        orbit_simulate(make_symbol([0.0, 1e15]), n=16, steps=3)


@pytest.mark.slow
def test_large_section_product(rolewicz, rng):
    n = 4096
    section = toeplitz_section(rolewicz, n)
    x = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    expected = 2.0 * np.r_[x[1:], 0.0]
    np.testing.assert_allclose(section.apply(x), expected, atol=1e-9)


@pytest.mark.slow
def test_fft_product_outpaces_dense(with_pole, rng):
    n = 4096
    section = toeplitz_section(with_pole, n)
    x = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    dense = section.apply_dense(x)
    fast = section.apply_fft(x)
    assert np.max(np.abs(fast - dense)) / np.max(np.abs(dense)) <= 1e-12

    ratios = []
    for _ in range(20):
        start = time.perf_counter()
        section.apply_dense(x)
        dense_time = time.perf_counter() - start
        start = time.perf_counter()
        section.apply_fft(x)
        fft_time = time.perf_counter() - start
        ratios.append(dense_time / fft_time)
    assert np.median(ratios) >= 10.0


@pytest.mark.slow
@pytest.mark.parametrize("name, lambdas", [
    ("rolewicz", (0.0, 0.5, 1j, complex(-1.0, 0.5))),
    ("tridiagonal", (0.0, 1.0, -1.5, 0.5j)),
])
def test_eigenvector_residuals_shrink_with_size(request, name, lambdas):
    sym = request.getfixturevalue(name)
    for lam in lambdas:
        residuals = {n: eigenvector(sym, EigenvectorSpec(lam, (), (1.0,)), n).residual for n in (512, 1024, 2048)}
        assert residuals[2048] <= 1e-8, f"lambda = {lam}"
        for n in (1024, 2048):
            assert residuals[n] <= max(0.5 * residuals[n // 2], 1e-10), f"lambda = {lam}, n = {n}"
