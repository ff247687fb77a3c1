"""
Tests for preimage counting, boundary curves and region maps.
"""
import numpy as np
import pytest

from symbols.core import AnalyticMap, make_symbol
from symbols.expressions import polynomial
from utils.error_handler import DomainViolation, TooCloseToCurve
from valence import (adaptive_region_map, analyze_valence, build_curve, companion_count, general_position,
                     preimage_count, preimage_counts, verify_component_counts)


@pytest.fixture
def limacon():
    """z + 2 z^2: boundary curve with one inner loop through -2."""
    return AnalyticMap(expr=polynomial([0.0, 1.0, 2.0]), analytic_radius=2.0)


def random_rational(rng):
    n1 = int(rng.integers(0, 3))
    poly = list(rng.standard_normal(n1 + 1) + 1j * rng.standard_normal(n1 + 1))
    poles = []
    for _ in range(int(rng.integers(1, 3))):
        eta = rng.uniform(1.5, 3.0) * np.exp(2j * np.pi * rng.uniform())
        order = int(rng.integers(1, 3))
        poles.append((eta, list(rng.standard_normal(order) + 1j * rng.standard_normal(order))))
    return make_symbol(poly, poles)


def test_rolewicz_counts(rolewicz):
    assert preimage_count(rolewicz, 0.0) == 0
    assert preimage_count(rolewicz, 1.0) == 0
    assert preimage_count(rolewicz, 3.0) == 1
    assert preimage_count(rolewicz, 1.0, rho=1.5) == 0
    assert preimage_count(rolewicz, 1.5, rho=1.5) == 1


def test_tridiagonal_counts(tridiagonal):
    assert preimage_count(tridiagonal, 0.0) == 0
    assert preimage_count(tridiagonal, 5.0) == 1
    assert preimage_count(tridiagonal, 0.5j) == 0


def test_doubly_covered_counts(doubly_covered):
    assert preimage_count(doubly_covered, 0.0) == 2
    assert preimage_count(doubly_covered, 2.0 * np.sqrt(2.0)) == 2
    assert preimage_count(doubly_covered, 4.0) == 1


def test_point_on_curve_is_refused(rolewicz):
    with pytest.raises(TooCloseToCurve):
        preimage_count(rolewicz, 2.0)
    with pytest.raises(TooCloseToCurve):
        preimage_count(rolewicz, 2.05, band=0.1)


def test_radius_beyond_analyticity(rolewicz):
    with pytest.raises(DomainViolation):
        preimage_count(rolewicz, 0.0, rho=3.0)


def test_counts_agree_with_companion_oracle(rng):
    for _ in range(6):
        sym = random_rational(rng)
        values = build_curve(sym, 1.0, intersections=False).values
        lo = values.real.min() + 1j * values.imag.min()
        hi = values.real.max() + 1j * values.imag.max()
        ws = lo.real + (hi.real - lo.real) * rng.uniform(-0.1, 1.1, 300)
        ws = ws + 1j * (lo.imag + (hi.imag - lo.imag) * rng.uniform(-0.1, 1.1, 300))
        counts = preimage_counts(sym, ws, strict=False)
        checked = 0
        for w, count in zip(ws, counts):
            if count < 0 or np.min(np.abs(values - w)) < 1e-6:
                continue
            assert count == companion_count(sym, w), f"w = {w}"
            checked += 1
        assert checked > 200


def off_curve_points(sym, rng, wanted, batch=500):
    """Random points over the curve's bounding box, kept only where the count is defined."""
    values = build_curve(sym, 1.0, intersections=False).values
    lo = values.real.min() + 1j * values.imag.min()
    hi = values.real.max() + 1j * values.imag.max()
    kept_ws, kept_counts = [], []
    for _ in range(20):
        ws = lo.real + (hi.real - lo.real) * rng.uniform(-0.1, 1.1, batch)
        ws = ws + 1j * (lo.imag + (hi.imag - lo.imag) * rng.uniform(-0.1, 1.1, batch))
        counts = preimage_counts(sym, ws, strict=False)
        for w, count in zip(ws, counts):
            if count >= 0 and np.min(np.abs(values - w)) >= 1e-6:
                kept_ws.append(w)
                kept_counts.append(int(count))
        if len(kept_ws) >= wanted:
            break
    return kept_ws[:wanted], kept_counts[:wanted]


@pytest.mark.slow
def test_companion_oracle_many_symbols():
    rng = np.random.default_rng(2024)
    for _ in range(20):
        sym = random_rational(rng)
        assert sym.N <= 6
        ws, counts = off_curve_points(sym, rng, 2000)
        assert len(ws) == 2000
        oracle = [companion_count(sym, w) for w in ws]
        mismatches = [(w, c, o) for w, c, o in zip(ws, counts, oracle) if c != o]
        assert mismatches == []


def test_companion_count_with_polynomial_tail(tridiagonal):
    for w in (0.0, 5.0, 1.0 + 0.5j, -4.0):
        assert companion_count(tridiagonal, w, tail_coeffs=[0.0, 1.0]) == preimage_count(tridiagonal, w)


def test_ellipse_has_no_self_intersections(tridiagonal):
    curve = build_curve(tridiagonal)
    assert curve.self_intersections == []
    assert curve.diameter == pytest.approx(np.sqrt(40.0), rel=1e-3)
    report = general_position(tridiagonal, curve)
    assert report.ok


def test_limacon_crossing(limacon):
    curve = build_curve(limacon)
    assert len(curve.self_intersections) == 1
    crossing = curve.self_intersections[0]
    assert crossing.point == pytest.approx(-2.0, abs=1e-6)
    assert np.cos(crossing.t1) == pytest.approx(-0.25, abs=1e-6)
    assert np.cos(crossing.t2) == pytest.approx(-0.25, abs=1e-6)
    assert general_position(limacon, curve).ok


def test_general_position_needs_analyticity_past_circle():
    disk_only = AnalyticMap(expr=polynomial([0.0, 1.0, 2.0]), analytic_radius=1.0)
    report = general_position(disk_only, build_curve(disk_only))
    assert not report.ok
    assert not report.analytic_ok
    assert report.simple_transversal
    assert report.derivative_ok
    assert report.to_dict()["analytic_ok"] is False


def test_limacon_regions(limacon):
    curve, rmap, gp = analyze_valence(limacon, grid_n=256)
    assert gp.ok
    assert rmap.max_k == 2
    assert set(rmap.legend()) == {0, 1, 2}
    assert rmap.component_of_value(0.0).k == 2
    assert rmap.component_of_value(2.0).k == 1
    assert rmap.unbounded.k == 0
    for edge in rmap.adjacency:
        assert abs(rmap.component(edge.a).k - rmap.component(edge.b).k) == 1
    assert all(verify_component_counts(limacon, rmap).values())


def test_rolewicz_region_map_has_one_hole(rolewicz):
    rmap = adaptive_region_map(rolewicz, 1.0, 128)
    assert [c.k for c in rmap.holes()] == [0]
    assert rmap.unbounded.k == 1
    assert rmap.component_of_value(0.0).bounded
