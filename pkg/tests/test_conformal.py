"""
Tests for the conformal maps and the example constructions.
"""
import numpy as np
import pytest

from conditions import Status, Verdict, check_dvc_prime, classify
from conformal import (SectorAnnulusParams, blaschke, example_symbol, locate_zeros, peel_principal_parts,
                       rectangle_to_disk, sector_annulus_map, univalence_evidence)
from conformal.examples import FIGURE_GRID, SHIFT_DIRECTIONS, figure_map
from symbols.expressions import polynomial
from utils.error_handler import ParamInvalid, ZeroOutsideDisk
from valence import general_position, region_map

SECTOR = SectorAnnulusParams(r=0.5, R=0.9, alpha=0.3)


def test_rectangle_round_trip(rng):
    cmap = rectangle_to_disk(2.0, 1.0)
    z = rng.uniform(-0.95, 0.95, 200) + 0.5j * rng.uniform(-0.95, 0.95, 200)
    w = cmap.evaluate(z)
    assert np.all(np.abs(w) < 1.0)
    np.testing.assert_allclose(cmap.invert(w), z, atol=1e-8)
    assert abs(cmap.evaluate(np.array([0j]))[0]) < 1e-12


def test_rectangle_edges_land_on_circle():
    cmap = rectangle_to_disk(2.0, 1.0)
    y = np.linspace(-0.45, 0.45, 31)
    edges = np.concatenate([1.0 + 1j * y, -1.0 + 1j * y, np.linspace(-0.9, 0.9, 31) + 0.5j])
    np.testing.assert_allclose(np.abs(cmap.evaluate(edges)), 1.0, atol=1e-8)


def test_sector_boundary_is_reached():
    cmap = sector_annulus_map(SECTOR)
    t = 2.0 * np.pi * np.arange(4096) / 4096
    w = cmap.evaluate((1.0 - 1e-12) * np.exp(1j * t))
    logs, args = np.log(np.abs(w)), np.angle(w)
    gap = np.min(np.abs(np.stack([logs - np.log(SECTOR.r), logs - np.log(SECTOR.R),
                                  args - SECTOR.theta_min, args - SECTOR.theta_max])), axis=0)
    assert np.max(gap) < 1e-5


def test_sector_interior_and_inverse(rng):
    cmap = sector_annulus_map(SECTOR)
    z = 0.8 * np.sqrt(rng.uniform(size=100)) * np.exp(2j * np.pi * rng.uniform(size=100))
    w = cmap.evaluate(z)
    assert np.all((np.abs(w) > SECTOR.r) & (np.abs(w) < SECTOR.R))
    assert np.all((np.angle(w) > SECTOR.theta_min) & (np.angle(w) < SECTOR.theta_max))
    np.testing.assert_allclose(cmap.invert(w), z, atol=1e-8)


def test_sector_base_point():
    base = 0.7 * np.exp(1j * 1.0)
    cmap = sector_annulus_map(SECTOR, base_point=base)
    assert cmap.evaluate(np.array([0j]))[0] == pytest.approx(base, abs=1e-8)


def test_sector_parameter_checks():
    with pytest.raises(ParamInvalid):
        SectorAnnulusParams(r=0.5, R=2.0, alpha=0.3).validate()
    with pytest.raises(ParamInvalid):
        SectorAnnulusParams(r=0.5, R=0.9, alpha=0.5).validate()
    assert SECTOR.theta_min == pytest.approx(-np.pi / 4 + 0.3)
    assert SECTOR.theta_max == pytest.approx(np.pi - 0.3)


def test_blaschke_product():
    zeros = [0.3, -0.2 + 0.5j]
    B = blaschke(zeros, np.exp(0.4j))
    z = np.exp(1j * np.linspace(0.0, 6.0, 50))
    np.testing.assert_allclose(np.abs(B.evaluate(z)), 1.0, atol=1e-12)
    np.testing.assert_allclose(B.evaluate(np.array(zeros)), 0.0, atol=1e-14)
    with pytest.raises(ZeroOutsideDisk):
        blaschke([1.2])


def test_locate_simple_and_double_zeros():
    zeros = sorted(locate_zeros(polynomial([0.06, -0.5, 1.0])), key=lambda item: item[0].real)
    assert [m for _, m in zeros] == [1, 1]
    assert zeros[0][0] == pytest.approx(0.2, abs=1e-9)
    assert zeros[1][0] == pytest.approx(0.3, abs=1e-9)
    [(p, m)] = locate_zeros(polynomial([0.0625, -0.5, 1.0]))
    assert m == 2
    assert p == pytest.approx(0.25, abs=1e-8)


def test_peel_matches_reciprocal(rng):
    F = polynomial([0.0, -0.5, 1.0])
    sym = peel_principal_parts(F, 1.5)
    assert sym.N == 2
    z = 0.95 * np.sqrt(rng.uniform(0.1, 1.0, 60)) * np.exp(2j * np.pi * rng.uniform(size=60))
    z = z[(np.abs(z) > 0.1) & (np.abs(z - 0.5) > 0.1)]
    np.testing.assert_allclose(sym.evaluate(z), 1.0 / F.evaluate(z), rtol=1e-8)


def test_ex3_closed_form(rng):
    n, eps, lam = 3, 0.02, 0.5
    sym = example_symbol("ex3", {"n": n, "eps": eps, "lam": lam}).symbol
    assert sym.N == n
    z = 0.9 * np.sqrt(rng.uniform(0.1, 1.0, 50)) * np.exp(2j * np.pi * rng.uniform(size=50))
    expected = lam + 1.0 / (z ** n * (1.0 + eps * z))
    np.testing.assert_allclose(sym.evaluate(z), expected, rtol=1e-12)


def test_ex3_peeled_agrees_with_closed_form(rng):
    params = {"n": 2, "eps": 0.01, "lam": 0.5}
    closed = example_symbol("ex3", params).symbol
    peeled = example_symbol("ex3", {**params, "psi": "identity"}).symbol
    z = 0.9 * np.sqrt(rng.uniform(0.1, 1.0, 40)) * np.exp(2j * np.pi * rng.uniform(size=40))
    np.testing.assert_allclose(peeled.evaluate(z), closed.evaluate(z), rtol=1e-8)


def test_presets():
    ex = example_symbol("rolewicz", {"alpha": 3.0})
    assert ex.symbol.N == 1
    assert ex.hints[0] == 0
    assert example_symbol("tridiagonal").symbol.N == 1
    with pytest.raises(ParamInvalid):
        example_symbol("nope")
    with pytest.raises(ParamInvalid):
        example_symbol("necessary_fail", {"a": 2.0, "b": 1.0})
    with pytest.raises(ParamInvalid):
        example_symbol("ex2", {"N": 0})


def test_sector_map_is_univalent():
    evidence = univalence_evidence(sector_annulus_map(SECTOR).forward)
    assert evidence["ok"]
    assert evidence["min_spacing"] > 0
    assert evidence["min_derivative"] > 0
    shifted = sector_annulus_map(SECTOR, base_point=0.7 * np.exp(0.4j)).forward
    assert univalence_evidence(shifted)["ok"]


def test_squaring_is_not_univalent():
    evidence = univalence_evidence(polynomial([0.0, 0.0, 1.0]))
    assert not evidence["ok"]
    assert evidence["samples"] == 2048


def test_presets_record_univalence():
    ex = example_symbol("ex2", {"N": 2})
    assert ex.params["univalence"]["ok"]


def test_shift_along_first_quadrant_diagonal():
    assert SHIFT_DIRECTIONS[0] == complex(1.0, 1.0)
    params = SectorAnnulusParams(r=0.5, R=0.9, alpha=0.3, eps=0.05, beta=0.4)
    expr, rho, zeta0 = figure_map(params, rho=0.995)
    assert rho == 0.995
    assert zeta0 ** 2 * (1.0 + 0.05 * zeta0) == pytest.approx(0.4 * complex(1.0, 1.0), abs=1e-12)
    assert np.angle(zeta0) == pytest.approx(np.pi / 8, abs=0.06)
    origin = np.array([0j])
    assert abs(expr.evaluate(origin)[0]) < 1e-12
    assert abs(expr.derivative(origin)[0]) < 1e-6


def test_shift_root_outside_sector_is_rejected():
    params = SectorAnnulusParams(r=0.5, R=0.9, alpha=0.3, eps=0.05, beta=0.4)
    with pytest.raises(ParamInvalid):
        figure_map(params, direction=complex(-1.0, -1.0), rho=0.995)


@pytest.mark.slow
@pytest.mark.parametrize("kind", ["fig1", "fig2"])
def test_figure_fixtures(kind):
    ex = example_symbol(kind)
    assert ex.h is not None
    assert ex.symbol.N >= 1
    assert abs(ex.hints[1]) > 1.0
    assert ex.params["rho"] < 1.0
    assert ex.params["direction"] in SHIFT_DIRECTIONS
    assert ex.params["univalence"]["ok"]


@pytest.mark.slow
def test_fig1_certified_by_descending_chains():
    ex = example_symbol("fig1")
    hmap = region_map(ex.h, 1.0, FIGURE_GRID, strict=False)
    gp = general_position(ex.h, hmap.curve)
    assert gp.ok
    assert hmap.max_k == 2
    assert check_dvc_prime(ex.h, hmap, gp).passed
    assert classify(ex.symbol, hints=ex.hints).verdict == Verdict.CERTIFIED_DVC


@pytest.mark.slow
def test_fig2_has_blocked_component():
    ex = example_symbol("fig2")
    hmap = region_map(ex.h, 1.0, FIGURE_GRID, strict=False)
    gp = general_position(ex.h, hmap.curve)
    assert gp.ok
    assert hmap.max_k == 2
    result = check_dvc_prime(ex.h, hmap, gp)
    assert result.status == Status.FAIL
    blocked = result.details["blocked"]
    assert blocked
    ids = {c.id for c in hmap.components}
    for entry in blocked:
        assert entry["k"] >= 1
        assert entry["component"] in ids
