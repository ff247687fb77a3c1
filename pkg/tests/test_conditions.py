"""
Tests for the hypercyclicity checks and the classifier.
"""
import numpy as np
import pytest

from conditions import (Status, Verdict, check_dvc, check_dvc_prime, check_iac, check_mvc, classify,
                        descending_chains, search_iac, spectrum_estimate, validate_chain)
from conditions.report import UNIT_COVER
from conformal import example_symbol
from symbols.core import AnalyticMap, make_symbol
from symbols.expressions import polynomial
from utils.error_handler import LambdaInRange, LambdaNotInHole
from valence import adaptive_region_map

GRID = 128


def test_rolewicz_is_certified(rolewicz):
    report = classify(rolewicz, grid_n=GRID)
    assert report.N == 1
    assert report.n_valent_ok
    assert report.spe_ok
    assert abs(report.spe.lambda0) < 1.0 < abs(report.spe.lambda1)
    assert report.mvc.status == Status.PASS
    assert report.verdict == Verdict.CERTIFIED_MVC
    assert report.errors == []


def test_tridiagonal_is_certified(tridiagonal):
    report = classify(tridiagonal, grid_n=GRID, hints=(0j, 2.0))
    assert report.verdict == Verdict.CERTIFIED_MVC
    assert report.to_dict()["verdict"] == "certified_MVC"


def test_contraction_is_inconclusive(contraction):
    report = classify(contraction, grid_n=GRID)
    assert report.verdict == Verdict.INCONCLUSIVE
    assert not report.spe_ok
    assert report.norm_lower_bound == pytest.approx(0.5)
    assert any("contraction" in note for note in report.notes)


def test_doubly_covered_fails_necessary(doubly_covered):
    report = classify(doubly_covered, grid_n=GRID)
    assert report.verdict == Verdict.NECESSARY_FAILED
    assert not report.n_valent_ok
    assert report.necessary.max_count == 2
    assert report.necessary.witness["k"] == 2
    assert report.mvc.status == Status.INCONCLUSIVE


def test_mvc_counterexample(doubly_covered):
    result = check_mvc(doubly_covered, grid_n=GRID)
    assert result.status == Status.FAIL
    assert result.details["count"] == 2


def test_mvc_inconclusive_without_closed_disk():
    sym = make_symbol([0.0, 2.0], analytic_radius=1.0)
    assert check_mvc(sym).status == Status.INCONCLUSIVE


def test_iac_rolewicz(rolewicz):
    result = check_iac(rolewicz, 0.0)
    assert result.passed
    assert result.details["winding"] == 1
    assert result.details["min_derivative"] == pytest.approx(1.0, abs=1e-9)
    with pytest.raises(LambdaInRange):
        check_iac(rolewicz, 4.0)


@pytest.mark.parametrize("n", [2, 3, 5])
@pytest.mark.parametrize("eps", [0.005, 0.01, 0.02])
def test_iac_for_perturbed_powers(n, eps):
    ex = example_symbol("ex3", {"n": n, "eps": eps, "lam": 0.5})
    result = check_iac(ex.symbol, 0.5)
    assert result.passed
    assert result.details["winding"] == n
    assert abs(result.details["min_derivative"] - n) <= 10 * eps


def test_iac_fails_when_argument_turns_back():
    # h = z / (1 + 0.8 z^3) turns backwards near z = 1
    sym = make_symbol([0.0, 1.0], tail=polynomial([0.0, 0.0, 0.8]), analytic_radius=1.05)
    result = check_iac(sym, 0.0)
    assert result.status == Status.FAIL
    assert result.details["min_derivative"] < 0
    searched = search_iac(sym, [0.0])
    assert searched.status == Status.FAIL
    assert searched.details["lambdas_passing"] == 0


def test_search_iac_without_admissible_lambda(rolewicz):
    assert search_iac(rolewicz, []).status == Status.INCONCLUSIVE
    assert search_iac(rolewicz, [4.0]).status == Status.INCONCLUSIVE


def test_dvc_on_rolewicz(rolewicz):
    rmap = adaptive_region_map(rolewicz, 1.0, GRID, cover=UNIT_COVER)
    result = check_dvc(rolewicz, rmap, 0.0, 1.5)
    assert result.passed
    assert result.details["blocked"] == []
    with pytest.raises(LambdaNotInHole):
        check_dvc(rolewicz, rmap, 0.0, 3.0)


def test_descending_chains_of_limacon():
    h = AnalyticMap(expr=polynomial([0.0, 1.0, 2.0]), analytic_radius=2.0)
    rmap = adaptive_region_map(h, 1.0, 256)
    outer = rmap.unbounded
    chains = descending_chains(rmap, outer.id)
    top = rmap.component_of_value(0.0)
    assert top.k == 2
    assert [rmap.component(c).k for c in chains[top.id]] == [2, 1, 0]
    assert all(validate_chain(rmap, chain) for chain in chains.values())
    assert not validate_chain(rmap, [top.id])
    assert check_dvc_prime(h, rmap).passed


def test_spectrum_of_scaled_backward_shift(rolewicz):
    rmap = adaptive_region_map(rolewicz, 1.0, GRID, cover=UNIT_COVER)
    est = spectrum_estimate(rmap, 1, rolewicz)
    rows, cols = np.indices(est.mask.shape)
    values = rmap.to_value(rmap.cell_centers(rows.ravel(), cols.ravel()))
    tol = 2.0 * np.hypot(rmap.dx, rmap.dy) + rmap.band
    far = np.abs(np.abs(values) - 2.0) > tol
    np.testing.assert_array_equal(est.mask.ravel()[far], (np.abs(values) < 2.0)[far])
    assert est.meets_circle()
    assert est.meets_outside()
    assert set(est.frame().columns) == {"x", "y", "in_spectrum"}
