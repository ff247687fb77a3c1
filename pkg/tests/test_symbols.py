"""
Tests for symbol evaluation, Fourier coefficients and the JSON schema.
"""
import json

import numpy as np
import pytest

from symbols import fourier_coefficients, load_symbol, make_symbol, resolvent, symbol_from_dict
from symbols.expressions import Exp, Identity, expr_from_dict, polynomial
from utils.error_handler import DomainViolation, LambdaInRange, PoleHit, SchemaError


def direct_rational(w):
    return 0.3 + w + 0.5 * w ** 2 + 1.0 / (w - 2.0) - 0.2 / (w - 2.0) ** 2


def test_pole_counts(with_pole, rolewicz):
    assert (with_pole.N1, with_pole.N2, with_pole.N) == (2, 2, 4)
    assert with_pole.degree == 4
    assert rolewicz.N == 1
    assert with_pole.pole_count(0.4) == 2
    assert with_pole.pole_count(1.0) == 4


def test_evaluate_matches_rational_in_w(with_pole, rng):
    z = 0.9 * np.sqrt(rng.uniform(0.05, 1.0, 50)) * np.exp(2j * np.pi * rng.uniform(size=50))
    z = z[np.abs(z - 0.5) > 0.05]
    np.testing.assert_allclose(with_pole.evaluate(z), direct_rational(1.0 / z), rtol=1e-12)


def test_derivative_matches_difference_quotient(with_pole, tridiagonal):
    z = np.array([0.3 + 0.4j, -0.7 + 0.1j, 0.95j])
    h = 1e-6
    for sym in (with_pole, tridiagonal):
        numeric = (sym.evaluate(z + h) - sym.evaluate(z - h)) / (2 * h)
        np.testing.assert_allclose(sym.derivative(z), numeric, rtol=1e-6)


def test_pole_and_domain_errors(rolewicz):
    with pytest.raises(PoleHit):
        rolewicz.evaluate(np.array([0.0]))
    with pytest.raises(DomainViolation):
        rolewicz.evaluate(np.array([2.5]))


def test_invalid_rational_parts():
    with pytest.raises(SchemaError):
        make_symbol([0.0], [(0.5, [1.0])])
    with pytest.raises(SchemaError):
        make_symbol([1.0, 0.0])
    with pytest.raises(SchemaError):
        make_symbol([0.0, 1.0], analytic_radius=0.5)


def test_negative_coefficients_closed_form():
    sym = make_symbol([0.0], [(2.0, [1.0])])
    np.testing.assert_allclose(sym.rational.negative_coefficients(3), [-0.5, -0.25, -0.125, -0.0625])


def test_conjugate_evaluate_is_conjugate_on_circle(with_pole):
    z = np.exp(1j * np.linspace(0.1, 6.0, 9))
    np.testing.assert_allclose(with_pole.rational.conjugate_evaluate(z), np.conj(with_pole.evaluate(z)),
                               rtol=1e-12)


def test_fourier_coefficients_of_rolewicz(rolewicz):
    fc = fourier_coefficients(rolewicz, 3, 3)
    assert fc[-1] == pytest.approx(2.0)
    for k in (-3, -2, 0, 1, 2, 3):
        assert abs(fc[k]) < 1e-12
    assert fc[10] == 0


def test_fourier_coefficients_of_tail():
    sym = make_symbol([0.0], tail=Exp(Identity()), analytic_radius=3.0)
    fc = fourier_coefficients(sym, 0, 6)
    expected = [1.0, 1.0, 0.5, 1.0 / 6, 1.0 / 24, 1.0 / 120, 1.0 / 720]
    np.testing.assert_allclose(fc.values.real, expected, atol=1e-12)


def test_resolvent_and_recenter(tridiagonal):
    h = resolvent(tridiagonal, 0.0)
    z = np.array([0.3 + 0.2j])
    assert h.evaluate(z)[0] == pytest.approx(1.0 / tridiagonal.evaluate(z)[0])
    c1, c2, c3 = h.recenter(0.4j)
    shifted = resolvent(tridiagonal, 0.4j).evaluate(z)[0]
    assert c1 + c2 / (h.evaluate(z)[0] - c3) == pytest.approx(shifted)


def test_resolvent_refuses_attained_value(rolewicz):
    with pytest.raises(LambdaInRange):
        resolvent(rolewicz, 4.0)


def test_schema_reproduces_symbol(with_pole, tridiagonal):
    for sym in (with_pole, tridiagonal):
        again = symbol_from_dict(json.loads(json.dumps(sym.to_dict())))
        z = np.array([0.2 + 0.7j, -0.6 - 0.3j])
        np.testing.assert_allclose(again.evaluate(z), sym.evaluate(z))


def test_schema_rejects_pole_inside_disk():
    with pytest.raises(SchemaError):
        symbol_from_dict({"poly": [[0.0, 0.0]], "poles": [{"eta": [0.5, 0.0], "alphas": [[1.0, 0.0]]}]})


def test_unknown_tail_op():
    with pytest.raises(SchemaError):
        expr_from_dict({"op": "gamma", "args": [], "params": {}})


def test_load_symbol_reports_line(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text('{\n  "poly": [[0, 0],\n}\n')
    with pytest.raises(SchemaError) as info:
        load_symbol(str(path))
    assert info.value.details["line"] >= 2


def test_polynomial_tail():
    p = polynomial([1.0, 0.0, 2.0])
    assert p.evaluate(np.array([3.0]))[0] == pytest.approx(19.0)
