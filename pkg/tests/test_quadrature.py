import numpy as np
import pytest

from nesskit.quadrature import QuadratureSpec, QuadratureError, adaptive_quad


def test_polynomial_exact():
    spec = QuadratureSpec(tol=1e-12)
    value = adaptive_quad(lambda x: x ** 4, 0.0, 2.0, spec)
    assert abs(value - 32.0 / 5.0) < 1e-12


def test_breakpoint_handles_jump():
    spec = QuadratureSpec(tol=1e-12, breakpoints=(0.0,))
    value = adaptive_quad(lambda x: np.where(x > 0, 1.0, -1.0) * x, -1.0, 2.0, spec)
    assert abs(value - 2.5) < 1e-12


def test_oscillatory_with_rate_hint():
    m = 400
    spec = QuadratureSpec(tol=1e-11)
    value = adaptive_quad(lambda k: np.cos(m * k), 0.0, np.pi, spec, rate=m)
    assert abs(value - np.sin(m * np.pi) / m) < 1e-10


def test_complex_and_matrix_valued():
    spec = QuadratureSpec(tol=1e-12)
    value = adaptive_quad(lambda x: np.exp(1j * x), 0.0, np.pi, spec)
    assert abs(value - 2j) < 1e-11

    def matrix_fn(x):
        out = np.zeros((len(x), 2, 2))
        out[:, 0, 0] = x
        out[:, 1, 1] = x ** 2
        return out

    block = adaptive_quad(matrix_fn, 0.0, 1.0, spec)
    assert np.allclose(block, np.diag([0.5, 1.0 / 3.0]), atol=1e-12)


def test_depth_cap_raises_with_estimate():
    spec = QuadratureSpec(tol=1e-14, max_depth=2)
    with pytest.raises(QuadratureError) as err:
        adaptive_quad(lambda k: np.cos(300.0 * k), 0.0, np.pi, spec)
    assert err.value.estimate is not None


def test_tolerance_validation():
    with pytest.raises(ValueError):
        QuadratureSpec(tol=0.0)
