import math
import warnings

import numpy as np
import pytest
from hypothesis import given, strategies as st

from polariton_cr.model import (
    MaterialInputs,
    ModelParams,
    WeakNonlinearityWarning,
    build_polariton_basis,
    check_weak_nonlinearity,
    material_coefficients,
    polariton_coefficients,
)

finite = st.floats(-5e3, 5e3, allow_nan=False)
positive = st.floats(1e-3, 5e3, allow_nan=False)


def test_resonant_basis_is_balanced():
    b = build_polariton_basis(ModelParams.resonant(1000.0, A=10.0))
    assert b.theta == pytest.approx(math.pi / 4)
    assert b.u == pytest.approx(b.v)
    assert b.Delta == pytest.approx(2000.0)
    assert (b.omega1, b.omega2) == pytest.approx((-1000.0, 1000.0))
    assert (b.A11, b.A22, b.A12) == pytest.approx((2.5, 2.5, 5.0))
    assert b.chi == pytest.approx(5.0)


def test_resonant_coefficients_with_filling():
    A, B = 10.0, 3.0
    b = build_polariton_basis(ModelParams.resonant(1000.0, A=A, B=B))
    assert b.A11 == pytest.approx((A + 2 * B) / 4)
    assert b.A22 == pytest.approx((A - 2 * B) / 4)
    assert b.A12 == pytest.approx(A / 2)


@given(delta=finite, g=positive)
def test_hopfield_diagonalizes_linear_problem(delta, g):
    p = ModelParams.detuned(g, delta)
    b = build_polariton_basis(p)
    assert b.u**2 + b.v**2 == pytest.approx(1.0)
    assert 0 < b.theta < math.pi / 2
    assert b.omega2 - b.omega1 == pytest.approx(b.Delta)
    H = np.array([[p.omega_c, g], [g, p.omega_ex]])
    U = np.array([[-b.v, b.u], [b.u, b.v]])  # rows: p1, p2 in the (a, b) basis
    D = U @ H @ U.T
    scale = max(1.0, abs(delta), g)
    assert np.allclose(D, np.diag([b.omega1, b.omega2]), atol=1e-10 * scale)


@given(delta=st.floats(1.0, 5e3), g=positive)
def test_blue_detuned_lower_branch_is_exciton_like(delta, g):
    b = build_polariton_basis(ModelParams.detuned(g, delta))
    assert b.u > b.v or math.isclose(b.u, b.v, rel_tol=1e-9)


def test_mixing_angle_small_coupling_limit():
    # lower branch is the exciton for a blue-detuned cavity, the photon for a red-detuned one
    assert build_polariton_basis(ModelParams.detuned(1e-6, 1.0)).theta == pytest.approx(math.pi / 2, abs=1e-5)
    assert build_polariton_basis(ModelParams.detuned(1e-6, -1.0)).theta == pytest.approx(0.0, abs=1e-5)


@given(u2=st.floats(0.01, 0.99), A=st.floats(0, 100), B=st.floats(0, 100))
def test_coefficients_linear_in_A_and_B(u2, A, B):
    u, v = math.sqrt(u2), math.sqrt(1 - u2)
    a_only = np.array(polariton_coefficients(u, v, A, 0.0))
    b_only = np.array(polariton_coefficients(u, v, 0.0, B))
    both = np.array(polariton_coefficients(u, v, A, B))
    assert np.allclose(both, a_only + b_only, atol=1e-9 * (1 + A + B))


@pytest.mark.parametrize("field,value", [("g", 0.0), ("g", -1.0), ("A", -1.0), ("gamma1", -0.1), ("B", float("nan"))])
def test_invalid_params_rejected(field, value):
    kwargs = dict(omega_c=0.0, omega_ex=0.0, g=1.0)
    kwargs[field] = value
    with pytest.raises(ValueError):
        ModelParams(**kwargs)


def test_decay_factor_and_digest():
    p = ModelParams.resonant(1.0, gamma1=1.0, gamma2=3.0)
    assert p.decay_factor(1.0) == pytest.approx(math.exp(-2.0))
    assert p.digest() == ModelParams.resonant(1.0, gamma1=1.0, gamma2=3.0).digest()
    assert p.digest() != ModelParams.resonant(1.0, gamma1=1.0, gamma2=3.5).digest()


def test_weak_nonlinearity_warns_but_does_not_raise():
    p = ModelParams.resonant(100.0, A=10.0)
    with pytest.warns(WeakNonlinearityWarning):
        assert not check_weak_nonlinearity(p, 5)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        assert check_weak_nonlinearity(p, 2)


def test_material_coefficients():
    m = MaterialInputs(Ry_ex=10.0, a_ex=2.0, S=100.0, g=5.0)
    A, B = material_coefficients(m)
    assert A == pytest.approx(3 * 10.0 * 4.0 / 100.0)
    n_sat = 7 / (16 * math.pi * 4.0)
    assert B == pytest.approx(5.0 / (n_sat * 100.0))
    with pytest.raises(ValueError):
        MaterialInputs(0.0, 1.0, 1.0, 1.0)
