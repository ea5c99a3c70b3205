import numpy as np
import pytest

from nesskit.fock import (annihilation_operators,
                          density_matrix_from_correlations,
                          fermionic_negativity_dm,
                          fermionic_partial_transpose, mutual_information_dm,
                          petz_renyi_mi_dm, reduced_density_matrices,
                          renyi_entropy_dm, vn_entropy_dm)


def test_canonical_anticommutation():
    ops = annihilation_operators(3)
    eye = np.eye(8)
    for i, a in enumerate(ops):
        for j, b in enumerate(ops):
            anti = a @ b.conj().T + b.conj().T @ a
            assert np.allclose(anti, eye if i == j else 0.0, atol=1e-13)
            assert np.allclose(a @ b + b @ a, 0.0, atol=1e-13)


def test_density_matrix_reproduces_correlations():
    rng = np.random.default_rng(6)
    a = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    q, _ = np.linalg.qr(a)
    c = q @ np.diag([0.2, 0.55, 0.9]) @ q.conj().T
    rho = density_matrix_from_correlations(c)
    assert np.trace(rho).real == pytest.approx(1.0, abs=1e-12)
    ops = annihilation_operators(3)
    for i in range(3):
        for j in range(3):
            value = np.trace(rho @ ops[i].conj().T @ ops[j])
            assert value == pytest.approx(c[i, j], abs=1e-12)


def test_reduced_density_matrices_are_states():
    c = np.diag([0.3, 0.6, 0.8])
    rho = density_matrix_from_correlations(c)
    rho1, rho2 = reduced_density_matrices(rho, 3, 1)
    assert np.trace(rho1).real == pytest.approx(1.0, abs=1e-12)
    assert np.trace(rho2).real == pytest.approx(1.0, abs=1e-12)
    assert rho1.shape == (2, 2) and rho2.shape == (4, 4)
    # product state: MI vanishes and entropies add
    assert mutual_information_dm(rho, 3, 1) == pytest.approx(0.0, abs=1e-12)


def test_entropies_of_known_states():
    rho = density_matrix_from_correlations(np.array([[0.5]]))
    assert vn_entropy_dm(rho) == pytest.approx(np.log(2.0), abs=1e-12)
    assert renyi_entropy_dm(rho, 2) == pytest.approx(np.log(2.0), abs=1e-12)


def test_partial_transpose_is_trace_preserving():
    rng = np.random.default_rng(9)
    a = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    q, _ = np.linalg.qr(a)
    c = q @ np.diag([0.25, 0.5, 0.75]) @ q.conj().T
    rho = density_matrix_from_correlations(c)
    twisted = fermionic_partial_transpose(rho, 3, 1)
    assert np.trace(twisted) == pytest.approx(1.0, abs=1e-12)
    # applying the twist twice conjugates by the block parity, keeping the trace
    double = fermionic_partial_transpose(twisted, 3, 1)
    assert np.trace(double) == pytest.approx(1.0, abs=1e-12)


def test_negativity_benchmarks():
    bell = np.full((2, 2), 0.5)
    rho = density_matrix_from_correlations(bell)
    assert fermionic_negativity_dm(rho, 2, 1) == pytest.approx(np.log(2.0), abs=1e-12)
    product = density_matrix_from_correlations(np.diag([0.5, 0.5]))
    assert fermionic_negativity_dm(product, 2, 1) == pytest.approx(0.0, abs=1e-12)


def test_petz_of_product_state_vanishes():
    rho = density_matrix_from_correlations(np.diag([0.3, 0.8, 0.6]))
    for n in (0.5, 2.0):
        assert petz_renyi_mi_dm(rho, 3, 1, n) == pytest.approx(0.0, abs=1e-10)
