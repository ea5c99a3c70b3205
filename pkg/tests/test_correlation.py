import numpy as np
import pytest

from nesskit.core import (LatticeParams, ReservoirPair, SubsystemPair,
                          occupation_tilde, resonant_level)
from nesskit.correlation import (CorrelationMatrix, block_symbol_phi,
                                 block_symbol_phi_gamma,
                                 build_restricted_matrix,
                                 correlation_entry_exact,
                                 correlation_entry_longrange,
                                 default_quadrature, gamma_indices,
                                 scattering_wavefunction)
from nesskit.oracles import block_toeplitz_from_symbol
from nesskit.correlation import mirror_symbol

PARAMS = LatticeParams()
FIG2_RES = ReservoirPair(0.0, 0.0, 2.0, 1.0)

# frozen from a 10^6-point midpoint Riemann sum of the defining integral
# (resonant level eps0 = 1, T_L = 2, T_R = 1, mu = 0, j = m = 3)
RIEMANN_DIAGONAL = 0.497675756323701


def test_wavefunction_perfect_transmission_is_plane_wave():
    model = resonant_level(0.0, PARAMS)
    k = np.linspace(-np.pi + 0.05, np.pi - 0.05, 101)
    k = k[k != 0]
    for m in (-4, 2, 9):
        assert np.abs(scattering_wavefunction(m, k, model, PARAMS)
                      - np.exp(1j * k * m)).max() < 1e-14


def test_wavefunction_transmitted_side():
    model = resonant_level(1.3, PARAMS)
    k = np.linspace(0.1, 3.0, 21)
    _, t_l, _, _ = model.amplitudes(k)
    m = 5
    assert np.abs(scattering_wavefunction(m, k, model, PARAMS)
                  - t_l * np.exp(1j * k * m)).max() < 1e-14


def test_wavefunction_reflected_side_frozen_value():
    # eps0 = 2 eta at k = pi/2: t = 1/(1+i), r = t - 1, site m = -1
    model = resonant_level(2.0, PARAMS)
    value = scattering_wavefunction(-1, np.pi / 2, model, PARAMS)
    assert value == pytest.approx(0.5 - 1.5j, abs=1e-14)


def test_wavefunction_rejects_impurity_sites():
    model = resonant_level(1.0, LatticeParams(impurity_halfwidth=2))
    with pytest.raises(ValueError):
        scattering_wavefunction(1, 0.3, model, LatticeParams(impurity_halfwidth=2))


def test_exact_diagonal_equilibrium_half_filling():
    model = resonant_level(0.0, PARAMS)
    res = ReservoirPair(0.0, 0.0, 1.3, 1.3)
    quad = default_quadrature(res, PARAMS, tol=1e-12)
    value = correlation_entry_exact(5, 5, model, res, PARAMS, quad)
    assert value.real == pytest.approx(0.5, abs=1e-11)
    assert abs(value.imag) < 1e-11


def test_exact_entry_empty_state():
    model = resonant_level(1.0, PARAMS)
    res = ReservoirPair(-5.0, -5.0, 0.0, 0.0)  # band empty on both sides
    quad = default_quadrature(res, PARAMS, tol=1e-12)
    assert abs(correlation_entry_exact(2, 6, model, res, PARAMS, quad)) < 1e-13


def test_exact_entry_matches_riemann_oracle():
    model = resonant_level(1.0, PARAMS)
    quad = default_quadrature(FIG2_RES, PARAMS, tol=1e-11)
    value = correlation_entry_exact(3, 3, model, FIG2_RES, PARAMS, quad)
    # recompute the oracle so the frozen number stays auditable
    k = (np.arange(1_000_000) + 0.5) / 1_000_000 * 2 * np.pi - np.pi
    psi = scattering_wavefunction(3, k, model, PARAMS)
    riemann = float(np.mean(occupation_tilde(k, FIG2_RES, PARAMS) * np.abs(psi) ** 2))
    assert riemann == pytest.approx(RIEMANN_DIAGONAL, abs=5e-13)
    assert value.real == pytest.approx(RIEMANN_DIAGONAL, abs=1e-9)


def test_longrange_cross_entries_vanish_without_reflection():
    model = resonant_level(0.0, PARAMS)
    quad = default_quadrature(FIG2_RES, PARAMS, tol=1e-12)
    assert correlation_entry_longrange(-4, 7, model, FIG2_RES, PARAMS, quad) == 0
    assert correlation_entry_longrange(7, -4, model, FIG2_RES, PARAMS, quad) == 0


def test_longrange_cross_entries_vanish_without_bias():
    model = resonant_level(1.0, PARAMS)
    res = ReservoirPair(0.4, 0.4, 0.9, 0.9)
    quad = default_quadrature(res, PARAMS, tol=1e-12)
    assert abs(correlation_entry_longrange(-3, 8, model, res, PARAMS, quad)) < 1e-13


def test_longrange_same_side_equilibrium_diagonal():
    model = resonant_level(0.0, PARAMS)
    res = ReservoirPair(0.0, 0.0, 0.7, 0.7)
    quad = default_quadrature(res, PARAMS, tol=1e-12)
    value = correlation_entry_longrange(6, 6, model, res, PARAMS, quad)
    assert value.real == pytest.approx(0.5, abs=1e-11)


def test_longrange_toeplitz_structure():
    model = resonant_level(1.0, PARAMS)
    quad = default_quadrature(FIG2_RES, PARAMS, tol=1e-12)
    same_a = correlation_entry_longrange(9, 5, model, FIG2_RES, PARAMS, quad)
    same_b = correlation_entry_longrange(23, 19, model, FIG2_RES, PARAMS, quad)
    assert same_a == pytest.approx(same_b, abs=1e-12)
    cross_a = correlation_entry_longrange(-6, 10, model, FIG2_RES, PARAMS, quad)
    cross_b = correlation_entry_longrange(-9, 13, model, FIG2_RES, PARAMS, quad)
    assert cross_a == pytest.approx(cross_b, abs=1e-12)


def test_entry_hermiticity_both_modes():
    model = resonant_level(0.8, PARAMS)
    quad = default_quadrature(FIG2_RES, PARAMS, tol=1e-11)
    rng = np.random.default_rng(4)
    for _ in range(4):
        j, m = rng.integers(1, 25, size=2)
        exact_jm = correlation_entry_exact(int(j), int(m), model, FIG2_RES, PARAMS, quad)
        exact_mj = correlation_entry_exact(int(m), int(j), model, FIG2_RES, PARAMS, quad)
        assert exact_jm == pytest.approx(np.conj(exact_mj), abs=1e-10)
        lr_jm = correlation_entry_longrange(int(j), -int(m), model, FIG2_RES, PARAMS, quad)
        lr_mj = correlation_entry_longrange(-int(m), int(j), model, FIG2_RES, PARAMS, quad)
        assert lr_jm == pytest.approx(np.conj(lr_mj), abs=1e-10)


def test_exact_converges_to_longrange():
    model = resonant_level(1.0, PARAMS)
    quad = default_quadrature(FIG2_RES, PARAMS, tol=1e-11)
    gaps = []
    for d_min in (20, 80, 320):
        geom = SubsystemPair(d_min, 3, d_min, 3)
        sites = geom.sites_union()
        exact = build_restricted_matrix(sites, "exact", model, FIG2_RES, PARAMS, quad)
        longr = build_restricted_matrix(sites, "long-range", model, FIG2_RES, PARAMS, quad)
        gaps.append(np.abs(exact.matrix - longr.matrix).max())
    assert gaps[0] > gaps[1] > gaps[2]


def test_build_single_site_and_assembly():
    model = resonant_level(1.0, PARAMS)
    quad = default_quadrature(FIG2_RES, PARAMS, tol=1e-11)
    single = build_restricted_matrix([4], "long-range", model, FIG2_RES, PARAMS, quad)
    entry = correlation_entry_longrange(4, 4, model, FIG2_RES, PARAMS, quad)
    assert single.matrix[0, 0] == pytest.approx(entry, abs=1e-14)

    geom = SubsystemPair(3, 2, 1, 2)
    built = build_restricted_matrix(geom.sites_union(), "long-range", model,
                                    FIG2_RES, PARAMS, quad)
    for a, j in enumerate(geom.sites_union()):
        for b, m in enumerate(geom.sites_union()):
            if a <= b:
                direct = correlation_entry_longrange(int(j), int(m), model,
                                                     FIG2_RES, PARAMS, quad)
                assert built.matrix[a, b] == pytest.approx(direct, abs=1e-12)


def test_fig2a_spectrum_in_unit_interval():
    model = resonant_level(1.0, PARAMS)
    quad = default_quadrature(FIG2_RES, PARAMS, tol=1e-11)
    geom = SubsystemPair(50, 100, 0, 200)
    built = build_restricted_matrix(geom.sites_union(), "long-range", model,
                                    FIG2_RES, PARAMS, quad)
    nu = built.eigenvalues
    assert nu.min() > -1e-9 and nu.max() < 1.0 + 1e-9


def test_correlation_matrix_validation():
    bad = CorrelationMatrix((0, 1), np.array([[1.5, 0.0], [0.0, 0.2]]), "exact")
    with pytest.raises(ValueError):
        bad.validate()
    lopsided = np.array([[0.5, 0.2], [0.1, 0.5]])
    with pytest.raises(ValueError):
        CorrelationMatrix((0, 1), lopsided, "exact").validate()


def test_block_symbol_cases():
    model = resonant_level(1.0, PARAMS)
    phi_neg = block_symbol_phi(-1.2, model, FIG2_RES, PARAMS)
    f_pos = occupation_tilde(1.2, FIG2_RES, PARAMS)
    f_neg = occupation_tilde(-1.2, FIG2_RES, PARAMS)
    assert np.allclose(phi_neg, np.diag([f_pos, f_neg]), atol=1e-14)

    # no bias: diagonal with equal entries, zero cross term
    res_eq = ReservoirPair(0.1, 0.1, 0.9, 0.9)
    phi = block_symbol_phi(0.7, model, res_eq, PARAMS)
    occ = occupation_tilde(0.7, res_eq, PARAMS)
    assert np.allclose(phi, np.diag([occ, occ]), atol=1e-14)

    # perfect transmission: diagonal swap, zero cross term
    phi_t1 = block_symbol_phi(0.9, resonant_level(0.0, PARAMS), FIG2_RES, PARAMS)
    f_pos = occupation_tilde(0.9, FIG2_RES, PARAMS)
    f_neg = occupation_tilde(-0.9, FIG2_RES, PARAMS)
    assert np.allclose(phi_t1, np.diag([f_neg, f_pos]), atol=1e-14)

    # hermitian-valued: Phi_21 = conj(Phi_12)
    phi = block_symbol_phi(1.1, model, FIG2_RES, PARAMS)
    assert phi[1, 0] == pytest.approx(np.conj(phi[0, 1]), abs=1e-15)


def test_block_symbol_gamma():
    model = resonant_level(1.0, PARAMS)
    n = 2
    for gamma in gamma_indices(n):
        pref = np.diag([1 - np.exp(2j * np.pi * gamma / n),
                        1 + np.exp(-2j * np.pi * gamma / n)])
        # the first diagonal factor never vanishes for even n (gamma half-integer)
        assert abs(pref[0, 0]) > 1e-12
        phi = block_symbol_phi(0.8, model, FIG2_RES, PARAMS)
        deformed = block_symbol_phi_gamma(0.8, gamma, n, model, FIG2_RES, PARAMS)
        assert np.allclose(deformed, pref @ phi, atol=1e-14)
    assert np.allclose(
        block_symbol_phi_gamma(0.8, 0.5, 2, model,
                               ReservoirPair(-9.0, -9.0, 0.0, 0.0), PARAMS),
        0.0, atol=1e-14)
    with pytest.raises(ValueError):
        block_symbol_phi_gamma(0.8, 0.3, 2, model, FIG2_RES, PARAMS)


def test_mirror_matrix_is_block_toeplitz_of_phi():
    model = resonant_level(1.0, PARAMS)
    quad = default_quadrature(FIG2_RES, PARAMS, tol=1e-12)
    geom = SubsystemPair(3, 8, 0, 12)
    built = build_restricted_matrix(geom.mirror_sites(), "long-range", model,
                                    FIG2_RES, PARAMS, quad)
    symbol = mirror_symbol(model, FIG2_RES, PARAMS)
    toeplitz = block_toeplitz_from_symbol(symbol, geom.ell_mirror, quad)
    assert np.abs(built.matrix - toeplitz).max() < 1e-10
