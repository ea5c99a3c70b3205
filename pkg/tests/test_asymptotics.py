import numpy as np
import pytest

from nesskit.core import LatticeParams, ReservoirPair, SubsystemPair, resonant_level
from nesskit.correlation import default_quadrature, mirror_symbol
from nesskit.asymptotics import (BiasContext, combined_entropy_asymptotic,
                                 interval_entropy_asymptotic,
                                 interval_entropy_density, mi_asymptotic,
                                 mi_density, mirror_entropy_asymptotic,
                                 mirror_entropy_density, negativity_asymptotic,
                                 negativity_density, negativity_poly_y,
                                 prmi_asymptotic, prmi_density, rmi_asymptotic,
                                 rmi_density, renyi_negativity_asymptotic,
                                 zero_temperature_rmi_density)
from nesskit.oracles import szego_widom_density, xn_value
from nesskit.quadrature import adaptive_quad

PARAMS = LatticeParams()


def make_ctx(model, res, tol=1e-12):
    return BiasContext(model, res, PARAMS, default_quadrature(res, PARAMS, tol=tol))


@pytest.fixture(scope="module")
def ctx_temp_bias():
    return make_ctx(resonant_level(1.0, PARAMS), ReservoirPair(0.0, 0.0, 2.0, 1.0))


@pytest.fixture(scope="module")
def ctx_zero_t():
    return make_ctx(resonant_level(1.0, PARAMS), ReservoirPair(1.0, -0.5, 0.0, 0.0))


def test_densities_vanish_without_bias():
    ctx = make_ctx(resonant_level(1.0, PARAMS), ReservoirPair(0.2, 0.2, 0.9, 0.9))
    assert abs(rmi_density(ctx, 2)) < 1e-14
    assert abs(mi_density(ctx)) < 1e-14
    assert abs(prmi_density(ctx, 2)) < 1e-14
    assert abs(negativity_density(ctx)) < 1e-14


def test_densities_vanish_for_trivial_impurity():
    ctx = make_ctx(resonant_level(0.0, PARAMS), ReservoirPair(0.0, 0.0, 2.0, 1.0))
    assert abs(rmi_density(ctx, 2)) < 1e-14
    assert abs(mi_density(ctx)) < 1e-14
    assert abs(negativity_density(ctx)) < 1e-14


def test_zero_temperature_rmi_reduction(ctx_zero_t):
    for n in (0.5, 2.0):
        assert rmi_density(ctx_zero_t, n) == pytest.approx(
            zero_temperature_rmi_density(ctx_zero_t, n), abs=1e-12)


def test_rmi_n_to_one_is_mi(ctx_temp_bias):
    mi = mi_density(ctx_temp_bias)
    bracket = 0.5 * (rmi_density(ctx_temp_bias, 1 + 1e-5)
                     + rmi_density(ctx_temp_bias, 1 - 1e-5))
    assert bracket == pytest.approx(mi, abs=1e-8)


def test_prmi_limits(ctx_temp_bias, ctx_zero_t):
    mi = mi_density(ctx_temp_bias)
    bracket = 0.5 * (prmi_density(ctx_temp_bias, 1 + 1e-5)
                     + prmi_density(ctx_temp_bias, 1 - 1e-5))
    assert bracket == pytest.approx(mi, abs=1e-8)
    # zero temperature: D^(n) equals the RMI continued to index 3 - 2n
    for n in (0.5, 1.25, 2.0):
        assert prmi_density(ctx_zero_t, n) == pytest.approx(
            zero_temperature_rmi_density(ctx_zero_t, 3 - 2 * n), abs=1e-9)


def test_negativity_zero_temperature_relation(ctx_zero_t):
    neg = negativity_density(ctx_zero_t)
    assert neg == pytest.approx(
        0.5 * zero_temperature_rmi_density(ctx_zero_t, 0.5), abs=1e-9)
    assert neg == pytest.approx(0.5 * prmi_density(ctx_zero_t, 1.25), abs=1e-9)


def test_negativity_vanishes_for_trivial_cases():
    ctx = make_ctx(resonant_level(0.0, PARAMS), ReservoirPair(1.0, -0.5, 0.0, 0.0))
    assert abs(negativity_density(ctx)) < 1e-14


def test_interval_entropy_equilibrium_doubles(ctx_temp_bias):
    res = ReservoirPair(0.0, 0.0, 1.0, 1.0)
    ctx = make_ctx(resonant_level(1.0, PARAMS), res)

    def single(n):
        def integrand(k):
            f_l, _, _, _ = ctx.mixtures(k)
            return np.log(f_l ** n + (1 - f_l) ** n)

        return float(adaptive_quad(integrand, 0.0, np.pi, ctx.quad)) / \
            ((1 - n) * 2 * np.pi)

    for side in ("L", "R"):
        assert interval_entropy_density(ctx, side, 2) == pytest.approx(
            2 * single(2), abs=1e-12)


def test_interval_entropy_vanishes_for_filled_band():
    ctx = make_ctx(resonant_level(1.0, PARAMS), ReservoirPair(5.0, 5.0, 0.0, 0.0))
    assert abs(interval_entropy_density(ctx, "L", 2)) < 1e-14


def test_rmi_from_interval_and_combined_entropies(ctx_temp_bias):
    geom = SubsystemPair(50, 100, 0, 200)
    n = 2.0
    s_l = interval_entropy_asymptotic(ctx_temp_bias, "L", n, geom.ell_left).total
    s_r = interval_entropy_asymptotic(ctx_temp_bias, "R", n, geom.ell_right).total
    s_a = combined_entropy_asymptotic(ctx_temp_bias, geom, n).total
    rmi = rmi_asymptotic(ctx_temp_bias, n, geom.ell_mirror).total
    assert s_l + s_r - s_a == pytest.approx(rmi, abs=1e-10)


def test_combined_entropy_limits(ctx_temp_bias):
    n = 2.0
    # no overlap: entropies additive
    apart = SubsystemPair(0, 50, 120, 60)
    assert apart.ell_mirror == 0
    s_a = combined_entropy_asymptotic(ctx_temp_bias, apart, n).total
    s_l = interval_entropy_asymptotic(ctx_temp_bias, "L", n, 50).total
    s_r = interval_entropy_asymptotic(ctx_temp_bias, "R", n, 60).total
    assert s_a == pytest.approx(s_l + s_r, abs=1e-10)
    # full overlap: the two detached terms drop out
    full = SubsystemPair(0, 80, 0, 80)
    s_full = combined_entropy_asymptotic(ctx_temp_bias, full, n).total
    mirror = mirror_entropy_asymptotic(ctx_temp_bias, n, 80).total
    recombined = (0.0 * s_l + mirror)  # Delta_l = 0 on both sides
    assert s_full == pytest.approx(recombined, abs=1e-10)


def test_mirror_entropy_recombination(ctx_temp_bias):
    # S_A = (dl_L/l_L) S_L + (dl_R/l_R) S_R + S_mirror
    geom = SubsystemPair(50, 100, 0, 200)
    n = 0.5
    s_a = combined_entropy_asymptotic(ctx_temp_bias, geom, n).total
    s_l = interval_entropy_asymptotic(ctx_temp_bias, "L", n, geom.ell_left).total
    s_r = interval_entropy_asymptotic(ctx_temp_bias, "R", n, geom.ell_right).total
    s_m = mirror_entropy_asymptotic(ctx_temp_bias, n, geom.ell_mirror).total
    d_l = (geom.ell_left - geom.ell_mirror) / geom.ell_left
    d_r = (geom.ell_right - geom.ell_mirror) / geom.ell_right
    assert s_a == pytest.approx(d_l * s_l + d_r * s_r + s_m, abs=1e-10)


def test_mirror_entropy_values():
    # fully occupied or empty modes carry no entropy
    ctx = make_ctx(resonant_level(1.0, PARAMS), ReservoirPair(5.0, 5.0, 0.0, 0.0))
    assert abs(mirror_entropy_density(ctx, 2)) < 1e-14
    # half filling at every momentum: 2 ln 2 per site at any index
    ctx_half = make_ctx(resonant_level(1.0, PARAMS),
                        ReservoirPair(0.0, 0.0, 1e6, 1e6))
    for n in (0.5, 2.0, 3.0):
        assert mirror_entropy_density(ctx_half, n) == pytest.approx(
            2 * np.log(2.0), abs=1e-6)


def test_mirror_entropy_matches_szego_widom(ctx_temp_bias):
    n = 2
    phi = mirror_symbol(ctx_temp_bias.model, ctx_temp_bias.res, PARAMS)
    total = 0.0
    for gamma in (-0.5, 0.5):
        lam = np.exp(2j * np.pi * gamma / n) - 1.0

        def transform(vals, lam=lam):
            eye = np.broadcast_to(np.eye(2, dtype=complex), vals.shape)
            return eye + lam * vals

        total += szego_widom_density(phi, transform, ctx_temp_bias.quad)
    assert mirror_entropy_density(ctx_temp_bias, n) == pytest.approx(
        total / (1 - n), abs=1e-10)


def test_renyi_negativity_separable_identity():
    ctx = make_ctx(resonant_level(1.0, PARAMS), ReservoirPair(0.0, 0.0, 1.5, 1.5))
    geom = SubsystemPair(50, 100, 0, 200)
    n = 2
    e_n = renyi_negativity_asymptotic(ctx, geom, n).total
    s_n = combined_entropy_asymptotic(ctx, geom, n).total
    assert e_n == pytest.approx((1 - n) * s_n, abs=1e-10)
    with pytest.raises(ValueError):
        renyi_negativity_asymptotic(ctx, geom, 3)


def test_renyi_negativity_mirror_term_continues_to_negativity(ctx_temp_bias):
    k = np.linspace(0.1, 3.0, 7)
    f_l, f_r = ctx_temp_bias.occupations(k)
    trans = ctx_temp_bias.model.transmission(k)
    y_lim = 0.5 * (negativity_poly_y(f_l, f_r, trans, 1 + 1e-7)
                   + negativity_poly_y(f_l, f_r, trans, 1 - 1e-7))
    target = f_l + f_r - 2 * f_l * f_r + np.sqrt(
        (1 - f_l - f_r + 2 * f_l * f_r) ** 2
        + 4 * trans * (1 - trans) * (f_l - f_r) ** 2)
    assert np.abs(y_lim - target).max() < 1e-12


def test_y2_matches_gamma_product(ctx_temp_bias):
    k = np.linspace(0.2, 2.9, 9)
    f_l, f_r = ctx_temp_bias.occupations(k)
    trans = ctx_temp_bias.model.transmission(k)
    y2 = negativity_poly_y(f_l, f_r, trans, 2)
    x2 = xn_value(2, f_l, f_r, trans)
    assert np.abs(y2 - x2).max() < 1e-13


def test_volume_law_positive_under_bias(ctx_temp_bias, ctx_zero_t):
    for ctx in (ctx_temp_bias, ctx_zero_t):
        assert mi_density(ctx) > 0
        assert negativity_density(ctx) > 0
        assert rmi_density(ctx, 2) > 0
        assert prmi_density(ctx, 2) > 0


def test_left_right_swap_symmetry():
    res = ReservoirPair(0.7, -0.2, 1.7, 0.6)
    swapped = ReservoirPair(-0.2, 0.7, 0.6, 1.7)
    model = resonant_level(1.3, PARAMS)
    a, b = make_ctx(model, res), make_ctx(model, swapped)
    assert mi_density(a) == pytest.approx(mi_density(b), abs=1e-12)
    assert negativity_density(a) == pytest.approx(negativity_density(b), abs=1e-12)
    assert prmi_density(a, 2) == pytest.approx(prmi_density(b, 2), abs=1e-12)
    assert rmi_density(a, 0.5) == pytest.approx(rmi_density(b, 0.5), abs=1e-12)


def test_particle_hole_symmetry():
    # eps0 -> -eps0 leaves T(k) unchanged; mu_i -> -mu_i maps k -> pi - k
    res = ReservoirPair(0.6, -0.3, 1.2, 0.8)
    flipped = ReservoirPair(-0.6, 0.3, 1.2, 0.8)
    a = make_ctx(resonant_level(1.0, PARAMS), res)
    b = make_ctx(resonant_level(-1.0, PARAMS), flipped)
    assert mi_density(a) == pytest.approx(mi_density(b), abs=1e-12)
    assert negativity_density(a) == pytest.approx(negativity_density(b), abs=1e-12)


def test_asymptotic_value_totals(ctx_temp_bias):
    value = mi_asymptotic(ctx_temp_bias, 73)
    assert value.total == pytest.approx(73 * value.density)
    value = prmi_asymptotic(ctx_temp_bias, 2.0, 10)
    assert value.kind == "prmi" and value.n == 2.0
    value = negativity_asymptotic(ctx_temp_bias, 0)
    assert value.total == 0.0
