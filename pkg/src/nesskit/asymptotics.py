"""Leading-order volume-law formulas evaluated by momentum quadrature.

Every correlation measure between the two intervals grows linearly with
the mirror overlap, with a per-site density given by a one-dimensional
integral over k in (0, pi) of entropic functions of

    a = T f_L + R f_R,   b = R f_L + T f_R,

the local nonequilibrium distributions mixed by the impurity.  The
densities vanish identically when f_L = f_R at every momentum or when
T(k) is 0 or 1 everywhere, and are positive otherwise.

Interval and combined entropies carry additional terms weighted by the
interval lengths and by Delta_l_i = l_i - l_mirror; the identities among
them (entropy recombination, the n -> 1 limits, and the exact
zero-temperature proportionalities E = I^(1/2)/2, D^(n) = I^(3-2n))
hold at the level of the integrands and are exercised by the test suite.

Integrands at zero temperature have jump discontinuities at the Fermi
momenta; the quadrature spec carries those as mandatory breakpoints.
Fractional negative powers inside the Petz-Renyi integrand are evaluated
with floored bases (continuous extension; exact-zero numerators win).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import xlogy

from .core import (LatticeParams, ReservoirPair, ScatteringModel, dispersion,
                   fermi_dirac, occupation_tilde)
from .correlation import default_quadrature
from .quadrature import QuadratureSpec, adaptive_quad

TWO_PI = 2.0 * np.pi
POWER_FLOOR = 1e-30


@dataclass(frozen=True)
class BiasContext:
    """Scattering model, reservoirs and quadrature bundled for the integrals."""

    model: ScatteringModel
    res: ReservoirPair
    params: LatticeParams
    quad: QuadratureSpec | None = None

    def __post_init__(self):
        if self.quad is None:
            object.__setattr__(self, "quad",
                               default_quadrature(self.res, self.params))

    def occupations(self, k):
        """(f_L, f_R) as functions of the band energy at momentum k > 0."""
        eps = dispersion(k, self.params)
        return (fermi_dirac(eps, self.res.mu_left, self.res.temp_left),
                fermi_dirac(eps, self.res.mu_right, self.res.temp_right))

    def mixtures(self, k):
        """(f_L, f_R, a, b) with a = T f_L + R f_R and b = R f_L + T f_R."""
        f_l, f_r = self.occupations(k)
        trans = self.model.transmission(k)
        refl = 1.0 - trans
        return f_l, f_r, trans * f_l + refl * f_r, refl * f_l + trans * f_r


@dataclass(frozen=True)
class AsymptoticValue:
    """Per-site density and the total for the supplied length(s)."""

    density: float
    total: float
    kind: str
    n: float | None = None


def _positive_integral(ctx: BiasContext, integrand) -> float:
    return float(adaptive_quad(integrand, 0.0, np.pi, ctx.quad))


def _renyi_sum(x, n: float):
    # negative indices appear only through the analytic continuation
    # I^(3-2n); the symmetric clip keeps the integrand cancellations exact
    # where every argument sits at the same 0/1 plateau
    x = np.clip(x, 1e-12, 1.0 - 1e-12) if n < 0 else np.clip(x, 0.0, 1.0)
    return x ** n + (1.0 - x) ** n


def _binary_entropy(x):
    x = np.clip(x, 0.0, 1.0)
    return -(xlogy(x, x) + xlogy(1.0 - x, 1.0 - x))


def _floored_power(x, p):
    """x**p with the base floored away from zero for negative exponents."""
    return np.power(np.maximum(x, POWER_FLOOR), p) if p < 0 else \
        np.power(np.clip(x, 0.0, None), p)


def rmi_density(ctx: BiasContext, n: float) -> float:
    # negative indices (needed by the zero-temperature identity
    # D^(n) = I^(3-2n) for n > 3/2) only exist through the reduced window
    # form below; the four-term integrand diverges termwise for n < 0
    if n <= 0 or n == 1:
        raise ValueError("Renyi index must be positive and different from 1")

    def integrand(k):
        f_l, f_r, a, b = ctx.mixtures(k)
        return (np.log(_renyi_sum(a, n)) + np.log(_renyi_sum(b, n))
                - np.log(_renyi_sum(f_l, n)) - np.log(_renyi_sum(f_r, n)))

    return _positive_integral(ctx, integrand) / ((1.0 - n) * TWO_PI)


def mi_density(ctx: BiasContext) -> float:
    def integrand(k):
        f_l, f_r, a, b = ctx.mixtures(k)
        return (_binary_entropy(a) + _binary_entropy(b)
                - _binary_entropy(f_l) - _binary_entropy(f_r))

    return _positive_integral(ctx, integrand) / TWO_PI


def prmi_density(ctx: BiasContext, n: float) -> float:
    if n <= 0 or n == 1:
        raise ValueError("Petz-Renyi index must be positive and different from 1")
    p = 1.0 - n

    def integrand(k):
        f_l, f_r, a, b = ctx.mixtures(k)
        trans = ctx.model.transmission(k)
        left_a = f_l ** n * _floored_power(a, p) \
            + (1.0 - f_l) ** n * _floored_power(1.0 - a, p)
        right_b = f_r ** n * _floored_power(b, p) \
            + (1.0 - f_r) ** n * _floored_power(1.0 - b, p)
        left_b = f_l ** n * _floored_power(b, p) \
            + (1.0 - f_l) ** n * _floored_power(1.0 - b, p)
        right_a = f_r ** n * _floored_power(a, p) \
            + (1.0 - f_r) ** n * _floored_power(1.0 - a, p)
        return np.log(trans * left_a * right_b + (1.0 - trans) * left_b * right_a)

    return _positive_integral(ctx, integrand) / ((n - 1.0) * TWO_PI)


def negativity_density(ctx: BiasContext) -> float:
    def integrand(k):
        f_l, f_r = ctx.occupations(k)
        trans = ctx.model.transmission(k)
        prod = f_l * f_r
        root = np.sqrt((1.0 - f_l - f_r + 2.0 * prod) ** 2
                       + 4.0 * trans * (1.0 - trans) * (f_l - f_r) ** 2)
        return np.log(f_l + f_r - 2.0 * prod + root)

    return _positive_integral(ctx, integrand) / TWO_PI


def negativity_poly_y(f_l, f_r, trans, n: float):
    """The four-term auxiliary function Y_n; real and non-negative bases.

    For even integer n it coincides with the gamma-product X_n evaluated in
    the verification oracles; its n -> 1 value is the negativity integrand
    argument.
    """
    refl = 1.0 - trans
    prod = f_l * f_r
    u = 0.5 * (1.0 - f_l - f_r)
    w = (u + prod) ** 2 + trans * refl * (f_l - f_r) ** 2
    root = np.sqrt(np.clip(w, 0.0, None))
    terms = (np.clip(trans * f_l + refl * f_r - prod, 0.0, None) ** n
             + np.clip(refl * f_l + trans * f_r - prod, 0.0, None) ** n
             + np.clip(root + u, 0.0, None) ** n
             + np.clip(root - u, 0.0, None) ** n)
    return terms


def interval_entropy_density(ctx: BiasContext, side: str, n: float) -> float:
    """Renyi entropy per site of one interval: its own reservoir term plus
    the impurity-mixed distribution seen through the chain."""
    if n <= 0 or n == 1:
        raise ValueError("Renyi index must be positive and different from 1")
    if side not in ("L", "R"):
        raise ValueError("side must be 'L' or 'R'")

    def integrand(k):
        f_l, f_r, a, b = ctx.mixtures(k)
        if side == "L":
            return np.log(_renyi_sum(f_l, n)) + np.log(_renyi_sum(b, n))
        return np.log(_renyi_sum(f_r, n)) + np.log(_renyi_sum(a, n))

    return _positive_integral(ctx, integrand) / ((1.0 - n) * TWO_PI)


def mirror_entropy_density(ctx: BiasContext, n: float) -> float:
    """Entropy per site of two mirroring intervals, from the occupation of
    |k> alone: 1/(1-n) int_{-pi}^{pi} dk/pi ln[f~^n + (1-f~)^n]."""
    if n <= 0 or n == 1:
        raise ValueError("Renyi index must be positive and different from 1")

    def integrand(k):
        occ = occupation_tilde(k, ctx.res, ctx.params)
        return np.log(_renyi_sum(occ, n))

    value = float(adaptive_quad(integrand, -np.pi, np.pi, ctx.quad))
    return value / ((1.0 - n) * np.pi)


def rmi_asymptotic(ctx: BiasContext, n: float, ell_mirror: int) -> AsymptoticValue:
    density = rmi_density(ctx, n)
    return AsymptoticValue(density, density * ell_mirror, "rmi", n)


def zero_temperature_rmi_density(ctx: BiasContext, n: float) -> float:
    """Reduced zero-temperature form 1/(1-n) int_{k-}^{k+} dk/pi ln[T^n + R^n].

    Requires both reservoirs at T = 0 with in-band chemical potentials;
    provided as an independent cross-check of the general integrand.
    """
    from .core import fermi_momentum

    if ctx.res.temp_left != 0 or ctx.res.temp_right != 0:
        raise ValueError("reduced form requires zero-temperature reservoirs")
    k_l = fermi_momentum(ctx.res.mu_left, ctx.params)
    k_r = fermi_momentum(ctx.res.mu_right, ctx.params)
    k_lo, k_hi = min(k_l, k_r), max(k_l, k_r)
    if k_lo == k_hi:
        return 0.0

    def integrand(k):
        trans = ctx.model.transmission(k)
        return np.log(_renyi_sum(trans, n))

    value = float(adaptive_quad(integrand, k_lo, k_hi, ctx.quad))
    return value / ((1.0 - n) * np.pi)


def mi_asymptotic(ctx: BiasContext, ell_mirror: int) -> AsymptoticValue:
    density = mi_density(ctx)
    return AsymptoticValue(density, density * ell_mirror, "mi")


def prmi_asymptotic(ctx: BiasContext, n: float, ell_mirror: int) -> AsymptoticValue:
    density = prmi_density(ctx, n)
    return AsymptoticValue(density, density * ell_mirror, "prmi", n)


def negativity_asymptotic(ctx: BiasContext, ell_mirror: int) -> AsymptoticValue:
    density = negativity_density(ctx)
    return AsymptoticValue(density, density * ell_mirror, "negativity")


def interval_entropy_asymptotic(ctx: BiasContext, side: str, n: float,
                                ell: int) -> AsymptoticValue:
    density = interval_entropy_density(ctx, side, n)
    return AsymptoticValue(density, density * ell, "entropy", n)


def mirror_entropy_asymptotic(ctx: BiasContext, n: float,
                              ell_mirror: int) -> AsymptoticValue:
    density = mirror_entropy_density(ctx, n)
    return AsymptoticValue(density, density * ell_mirror, "entropy", n)


def combined_entropy_asymptotic(ctx: BiasContext, geom, n: float) -> AsymptoticValue:
    """Renyi entropy of the union A_L u A_R (four weighted terms)."""
    if n <= 0 or n == 1:
        raise ValueError("Renyi index must be positive and different from 1")
    ell_m = geom.ell_mirror
    d_ell_l = geom.ell_left - ell_m
    d_ell_r = geom.ell_right - ell_m

    def _term(selector):
        def integrand(k):
            f_l, f_r, a, b = ctx.mixtures(k)
            return np.log(_renyi_sum(selector(f_l, f_r, a, b), n))

        return _positive_integral(ctx, integrand) / ((1.0 - n) * TWO_PI)

    total = ((geom.ell_left + ell_m) * _term(lambda fl, fr, a, b: fl)
             + (geom.ell_right + ell_m) * _term(lambda fl, fr, a, b: fr)
             + d_ell_l * _term(lambda fl, fr, a, b: b)
             + d_ell_r * _term(lambda fl, fr, a, b: a))
    density = total / (geom.ell_left + geom.ell_right)
    return AsymptoticValue(density, total, "entropy", n)


def renyi_negativity_asymptotic(ctx: BiasContext, geom, n: int) -> AsymptoticValue:
    """Five-term Renyi negativity; the mirror term integrates ln Y_n."""
    if n % 2 or n < 2:
        raise ValueError("Renyi negativity index must be a positive even integer")
    ell_m = geom.ell_mirror
    d_ell_l = geom.ell_left - ell_m
    d_ell_r = geom.ell_right - ell_m

    def mirror_integrand(k):
        f_l, f_r = ctx.occupations(k)
        return np.log(negativity_poly_y(f_l, f_r, ctx.model.transmission(k), n))

    def entropic(selector):
        def integrand(k):
            f_l, f_r, a, b = ctx.mixtures(k)
            return np.log(_renyi_sum(selector(f_l, f_r, a, b), n))

        return _positive_integral(ctx, integrand) / TWO_PI

    density = _positive_integral(ctx, mirror_integrand) / TWO_PI
    total = (ell_m * density
             + geom.ell_left * entropic(lambda fl, fr, a, b: fl)
             + geom.ell_right * entropic(lambda fl, fr, a, b: fr)
             + d_ell_l * entropic(lambda fl, fr, a, b: b)
             + d_ell_r * entropic(lambda fl, fr, a, b: a))
    return AsymptoticValue(density, total, "renyi-negativity", n)
