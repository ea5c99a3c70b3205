"""Acceptance battery: every quantitative exit criterion as a runnable check.

Each criterion function returns ``CheckResult`` records with the measured
number and the tolerance it is held to; ``run_acceptance`` collects all
of them.  The same battery backs the ``verify`` CLI subcommand and the
acceptance test module, so a claim printed as PASS here is exactly what
the test suite asserts.

``fast=True`` trims grids (one impurity strength instead of three, fewer
fuzz samples, shorter determinant ladders) without changing tolerances.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .asymptotics import (BiasContext, mi_asymptotic, mi_density,
                          negativity_asymptotic, negativity_density,
                          prmi_asymptotic, prmi_density, rmi_density,
                          zero_temperature_rmi_density)
from .core import LatticeParams, ReservoirPair, SubsystemPair, resonant_level
from .correlation import build_restricted_matrix, default_quadrature, mirror_symbol
from .fock import (density_matrix_from_correlations, fermionic_negativity_dm,
                   mutual_information_dm, petz_renyi_mi_dm, renyi_entropy_dm,
                   vn_entropy_dm)
from .measures import (fermionic_negativity, mutual_information,
                       petz_renyi_mi_diagnostics, renyi_entropy,
                       von_neumann_entropy)
from .oracles import (generalized_sw_check, moment_decomposition_check,
                      moment_trace, prmi_determinant_pairs, root_residuals,
                      single_interval_moment_asymptotic, szego_widom_ladder,
                      xn_yn_fuzz)

LN2 = np.log(2.0)

FIG2_RESERVOIRS = ReservoirPair(0.0, 0.0, 2.0, 1.0)
FIG3_RESERVOIRS = ReservoirPair(1.5, -1.5, 1.0, 1.0)
FIG5_TEMP_BIAS = ReservoirPair(0.0, 0.0, 2.5, 0.5)
FIG5_POTENTIAL_BIAS = ReservoirPair(2.0, 0.0, 1.0, 1.0)


@dataclass(frozen=True)
class CheckResult:
    criterion: int
    name: str
    measured: float
    tolerance: float
    passed: bool
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        text = (f"[{status}] criterion {self.criterion}: {self.name}: "
                f"{self.measured:.3e} vs {self.tolerance:.0e}")
        return text + (f" ({self.detail})" if self.detail else "")


def _check(criterion, name, measured, tolerance, detail="") -> CheckResult:
    return CheckResult(criterion, name, float(measured), float(tolerance),
                       bool(measured <= tolerance), detail)


def _params() -> LatticeParams:
    return LatticeParams()


def _numeric_pair_measures(model, res, geom, tol=1e-11, cache=None):
    params = _params()
    quad = default_quadrature(res, params, tol=tol)
    c1 = build_restricted_matrix(geom.sites_left(), "long-range", model, res,
                                 params, quad, cache)
    c2 = build_restricted_matrix(geom.sites_right(), "long-range", model, res,
                                 params, quad, cache)
    c12 = build_restricted_matrix(geom.sites_union(), "long-range", model,
                                  res, params, quad, cache)
    return c1, c2, c12


def criterion_1(fast: bool = False) -> list[CheckResult]:
    """Cross-pipeline MI and negativity at maximal overlap, figures 2-3."""
    params = _params()
    eps_grid = (1.0,) if fast else (0.5, 1.0, 2.0)
    out = []
    for label, res in (("fig2", FIG2_RESERVOIRS), ("fig3", FIG3_RESERVOIRS)):
        for eps0 in eps_grid:
            start = time.perf_counter()
            model = resonant_level(eps0, params)
            geom = SubsystemPair(50, 100, 0, 200)
            c1, c2, c12 = _numeric_pair_measures(model, res, geom)
            ctx = BiasContext(model, res, params,
                              default_quadrature(res, params, tol=1e-11))
            i_max = 2 * 100 * LN2
            e_max = 100 * LN2
            mi_gap = abs(mutual_information(c1, c2, c12)
                         - mi_asymptotic(ctx, 100).total) / i_max
            neg_gap = abs(fermionic_negativity(c12, len(c1))
                          - negativity_asymptotic(ctx, 100).total) / e_max
            elapsed = time.perf_counter() - start
            tag = f"{label} eps0={eps0:g}"
            out.append(_check(1, f"{tag} normalized MI gap", mi_gap, 0.01))
            out.append(_check(1, f"{tag} normalized negativity gap", neg_gap, 0.01))
            out.append(_check(1, f"{tag} runtime [s]", elapsed, 60.0))
    return out


def criterion_2(fast: bool = False) -> list[CheckResult]:
    """Cross-pipeline PRMI at n = 2 and n = 0.5 for both figure-5 biases."""
    params = _params()
    model = resonant_level(1.0, params)
    out = []
    for label, res in (("temp-bias", FIG5_TEMP_BIAS),
                       ("potential-bias", FIG5_POTENTIAL_BIAS)):
        geom = SubsystemPair(50, 100, 0, 200)
        c1, c2, c12 = _numeric_pair_measures(model, res, geom)
        ctx = BiasContext(model, res, params,
                          default_quadrature(res, params, tol=1e-11))
        for n in (2.0, 0.5):
            value, residue = petz_renyi_mi_diagnostics(c1, c2, c12, n)
            gap = abs(value - prmi_asymptotic(ctx, n, 100).total) / (200 * LN2)
            out.append(_check(2, f"{label} n={n:g} normalized PRMI gap", gap, 0.01))
            out.append(_check(2, f"{label} n={n:g} imaginary residue",
                              residue, 1e-8))
    return out


def criterion_3(fast: bool = False) -> list[CheckResult]:
    """Zero-temperature proportionalities, pure quadrature."""
    params = _params()
    model = resonant_level(1.0, params)
    res = ReservoirPair(1.0, -0.5, 0.0, 0.0)
    ctx = BiasContext(model, res, params,
                      default_quadrature(res, params, tol=1e-12))
    neg = negativity_density(ctx)
    checks = [
        ("E = I^(1/2)/2", abs(neg - 0.5 * zero_temperature_rmi_density(ctx, 0.5))),
        ("D^(0.5) = I^(2)", abs(prmi_density(ctx, 0.5)
                                - zero_temperature_rmi_density(ctx, 2.0))),
        ("D^(2) = I^(-1)", abs(prmi_density(ctx, 2.0)
                               - zero_temperature_rmi_density(ctx, -1.0))),
        ("E = D^(5/4)/2", abs(neg - 0.5 * prmi_density(ctx, 1.25))),
        ("general RMI matches reduced window form",
         abs(rmi_density(ctx, 2.0) - zero_temperature_rmi_density(ctx, 2.0))),
    ]
    return [_check(3, name, gap, 1e-9) for name, gap in checks]


def criterion_4(fast: bool = False) -> list[CheckResult]:
    """Vanishing volume law for equal reservoirs or a transparent impurity."""
    params = _params()
    cases = (("equal reservoirs", resonant_level(1.0, params),
              ReservoirPair(0.0, 0.0, 1.0, 1.0)),
             ("transparent impurity", resonant_level(0.0, params),
              FIG2_RESERVOIRS))
    out = []
    for label, model, res in cases:
        ctx = BiasContext(model, res, params,
                          default_quadrature(res, params, tol=1e-12))
        densities = max(abs(mi_density(ctx)), abs(negativity_density(ctx)),
                        abs(rmi_density(ctx, 2.0)), abs(prmi_density(ctx, 2.0)))
        out.append(_check(4, f"{label}: analytic densities", densities, 1e-12))
        mi_by_ell = {}
        neg_by_ell = {}
        for ell in (50, 100, 200):
            geom = SubsystemPair(0, ell, 0, ell)
            c1, c2, c12 = _numeric_pair_measures(model, res, geom)
            mi_by_ell[ell] = mutual_information(c1, c2, c12)
            neg_by_ell[ell] = fermionic_negativity(c12, ell)
        out.append(_check(4, f"{label}: numeric MI at l_mirror=100",
                          abs(mi_by_ell[100]), 5.0))
        out.append(_check(4, f"{label}: numeric negativity at l_mirror=100",
                          abs(neg_by_ell[100]), 5.0))
        slope = max(abs(mi_by_ell[200] - mi_by_ell[50]),
                    abs(neg_by_ell[200] - neg_by_ell[50])) / 150
        out.append(_check(4, f"{label}: slope per site", slope, 1e-3))
    return out


def criterion_5(fast: bool = False) -> list[CheckResult]:
    """Linearity in the mirror overlap and translation invariance."""
    params = _params()
    model = resonant_level(1.0, params)
    res = FIG3_RESERVOIRS
    out = []
    mi_by_ell = {}
    for ell in (50, 100, 200):
        geom = SubsystemPair(0, ell, 0, ell)
        c1, c2, c12 = _numeric_pair_measures(model, res, geom)
        mi_by_ell[ell] = mutual_information(c1, c2, c12)
    for small, large in ((50, 100), (100, 200)):
        ratio = mi_by_ell[large] / mi_by_ell[small]
        out.append(_check(5, f"MI({large})/MI({small}) vs 2", abs(ratio - 2.0),
                          0.06, detail=f"ratio {ratio:.4f}"))
    base = SubsystemPair(50, 100, 0, 200)
    shifted = SubsystemPair(57, 100, 7, 200)
    mis = []
    for geom in (base, shifted):
        c1, c2, c12 = _numeric_pair_measures(model, res, geom)
        mis.append(mutual_information(c1, c2, c12))
    out.append(_check(5, "translation shift of (d_L, d_R)",
                      abs(mis[1] - mis[0]), 1e-9))
    return out


def criterion_6(fast: bool = False) -> list[CheckResult]:
    """X_n = Y_n identity and its transmission roots."""
    samples = 200 if fast else 1000
    out = []
    for report in xn_yn_fuzz(n_values=(2, 4, 6), samples=samples, seed=20240611):
        out.append(_check(6, f"max |X_{report.n} - Y_{report.n}| "
                             f"({report.samples} samples)",
                          report.max_abs_diff, 1e-10))
    rng = np.random.default_rng(7)
    worst = 0.0
    pairs = 50 if fast else 200
    for n in (2, 4, 6):
        for _ in range(pairs):
            f_l, f_r = rng.uniform(0.02, 0.98, size=2)
            if abs(f_l - f_r) < 0.05:
                continue
            res = root_residuals(n, f_l, f_r)
            if res.size:
                worst = max(worst, float(res.max()))
    out.append(_check(6, "worst Y_n(T_gamma) residual", worst, 1e-9))
    return out


def criterion_7(fast: bool = False) -> list[CheckResult]:
    """Szego-Widom ladder and the generalized-determinant conjecture."""
    params = _params()
    model = resonant_level(1.0, params)
    res = FIG2_RESERVOIRS
    quad = default_quadrature(res, params, tol=1e-11)
    phi = mirror_symbol(model, res, params)
    lam = np.exp(1j * np.pi / 2) - 1.0  # gamma = 1/2 of the n = 2 entropy sum

    def transform(vals):
        eye = np.broadcast_to(np.eye(2, dtype=complex), vals.shape)
        return eye + lam * vals

    ells = (50, 100) if fast else (50, 100, 200)
    sections = []
    for ell in ells:
        geom = SubsystemPair(0, ell, 0, ell)
        cm = build_restricted_matrix(geom.mirror_sites(), "long-range", model,
                                     res, params, quad)
        sections.append(cm.matrix)
    ladder = szego_widom_ladder(phi, transform, ells, quad,
                                finite_matrices=sections)
    out = [
        _check(7, "SW ladder errors decreasing", 0.0 if ladder.decreasing else 1.0,
               0.5, detail=f"errors {[f'{e:.2e}' for e in ladder.errors]}"),
        _check(7, "SW final relative error",
               ladder.errors[-1] / abs(ladder.density), 0.02),
    ]
    ctx5 = BiasContext(model, FIG5_TEMP_BIAS, params,
                       default_quadrature(FIG5_TEMP_BIAS, params, tol=1e-11))
    gen_ells = (16, 32) if fast else (16, 32, 64)
    gen = generalized_sw_check(prmi_determinant_pairs(ctx5, 2), gen_ells,
                               ctx5.quad)
    out.append(_check(7, "generalized-SW errors decreasing",
                      0.0 if gen.decreasing else 1.0, 0.5,
                      detail=f"errors {[f'{e:.2e}' for e in gen.errors]}"))
    return out


def criterion_8(fast: bool = False) -> list[CheckResult]:
    """Single-interval moment slopes and the combined-moment decomposition."""
    params = _params()
    model = resonant_level(1.0, params)
    res = FIG2_RESERVOIRS
    quad = default_quadrature(res, params, tol=1e-11)
    ctx = BiasContext(model, res, params, quad)
    out = []
    cache: dict = {}
    traces = {}
    for ell in (100, 200):
        geom = SubsystemPair(0, 10, 0, ell)
        c = build_restricted_matrix(geom.sites_right(), "long-range", model,
                                    res, params, quad, cache)
        for p in range(1, 5):
            traces[(ell, p)] = moment_trace(c, p)
    for p in range(1, 5):
        slope = (traces[(200, p)] - traces[(100, p)]) / 100.0
        density = single_interval_moment_asymptotic(ctx, "R", p, 1)
        out.append(_check(8, f"moment slope p={p}",
                          abs(slope - density) / density, 0.02))
    first = moment_decomposition_check(ctx, SubsystemPair(50, 100, 0, 200), 3,
                                       cache=cache)
    doubled = moment_decomposition_check(ctx, SubsystemPair(100, 200, 0, 400),
                                         3, cache=cache)
    out.append(_check(8, "decomposition error shrinks when lengths double",
                      doubled.relative_error / first.relative_error, 1.0,
                      detail=f"{first.relative_error:.2e} -> "
                             f"{doubled.relative_error:.2e}"))
    return out


def criterion_9(fast: bool = False) -> list[CheckResult]:
    """Spectral formulas against the dense Fock-space oracle, <= 3 modes."""
    rng = np.random.default_rng(99)

    def random_valid_c(dim):
        a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
        q, _ = np.linalg.qr(a)
        return q @ np.diag(rng.uniform(0.05, 0.95, dim)) @ q.conj().T

    worst: dict[str, float] = {}
    trials = 3 if fast else 8
    for _ in range(trials):
        for n_modes, n1 in ((2, 1), (3, 1), (3, 2)):
            c12 = random_valid_c(n_modes)
            c1, c2 = c12[:n1, :n1], c12[n1:, n1:]
            rho = density_matrix_from_correlations(c12)
            gaps = {
                "entropy": abs(von_neumann_entropy(c12) - vn_entropy_dm(rho)),
                "renyi entropy": max(
                    abs(renyi_entropy(c12, n) - renyi_entropy_dm(rho, n))
                    for n in (0.5, 2.0)),
                "MI": abs(mutual_information(c1, c2, c12)
                          - mutual_information_dm(rho, n_modes, n1)),
                "negativity": abs(fermionic_negativity(c12, n1)
                                  - fermionic_negativity_dm(rho, n_modes, n1)),
                "PRMI": max(
                    abs(petz_renyi_mi_diagnostics(c1, c2, c12, n)[0]
                        - petz_renyi_mi_dm(rho, n_modes, n1, n))
                    for n in (0.5, 2.0)),
            }
            for key, gap in gaps.items():
                worst[key] = max(worst.get(key, 0.0), gap)
    return [_check(9, f"{key} vs Fock oracle", gap, 1e-8)
            for key, gap in worst.items()]


def criterion_10(fast: bool = False) -> list[CheckResult]:
    """MI/negativity ordering may invert at finite T, never at T = 0."""
    params = _params()
    eps_grid = (0.5, 1.0, 2.0, 4.0)

    def orderings(res):
        quad = default_quadrature(res, params, tol=1e-11)
        mis, negs = [], []
        for eps0 in eps_grid:
            ctx = BiasContext(resonant_level(eps0, params), res, params, quad)
            mis.append(mi_density(ctx))
            negs.append(negativity_density(ctx))
        inversions = 0
        for i in range(len(eps_grid)):
            for j in range(i + 1, len(eps_grid)):
                if (mis[i] - mis[j]) * (negs[i] - negs[j]) < 0:
                    inversions += 1
        return inversions

    finite_t = orderings(FIG2_RESERVOIRS)
    zero_t = orderings(ReservoirPair(1.5, -1.5, 0.0, 0.0))
    return [
        _check(10, "finite-T inversion exists",
               0.0 if finite_t > 0 else 1.0, 0.5,
               detail=f"{finite_t} inverted pairs"),
        _check(10, "no inversion at T=0", zero_t, 0.5),
    ]


CRITERIA = (criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
            criterion_6, criterion_7, criterion_8, criterion_9, criterion_10)


def run_acceptance(fast: bool = False,
                   criteria: tuple[int, ...] | None = None) -> list[CheckResult]:
    results = []
    for idx, func in enumerate(CRITERIA, start=1):
        if criteria is not None and idx not in criteria:
            continue
        results.extend(func(fast=fast))
    return results
