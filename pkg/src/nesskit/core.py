"""Lattice dispersion, reservoir occupations, impurity scattering, interval geometry.

The chain is a homogeneous tight-binding lattice with hopping ``eta``
(every energy and temperature in this package is quoted in units of it)
broken only by a particle-conserving impurity occupying the sites
``-m0 .. m0``.  Outside the impurity the single-particle eigenstates are
scattering states characterised by a 2x2 unitary S(k) of reflection and
transmission amplitudes, and each state |k> is filled from the reservoir
it emanates from: the right reservoir for k < 0, the left for k > 0.

Conventions fixed here and relied on everywhere else:

* dispersion eps(k) = -2 eta cos k on k in [-pi, pi];
* zero-temperature Fermi factors are exact steps with value 1/2 at
  eps = mu;
* the resonant-level amplitudes are gauged as
  t = sin k / (sin k + i eps0 / (2 eta)), r = t - 1, which reproduces
  the transmission probability sin^2 k / (sin^2 k + (eps0 / 2 eta)^2)
  and satisfies the unitarity constraints below.

Every ``ScatteringModel`` is validated at construction by sampling:
|r|^2 + |t|^2 = 1 per side, equal moduli between sides, and the phase
relation conj(t_R) r_R = -t_L conj(r_L).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import partial
from typing import Callable

import numpy as np
from scipy.special import expit

AmplitudeFn = Callable[[np.ndarray], tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]]


@dataclass(frozen=True)
class LatticeParams:
    """Hopping scale and impurity half-width (impurity spans -m0 .. m0)."""

    hopping: float = 1.0
    impurity_halfwidth: int = 0

    def __post_init__(self):
        if not self.hopping > 0:
            raise ValueError("hopping must be positive")
        if self.impurity_halfwidth < 0:
            raise ValueError("impurity half-width must be non-negative")


@dataclass(frozen=True)
class ReservoirPair:
    """Chemical potentials and temperatures of the two edge reservoirs."""

    mu_left: float = 0.0
    mu_right: float = 0.0
    temp_left: float = 0.0
    temp_right: float = 0.0

    def __post_init__(self):
        if self.temp_left < 0 or self.temp_right < 0:
            raise ValueError("temperatures must be non-negative")

    @property
    def is_unbiased(self) -> bool:
        return (self.mu_left == self.mu_right
                and self.temp_left == self.temp_right)


def dispersion(k, params: LatticeParams):
    """Band energy -2 eta cos k for |k| <= pi."""
    k = np.asarray(k, dtype=float)
    if np.any(np.abs(k) > np.pi + 1e-12):
        raise ValueError("momentum outside [-pi, pi]")
    return -2.0 * params.hopping * np.cos(k)


def fermi_dirac(eps, mu: float, temp: float):
    """Fermi occupation; an exact step (1/2 at eps = mu) when temp = 0."""
    eps = np.asarray(eps, dtype=float)
    if temp < 0:
        raise ValueError("temperature must be non-negative")
    if temp == 0:
        out = np.where(eps < mu, 1.0, np.where(eps > mu, 0.0, 0.5))
    else:
        out = expit(-(eps - mu) / temp)
    return out if out.ndim else float(out)


def occupation_tilde(k, res: ReservoirPair, params: LatticeParams):
    """Steady-state occupation of |k>: right reservoir for k < 0, left for k > 0."""
    k = np.asarray(k, dtype=float)
    if np.any(k == 0.0):
        raise ValueError("k = 0 has no defined source reservoir")
    eps = dispersion(k, params)
    f_left = fermi_dirac(eps, res.mu_left, res.temp_left)
    f_right = fermi_dirac(eps, res.mu_right, res.temp_right)
    out = np.where(k > 0, f_left, f_right)
    return out if out.ndim else float(out)


def fermi_momentum(mu: float, params: LatticeParams) -> float:
    """Momentum in (0, pi) at which the band crosses mu; requires |mu| < 2 eta."""
    band = 2.0 * params.hopping
    if abs(mu) >= band:
        raise ValueError("chemical potential outside the band (|mu| >= 2 eta)")
    return float(np.arccos(-mu / band))


class ScatteringModel:
    """Evaluator k -> (r_L, t_L, r_R, t_R) on (0, pi), validated by sampling."""

    def __init__(self, amplitudes: AmplitudeFn, validate: bool = True,
                 samples: int = 1000, tol: float = 1e-12):
        self._amplitudes = amplitudes
        if validate:
            self.validate(samples=samples, tol=tol)

    def amplitudes(self, k):
        """Amplitudes (r_L, t_L, r_R, t_R) at |k|, vectorised over k."""
        k = np.abs(np.asarray(k, dtype=float))
        r_l, t_l, r_r, t_r = self._amplitudes(k)
        return (np.asarray(r_l, dtype=complex), np.asarray(t_l, dtype=complex),
                np.asarray(r_r, dtype=complex), np.asarray(t_r, dtype=complex))

    def transmission(self, k):
        _, t_l, _, _ = self.amplitudes(k)
        return np.abs(t_l) ** 2

    def reflection(self, k):
        r_l, _, _, _ = self.amplitudes(k)
        return np.abs(r_l) ** 2

    def tl_rl_conj(self, k):
        """The combination t_L conj(r_L) entering every cross-side correlation."""
        r_l, t_l, _, _ = self.amplitudes(k)
        return t_l * np.conj(r_l)

    def validate(self, samples: int = 1000, tol: float = 1e-12):
        k = np.linspace(0.0, np.pi, samples + 2)[1:-1]
        r_l, t_l, r_r, t_r = self.amplitudes(k)
        for r, t, side in ((r_l, t_l, "left"), (r_r, t_r, "right")):
            defect = np.abs(np.abs(r) ** 2 + np.abs(t) ** 2 - 1.0).max()
            if defect > tol:
                raise ValueError(
                    f"{side} column of S(k) not normalised (defect {defect:.2e})")
        if np.abs(np.abs(r_l) - np.abs(r_r)).max() > tol:
            raise ValueError("|r_L| and |r_R| differ; R is ill-defined")
        if np.abs(np.abs(t_l) - np.abs(t_r)).max() > tol:
            raise ValueError("|t_L| and |t_R| differ; T is ill-defined")
        phase = np.abs(np.conj(t_r) * r_r + t_l * np.conj(r_l)).max()
        if phase > tol:
            raise ValueError(
                f"unitarity phase relation violated (defect {phase:.2e})")


def _resonant_level_amplitudes(k, beta: float):
    s = np.sin(k)
    t = s / (s + 1j * beta) if beta else np.ones_like(s, dtype=complex)
    r = t - 1.0
    return r, t, r, t


def resonant_level(eps0: float, params: LatticeParams) -> ScatteringModel:
    """Single-site impurity with on-site energy eps0.

    Transmission probability sin^2 k / (sin^2 k + (eps0 / 2 eta)^2); the
    amplitude gauge is t = sin k / (sin k + i eps0 / 2 eta), r = t - 1.
    """
    beta = eps0 / (2.0 * params.hopping)
    return ScatteringModel(partial(_resonant_level_amplitudes, beta=beta))


class TabulatedAmplitudes:
    """Linear interpolation of sampled amplitudes on a k grid in (0, pi)."""

    def __init__(self, k_grid, r_l, t_l, r_r, t_r):
        order = np.argsort(k_grid)
        self.k_grid = np.asarray(k_grid, dtype=float)[order]
        if self.k_grid.min() <= 0 or self.k_grid.max() >= np.pi:
            raise ValueError("tabulated momenta must lie strictly inside (0, pi)")
        self.table = [np.asarray(a, dtype=complex)[order]
                      for a in (r_l, t_l, r_r, t_r)]

    def __call__(self, k):
        out = []
        for col in self.table:
            re = np.interp(k, self.k_grid, col.real)
            im = np.interp(k, self.k_grid, col.imag)
            out.append(re + 1j * im)
        return tuple(out)


def tabulated_model(k_grid, r_l, t_l, r_r, t_r,
                    tol: float = 1e-6) -> ScatteringModel:
    """Scattering model from sampled amplitudes; unitarity revalidated after interpolation.

    The default tolerance allows for the second-order unitarity defect of
    linear interpolation near the band edges, where amplitudes curve fast.
    """
    return ScatteringModel(TabulatedAmplitudes(k_grid, r_l, t_l, r_r, t_r),
                           tol=tol)


@dataclass(frozen=True)
class SubsystemPair:
    """Two intervals flanking the impurity.

    A_L spans the sites m with -d_L - l_L <= m + m0 <= -d_L - 1 and A_R the
    sites with d_R + 1 <= m - m0 <= d_R + l_R, so d_i counts the sites
    between the impurity region and the nearer edge of A_i.
    """

    d_left: int
    ell_left: int
    d_right: int
    ell_right: int
    m0: int = 0

    def __post_init__(self):
        if self.d_left < 0 or self.d_right < 0:
            raise ValueError("distances from the impurity must be non-negative")
        if self.ell_left < 1 or self.ell_right < 1:
            raise ValueError("interval lengths must be at least 1")
        if self.m0 < 0:
            raise ValueError("impurity half-width must be non-negative")

    @property
    def delta_d(self) -> int:
        return self.d_left - self.d_right

    @property
    def ell_mirror(self) -> int:
        return mirror_overlap_length(self)

    def sites_left(self) -> np.ndarray:
        stop = -self.m0 - self.d_left
        return np.arange(stop - self.ell_left, stop)

    def sites_right(self) -> np.ndarray:
        start = self.m0 + self.d_right + 1
        return np.arange(start, start + self.ell_right)

    def sites_union(self) -> np.ndarray:
        """All of A_L then all of A_R, each in ascending site order."""
        return np.concatenate([self.sites_left(), self.sites_right()])

    def mirror_sites(self) -> np.ndarray:
        """Mirror-pair sites (-x_1, x_1, -x_2, x_2, ...) by distance from the impurity.

        x_a runs over the overlap of A_R with the reflection of A_L, so the
        left member of each pair lies in A_L and the right member in A_R.
        """
        start = self.m0 + max(self.d_left, self.d_right) + 1
        x = np.arange(start, start + self.ell_mirror)
        return np.stack([-x, x], axis=1).ravel()


def mirror_overlap_length(geom: SubsystemPair) -> int:
    """Number of sites of one interval whose mirror image lies in the other."""
    inner = min(geom.d_left + geom.ell_left, geom.d_right + geom.ell_right)
    outer = max(geom.d_left, geom.d_right)
    return max(inner - outer, 0)


def fermi_breakpoints(res: ReservoirPair, params: LatticeParams,
                      signed: bool = True) -> tuple[float, ...]:
    """Discontinuity momenta of the occupation factors: the Fermi momenta of
    any zero-temperature reservoir whose mu lies inside the band (plus their
    mirror images when ``signed``)."""
    points: set[float] = set()
    for mu, temp in ((res.mu_left, res.temp_left),
                     (res.mu_right, res.temp_right)):
        if temp == 0 and abs(mu) < 2.0 * params.hopping:
            k_f = fermi_momentum(mu, params)
            points.add(k_f)
            if signed:
                points.add(-k_f)
    return tuple(sorted(points))
