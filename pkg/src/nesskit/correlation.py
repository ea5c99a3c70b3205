"""Restricted two-point correlation matrices of the biased steady state.

Two construction modes are provided for <c_j^dag c_m>:

* ``exact`` -- the full momentum integral of f(k) <k|j><m|k> over
  [-pi, pi], using the scattering-state wavefunctions.  Valid for any
  finite distances (on the infinite chain).
* ``long-range`` -- the limit d_i / l_i -> oo at fixed d_L - d_R, where
  all Fourier components with diverging index have been dropped.  Entries
  then depend on sites only through j - m (same side) or j + m (opposite
  sides), which makes the matrices (block-)Toeplitz and lets a sweep reuse
  integrals across rows.  This is the default for figure reproduction.

For two mirroring intervals, ordering the sites as interleaved mirror
pairs (left site first) arranges the long-range matrix into 2x2 blocks
that depend only on the pair-index difference; the generating block
symbol Phi(k) and its gamma-deformed variants are provided here as well.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .core import (LatticeParams, ReservoirPair, ScatteringModel,
                   fermi_breakpoints, occupation_tilde)
from .quadrature import QuadratureSpec, adaptive_quad

HERMITICITY_TOL = 1e-12
SPECTRUM_TOL = 1e-9
EIG_CLIP = 1e-12

TWO_PI = 2.0 * np.pi


@dataclass(eq=False)
class CorrelationMatrix:
    """Hermitian matrix of <c_j^dag c_m> on an ordered site set."""

    sites: tuple[int, ...]
    matrix: np.ndarray
    mode: str
    _eigenvalues: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        self.sites = tuple(int(s) for s in self.sites)
        self.matrix = np.asarray(self.matrix, dtype=complex)
        if self.matrix.shape != (len(self.sites), len(self.sites)):
            raise ValueError("matrix shape does not match the site list")

    def __len__(self) -> int:
        return len(self.sites)

    @cached_property
    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.matrix)

    def clipped_eigenvalues(self, clip: float = EIG_CLIP) -> np.ndarray:
        return np.clip(self.eigenvalues, clip, 1.0 - clip)

    def validate(self, spectrum_tol: float = SPECTRUM_TOL):
        defect = np.abs(self.matrix - self.matrix.conj().T).max()
        if defect > HERMITICITY_TOL:
            raise ValueError(f"correlation matrix not Hermitian (defect {defect:.2e})")
        nu = self.eigenvalues
        if nu.min() < -spectrum_tol or nu.max() > 1.0 + spectrum_tol:
            raise ValueError(
                "correlation spectrum outside [0, 1]: "
                f"[{nu.min():.3e}, {1.0 - nu.max():.3e}] beyond tolerance")


def scattering_wavefunction(m: int, k, model: ScatteringModel,
                            params: LatticeParams):
    """Amplitude <m|k> of the scattering state |k| in (0, pi) at site m.

    Wavefunctions inside the impurity region are undefined and rejected.
    Left states (k > 0) read exp(ikm) + r_L exp(-ikm) for m < -m0 and
    t_L exp(ikm) for m > m0; right states (k < 0) mirror them.
    """
    m0 = params.impurity_halfwidth
    if abs(m) <= m0:
        raise ValueError("site inside the impurity region")
    k = np.asarray(k, dtype=float)
    if np.any((k == 0) | (np.abs(k) >= np.pi)):
        raise ValueError("momentum must satisfy 0 < |k| < pi")
    r_l, t_l, r_r, t_r = model.amplitudes(np.abs(k))
    plane = np.exp(1j * k * m)
    back = np.exp(-1j * k * m)
    if m > m0:
        out = np.where(k > 0, t_l * plane, plane + r_r * back)
    else:
        out = np.where(k > 0, plane + r_l * back, t_r * plane)
    return out if out.ndim else complex(out)


def default_quadrature(res: ReservoirPair, params: LatticeParams,
                       tol: float = 1e-10) -> QuadratureSpec:
    """Breakpoints at k = 0 and the zero-temperature Fermi momenta."""
    return QuadratureSpec(tol=tol,
                          breakpoints=(0.0,) + fermi_breakpoints(res, params))


def correlation_entry_exact(j: int, m: int, model: ScatteringModel,
                            res: ReservoirPair, params: LatticeParams,
                            quad: QuadratureSpec) -> complex:
    """<c_j^dag c_m> = int dk/2pi f(k) conj(<j|k>) <m|k> over [-pi, pi]."""

    def integrand(k):
        occ = occupation_tilde(k, res, params)
        psi_j = scattering_wavefunction(j, k, model, params)
        psi_m = scattering_wavefunction(m, k, model, params)
        return occ * np.conj(psi_j) * psi_m

    rate = abs(j) + abs(m)
    return adaptive_quad(integrand, -np.pi, np.pi, quad, rate=rate) / TWO_PI


def correlation_entry_longrange(j: int, m: int, model: ScatteringModel,
                                res: ReservoirPair, params: LatticeParams,
                                quad: QuadratureSpec) -> complex:
    """Long-range limit of <c_j^dag c_m>; j, m each strictly on one side."""
    m0 = params.impurity_halfwidth
    if abs(j) <= m0 or abs(m) <= m0:
        raise ValueError("site inside the impurity region")

    def occ_pair(k):
        return occupation_tilde(k, res, params), occupation_tilde(-k, res, params)

    if j > 0 and m > 0:  # both in A_R
        def negative_half(k):
            return occupation_tilde(k, res, params) * np.exp(-1j * (j - m) * k)

        def positive_half(k):
            f_pos, f_neg = occ_pair(k)
            trans = model.transmission(k)
            return (f_pos * trans + f_neg * (1.0 - trans)) * np.exp(-1j * (j - m) * k)

        rate = abs(j - m)
    elif j < 0 and m < 0:  # both in A_L
        def negative_half(k):
            return occupation_tilde(-k, res, params) * np.exp(1j * (j - m) * k)

        def positive_half(k):
            f_pos, f_neg = occ_pair(k)
            trans = model.transmission(k)
            return (f_neg * trans + f_pos * (1.0 - trans)) * np.exp(1j * (j - m) * k)

        rate = abs(j - m)
    else:  # opposite sides: only the coherent reflected/transmitted part survives
        sign = 1j if j < 0 else -1j  # conjugate phases for the two orderings

        def positive_half(k):
            f_pos, f_neg = occ_pair(k)
            _, t_l, r_r, t_r = model.amplitudes(k)
            cross = model.tl_rl_conj(k)
            if j < 0:  # j in A_L, m in A_R
                weight = f_pos * cross + f_neg * np.conj(t_r) * r_r
            else:  # j in A_R, m in A_L
                weight = f_pos * np.conj(cross) + f_neg * t_r * np.conj(r_r)
            return weight * np.exp(sign * (j + m) * k)

        negative_half = None
        rate = abs(j + m)

    value = adaptive_quad(positive_half, 0.0, np.pi, quad, rate=rate)
    if negative_half is not None:
        value = value + adaptive_quad(negative_half, -np.pi, 0.0, quad, rate=rate)
    return value / TWO_PI


def _entry_key(mode: str, j: int, m: int):
    """Cache key exploiting the Toeplitz structure of the long-range limit."""
    if mode == "exact":
        return ("E", j, m)
    if j > 0 and m > 0:
        return ("R", j - m)
    if j < 0 and m < 0:
        return ("L", j - m)
    if j < 0:
        return ("X", j + m)
    return ("Xc", j + m)


def build_restricted_matrix(sites, mode: str, model: ScatteringModel,
                            res: ReservoirPair, params: LatticeParams,
                            quad: QuadratureSpec,
                            cache: dict | None = None) -> CorrelationMatrix:
    """Assemble the Hermitian correlation matrix on ``sites`` entry-wise.

    Only the upper triangle is integrated; the lower is its conjugate.
    ``cache`` may be shared across calls (e.g. across sweep rows): entries
    are keyed by the site pair in exact mode and by the Toeplitz offset
    j - m (same side) or j + m (cross) in long-range mode.
    """
    if mode not in ("exact", "long-range"):
        raise ValueError(f"unknown correlation mode {mode!r}")
    entry = correlation_entry_exact if mode == "exact" else correlation_entry_longrange
    if cache is None:
        cache = {}
    sites = [int(s) for s in sites]
    dim = len(sites)
    out = np.empty((dim, dim), dtype=complex)
    for a, j in enumerate(sites):
        for b in range(a, dim):
            m = sites[b]
            key = _entry_key(mode, j, m)
            value = cache.get(key)
            if value is None:
                value = entry(j, m, model, res, params, quad)
                cache[key] = value
            out[a, b] = value
            out[b, a] = np.conj(value)
    matrix = CorrelationMatrix(tuple(sites), out, mode)
    matrix.validate()
    return matrix


def _phi_values(k, model: ScatteringModel, res: ReservoirPair,
                params: LatticeParams) -> np.ndarray:
    """Block symbol Phi(k) of the mirror-pair matrix, shape (npts, 2, 2).

    Component 1 of each block is the left site of a mirror pair,
    component 2 the right site.
    """
    k = np.asarray(k, dtype=float)
    f_pos = occupation_tilde(np.where(k == 0, 1.0, k), res, params)
    f_neg = occupation_tilde(np.where(k == 0, -1.0, -k), res, params)
    out = np.zeros(k.shape + (2, 2), dtype=complex)
    neg = k < 0
    pos = ~neg
    out[neg, 0, 0] = f_neg[neg]
    out[neg, 1, 1] = f_pos[neg]
    if np.any(pos):
        kp = k[pos]
        trans = model.transmission(kp)
        refl = 1.0 - trans
        cross = (f_pos[pos] - f_neg[pos]) * model.tl_rl_conj(kp)
        out[pos, 0, 0] = f_neg[pos] * trans + f_pos[pos] * refl
        out[pos, 1, 1] = f_pos[pos] * trans + f_neg[pos] * refl
        out[pos, 0, 1] = cross
        out[pos, 1, 0] = np.conj(cross)
    return out


def block_symbol_phi(k: float, model: ScatteringModel, res: ReservoirPair,
                     params: LatticeParams) -> np.ndarray:
    """2x2 block symbol Phi at a single momentum, 0 < |k| < pi."""
    if k == 0 or abs(k) >= np.pi:
        raise ValueError("momentum must satisfy 0 < |k| < pi")
    return _phi_values(np.array([k]), model, res, params)[0]


def gamma_indices(n: int) -> np.ndarray:
    """The replica index gamma = -(n-1)/2, ..., (n-1)/2 in unit steps."""
    if n < 1:
        raise ValueError("index n must be a positive integer")
    return np.arange(n) - (n - 1) / 2.0


def gamma_prefactor(gamma: float, n: int) -> np.ndarray:
    """diag(1 - exp(2 pi i gamma / n), 1 + exp(-2 pi i gamma / n))."""
    phase = np.exp(2j * np.pi * gamma / n)
    return np.diag([1.0 - phase, 1.0 + 1.0 / phase])


def block_symbol_phi_gamma(k: float, gamma: float, n: int,
                           model: ScatteringModel, res: ReservoirPair,
                           params: LatticeParams) -> np.ndarray:
    """Deformed symbol Phi_gamma = diag-prefactor * Phi used by negativity sums."""
    if gamma not in gamma_indices(n):
        raise ValueError("gamma must be one of -(n-1)/2 .. (n-1)/2")
    return gamma_prefactor(gamma, n) @ block_symbol_phi(k, model, res, params)


def mirror_symbol(model: ScatteringModel, res: ReservoirPair,
                  params: LatticeParams):
    """Vectorised Phi(k) evaluator, k array -> (npts, 2, 2)."""

    def symbol(k):
        return _phi_values(k, model, res, params)

    return symbol
