"""Spectral formulas for entropies, mutual informations and negativities.

For a fermionic Gaussian state every measure reduces to a function of the
eigenvalues of restricted correlation matrices:

* Renyi entropy   S^(n) = 1/(1-n) sum ln(nu^n + (1-nu)^n)
* von Neumann     S     = sum of binary entropies of nu
* negativity      E     = sum ln(sqrt(xi) + sqrt(1-xi))
                          + 1/2 sum ln(nu^2 + (1-nu)^2)
  with xi the (real) spectrum of the partial-time-reversal transform
  C_Xi = 1/2 [ I - (I + G+ G-)^{-1} (G+ + G-) ],
  G+- = diag(+-i, I) (I - 2C) diag(+-i, I)
* Petz-Renyi MI   D^(n) = 1/(n-1) Tr ln[ C^n D^(1-n) + (I-C)^n (I-D)^(1-n) ]
  with C the joint matrix and D the direct sum of the marginals.

Occupation spectra are clipped into [0, 1] (eigensolver noise only);
exact 0/1 eigenvalues of zero-temperature states are harmless for the
non-negative exponents above and keep pure-state identities exact.  Only
the negative exponents inside the PRMI take the interior clip
[clip, 1 - clip], which introduces an O(clip^|1-n|) bias there.  C_Xi is
not Hermitian in general but its spectrum is
real for any valid C; imaginary parts are checked against ``imag_tol``
(relative) and discarded.  The PRMI operator is different: its spectrum
is genuinely complex, but only in conjugate pairs whose principal logs
cancel in the trace, so the residue held against ``imag_tol`` is the
imaginary part surviving in the summed logs.  Eigenvalues on the
negative real axis break that cancellation and raise.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import xlogy

from .correlation import CorrelationMatrix

CLIP = 1e-12
IMAG_TOL = 1e-8

_EVEN_KINDS = ("renyi-negativity",)
MEASURE_KINDS = ("vn-entropy", "renyi-entropy", "mi", "rmi", "prmi",
                 "negativity", "renyi-negativity")


class MeasureError(RuntimeError):
    """Numerical breakdown in a spectral measure evaluation."""


def _as_matrix(c) -> np.ndarray:
    if isinstance(c, CorrelationMatrix):
        return c.matrix
    return np.asarray(c, dtype=complex)


def _occupation_spectrum(c, clip: float) -> np.ndarray:
    # clip removes eigensolver noise only; exact 0/1 values stay exact
    nu = (c.eigenvalues if isinstance(c, CorrelationMatrix)
          else np.linalg.eigvalsh(_as_matrix(c)))
    return np.clip(nu, 0.0, 1.0)


def renyi_entropy(c, n: float, clip: float = CLIP) -> float:
    """1/(1-n) sum ln(nu^n + (1-nu)^n) over the occupation spectrum."""
    if n <= 0 or n == 1:
        raise ValueError("Renyi index must be positive and different from 1")
    nu = _occupation_spectrum(c, clip)
    return float(np.log(nu ** n + (1.0 - nu) ** n).sum() / (1.0 - n))


def von_neumann_entropy(c, clip: float = CLIP) -> float:
    """Sum of binary entropies of the occupation spectrum."""
    nu = _occupation_spectrum(c, clip)
    return float(-(xlogy(nu, nu) + xlogy(1.0 - nu, 1.0 - nu)).sum())


def _check_union(c1, c2, c12):
    d1, d2, d12 = (len(_as_matrix(c)) for c in (c1, c2, c12))
    if d1 + d2 != d12:
        raise ValueError("joint matrix dimension must equal the sum of the parts")
    return d1


def mutual_information(c1, c2, c12, clip: float = CLIP) -> float:
    _check_union(c1, c2, c12)
    return (von_neumann_entropy(c1, clip) + von_neumann_entropy(c2, clip)
            - von_neumann_entropy(c12, clip))


def renyi_mutual_information(c1, c2, c12, n: float, clip: float = CLIP) -> float:
    _check_union(c1, c2, c12)
    return (renyi_entropy(c1, n, clip) + renyi_entropy(c2, n, clip)
            - renyi_entropy(c12, n, clip))


def negativity_transform(c12, n1: int) -> np.ndarray:
    """Transformed matrix C_Xi; the first n1 indices must belong to X_1.

    Not Hermitian in general, but with real spectrum in [0, 1].
    """
    c = _as_matrix(c12)
    dim = len(c)
    if not 0 < n1 < dim:
        raise ValueError("block size n1 must split the matrix in two")
    m = np.eye(dim) - 2.0 * c
    u = np.ones(dim, dtype=complex)
    u[:n1] = 1j
    g_plus = (u[:, None] * m) * u[None, :]
    g_minus = g_plus.conj().T
    gram = np.eye(dim) + g_plus @ g_minus
    if np.linalg.cond(gram) > 1e14:
        raise MeasureError("I + G+ G- is numerically singular")
    return 0.5 * (np.eye(dim) - np.linalg.solve(gram, g_plus + g_minus))


def _xi_spectrum(c12, n1: int, clip: float, imag_tol: float):
    lam = np.linalg.eigvals(negativity_transform(c12, n1))
    residue = float(np.abs(lam.imag).max() / max(np.abs(lam).max(), 1.0))
    if residue > imag_tol:
        raise MeasureError(
            f"complex eigenvalues of C_Xi (relative residue {residue:.2e})")
    return np.clip(lam.real, 0.0, 1.0), residue


def fermionic_negativity(c12, n1: int, clip: float = CLIP,
                         imag_tol: float = IMAG_TOL) -> float:
    """Logarithmic negativity between the leading n1 modes and the rest."""
    xi, _ = _xi_spectrum(c12, n1, clip, imag_tol)
    nu = _occupation_spectrum(c12, clip)
    return float(np.log(np.sqrt(xi) + np.sqrt(1.0 - xi)).sum()
                 + 0.5 * np.log(nu ** 2 + (1.0 - nu) ** 2).sum())


def renyi_negativity(c12, n1: int, n: int, clip: float = CLIP,
                     imag_tol: float = IMAG_TOL) -> float:
    """Tr ln[C_Xi^(n/2) + (I-C_Xi)^(n/2)] + (n/2) Tr ln[C^2 + (I-C)^2], n even."""
    if n % 2 or n < 2:
        raise ValueError("Renyi negativity index must be a positive even integer")
    xi, _ = _xi_spectrum(c12, n1, clip, imag_tol)
    nu = _occupation_spectrum(c12, clip)
    half = n / 2.0
    return float(np.log(xi ** half + (1.0 - xi) ** half).sum()
                 + half * np.log(nu ** 2 + (1.0 - nu) ** 2).sum())


def _fractional_power(c, p: float, clip: float) -> np.ndarray:
    mat = _as_matrix(c)
    nu, vec = np.linalg.eigh(mat)
    # negative exponents need the interior clip; zero-temperature spectra
    # contain exact 0/1 eigenvalues that would otherwise blow up
    nu = np.clip(nu, clip, 1.0 - clip) if p < 0 else np.clip(nu, 0.0, 1.0)
    return (vec * nu ** p) @ vec.conj().T


def _petz_eigenvalues(c1, c2, c12, n: float, clip: float):
    n1 = _check_union(c1, c2, c12)
    joint = _as_matrix(c12)
    dim = len(joint)
    product = np.zeros((dim, dim), dtype=complex)
    product[:n1, :n1] = _as_matrix(c1)
    product[n1:, n1:] = _as_matrix(c2)
    eye = np.eye(dim)
    term = (_fractional_power(joint, n, clip)
            @ _fractional_power(product, 1.0 - n, clip))
    term += (_fractional_power(eye - joint, n, clip)
             @ _fractional_power(eye - product, 1.0 - n, clip))
    return np.linalg.eigvals(term)


def petz_renyi_mi(c1, c2, c12, n: float, clip: float = CLIP,
                  imag_tol: float = IMAG_TOL) -> float:
    """Petz-Renyi mutual information of index n (n > 0, n != 1)."""
    value, _ = petz_renyi_mi_diagnostics(c1, c2, c12, n, clip, imag_tol)
    return value


def petz_renyi_mi_diagnostics(c1, c2, c12, n: float, clip: float = CLIP,
                              imag_tol: float = IMAG_TOL) -> tuple[float, float]:
    """PRMI value together with the relative imaginary residue of its spectrum."""
    if n <= 0 or n == 1:
        raise ValueError("Petz-Renyi index must be positive and different from 1")
    lam = _petz_eigenvalues(c1, c2, c12, n, clip)
    on_cut = (lam.real <= 0) & (np.abs(lam.imag) <= 1e-12 * np.abs(lam))
    if np.any(on_cut):
        raise MeasureError("PRMI spectrum reached the negative real axis")
    logs = np.log(lam).sum()
    residue = float(abs(logs.imag) / max(abs(logs.real), 1.0))
    if residue > imag_tol:
        raise MeasureError(
            f"PRMI log-trace has relative imaginary residue {residue:.2e}; "
            "the evaluation is ill-conditioned")
    value = float(logs.real / (n - 1.0))
    return value, residue


@dataclass(frozen=True)
class MeasureSpec:
    """A requested measure: kind, Renyi index where applicable, tolerances."""

    kind: str
    n: float | None = None
    clip: float = CLIP
    imag_tol: float = IMAG_TOL

    def __post_init__(self):
        if self.kind not in MEASURE_KINDS:
            raise ValueError(f"unknown measure kind {self.kind!r}")
        indexed = self.kind not in ("vn-entropy", "mi", "negativity")
        if indexed:
            if self.n is None or self.n <= 0:
                raise ValueError(f"measure {self.kind!r} needs an index n > 0")
            if self.n == 1:
                raise ValueError("index n = 1 is the von Neumann limit; use it directly")
            if self.kind in _EVEN_KINDS and (self.n != int(self.n) or int(self.n) % 2):
                raise ValueError("Renyi negativity requires an even integer index")
        elif self.n is not None:
            raise ValueError(f"measure {self.kind!r} takes no index")

    @property
    def label(self) -> str:
        names = {"vn-entropy": "entropy", "renyi-entropy": "entropy",
                 "mi": "mi", "rmi": "rmi", "prmi": "prmi",
                 "negativity": "neg", "renyi-negativity": "rneg"}
        base = names[self.kind]
        if self.n is None:
            return base
        return f"{base}{self.n:g}"


@dataclass(frozen=True)
class MeasureValue:
    """A numeric measure with the diagnostics gathered while evaluating it."""

    value: float
    kind: str
    n: float | None = None
    pipeline: str = "numeric"
    clip_excursion: float = 0.0
    imag_residue: float = 0.0


def _clip_excursion(*matrices) -> float:
    worst = 0.0
    for c in matrices:
        nu = (c.eigenvalues if isinstance(c, CorrelationMatrix)
              else np.linalg.eigvalsh(_as_matrix(c)))
        worst = max(worst, float(np.maximum(-nu, nu - 1.0).max()))
    return max(worst, 0.0)


def evaluate_measure(spec: MeasureSpec, c1, c2, c12, n1: int | None = None) -> MeasureValue:
    """Evaluate one measure on the pair (c1, c2) with joint matrix c12."""
    if n1 is None:
        n1 = len(_as_matrix(c1))
    residue = 0.0
    if spec.kind == "mi":
        value = mutual_information(c1, c2, c12, spec.clip)
    elif spec.kind == "rmi":
        value = renyi_mutual_information(c1, c2, c12, spec.n, spec.clip)
    elif spec.kind == "prmi":
        value, residue = petz_renyi_mi_diagnostics(
            c1, c2, c12, spec.n, spec.clip, spec.imag_tol)
    elif spec.kind == "negativity":
        _, residue = _xi_spectrum(c12, n1, spec.clip, spec.imag_tol)
        value = fermionic_negativity(c12, n1, spec.clip, spec.imag_tol)
    elif spec.kind == "renyi-negativity":
        _, residue = _xi_spectrum(c12, n1, spec.clip, spec.imag_tol)
        value = renyi_negativity(c12, n1, int(spec.n), spec.clip, spec.imag_tol)
    elif spec.kind == "vn-entropy":
        value = von_neumann_entropy(c12, spec.clip)
    else:  # renyi-entropy
        value = renyi_entropy(c12, spec.n, spec.clip)
    return MeasureValue(value=value, kind=spec.kind, n=spec.n,
                        pipeline="numeric",
                        clip_excursion=_clip_excursion(c1, c2, c12),
                        imag_residue=residue)
