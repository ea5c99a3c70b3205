"""Exact many-body reference values for few-mode Gaussian states.

For up to a handful of modes the full 2^N-dimensional density matrix of a
particle-number-conserving Gaussian state can be built directly from its
correlation matrix, and every measure evaluated by dense matrix algebra.
This is the brute-force oracle against which the spectral formulas are
checked; nothing here shares code with the spectral path.

Jordan-Wigner convention: mode 0 occupies the most significant qubit, so
numpy.kron of two reduced density matrices reproduces the ordering of the
joint state when the first block holds the leading modes.  The fermionic
partial transpose is applied in the Majorana monomial basis: a monomial
carrying p Majorana factors from the transposed block picks up a factor
i^p, which realises partial time reversal.
"""

from __future__ import annotations

import numpy as np
from scipy.special import xlogy

_SIGMA_MINUS = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)
_PAULI_Z = np.diag([1.0, -1.0]).astype(complex)


def annihilation_operators(n_modes: int) -> list[np.ndarray]:
    """Jordan-Wigner annihilation operators, mode 0 most significant."""
    ops = []
    for j in range(n_modes):
        factors = [_PAULI_Z] * j + [_SIGMA_MINUS] + \
            [np.eye(2, dtype=complex)] * (n_modes - j - 1)
        op = factors[0]
        for f in factors[1:]:
            op = np.kron(op, f)
        ops.append(op)
    return ops


def density_matrix_from_correlations(c) -> np.ndarray:
    """Gaussian density matrix with <c_i^dag c_j> equal to the given matrix."""
    c = np.asarray(getattr(c, "matrix", c), dtype=complex)
    n_modes = len(c)
    nu, vec = np.linalg.eigh(c)
    if nu.min() < -1e-10 or nu.max() > 1.0 + 1e-10:
        raise ValueError("correlation spectrum outside [0, 1]")
    nu = np.clip(nu, 0.0, 1.0)
    ann = annihilation_operators(n_modes)
    dim = 2 ** n_modes
    rho = np.eye(dim, dtype=complex)
    for a in range(n_modes):
        # normal mode d_a = sum_i V_{ia} c_i gives <d_a^dag d_b> = delta nu_a
        d_a = sum(vec[i, a] * ann[i] for i in range(n_modes))
        number = d_a.conj().T @ d_a
        rho = rho @ (nu[a] * number + (1.0 - nu[a]) * (np.eye(dim) - number))
    return rho


def reduced_density_matrices(rho: np.ndarray, n_modes: int,
                             n1: int) -> tuple[np.ndarray, np.ndarray]:
    """Partial traces onto the leading n1 modes and the trailing rest."""
    d1, d2 = 2 ** n1, 2 ** (n_modes - n1)
    blocks = rho.reshape(d1, d2, d1, d2)
    return np.einsum("ajbj->ab", blocks), np.einsum("jajb->ab", blocks)


def _probabilities(rho: np.ndarray) -> np.ndarray:
    return np.clip(np.linalg.eigvalsh(rho), 0.0, None)


def vn_entropy_dm(rho: np.ndarray) -> float:
    lam = _probabilities(rho)
    return float(-xlogy(lam, lam).sum())


def renyi_entropy_dm(rho: np.ndarray, n: float) -> float:
    lam = _probabilities(rho)
    return float(np.log((lam ** n).sum()) / (1.0 - n))


def mutual_information_dm(rho: np.ndarray, n_modes: int, n1: int) -> float:
    rho1, rho2 = reduced_density_matrices(rho, n_modes, n1)
    return vn_entropy_dm(rho1) + vn_entropy_dm(rho2) - vn_entropy_dm(rho)


def petz_renyi_mi_dm(rho: np.ndarray, n_modes: int, n1: int, n: float,
                     floor: float = 1e-30) -> float:
    """1/(n-1) ln Tr[rho^n (rho_1 x rho_2)^(1-n)] by dense matrix powers."""
    rho1, rho2 = reduced_density_matrices(rho, n_modes, n1)

    def power(mat, p):
        lam, vec = np.linalg.eigh(mat)
        lam = np.maximum(lam, floor)
        return (vec * lam ** p) @ vec.conj().T

    value = np.trace(power(rho, n) @ power(np.kron(rho1, rho2), 1.0 - n))
    return float(np.log(value.real) / (n - 1.0))


def _majorana_operators(n_modes: int) -> list[np.ndarray]:
    ops = []
    for c in annihilation_operators(n_modes):
        ops.append(c + c.conj().T)
        ops.append(1j * (c.conj().T - c))
    return ops


def fermionic_partial_transpose(rho: np.ndarray, n_modes: int,
                                n1: int) -> np.ndarray:
    """Partial time reversal on the leading n1 modes, monomial by monomial."""
    gammas = _majorana_operators(n_modes)
    dim = 2 ** n_modes
    out = np.zeros_like(rho)
    for s in range(4 ** n_modes):
        mono = np.eye(dim, dtype=complex)
        degree_first = 0
        for p in range(2 * n_modes):
            if (s >> p) & 1:
                mono = mono @ gammas[p]
                if p < 2 * n1:
                    degree_first += 1
        weight = np.trace(mono.conj().T @ rho) / dim
        if weight != 0:
            out += weight * (1j ** degree_first) * mono
    return out


def fermionic_negativity_dm(rho: np.ndarray, n_modes: int, n1: int) -> float:
    """ln of the trace norm of the partially time-reversed density matrix."""
    twisted = fermionic_partial_transpose(rho, n_modes, n1)
    return float(np.log(np.linalg.svd(twisted, compute_uv=False).sum()))
