"""Independent checks: moment asymptotics, Toeplitz determinants, polynomial identities.

These routines validate the leading-order machinery against quantities
computed by other routes:

* correlation-matrix moments Tr[(C_X)^p] against their stationary-phase
  densities, and the decomposition of a two-interval moment into the two
  detached remainders plus the mirror block;
* the Szego-Widom density int dk/2pi ln det Psi(k) against exact finite
  block-Toeplitz determinants, including the conjectured generalisation
  to products T[Psi_j] T[Upsilon_j]^{-1} that underlies the Petz-Renyi
  asymptotics;
* the identity X_n = Y_n between the gamma-product arising from the
  determinant route and the closed four-term form used in the negativity
  integrand, together with the explicit roots of the product.

X_n is evaluated as a complex gamma-product and Y_n through the real
square-root form, so the comparison exercises two independent code paths.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .asymptotics import BiasContext, negativity_poly_y
from .correlation import CorrelationMatrix, mirror_symbol
from .quadrature import QuadratureSpec, adaptive_quad

TWO_PI = 2.0 * np.pi
DET_FLOOR = 1e-13
CONDITION_LIMIT = 1e12


class WindingError(RuntimeError):
    """det of the transformed symbol approaches zero on the unit circle."""


class ConditionError(RuntimeError):
    """A finite Toeplitz factor is too ill-conditioned to invert honestly."""


@dataclass(frozen=True)
class MomentReport:
    """Numeric trace of a matrix power against its leading-order prediction."""

    p: int
    numeric: float
    prediction: float
    relative_error: float
    lengths: tuple[int, ...]


@dataclass(frozen=True)
class IdentityReport:
    """Fuzz summary for the X_n = Y_n polynomial identity."""

    n: int
    samples: int
    max_abs_diff: float


@dataclass(frozen=True)
class DeterminantLadder:
    """Finite log-determinant densities against the symbol integral."""

    density: float
    ells: tuple[int, ...]
    finite: tuple[float, ...]
    errors: tuple[float, ...]

    @property
    def decreasing(self) -> bool:
        return all(b < a for a, b in zip(self.errors[:-1], self.errors[1:]))


def moment_trace(c, p: int) -> float:
    """Sum of the p-th powers of the occupation spectrum."""
    if p < 1:
        raise ValueError("moment order must be a positive integer")
    nu = c.eigenvalues if isinstance(c, CorrelationMatrix) \
        else np.linalg.eigvalsh(np.asarray(c, dtype=complex))
    return float(np.clip(nu, 0.0, 1.0).__pow__(p).sum())


def single_interval_moment_asymptotic(ctx: BiasContext, side: str, p: int,
                                      ell: int) -> float:
    """ell * [int dk/2pi f_side^p + int dk/2pi mixture^p]."""
    if side not in ("L", "R"):
        raise ValueError("side must be 'L' or 'R'")
    if p < 1:
        raise ValueError("moment order must be a positive integer")

    def integrand(k):
        f_l, f_r, a, b = ctx.mixtures(k)
        own, mix = (f_l, b) if side == "L" else (f_r, a)
        return own ** p + mix ** p

    value = adaptive_quad(integrand, 0.0, np.pi, ctx.quad)
    return ell * float(value) / TWO_PI


def moment_decomposition_check(ctx: BiasContext, geom, p: int,
                               mode: str = "long-range",
                               cache: dict | None = None) -> MomentReport:
    """Tr[(C_A)^p] against the detached-remainder + mirror-block sum."""
    from .correlation import build_restricted_matrix

    build = lambda sites: build_restricted_matrix(
        sites, mode, ctx.model, ctx.res, ctx.params, ctx.quad, cache=cache)
    c_union = build(geom.sites_union())
    c_left = build(geom.sites_left())
    c_right = build(geom.sites_right())
    prediction = ((geom.ell_left - geom.ell_mirror) / geom.ell_left
                  * moment_trace(c_left, p)
                  + (geom.ell_right - geom.ell_mirror) / geom.ell_right
                  * moment_trace(c_right, p))
    if geom.ell_mirror:
        prediction += moment_trace(build(geom.mirror_sites()), p)
    numeric = moment_trace(c_union, p)
    rel = abs(numeric - prediction) / max(abs(numeric), 1e-300)
    return MomentReport(p, numeric, prediction, rel,
                        (geom.ell_left, geom.ell_right, geom.ell_mirror))


def identity_symbol(k):
    k = np.asarray(k, dtype=float)
    out = np.zeros(k.shape + (2, 2), dtype=complex)
    out[..., 0, 0] = 1.0
    out[..., 1, 1] = 1.0
    return out


def szego_widom_density(symbol, transform, quad: QuadratureSpec) -> float:
    """int dk/2pi ln det[transform(Psi(k))] over [-pi, pi] (real part).

    The imaginary part of the principal log cancels in the conjugate
    gamma pairs this density is used in; a determinant approaching zero
    raises, since the principal branch is then meaningless.
    """

    def integrand(k):
        values = transform(symbol(k))
        det = np.linalg.det(values)
        if np.any(np.abs(det) < DET_FLOOR):
            raise WindingError("symbol determinant crosses zero on [-pi, pi]")
        return np.log(np.abs(det))

    return float(adaptive_quad(integrand, -np.pi, np.pi, quad)) / TWO_PI


def block_toeplitz_from_symbol(symbol, ell: int,
                               quad: QuadratureSpec) -> np.ndarray:
    """2ell x 2ell block-Toeplitz matrix with blocks int dk/2pi Psi(k) e^{-i d k}."""
    if ell < 1:
        raise ValueError("block count must be positive")
    offsets = np.arange(-(ell - 1), ell)
    coeffs = np.empty((len(offsets), 2, 2), dtype=complex)
    for idx, d in enumerate(offsets):
        def integrand(k, d=d):
            return symbol(k) * np.exp(-1j * d * k)[:, None, None]

        coeffs[idx] = adaptive_quad(integrand, -np.pi, np.pi, quad,
                                    rate=abs(d)) / TWO_PI
    rows = np.arange(ell)
    index = rows[:, None] - rows[None, :] + (ell - 1)
    blocks = coeffs[index]  # (ell, ell, 2, 2)
    return blocks.transpose(0, 2, 1, 3).reshape(2 * ell, 2 * ell)


def _log_abs_det(matrix: np.ndarray) -> float:
    _, logdet = np.linalg.slogdet(matrix)
    return float(logdet)


def szego_widom_ladder(symbol, transform, ells, quad: QuadratureSpec,
                       finite_matrices=None) -> DeterminantLadder:
    """Compare ln|det|/ell of finite sections against the symbol density.

    ``finite_matrices`` may supply the already-built 2ell x 2ell matrices
    (e.g. correlation matrices of mirror pairs); otherwise the sections
    are generated from the symbol's Fourier coefficients.
    """
    density = szego_widom_density(symbol, transform, quad)
    finite = []
    for idx, ell in enumerate(ells):
        if finite_matrices is not None:
            section = np.asarray(finite_matrices[idx], dtype=complex)
        else:
            section = block_toeplitz_from_symbol(symbol, ell, quad)
        finite.append(_log_abs_det(_apply_transform(transform, section)) / ell)
    errors = tuple(abs(f - density) for f in finite)
    return DeterminantLadder(density, tuple(ells), tuple(finite), errors)


def _apply_transform(transform, section: np.ndarray) -> np.ndarray:
    """Apply a 2x2 symbol transform entrywise-compatibly to a finite section.

    Only affine transforms Psi -> alpha I + beta Psi are meaningful for
    finite sections; the callable is probed on the 2x2 identity and zero
    blocks to recover alpha and beta.
    """
    eye2 = np.eye(2, dtype=complex)
    zero2 = np.zeros((2, 2), dtype=complex)
    alpha = transform(zero2[None])[0]
    image = transform(eye2[None])[0] - alpha
    if not np.allclose(image, image[0, 0] * eye2, atol=1e-13):
        raise ValueError("finite sections support affine transforms only")
    beta = image[0, 0]
    dim = section.shape[0]
    return np.kron(np.eye(dim // 2), alpha) + beta * section


def generalized_sw_check(pairs, ells, quad: QuadratureSpec) -> DeterminantLadder:
    """Conjectured asymptotics of ln det[I + prod T[Psi_j] T[Upsilon_j]^{-1}].

    ``pairs`` is a sequence of (psi, upsilon) symbol callables; ``None``
    stands for the identity symbol.  Finite Toeplitz factors are inverted
    densely; a condition number beyond 1e12 aborts with a diagnostic.
    """
    pairs = [(identity_symbol if psi is None else psi,
              identity_symbol if ups is None else ups) for psi, ups in pairs]

    def integrand(k):
        npts = len(np.asarray(k))
        prod = np.broadcast_to(np.eye(2, dtype=complex), (npts, 2, 2)).copy()
        for psi, ups in pairs:
            prod = prod @ psi(k) @ np.linalg.inv(ups(k))
        det = np.linalg.det(np.eye(2) + prod)
        if np.any(np.abs(det) < DET_FLOOR):
            raise WindingError("generalized symbol determinant crosses zero")
        return np.log(np.abs(det))

    density = float(adaptive_quad(integrand, -np.pi, np.pi, quad)) / TWO_PI

    finite = []
    for ell in ells:
        prod = np.eye(2 * ell, dtype=complex)
        for psi, ups in pairs:
            if psi is not identity_symbol:
                prod = prod @ block_toeplitz_from_symbol(psi, ell, quad)
            if ups is not identity_symbol:
                section = block_toeplitz_from_symbol(ups, ell, quad)
                cond = np.linalg.cond(section)
                if cond > CONDITION_LIMIT:
                    raise ConditionError(
                        f"Toeplitz factor condition number {cond:.2e} "
                        "exceeds the trust limit")
                prod = prod @ np.linalg.inv(section)
        finite.append(_log_abs_det(np.eye(2 * ell) + prod) / ell)
    errors = tuple(abs(f - density) for f in finite)
    return DeterminantLadder(density, tuple(ells), tuple(finite), errors)


def affine_symbol(base, alpha: complex, beta: complex):
    """The symbol alpha I + beta Psi(k)."""

    def symbol(k):
        values = base(k)
        eye = np.broadcast_to(np.eye(2, dtype=complex), values.shape)
        return alpha * eye + beta * values

    return symbol


def diagonal_part(base):
    """The symbol with off-diagonal entries dropped (marginal of mirror pairs)."""

    def symbol(k):
        values = base(k).copy()
        values[..., 0, 1] = 0.0
        values[..., 1, 0] = 0.0
        return values

    return symbol


def prmi_determinant_pairs(ctx: BiasContext, n: int):
    """Symbol pairs whose generalized-SW density gives the n-th PRMI remainder.

    For integer n >= 2 the determinant in the PRMI splits as
    n ln det(I - C) + (1 - n) ln det(I - D) + ln det(I + B^{-1} A) with
    B^{-1} A = (I-D)^{n-1} (I-C)^{-n} C^n D^{-(n-1)}; this returns the
    (Psi, Upsilon) factor list of that product.
    """
    if n < 2 or n != int(n):
        raise ValueError("integer index n >= 2 required")
    phi = mirror_symbol(ctx.model, ctx.res, ctx.params)
    phi_cross = diagonal_part(phi)
    one_minus_phi = affine_symbol(phi, 1.0, -1.0)
    one_minus_cross = affine_symbol(phi_cross, 1.0, -1.0)
    pairs = [(one_minus_cross, None)] * (n - 1)
    pairs += [(None, one_minus_phi)] * n
    pairs += [(phi, None)] * n
    pairs += [(None, phi_cross)] * (n - 1)
    return pairs


def gamma_phases(n: int) -> np.ndarray:
    return np.exp(2j * np.pi * (np.arange(n) - (n - 1) / 2.0) / n)


def xn_value(n: int, f_l, f_r, trans):
    """Gamma-product X_n as a complex number (array-valued inputs allowed)."""
    if n < 2 or n % 2:
        raise ValueError("X_n is defined for positive even integers")
    f_l = np.asarray(f_l, dtype=float)
    f_r = np.asarray(f_r, dtype=float)
    trans = np.asarray(trans)
    a = trans * f_l + (1.0 - trans) * f_r
    b = (1.0 - trans) * f_l + trans * f_r
    prod = np.ones(np.broadcast(f_l, f_r, trans).shape, dtype=complex)
    for phase in gamma_phases(n):
        prod = prod * (1.0 - (1.0 - phase) * b - (1.0 + 1.0 / phase) * a
                       + (1.0 - phase) * (1.0 + 1.0 / phase) * f_l * f_r)
    return prod if prod.ndim else complex(prod)


def _yn_polynomial(n: int, f_l: float, f_r: float, trans):
    """Y_n continued to complex transmission (branch-independent for even n)."""
    trans = np.asarray(trans, dtype=complex)
    prod = f_l * f_r
    u = 0.5 * (1.0 - f_l - f_r)
    root = np.sqrt((u + prod) ** 2 + trans * (1.0 - trans) * (f_l - f_r) ** 2)
    terms = np.stack([trans * f_l + (1.0 - trans) * f_r - prod,
                      (1.0 - trans) * f_l + trans * f_r - prod,
                      root + u, root - u])
    return (terms ** n).sum(axis=0), np.abs(terms ** n).sum(axis=0)


def negativity_poly_roots(n: int, f_l: float, f_r: float) -> np.ndarray:
    """Transmission roots of the gamma product (degenerate factors skipped).

    Factors whose linear coefficient 2 cos(2 pi gamma / n) (f_L - f_R)
    vanishes are constant in the transmission and contribute no root.
    """
    if f_l == f_r:
        raise ValueError("roots require f_L != f_R")
    roots = []
    for phase in gamma_phases(n):
        two_cos = (phase + 1.0 / phase).real
        if abs(two_cos) < 1e-9:
            continue
        roots.append((1.0 - (1.0 - phase) * f_l)
                     * (1.0 - (1.0 + 1.0 / phase) * f_r)
                     / (two_cos * (f_l - f_r)))
    return np.asarray(roots, dtype=complex)


def root_residuals(n: int, f_l: float, f_r: float) -> np.ndarray:
    """|Y_n(T_gamma)| at each root, relative to the size of the summed terms."""
    roots = negativity_poly_roots(n, f_l, f_r)
    values, scale = _yn_polynomial(n, f_l, f_r, roots)
    return np.abs(values) / np.maximum(scale, 1.0)


def xn_yn_identity(n: int, f_l: float, f_r: float, trans: float,
                   root_tol: float = 1e-9) -> float:
    """|X_n - Y_n| at one point; verifies Y_n(T_gamma) = 0 at every root."""
    y = negativity_poly_y(np.asarray(f_l, dtype=float),
                          np.asarray(f_r, dtype=float),
                          np.asarray(trans, dtype=float), n)
    diff = abs(complex(xn_value(n, f_l, f_r, trans)) - float(y))
    if f_l != f_r:
        residuals = root_residuals(n, f_l, f_r)
        if residuals.size and residuals.max() > root_tol:
            raise AssertionError(
                f"Y_{n} fails to vanish at a root "
                f"(residual {residuals.max():.2e})")
    return diff


def xn_yn_fuzz(n_values=(2, 4, 6), samples: int = 1000,
               seed: int = 0) -> list[IdentityReport]:
    """Max |X_n - Y_n| over random (f_L, f_R, T) triples in (0, 1)^3."""
    rng = np.random.default_rng(seed)
    reports = []
    for n in n_values:
        f_l, f_r, trans = rng.uniform(1e-3, 1.0 - 1e-3, size=(3, samples))
        x = xn_value(n, f_l, f_r, trans)
        y = negativity_poly_y(f_l, f_r, trans, n)
        reports.append(IdentityReport(n, samples, float(np.abs(x - y).max())))
    return reports
