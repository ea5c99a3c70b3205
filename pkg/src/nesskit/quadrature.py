"""Adaptive composite Gauss-Legendre quadrature.

All momentum integrals in this package run through :func:`adaptive_quad`:
15-point Gauss-Legendre panels, refined by recursive bisection until the
bisection correction of each panel drops below its share of the absolute
tolerance budget.  Two features matter for the integrands that show up here:

* mandatory breakpoints: occupation factors are only piecewise smooth
  (they jump at k = 0, and at the Fermi momenta when a reservoir sits at
  zero temperature), so panels never straddle a listed breakpoint;
* an oscillation hint: integrands carrying a factor exp(i*k*m) with large
  |m| are pre-split into panels holding a few oscillation periods each,
  so the error estimate is meaningful from the first bisection level.

Integrands are evaluated in batches: ``f`` receives a 1-d array of nodes
collected from every pending panel and returns an array whose leading axis
matches it.  Values may be real, complex, or carry trailing axes (e.g. a
(2, 2) matrix symbol).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(15)

# Panels holding more periods than this get pre-split before adaptation.
_PERIODS_PER_PANEL = 2.0


class QuadratureError(RuntimeError):
    """Raised when a panel fails to converge within the depth cap.

    Carries the best available estimate in ``estimate``.
    """

    def __init__(self, message: str, estimate):
        super().__init__(message)
        self.estimate = estimate


@dataclass(frozen=True)
class QuadratureSpec:
    """Tolerance budget and mandatory breakpoints for adaptive integration.

    ``tol`` is an absolute tolerance for the whole integral; each panel is
    accepted once its bisection correction is below tol * (panel width /
    total width).  ``breakpoints`` lists interior points that panels must
    not cross (k = 0 always; +-k_F when a reservoir is at T = 0).
    """

    tol: float = 1e-10
    max_depth: int = 30
    breakpoints: tuple[float, ...] = ()

    def __post_init__(self):
        if not self.tol > 0:
            raise ValueError("quadrature tolerance must be positive")
        if self.max_depth < 1:
            raise ValueError("max_depth must be at least 1")

    def with_tol(self, tol: float) -> "QuadratureSpec":
        return QuadratureSpec(tol=tol, max_depth=self.max_depth,
                              breakpoints=self.breakpoints)


def _segments(a: float, b: float, breakpoints) -> list[tuple[float, float]]:
    pts = [a] + sorted(p for p in breakpoints if a < p < b) + [b]
    return [(lo, hi) for lo, hi in zip(pts[:-1], pts[1:]) if hi > lo]


def _panel_values(f, lo: np.ndarray, hi: np.ndarray):
    """15-point Gauss-Legendre value of f on each [lo[i], hi[i]] panel."""
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    nodes = mid[:, None] + half[:, None] * _GL_NODES[None, :]
    vals = np.asarray(f(nodes.ravel()))
    vals = vals.reshape(nodes.shape + vals.shape[1:])
    weighted = np.tensordot(vals, _GL_WEIGHTS, axes=([1], [0]))
    shape = (len(lo),) + (1,) * (weighted.ndim - 1)
    return weighted * half.reshape(shape)


def adaptive_quad(f, a: float, b: float, spec: QuadratureSpec | None = None,
                  rate: float = 0.0):
    """Integrate ``f`` over [a, b] to the absolute tolerance of ``spec``.

    ``rate`` is the phase rate of the fastest oscillation in the integrand
    (|m| for a factor exp(i*k*m)); it only controls the initial panel
    count, never the accepted accuracy.
    """
    if spec is None:
        spec = QuadratureSpec()
    if b <= a:
        if b == a:
            return 0.0
        raise ValueError("integration interval is reversed")

    lo_list, hi_list = [], []
    for seg_lo, seg_hi in _segments(a, b, spec.breakpoints):
        width = seg_hi - seg_lo
        n0 = max(1, int(np.ceil(width * abs(rate) /
                                (2.0 * np.pi * _PERIODS_PER_PANEL))))
        edges = np.linspace(seg_lo, seg_hi, n0 + 1)
        lo_list.append(edges[:-1])
        hi_list.append(edges[1:])
    lo = np.concatenate(lo_list)
    hi = np.concatenate(hi_list)

    total_width = b - a
    coarse = _panel_values(f, lo, hi)
    total = np.zeros_like(coarse[0])
    depth = np.zeros(len(lo), dtype=int)
    depth_exceeded = False

    while len(lo):
        mid = 0.5 * (lo + hi)
        left = _panel_values(f, lo, mid)
        right = _panel_values(f, mid, hi)
        refined = left + right
        err = np.abs(refined - coarse).reshape(len(lo), -1).max(axis=1)
        budget = spec.tol * (hi - lo) / total_width
        done = err <= budget
        at_cap = ~done & (depth >= spec.max_depth)
        if np.any(at_cap):
            depth_exceeded = True
        settle = done | at_cap
        if np.any(settle):
            total = total + refined[settle].sum(axis=0)
        keep = ~settle
        lo = np.concatenate([lo[keep], mid[keep]])
        hi = np.concatenate([mid[keep], hi[keep]])
        coarse = np.concatenate([left[keep], right[keep]])
        depth = np.concatenate([depth[keep] + 1, depth[keep] + 1])

    if depth_exceeded:
        raise QuadratureError(
            "quadrature failed to converge within the depth cap", total)
    if np.ndim(total) == 0:
        total = total[()]
    return total
