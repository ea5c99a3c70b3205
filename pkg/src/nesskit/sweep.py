"""Configuration-driven parameter sweeps producing figure datasets.

A run is described by a JSON document (see ``RunConfig.from_dict``): an
impurity model, the two reservoirs, the interval geometry, the sweep
axis, the measures to evaluate and the pipelines to run.  Each sweep
point yields one ``SweepRow`` holding, per measure, the numeric value
(exact diagonalization of the long-range correlation matrices), the
analytic leading-order value, and both normalised by the maximal values

    I_max = 2 min(l_L, l_R) ln 2,     E_max = min(l_L, l_R) ln 2

(MI-type measures by I_max, negativities by E_max).  Rows that fail
record the error and leave the sweep running.

Sweep axes: ``distance`` varies d_L - d_R at fixed interval lengths (the
paper's figure layout); ``temperature-bias`` and ``potential-bias`` vary
one reservoir at full mirror overlap.  Results are deterministic: all
integrals are adaptive quadratures with fixed tolerances, so identical
configs give byte-identical CSV files.  ``NESS_THREADS`` parallelises
rows (numeric work releases the GIL inside LAPACK).
"""

from __future__ import annotations

import csv
import io
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .asymptotics import (BiasContext, mi_asymptotic, negativity_asymptotic,
                          prmi_asymptotic, renyi_negativity_asymptotic,
                          rmi_asymptotic)
from .core import (LatticeParams, ReservoirPair, ScatteringModel,
                   SubsystemPair, resonant_level, tabulated_model)
from .correlation import build_restricted_matrix, default_quadrature
from .measures import MeasureSpec, evaluate_measure

SWEEP_KINDS = ("distance", "temperature-bias", "potential-bias")
PIPELINES = ("numeric", "analytic", "both")
_NONNEGATIVE_KINDS = ("mi", "prmi", "negativity")


class ConfigError(ValueError):
    """Invalid run configuration."""


@dataclass(frozen=True)
class RunConfig:
    model_kind: str
    eps0: float
    reservoirs: ReservoirPair
    ell_left: int
    ell_right: int
    m0: int
    sweep_kind: str
    sweep_values: tuple[float, ...]
    measures: tuple[MeasureSpec, ...]
    pipeline: str = "both"
    mode: str = "long-range"
    d_min: int = 0
    quadrature_tol: float = 1e-10
    table_path: str | None = None

    @classmethod
    def from_dict(cls, raw: dict) -> "RunConfig":
        try:
            return cls._parse(raw)
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"bad run config: {exc}") from exc

    @classmethod
    def _parse(cls, raw: dict) -> "RunConfig":
        model = raw.get("model", {"kind": "resonant-level", "eps0": 0.0})
        kind = model["kind"]
        if kind not in ("resonant-level", "tabulated"):
            raise ValueError(f"unknown model kind {kind!r}")
        res = raw["reservoirs"]
        reservoirs = ReservoirPair(float(res.get("mu_left", 0.0)),
                                   float(res.get("mu_right", 0.0)),
                                   float(res.get("temp_left", 0.0)),
                                   float(res.get("temp_right", 0.0)))
        geometry = raw["geometry"]
        ell_left = int(geometry["ell_left"])
        ell_right = int(geometry["ell_right"])
        if ell_left < 1 or ell_right < 1:
            raise ValueError("interval lengths must be at least 1")
        sweep = raw["sweep"]
        sweep_kind = sweep.get("kind", "distance")
        if sweep_kind not in SWEEP_KINDS:
            raise ValueError(f"unknown sweep kind {sweep_kind!r}")
        if "values" in sweep:
            values = tuple(float(v) for v in sweep["values"])
        else:
            start, stop = float(sweep["start"]), float(sweep["stop"])
            step = float(sweep.get("step", 1.0))
            if step <= 0:
                raise ValueError("sweep step must be positive")
            values = tuple(np.arange(start, stop + 0.5 * step, step))
        if not values:
            raise ValueError("sweep range is empty")
        measures = tuple(MeasureSpec(m["kind"], m.get("n"))
                         for m in raw["measures"])
        if not measures:
            raise ValueError("no measures requested")
        for spec in measures:
            if spec.kind not in ("mi", "rmi", "prmi", "negativity",
                                 "renyi-negativity"):
                raise ValueError(
                    f"measure {spec.kind!r} is not sweepable (no Eq.-style maximum)")
        pipeline = raw.get("pipeline", "both")
        if pipeline not in PIPELINES:
            raise ValueError(f"unknown pipeline {pipeline!r}")
        mode = raw.get("mode", "long-range")
        if mode not in ("long-range", "exact"):
            raise ValueError(f"unknown correlation mode {mode!r}")
        return cls(model_kind=kind, eps0=float(model.get("eps0", 0.0)),
                   reservoirs=reservoirs, ell_left=ell_left,
                   ell_right=ell_right, m0=int(geometry.get("m0", 0)),
                   sweep_kind=sweep_kind, sweep_values=values,
                   measures=measures, pipeline=pipeline, mode=mode,
                   d_min=int(raw.get("d_min", 0)),
                   quadrature_tol=float(raw.get("quadrature_tol", 1e-10)),
                   table_path=model.get("path"))

    @property
    def sweep_column(self) -> str:
        return {"distance": "delta_d", "temperature-bias": "delta_T",
                "potential-bias": "delta_mu"}[self.sweep_kind]

    def build_model(self, params: LatticeParams) -> ScatteringModel:
        if self.model_kind == "resonant-level":
            return resonant_level(self.eps0, params)
        return load_tabulated_model(self.table_path)

    def point(self, value: float) -> tuple[ReservoirPair, SubsystemPair]:
        """Reservoirs and geometry at one sweep value."""
        res = self.reservoirs
        if self.sweep_kind == "distance":
            delta = int(round(value))
            d_left = self.d_min + max(delta, 0)
            d_right = self.d_min + max(-delta, 0)
        else:
            d_left = d_right = self.d_min
            if self.sweep_kind == "temperature-bias":
                res = replace(res, temp_left=res.temp_right + value)
            else:
                res = replace(res, mu_left=res.mu_right + value)
        geom = SubsystemPair(d_left, self.ell_left, d_right, self.ell_right,
                             self.m0)
        return res, geom


def load_tabulated_model(path: str) -> ScatteringModel:
    """CSV of (k, Re t_L, Im t_L, Re r_L, Im r_L, Re t_R, Im t_R, Re r_R, Im r_R)."""
    if path is None:
        raise ConfigError("tabulated model needs a 'path' entry")
    data = np.loadtxt(path, delimiter=",", ndmin=2)
    if data.shape[1] != 9:
        raise ConfigError("tabulated S(k) file must have 9 columns")
    k = data[:, 0]
    t_l = data[:, 1] + 1j * data[:, 2]
    r_l = data[:, 3] + 1j * data[:, 4]
    t_r = data[:, 5] + 1j * data[:, 6]
    r_r = data[:, 7] + 1j * data[:, 8]
    return tabulated_model(k, r_l, t_l, r_r, t_r)


@dataclass
class SweepRow:
    sweep_value: float
    ell_mirror: int
    values: dict[str, dict[str, float]] = field(default_factory=dict)
    clip_excursion: float = 0.0
    imag_residue: float = 0.0
    error: str | None = None


def _normalisers(config: RunConfig) -> dict[str, float]:
    modes = min(config.ell_left, config.ell_right)
    i_max = 2.0 * modes * np.log(2.0)
    e_max = modes * np.log(2.0)
    return {"mi": i_max, "rmi": i_max, "prmi": i_max,
            "negativity": e_max, "renyi-negativity": e_max}


def _analytic_value(spec: MeasureSpec, ctx: BiasContext,
                    geom: SubsystemPair) -> float:
    ell_m = geom.ell_mirror
    if spec.kind == "mi":
        return mi_asymptotic(ctx, ell_m).total
    if spec.kind == "rmi":
        return rmi_asymptotic(ctx, spec.n, ell_m).total
    if spec.kind == "prmi":
        return prmi_asymptotic(ctx, spec.n, ell_m).total
    if spec.kind == "negativity":
        return negativity_asymptotic(ctx, ell_m).total
    return renyi_negativity_asymptotic(ctx, geom, int(spec.n)).total


def evaluate_point(config: RunConfig, value: float, params: LatticeParams,
                   model: ScatteringModel, cache: dict | None = None) -> SweepRow:
    res, geom = config.point(value)
    quad = default_quadrature(res, params, tol=config.quadrature_tol)
    row = SweepRow(sweep_value=value, ell_mirror=geom.ell_mirror)
    norm = _normalisers(config)

    numeric = config.pipeline in ("numeric", "both")
    analytic = config.pipeline in ("analytic", "both")
    if numeric:
        if cache is None or config.sweep_kind != "distance":
            cache = {}
        c1 = build_restricted_matrix(geom.sites_left(), config.mode, model,
                                     res, params, quad, cache)
        c2 = build_restricted_matrix(geom.sites_right(), config.mode, model,
                                     res, params, quad, cache)
        c12 = build_restricted_matrix(geom.sites_union(), config.mode, model,
                                      res, params, quad, cache)
    if analytic:
        ctx = BiasContext(model, res, params, quad)

    for spec in config.measures:
        cell = {"numeric": float("nan"), "analytic": float("nan"),
                "numeric_norm": float("nan"), "analytic_norm": float("nan")}
        scale = norm[spec.kind] or 1.0
        if numeric:
            mv = evaluate_measure(spec, c1, c2, c12, n1=len(c1))
            cell["numeric"] = mv.value
            cell["numeric_norm"] = mv.value / scale
            row.clip_excursion = max(row.clip_excursion, mv.clip_excursion)
            row.imag_residue = max(row.imag_residue, mv.imag_residue)
            if spec.kind in _NONNEGATIVE_KINDS and not \
                    -1e-6 <= cell["numeric_norm"] <= 1.0 + 1e-6:
                raise RuntimeError(
                    f"normalised {spec.label} value {cell['numeric_norm']:.3e} "
                    "outside [0, 1]")
        if analytic:
            ana = _analytic_value(spec, ctx, geom)
            cell["analytic"] = ana
            cell["analytic_norm"] = ana / scale
        row.values[spec.label] = cell
    return row


def run_sweep(config: RunConfig, threads: int | None = None) -> list[SweepRow]:
    """Evaluate every sweep point; failures become rows with an error record."""
    params = LatticeParams(impurity_halfwidth=config.m0)
    model = config.build_model(params)
    if threads is None:
        threads = int(os.environ.get("NESS_THREADS", "1"))
    cache: dict = {}

    def job(value: float) -> SweepRow:
        try:
            return evaluate_point(config, value, params, model, cache)
        except Exception as exc:  # recorded, sweep continues
            _, geom = config.point(value)
            return SweepRow(sweep_value=value, ell_mirror=geom.ell_mirror,
                            error=f"{type(exc).__name__}: {exc}")

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(job, config.sweep_values))
    else:
        rows = [job(v) for v in config.sweep_values]
    return rows


def csv_header(config: RunConfig) -> list[str]:
    header = [config.sweep_column, "ell_mirror"]
    for spec in config.measures:
        header += [f"{spec.label}_numeric", f"{spec.label}_analytic",
                   f"{spec.label}_numeric_norm", f"{spec.label}_analytic_norm"]
    return header


def render_csv(config: RunConfig, rows: list[SweepRow]) -> str:
    """CSV text with 12 significant digits; failed rows are skipped."""
    if not rows:
        raise ValueError("no rows to emit")
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(csv_header(config))
    for row in rows:
        if row.error is not None:
            continue
        record = [f"{row.sweep_value:.12g}", str(row.ell_mirror)]
        for spec in config.measures:
            cell = row.values[spec.label]
            record += [f"{cell[key]:.12g}" for key in
                       ("numeric", "analytic", "numeric_norm", "analytic_norm")]
        writer.writerow(record)
    return buf.getvalue()


def emit_csv(config: RunConfig, rows: list[SweepRow], path: str) -> str:
    text = render_csv(config, rows)
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(text)
    return path
