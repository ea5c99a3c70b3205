"""Command-line front end: sweep, verify, figure.

    nesskit sweep --config run.json [--out sweep.csv] [--pipeline both] [--plot]
    nesskit verify [--fast]
    nesskit figure 2a [--out DIR] [--no-plot]

``sweep`` evaluates one run configuration and writes the CSV (and
optionally a PNG next to it).  ``verify`` runs the acceptance battery
and prints one PASS/FAIL line per check.  ``figure`` loads a checked-in
panel configuration (parameter sets of the reproduced figures), writes
one CSV per curve plus the rendered panel.

Exit codes: 0 success, 1 any failed row or check, 2 configuration error.
``NESS_THREADS`` sets the worker count for sweep rows.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from importlib import resources

from .sweep import ConfigError, RunConfig, emit_csv, run_sweep

FIGURE_CODES = ("2a", "2b", "2c", "2d", "3a", "3b", "3c", "3d",
                "4a", "4b", "5a", "5b", "5c", "5d")


def _load_json(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as handle:
            return json.load(handle)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path!r}: {exc}") from exc


def _slug(label: str) -> str:
    return "".join(ch if ch.isalnum() else "-" for ch in label).strip("-")


def cmd_sweep(args) -> int:
    config = RunConfig.from_dict(_load_json(args.config))
    if args.pipeline:
        raw = _load_json(args.config)
        raw["pipeline"] = args.pipeline
        config = RunConfig.from_dict(raw)
    rows = run_sweep(config)
    out = args.out or "sweep.csv"
    emit_csv(config, rows, out)
    failed = [row for row in rows if row.error is not None]
    for row in failed:
        print(f"row {config.sweep_column}={row.sweep_value:g} failed: {row.error}",
              file=sys.stderr)
    print(f"wrote {out} ({len(rows) - len(failed)}/{len(rows)} rows)")
    if args.plot:
        from .report import render_panel
        png = os.path.splitext(out)[0] + ".png"
        render_panel([("", config, rows)], png)
        print(f"wrote {png}")
    return 1 if failed else 0


def cmd_verify(args) -> int:
    from .verify import run_acceptance

    results = run_acceptance(fast=args.fast)
    for result in results:
        print(result.line())
    failed = sum(not r.passed for r in results)
    print(f"{len(results) - failed}/{len(results)} checks passed")
    return 1 if failed else 0


def _figure_config(code: str) -> dict:
    ref = resources.files("nesskit") / "configs" / f"fig{code}.json"
    with ref.open(encoding="utf-8") as handle:
        return json.load(handle)


def cmd_figure(args) -> int:
    panel = _figure_config(args.code)
    os.makedirs(args.out, exist_ok=True)
    status = 0
    series = []
    for entry in panel["series"]:
        config = RunConfig.from_dict(entry["config"])
        rows = run_sweep(config)
        if any(row.error is not None for row in rows):
            status = 1
            for row in rows:
                if row.error is not None:
                    print(f"series {entry['label']}: row {row.sweep_value:g} "
                          f"failed: {row.error}", file=sys.stderr)
        path = os.path.join(args.out,
                            f"fig{args.code}_{_slug(entry['label'])}.csv")
        emit_csv(config, rows, path)
        print(f"wrote {path}")
        series.append((entry["label"], config, rows))
    if not args.no_plot:
        from .report import render_panel
        png = os.path.join(args.out, f"fig{args.code}.png")
        render_panel(series, png, title=panel.get("title", ""))
        print(f"wrote {png}")
    return status


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nesskit",
        description="Steady-state correlation and entanglement toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    sweep = sub.add_parser("sweep", help="run one sweep configuration")
    sweep.add_argument("--config", required=True)
    sweep.add_argument("--out")
    sweep.add_argument("--pipeline", choices=("numeric", "analytic", "both"))
    sweep.add_argument("--plot", action="store_true",
                       help="render a PNG next to the CSV")
    sweep.set_defaults(func=cmd_sweep)

    verify = sub.add_parser("verify", help="run the acceptance battery")
    verify.add_argument("--fast", action="store_true",
                        help="trimmed grids, same tolerances")
    verify.set_defaults(func=cmd_verify)

    figure = sub.add_parser("figure", help="reproduce a checked-in figure panel")
    figure.add_argument("code", choices=FIGURE_CODES)
    figure.add_argument("--out", default=".")
    figure.add_argument("--no-plot", action="store_true")
    figure.set_defaults(func=cmd_figure)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
