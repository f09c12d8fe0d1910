"""Command-line front end.

Subcommands:

    simulate preset <test1|test2|test3|test4> --seed N --out DIR
    simulate run <config.ini> --out DIR
    simulate sweep <preset> --seeds <a..b|n,n,...> --out DIR

Each run writes trace.csv, summary.json and plot.svg (skip with
--no-plot).  Exit codes: 0 pass, 1 usage/IO/validation error, 2
acceptance-metric failure.
"""

from __future__ import annotations

import argparse
import json
import statistics
import sys
from pathlib import Path

from . import __version__
from .config import PRESET_NAMES, ConfigError, RunConfig, preset
from .harness import Metrics, Trace, compute_metrics, simulate

CSV_COLUMNS = Trace.column_names()

_FLOAT_COLS = set(CSV_COLUMNS) - {"overridden", "decrease_ok"}


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # exit 1 on usage errors, not argparse's 2
        raise _UsageError(message)


def write_trace_csv(trace: Trace, path: Path) -> None:
    """Emit the trace with 17 significant digits (lossless round-trip)."""
    with open(path, "w", newline="\n") as fh:
        fh.write(",".join(CSV_COLUMNS) + "\n")
        cols = [getattr(trace, c) for c in CSV_COLUMNS]
        for i in range(len(trace)):
            parts = []
            for name, col in zip(CSV_COLUMNS, cols):
                if name in _FLOAT_COLS:
                    parts.append(format(float(col[i]), ".17g"))
                else:
                    parts.append("1" if col[i] else "0")
            fh.write(",".join(parts) + "\n")


def read_trace_csv(path: Path) -> dict:
    """Parse an emitted CSV back into column lists keyed by name."""
    with open(path) as fh:
        header = fh.readline().strip().split(",")
        if header != list(CSV_COLUMNS):
            raise ValueError(f"unexpected CSV header: {header}")
        data: dict = {name: [] for name in header}
        for line in fh:
            for name, tok in zip(header, line.strip().split(",")):
                if name in _FLOAT_COLS:
                    data[name].append(float(tok))
                else:
                    data[name].append(tok == "1")
    return data


def preset_criteria(name: str, trace: Trace, metrics: Metrics) -> dict:
    """Per-preset pass/fail checks applied by the CLI gate."""
    checks = {
        "completed": trace.termination.status == "completed",
        "decrease_violations_zero": metrics.decrease_violations == 0,
        "tracking_band": metrics.max_abs_e_after <= 0.2,
    }
    if name == "test1":
        span = max(abs(metrics.u_min), abs(metrics.u_max))
        checks["control_magnitude"] = 500.0 <= span <= 2000.0
    return checks


def _run_one(cfg: RunConfig, out_dir: Path, plot: bool, preset_name=None) -> dict:
    """Simulate one config, write artifacts, return the summary dict."""
    out_dir.mkdir(parents=True, exist_ok=True)
    plant, ref, base, scfg = cfg.build()
    trace = simulate(
        plant,
        ref,
        base,
        scfg,
        cfg.dt,
        cfg.horizon,
        x0=cfg.x0(),
        config_snapshot=cfg.to_dict(),
    )
    metrics = compute_metrics(trace, cfg.t_settle)
    summary = {
        "tool": "lyapclamp",
        "version": __version__,
        "preset": preset_name,
        "termination": {
            "status": trace.termination.status,
            "step": trace.termination.step,
            "reason": trace.termination.reason,
        },
        "metrics": metrics.as_dict(),
        "config": cfg.to_dict(),
    }
    if preset_name is not None:
        summary["criteria"] = preset_criteria(preset_name, trace, metrics)
        summary["passed"] = all(summary["criteria"].values())
    else:
        summary["passed"] = trace.termination.status == "completed"
    write_trace_csv(trace, out_dir / "trace.csv")
    with open(out_dir / "summary.json", "w") as fh:
        json.dump(summary, fh, indent=2)
        fh.write("\n")
    if plot:
        from .svgplot import render_trace_svg

        title = preset_name or "custom run"
        (out_dir / "plot.svg").write_text(render_trace_svg(trace, title))
    return summary


def _print_summary(summary: dict) -> None:
    m = summary["metrics"]
    print(f"termination: {summary['termination']['status']}")
    print(f"max |e| after settle: {m['max_abs_e_after']:.6g}")
    print(f"u range: [{m['u_min']:.6g}, {m['u_max']:.6g}]")
    print(f"u_b range: [{m['ub_min']:.6g}, {m['ub_max']:.6g}]")
    print(f"override fraction: {m['override_fraction']:.4f}")
    print(f"decrease violations: {m['decrease_violations']}")
    print(f"chattering index: {m['chattering_index']:.6g} (control units / s)")
    if "criteria" in summary:
        for name, ok in summary["criteria"].items():
            print(f"criterion {name}: {'pass' if ok else 'FAIL'}")


def _parse_seeds(spec: str) -> list[int]:
    spec = spec.strip()
    if ".." in spec:
        lo_s, hi_s = spec.split("..", 1)
        lo, hi = int(lo_s), int(hi_s)
        if hi < lo:
            raise ValueError(f"empty seed range {spec!r}")
        return list(range(lo, hi + 1))
    return [int(tok) for tok in spec.split(",") if tok.strip()]


def _cmd_preset(args) -> int:
    cfg = preset(args.name, args.seed)
    summary = _run_one(cfg, Path(args.out), not args.no_plot, preset_name=args.name)
    _print_summary(summary)
    return 0 if summary["passed"] else 2


def _cmd_run(args) -> int:
    path = Path(args.config)
    if not path.exists():
        print(f"error: config file not found: {path}", file=sys.stderr)
        return 1
    cfg = RunConfig.from_ini(path.read_text())
    summary = _run_one(cfg, Path(args.out), not args.no_plot)
    _print_summary(summary)
    return 0 if summary["passed"] else 2


def _cmd_sweep(args) -> int:
    try:
        seeds = _parse_seeds(args.seeds)
    except ValueError as exc:
        print(f"error: bad --seeds: {exc}", file=sys.stderr)
        return 1
    if not seeds:
        print("error: empty seed list", file=sys.stderr)
        return 1
    out_dir = Path(args.out)
    summaries = {}
    for seed in seeds:
        cfg = preset(args.name, seed)
        summaries[seed] = _run_one(
            cfg, out_dir / f"seed_{seed}", not args.no_plot, preset_name=args.name
        )
    metric_names = list(next(iter(summaries.values()))["metrics"].keys())
    aggregate = {
        "tool": "lyapclamp",
        "version": __version__,
        "preset": args.name,
        "seeds": seeds,
        "passed": {s: summaries[s]["passed"] for s in seeds},
        "metrics": {},
    }
    for name in metric_names:
        values = [summaries[s]["metrics"][name] for s in seeds]
        aggregate["metrics"][name] = {
            "min": min(values),
            "median": statistics.median(values),
            "max": max(values),
        }
    out_dir.mkdir(parents=True, exist_ok=True)
    with open(out_dir / "aggregate.json", "w") as fh:
        json.dump(aggregate, fh, indent=2)
        fh.write("\n")
    failed = [s for s in seeds if not summaries[s]["passed"]]
    for s in seeds:
        print(f"seed {s}: {'pass' if summaries[s]['passed'] else 'FAIL'}")
    return 2 if failed else 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="simulate", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("preset", help="run a named experiment preset")
    p.add_argument("name", choices=PRESET_NAMES)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--out", required=True)
    p.add_argument("--no-plot", action="store_true")
    p.set_defaults(func=_cmd_preset)

    p = sub.add_parser("run", help="run a custom INI config")
    p.add_argument("config")
    p.add_argument("--out", required=True)
    p.add_argument("--no-plot", action="store_true")
    p.set_defaults(func=_cmd_run)

    p = sub.add_parser("sweep", help="run a preset over many seeds")
    p.add_argument("name", choices=PRESET_NAMES)
    p.add_argument("--seeds", required=True, help="a..b or comma list")
    p.add_argument("--out", required=True)
    p.add_argument("--no-plot", action="store_true")
    p.set_defaults(func=_cmd_sweep)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
