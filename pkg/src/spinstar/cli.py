"""Command-line interface.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 I/O error.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import analysis
from .model import StarModel, excitation, load_model_config, model_from_config
from .settings import ContractError, SpinStarError
from .verification import closed_form_checks, deep_checks, generic_checks

EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3

DEFAULT_QUANTITIES = {
    "cops": ["c_ucp_l", "c_l_l"],
    "lops": ["c_cp_ul", "c_cp_nul", "c_ul_nul", "c_nul_nul"],
    "custom-amplitudes": ["sum_c", "spread", "w_fidelity"],
}
DETECTORS = ("tws", "pstws", "peaks", "crossings", "disentangle")


class UsageError(SpinStarError):
    pass


@dataclass
class RunConfig:
    scenario: str = "cops"
    model: StarModel = field(default_factory=StarModel)
    t_max: float = analysis.DEFAULT_T_MAX
    steps: int = analysis.DEFAULT_STEPS
    quantities: list[str] = field(default_factory=list)
    initial: np.ndarray | None = None
    output: Path | None = None
    format: str = "csv"

    def validate(self) -> None:
        roles = analysis.SiteRoles.for_initial(self.initial)
        for q in self.quantities:
            analysis.parse_quantity(q, roles)
        analysis.time_grid(self.t_max, self.steps)


def _parse_amps(text: str) -> np.ndarray:
    try:
        amps = np.array([complex(x.strip().replace(" ", "")) for x in text.split(",")])
    except ValueError:
        raise UsageError(f"cannot parse amplitudes {text!r}") from None
    if abs(np.sum(np.abs(amps) ** 2) - 1.0) > 1e-10:
        raise UsageError("custom amplitudes must be normalized")
    return amps


def build_config(args) -> RunConfig:
    values = load_model_config(args.config) if getattr(args, "config", None) else {}
    amps = _parse_amps(args.amps) if args.amps else None
    if args.scenario == "custom-amplitudes" and amps is None:
        raise UsageError("--scenario custom-amplitudes requires --amps")
    if args.ligands is not None:
        values["ligand_count"] = str(args.ligands)
    elif amps is not None:
        values["ligand_count"] = str(len(amps) - 1)
    if args.coupling is not None:
        values["coupling"] = str(args.coupling)
    model = model_from_config(values)

    if args.scenario == "cops":
        initial = excitation(model, 0)
    elif args.scenario == "lops":
        excited = args.excited if args.excited is not None else model.ligand_count
        if not 1 <= excited <= model.ligand_count:
            raise UsageError(f"--excited must lie in 1..{model.ligand_count}")
        initial = excitation(model, excited)
    else:
        if amps is None or len(amps) != model.n_sites:
            raise UsageError(f"--amps needs {model.n_sites} entries for {model.ligand_count} ligands")
        initial = amps

    quantities = (
        [q.strip() for q in args.quantities.split(",") if q.strip()]
        if args.quantities else list(DEFAULT_QUANTITIES[args.scenario])
    )
    cfg = RunConfig(args.scenario, model, args.tmax, args.steps, quantities, initial,
                    Path(args.output) if args.output else None, args.format)
    cfg.validate()
    return cfg


def gnuplot_script(csv_path: Path, names: list[str]) -> str:
    lines = [
        "set datafile separator ','",
        "set key autotitle columnhead",
        "set xlabel 't [1/J]'",
        "set grid",
    ]
    plots = [f"'{csv_path.name}' using 1:{k + 2} with lines" if k == 0 else f"'' using 1:{k + 2} with lines"
             for k in range(len(names))]
    lines.append("plot " + ", \\\n     ".join(plots))
    lines.append("pause mouse close")
    return "\n".join(lines) + "\n"


def _write(text: str, path: Path | None) -> None:
    if path is None:
        sys.stdout.write(text)
        return
    with open(path, "w", newline="\n") as fh:
        fh.write(text)


def cmd_evolve(args) -> int:
    cfg = build_config(args)
    series = analysis.scan(cfg.model, cfg.initial, cfg.t_max, cfg.steps, cfg.quantities)
    text = series.to_csv() if cfg.format == "csv" else series.to_json()
    _write(text, cfg.output)
    if args.gnuplot:
        if cfg.output is None or cfg.format != "csv":
            raise UsageError("--gnuplot needs --output and csv format")
        _write(gnuplot_script(cfg.output, series.names), cfg.output.with_suffix(".gp"))
    return EXIT_OK


def collect_events(cfg: RunConfig, detectors: list[str]) -> analysis.EventList:
    m, init = cfg.model, cfg.initial
    out = analysis.EventList()
    if "tws" in detectors or "pstws" in detectors:
        found = analysis.w_state_events(m, init, cfg.t_max, cfg.steps)
        keep = {k for k, d in (("TWS", "tws"), ("PSTWS", "pstws")) if d in detectors}
        out = out.merged(analysis.EventList([e for e in found if e.kind in keep]))
    if "disentangle" in detectors:
        out = out.merged(analysis.disentangle_events(m, init, cfg.t_max, cfg.steps))
    if "peaks" in detectors or "crossings" in detectors:
        series = analysis.scan(m, init, cfg.t_max, cfg.steps, cfg.quantities)
        if "peaks" in detectors:
            for name in series.names:
                out = out.merged(analysis.find_peaks(series.grid, series[name], name=name))
        if "crossings" in detectors:
            names = series.names
            for i, a in enumerate(names):
                for b in names[i + 1:]:
                    found = analysis.find_crossings(series.grid, series[a], series[b], names=(a, b))
                    out = out.merged(found)
    return out


def cmd_events(args) -> int:
    cfg = build_config(args)
    detectors = [d.strip() for d in args.detector.split(",") if d.strip()]
    unknown = set(detectors) - set(DETECTORS)
    if unknown or not detectors:
        raise UsageError(f"unknown detector(s) {sorted(unknown)}; choose from {DETECTORS}")
    events = collect_events(cfg, detectors)
    doc = {"scenario": cfg.scenario, "ligand_count": cfg.model.ligand_count,
           "coupling": cfg.model.coupling, "detectors": detectors, **events.to_dict()}
    _write(json.dumps(doc, indent=1) + "\n", cfg.output)
    return EXIT_OK


def cmd_verify(args) -> int:
    model = StarModel(args.ligands, args.coupling if args.coupling is not None else 1.0)
    reports = []
    if model.ligand_count == 3:
        reports += closed_form_checks(model, tolerance=args.tolerance, steps=args.steps)
    else:
        print(f"closed-form checks skipped: L=3 only (running with L={model.ligand_count})")
    reports += generic_checks(model)
    if args.deep:
        reports += deep_checks(model)
    width = max(len(r.check) for r in reports)
    print(f"{'check':<{width}}  {'max deviation':>13}  {'tol':>7}  result")
    for r in reports:
        print(f"{r.check:<{width}}  {r.max_deviation:13.3e}  {r.tolerance:7.0e}  "
              f"{'pass' if r.passed else 'FAIL'}")
    failed = [r.check for r in reports if not r.passed]
    if failed:
        print("FAILED: " + ", ".join(failed))
        return EXIT_VERIFY
    print(f"all {len(reports)} checks passed")
    return EXIT_OK


def _add_run_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--scenario", choices=list(DEFAULT_QUANTITIES), default="cops")
    p.add_argument("--ligands", type=int, default=None)
    p.add_argument("--coupling", type=float, default=None)
    p.add_argument("--config", help="key=value file with ligand_count and coupling")
    p.add_argument("--tmax", type=float, default=analysis.DEFAULT_T_MAX)
    p.add_argument("--steps", type=int, default=analysis.DEFAULT_STEPS,
                   help="number of grid points, including both ends")
    p.add_argument("--quantities", help="comma-separated quantity names")
    p.add_argument("--amps", help="comma-separated one-particle amplitudes (central first)")
    p.add_argument("--excited", type=int, help="excited ligand (1..L) for --scenario lops")
    p.add_argument("--output", "-o")
    p.add_argument("--format", choices=["csv", "json"], default="csv")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spinstar", description="Dynamics and entanglement of Heisenberg spin stars.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("evolve", help="write a time series")
    _add_run_args(p)
    p.add_argument("--gnuplot", action="store_true", help="also write <output>.gp")
    p.set_defaults(func=cmd_evolve)

    p = sub.add_parser("events", help="detect W states, peaks, crossings")
    _add_run_args(p)
    p.add_argument("--detector", default="tws", help=f"comma-separated, from {', '.join(DETECTORS)}")
    p.set_defaults(func=cmd_events)

    p = sub.add_parser("verify", help="check numerics against exact results")
    p.add_argument("--ligands", type=int, default=3)
    p.add_argument("--coupling", type=float, default=None)
    p.add_argument("--tolerance", type=float, default=1e-9)
    p.add_argument("--steps", type=int, default=analysis.DEFAULT_STEPS)
    p.add_argument("--deep", action="store_true", help="also run the brute-force oracles")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("quantities", help="list quantity names")
    p.set_defaults(func=lambda args: print("\n".join(analysis.quantity_catalog())) or EXIT_OK)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, ContractError) as exc:
        print(f"spinstar: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"spinstar: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except SpinStarError as exc:
        print(f"spinstar: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
