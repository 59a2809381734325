"""Command-line driver: run a configured sweep and write spectrum + summary files.

Exit codes: 0 success, 1 configuration error, 2 solver error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from pathlib import Path
from typing import Dict, List, Optional, Sequence

import numpy as np

from .config import (
    PRESETS,
    ConfigError,
    RunConfig,
    config_sections,
    format_config,
    parse_config,
    parse_grid,
)
from .levels import build_scheme, dipole_table
from .liouville import FieldConfig, SolverError
from .spectra import SusceptibilitySpectrum, WindowReport, find_windows, sweep_spectrum

log = logging.getLogger("mdsr")

EXIT_OK, EXIT_CONFIG, EXIT_SOLVER, EXIT_IO = 0, 1, 2, 3

COLUMNS = [
    "delta_p_mhz",
    "re_chi1",
    "im_chi1",
    "re_chi2",
    "im_chi2",
    "re_chi3",
    "im_chi3",
    "re_chi",
    "im_chi",
    "transmission",
    "group_index",
]


def fmt(x: float) -> str:
    """Fixed 9-significant-digit formatting used for every number written."""
    s = f"{float(x):.9g}"
    return "0" if s == "-0" else s


def compute(config: RunConfig):
    """Run the sweep described by ``config``; returns (spectrum, window report)."""
    scheme = build_scheme(config.scheme_id, config.bias_field_G)
    dipoles = dipole_table(scheme)
    fields = [
        FieldConfig.coupling(config.coupling.rabi_scale, config.coupling.detuning, config.coupling.linewidth),
        FieldConfig.probe(config.probe.rabi_scale, 0.0, config.probe.linewidth),
    ]
    spectrum = sweep_spectrum(scheme, dipoles, fields, config.params, config.probe.grid.values())
    return spectrum, find_windows(spectrum)


def spectrum_columns(spectrum: SusceptibilitySpectrum) -> Dict[str, np.ndarray]:
    s = spectrum
    return {
        "delta_p_mhz": s.grid,
        "re_chi1": s.chi1.real,
        "im_chi1": s.chi1.imag,
        "re_chi2": s.chi2.real,
        "im_chi2": s.chi2.imag,
        "re_chi3": s.chi3.real,
        "im_chi3": s.chi3.imag,
        "re_chi": s.chi_total.real,
        "im_chi": s.chi_total.imag,
        "transmission": s.transmission,
        "group_index": s.group_index,
    }


def to_csv(spectrum: SusceptibilitySpectrum) -> str:
    cols = spectrum_columns(spectrum)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(COLUMNS)
    for k in range(len(spectrum.grid)):
        writer.writerow([fmt(cols[c][k]) for c in COLUMNS])
    return buf.getvalue()


def _meta(config: RunConfig) -> Dict[str, object]:
    return config_sections(config)


def to_json(spectrum: SusceptibilitySpectrum, config: RunConfig) -> str:
    cols = spectrum_columns(spectrum)
    doc = {c: [float(fmt(v)) for v in cols[c]] for c in COLUMNS}
    doc["meta"] = _meta(config)
    return json.dumps(doc, indent=1, sort_keys=False) + "\n"


def summary(report: WindowReport, config: RunConfig) -> Dict[str, object]:
    return {
        "window_count": report.window_count,
        "absorption_peaks_mhz": [float(fmt(x)) for x, _ in report.absorption_peaks],
        "absorption_peak_heights": [float(fmt(y)) for _, y in report.absorption_peaks],
        "transparency_minima_mhz": [float(fmt(x)) for x, _ in report.transparency_minima],
        "transparency_minimum_depths": [float(fmt(y)) for _, y in report.transparency_minima],
        "parameters": _meta(config),
    }


def summary_path(out: Path) -> Path:
    return out.with_name(out.stem + ".summary.json")


def run(config: RunConfig) -> int:
    """Execute the sweep and write output files; returns the process exit code."""
    try:
        spectrum, report = compute(config)
    except SolverError as exc:
        log.error("solver failure: %s", exc)
        return EXIT_SOLVER

    out = Path(config.output.path)
    body = to_csv(spectrum) if config.output.format == "csv" else to_json(spectrum, config)
    info = summary(report, config)
    try:
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(body, encoding="utf-8")
        summary_path(out).write_text(json.dumps(info, indent=1) + "\n", encoding="utf-8")
    except OSError as exc:
        log.error("cannot write output: %s", exc)
        return EXIT_IO

    peaks = ", ".join(fmt(x) for x, _ in report.absorption_peaks)
    print(f"{out}: window_count={report.window_count} peaks=[{peaks}] MHz")
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    # usage errors are configuration errors (exit 1), not argparse's exit 2
    def error(self, message):
        self.print_usage(sys.stderr)
        raise ConfigError(message)


def _join_grid(argv: Sequence[str]) -> List[str]:
    """Glue ``--grid -60:60:2001`` so argparse does not read the value as a flag."""
    out: List[str] = []
    it = iter(argv)
    for a in it:
        if a == "--grid":
            out.append(f"--grid={next(it, '')}")
        else:
            out.append(a)
    return out


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(
        prog="mdsr",
        description="Multi-dark-state resonance spectra of the 87Rb D1 Zeeman system.",
        epilog="Precedence: defaults < preset < config file keys < command-line flags.",
    )
    p.add_argument("--config", type=Path, help="INI-style run configuration")
    p.add_argument("--preset", choices=sorted(PRESETS), help="named parameter preset")
    p.add_argument("--out", help="output spectrum path")
    p.add_argument("--format", choices=("csv", "json"))
    p.add_argument("--grid", help="probe detuning grid start:stop:points (MHz)")
    p.add_argument("--population-model", choices=("fixed", "full"))
    p.add_argument("--scheme", choices=("D1_Fp1", "D1_Fp2"))
    p.add_argument("--coupling-rabi", type=float, help="coupling Rabi scale (MHz)")
    p.add_argument("--print-config", action="store_true", help="print resolved config and exit")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def load_config(args: argparse.Namespace) -> RunConfig:
    text = ""
    if args.config is not None:
        try:
            text = args.config.read_text(encoding="utf-8")
        except OSError as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}") from None
    overrides: Dict[str, object] = {}
    if args.preset:
        overrides["run.preset"] = args.preset
    if args.out:
        overrides["output.path"] = args.out
    if args.format:
        overrides["output.format"] = args.format
    if args.grid is not None:
        try:
            overrides["probe.grid"] = parse_grid(args.grid)
        except ValueError as exc:
            raise ConfigError(f"--grid: {exc}") from None
    if args.population_model:
        overrides["model.population_model"] = args.population_model
    if args.scheme:
        overrides["run.scheme"] = args.scheme
    if args.coupling_rabi is not None:
        overrides["coupling.rabi_scale"] = args.coupling_rabi
    return parse_config(text, overrides)


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        args = build_parser().parse_args(_join_grid(argv))
    except ConfigError as exc:
        log.error("usage error: %s", exc)
        return EXIT_CONFIG
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        config = load_config(args)
    except ConfigError as exc:
        log.error("config error: %s", exc)
        return EXIT_CONFIG
    if args.print_config:
        sys.stdout.write(format_config(config))
        return EXIT_OK
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
