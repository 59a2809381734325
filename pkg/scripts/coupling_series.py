"""Coupling-strength series: window counts and peak positions for both schemes.

    python scripts/coupling_series.py [--outdir runs/] [--points 2001]

With ``--outdir`` each spectrum is also written as CSV + summary JSON via the CLI path.
"""

import argparse
from pathlib import Path

from mdsr.cli import compute, run
from mdsr.config import GridSpec, parse_config
from mdsr.spectra import find_extrema

PRESETS = ("fig3b1", "fig3b2", "fig3b3", "fig3b4")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--outdir", type=Path)
    ap.add_argument("--points", type=int, default=2001)
    args = ap.parse_args()

    print(f"{'scheme':8s} {'Omega_c22':>9s} {'windows':>7s}  peaks (MHz)")
    for scheme in ("D1_Fp2", "D1_Fp1"):
        for preset in PRESETS:
            overrides = {"run.preset": preset, "run.scheme": scheme, "probe.grid": GridSpec(-60, 60, args.points)}
            if args.outdir:
                overrides["output.path"] = str(args.outdir / f"{preset}_{scheme}.csv")
            cfg = parse_config("", overrides)
            spectrum, report = compute(cfg)
            peaks = " ".join(f"{x:+.2f}" for x, _ in report.absorption_peaks)
            print(f"{scheme:8s} {cfg.coupling.rabi_scale:9.0f} {report.window_count:7d}  {peaks}")
            if scheme == "D1_Fp2":
                # transmission maxima coincide with the absorption minima
                tmax = [x for x, _ in find_extrema(spectrum.grid, spectrum.transmission)[0]]
                print(f"{'':8s} {'':9s} {'':7s}  transmission maxima {' '.join(f'{x:+.2f}' for x in tmax)}")
            if args.outdir:
                run(cfg)


if __name__ == "__main__":
    main()
