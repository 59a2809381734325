"""Compare the full steady-state solve with the linear-response sweep.

    python scripts/oracle_check.py [--probe 0.1] [--points 201]

Reports max |chi_full - chi_lr| / max |chi_lr| for each coupling strength, for
both population models (full pumping is expected to differ: its ground
populations are set by optical pumping, not held equal in F=1).
"""

import argparse
import time

import numpy as np

from mdsr import FieldConfig, ModelParams, build_scheme, dipole_table, sweep_spectrum, symmetric_grid
from mdsr.liouville import full_coherences
from mdsr.spectra import channel_susceptibility


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--probe", type=float, default=0.1)
    ap.add_argument("--points", type=int, default=201)
    args = ap.parse_args()

    scheme = build_scheme("D1_Fp2")
    table = dipole_table(scheme)
    grid = symmetric_grid(60, args.points)
    lr_params = ModelParams()
    print(f"{'Omega_c22':>9s} {'model':>6s} {'rel diff':>9s} {'time':>6s}")
    for omega in (14.0, 31.0, 56.0, 78.0):
        fields = [FieldConfig.coupling(omega, 0.0, 1.5), FieldConfig.probe(args.probe, 0.0, 1.5)]
        lr = sweep_spectrum(scheme, table, fields, lr_params, grid).chi_total
        for model in ("fixed", "full"):
            params = ModelParams(population_model=model)
            t0 = time.perf_counter()
            coh = full_coherences(scheme, table, fields, params, grid)
            full = sum(channel_susceptibility(g, coh, scheme, table, fields[1], params) for g in (1, 2, 3))
            rel = np.max(np.abs(full - lr)) / np.max(np.abs(lr))
            print(f"{omega:9.0f} {model:>6s} {100 * rel:8.2f}% {time.perf_counter() - t0:5.2f}s")


if __name__ == "__main__":
    main()
