"""Window counts under two readings of the laser-linewidth dephasing.

    python scripts/linewidth_convention.py

The model adds each laser linewidth in full to the coherences that field
touches. Halving it (treating the quoted value as a FWHM) narrows the optical
lines; this script shows how the window counts of both schemes respond.
"""

from mdsr import FieldConfig, ModelParams, build_scheme, dipole_table, find_windows, sweep_spectrum, symmetric_grid


def main():
    grid = symmetric_grid(60, 2001)
    print(f"{'scheme':8s} {'linewidth':>9s} " + " ".join(f"{o:>5.0f}" for o in (14, 31, 56, 78)))
    for scheme_id in ("D1_Fp2", "D1_Fp1"):
        scheme = build_scheme(scheme_id)
        table = dipole_table(scheme)
        for lw in (1.5, 0.75):
            counts = []
            for omega in (14.0, 31.0, 56.0, 78.0):
                fields = [FieldConfig.coupling(omega, 0.0, lw), FieldConfig.probe(2.0, 0.0, lw)]
                counts.append(find_windows(sweep_spectrum(scheme, table, fields, ModelParams(), grid)).window_count)
            print(f"{scheme_id:8s} {lw:9.2f} " + " ".join(f"{c:5d}" for c in counts))


if __name__ == "__main__":
    main()
