#!/usr/bin/env python3
"""Regenerate the bundled experimental reference curves.

The packaged CSVs are single-Lorentzian parameterizations of the measured
photo-absorption cross sections (peak position, width, peak height), not the
raw data tables; the provenance header of each file records the parameters.
Rerunning this script reproduces the shipped files byte for byte.
"""

import os

import numpy as np

HERE = os.path.dirname(os.path.abspath(__file__))
DATA_DIR = os.path.join(HERE, "..", "src", "gdrq", "data")

# (file, label, E0 MeV, Gamma MeV, sigma0 mb, grid lo, grid hi)
CURVES = [
    ("sn120_photoabsorption.csv", "120Sn(gamma,abs)", 15.4, 4.9, 266.0, 8.0, 22.0),
    ("pb208_photoabsorption.csv", "208Pb(gamma,abs)", 13.43, 4.07, 639.0, 7.0, 20.0),
]


def lorentzian(e, e0, gamma, sigma0):
    """GDR Lorentzian; its maximum sits exactly at e0 with height sigma0."""
    return sigma0 * e**2 * gamma**2 / ((e**2 - e0**2) ** 2 + e**2 * gamma**2)


def main() -> None:
    os.makedirs(DATA_DIR, exist_ok=True)
    for name, label, e0, gamma, sigma0, lo, hi in CURVES:
        count = int(round((hi - lo) / 0.1)) + 1
        energies = lo + 0.1 * np.arange(count)
        sigma = lorentzian(energies, e0, gamma, sigma0)
        path = os.path.join(DATA_DIR, name)
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(f"# source: Lorentzian parameterization of measured {label} cross sections\n")
            fh.write(
                f"# parameters: E0 = {e0} MeV, Gamma = {gamma} MeV, sigma0 = {sigma0} mb\n"
            )
            fh.write("# generated by scripts/make_experimental_data.py\n")
            fh.write("energy_mev,sigma_mb\n")
            for e, s in zip(energies, sigma):
                fh.write(f"{e:.9g},{s:.9g}\n")
        print(f"wrote {path} ({count} rows)")


if __name__ == "__main__":
    main()
