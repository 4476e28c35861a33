#!/usr/bin/env python3
"""Sweep the UCA radius and show how grating aliases dilute the OAM flux ratio.

With N elements fed for mode l, the radiated field contains azimuthal orders
l + m*N. The lowest alias (|l - N|) only radiates once k*a approaches its
order, so small rings give a per-photon angular momentum of exactly l while
a ~ lambda rings leak percent-level power into the alias, whose large moment
arm drags the ratio far from l. This is why the default momentum scenario
uses a = lambda/2.

Usage: python scripts/alias_dilution_study.py [--mode L] [--count N]
"""

import argparse

from oamsim import FarSphereSpec, FiniteDipole, UcaSpec, Wave, build_uca, oam_flux_ratio


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--mode", type=int, default=1)
    ap.add_argument("--count", type=int, default=8)
    ap.add_argument("--frequency", type=float, default=10e9)
    args = ap.parse_args()

    wave = Wave(frequency=args.frequency)
    lam = wave.wavelength
    model = FiniteDipole(half_length=lam / 100)
    sphere = FarSphereSpec(radius=100 * lam, n_theta=96, n_phi=192)

    print(f"N = {args.count}, mode = {args.mode}, axial dipoles h = lam/100")
    print(f"{'a/lam':>8s} {'k*a':>8s} {'ratio':>12s}")
    for a_wl in (0.25, 0.375, 0.5, 0.625, 0.75, 0.875, 1.0, 1.25):
        layout = build_uca(UcaSpec(count=args.count, radius=a_wl * lam, mode=args.mode))
        ratio = oam_flux_ratio(layout, model, wave, sphere)
        print(f"{a_wl:8.3f} {2 * 3.141592653589793 * a_wl:8.3f} {ratio:12.6f}")


if __name__ == "__main__":
    main()
