#!/usr/bin/env python3
"""Run every built-in scenario into out/<name>/ and print a one-line summary.

Usage: python scripts/reproduce_all.py [--out-root OUT]
"""

import argparse
import json
from pathlib import Path

from oamsim.cli import BUILTIN_NAMES, run_builtin


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out-root", default="out", help="root directory for scenario outputs")
    args = ap.parse_args()
    root = Path(args.out_root)

    for name in BUILTIN_NAMES:
        out = root / name
        manifest = run_builtin(name, str(out))
        results = manifest["results"]
        if name == "table1":
            summary = "rule == empirical: " + str(results["agree"])
        elif name.startswith("smartphone"):
            summary = (f"regular target purity {results['regular']['target_purity']:.3f}, "
                       f"regular > irregular: "
                       f"{results['comparison']['regular_exceeds_irregular']}")
        else:
            doms = {l: r["dominant_mode"] for l, r in results["modes"].items()}
            summary = f"dominant modes {doms}"
        print(f"{name:16s} -> {out}  ({summary})")


if __name__ == "__main__":
    main()
