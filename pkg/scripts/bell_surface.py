"""Bell-CHSH correlator over the (eta, sigma) plane at the published amplitudes.

Writes a CSV with columns eta,sigma,value,violated for external plotting.
"""
import argparse
from pathlib import Path

from ecbell import presets
from ecbell.cli import scan_csv
from ecbell.optimize import ScanSpec, scan


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", type=Path, default=Path("results/bell_surface.csv"))
    ap.add_argument("--lo", type=float, default=presets.BELL_SCAN["eta"][0])
    ap.add_argument("--hi", type=float, default=presets.BELL_SCAN["eta"][1])
    ap.add_argument("--n", type=int, default=presets.BELL_SCAN["eta"][2])
    args = ap.parse_args()

    r = scan(ScanSpec((args.lo, args.hi, args.n), (args.lo, args.hi, args.n), presets.BELL_AMPLITUDES), "bell")
    args.out.parent.mkdir(parents=True, exist_ok=True)
    args.out.write_text(scan_csv(r))
    print(f"max {r.max:.6f} at eta={r.argmax[0]:g}, sigma={r.argmax[1]:g}")
    print(f"{int(r.violated.sum())} of {r.values.size} cells exceed 2")
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
