"""Certify the two-sided estimate for the bundled families over the default radius grid.

Writes one JSON report per family into results/ and prints a pass/fail table.
"""

import argparse
import sys
from pathlib import Path

from ingham.cli import ExperimentConfig, run_verify
from ingham.spectra import load_family, residue_partition

ROOT = Path(__file__).resolve().parent.parent

# (name, family file, residue classes or None)
CASES = [
    ("integers", "integers.json", None),
    ("perturbed", "perturbed.json", None),
    ("perturbed_m2", "perturbed.json", 2),
    ("lattice5x5", "lattice5x5.json", None),
]


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--grid", type=int, default=8)
    ap.add_argument("--out-dir", type=Path, default=ROOT / "results")
    args = ap.parse_args()
    args.out_dir.mkdir(parents=True, exist_ok=True)

    status = 0
    print(f"{'family':<14}{'R':>10}{'L':>12}{'lambda_min':>12}{'lambda_max':>12}{'c2':>12}  ok")
    for name, fname, m in CASES:
        pf = load_family(ROOT / "data" / "families" / fname)
        if m is not None:
            pf = residue_partition(pf.family, m)
        report = run_verify(ExperimentConfig(family=pf, grid_count=args.grid))
        (args.out_dir / f"verify_{name}.json").write_text(report.to_json())
        for rec in report.records:
            if rec["error"]:
                print(f"{name:<14}{rec['R']:>10.4f}  {rec['error']}")
                continue
            ok = rec["cert_lower"] and rec["cert_upper"]
            print(
                f"{name:<14}{rec['R']:>10.4f}{rec['L']:>12.3e}{rec['lambda_min']:>12.3e}"
                f"{rec['lambda_max']:>12.3e}{rec['c2']:>12.3e}  {'yes' if ok else 'NO'}"
            )
        status |= report.exit_code
    return status


if __name__ == "__main__":
    sys.exit(main())
