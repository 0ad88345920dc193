"""Regenerate the headline figures and tables from the library.

Produces, under --out (default results/):
  sweep_hard_wall/    eigenvalue branches vs a/d for alpha0=1e5, alpha1=1e-5
  sweep_robin/        same for the finite pair alpha0=20, alpha1=5
  hard_wall_approach/ ground state vs coupling pair at fixed a/d = 0.8
  wavefunctions/      ground-state grids and <x^2> for alpha1 in {5,10,15,19}

Everything routes through the CLI entry point, so the outputs here are exactly
what a shell user would get; the summary table at the end re-reads the
exported grids through the library API.
"""

import argparse
import os
import sys

import numpy as np

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from robinstrip import (  # noqa: E402
    ParitySector,
    RobinCrossSection,
    WellConfig,
    bound_state_energies,
    read_wavefunction,
    transversal_eigenvalues,
)
from robinstrip.cli import main as cli_main  # noqa: E402

SWEEP_FAMILIES = {
    "sweep_hard_wall": (1e5, 1e-5),
    "sweep_robin": (20.0, 5.0),
}
COUPLING_SETS = ((50.0, 3.0), (70.0, 2.0), (100.0, 1.0), (200.0, 0.5))
PROFILE_ALPHA1 = (5.0, 10.0, 15.0, 19.0)


def run_cli(argv: list[str]) -> None:
    code = cli_main(argv)
    if code != 0:
        raise SystemExit(f"CLI call failed ({code}): {' '.join(argv)}")


def sweep_config(path: str, alpha0: float, alpha1: float, out_dir: str,
                 N: int) -> None:
    ratios = ", ".join(f"{r:.1f}" for r in np.arange(0.1, 2.01, 0.1))
    with open(path, "w") as fh:
        fh.write(
            f"well: {{alpha0: {alpha0}, alpha1: {alpha1}, a: 0.3, d: 1.0}}\n"
            f"matching: {{N: {N}}}\n"
            f"sweep: {{parameter: a, values: [{ratios}]}}\n"
            f"output: {{dir: {out_dir}, formats: [csv, json, svg]}}\n"
        )


def pair_config(path: str, out_dir: str, N: int) -> None:
    pairs = ", ".join(f"[{a0}, {a1}]" for a0, a1 in COUPLING_SETS)
    with open(path, "w") as fh:
        fh.write(
            "well: {alpha0: 1.0e5, alpha1: 1.0e-5, a: 0.8, d: 1.0}\n"
            f"matching: {{N: {N}}}\n"
            f"sweep: {{parameter: alpha_pair, values: [{pairs}]}}\n"
            f"output: {{dir: {out_dir}, formats: [csv, json, svg]}}\n"
        )


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out", default="results", help="output directory")
    parser.add_argument("--N", type=int, default=32, help="truncation order")
    args = parser.parse_args()
    os.makedirs(args.out, exist_ok=True)

    for name, (alpha0, alpha1) in SWEEP_FAMILIES.items():
        out_dir = os.path.join(args.out, name)
        cfg = os.path.join(args.out, f"{name}.yaml")
        sweep_config(cfg, alpha0, alpha1, out_dir, args.N)
        print(f"== {name}: alpha0={alpha0:g}, alpha1={alpha1:g}, a/d in [0.1, 2.0]")
        run_cli(["sweep", "--config", cfg])

    out_dir = os.path.join(args.out, "hard_wall_approach")
    cfg = os.path.join(args.out, "hard_wall_approach.yaml")
    pair_config(cfg, out_dir, args.N)
    print("== hard_wall_approach: coupling pairs toward the hard-wall limit")
    run_cli(["sweep", "--config", cfg])
    reference = bound_state_energies(
        WellConfig(1e5, 1e-5, a=0.8, d=1.0), ParitySector.SYMMETRIC, N=args.N)[0].lam
    print(f"   reference ground state (alpha0=1e5, alpha1=1e-5): {reference:.6f}")

    e1_outer = transversal_eigenvalues(RobinCrossSection(alpha=20.0, d=1.0), 1)[0]
    moments = []
    for alpha1 in PROFILE_ALPHA1:
        well = WellConfig(20.0, alpha1, a=0.3, d=1.0)
        lam = bound_state_energies(well, ParitySector.SYMMETRIC, N=args.N)[0].lam
        # resolve the exponential tail: a few decay lengths 1/k1 past the well
        xmax = well.a + 12.0 / np.sqrt(e1_outer - lam)
        out_dir = os.path.join(args.out, "wavefunctions", f"alpha1_{alpha1:g}")
        print(f"== wavefunction: alpha1={alpha1:g} (xmax={xmax:.0f})")
        run_cli(["wavefunction", "--alpha0", "20", "--alpha1", str(alpha1),
                 "--a", "0.3", "--d", "1", "--N", str(args.N),
                 "--xmax", str(xmax), "--nx", "1281", "--ny", "65",
                 "--out-dir", out_dir])
        x, y, vals, _, _ = read_wavefunction(
            os.path.join(out_dir, "wavefunction_1.txt"))
        density_x = np.trapezoid(vals**2, y, axis=1)
        moments.append(float(np.trapezoid(x**2 * density_x, x)))

    print("\nGround-state spreading toward the critical coupling:")
    print("  alpha1   <x^2>")
    for alpha1, moment in zip(PROFILE_ALPHA1, moments):
        print(f"  {alpha1:6g}   {moment:10.4f}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
