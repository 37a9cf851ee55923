"""Script to tabulate the spectral radius of the NK model over Taylor-rule coefficients."""

import argparse
from pathlib import Path

import numpy as np

from src.cli.output import write_table_csv
from src.model.builders import NK_CALIBRATION
from src.selection.gain import stability_region
from src.utils.config import RESULTS_DIR, ensure_dir
from src.utils.logger import logger


def sweep_policy(psi1_grid: np.ndarray, psi2: float, sign_fix: bool, out_dir: Path) -> np.ndarray:
    """Spectral radius along psi1 at fixed psi2, written to stability.csv."""
    radius = stability_region(psi1_grid, [psi2], sign_fix=sign_fix, base=NK_CALIBRATION)[:, 0]
    table = np.column_stack([psi1_grid, np.full_like(psi1_grid, psi2), radius])
    write_table_csv(ensure_dir(out_dir) / "stability.csv", ["psi1", "psi2", "spectral_radius"], table)

    stable = psi1_grid[radius < 1.0]
    if stable.size:
        logger.info(f"Stable for psi1 in [{stable.min():.3f}, {stable.max():.3f}] at psi2 = {psi2}")
    else:
        logger.info(f"No stable psi1 on the grid at psi2 = {psi2}")
    return radius


def main():
    """Main entry point for the policy sweep."""
    parser = argparse.ArgumentParser(description="Spectral radius of the NK model over psi1")
    parser.add_argument("--psi1-from", type=float, default=0.9)
    parser.add_argument("--psi1-to", type=float, default=1.6)
    parser.add_argument("--step", type=float, default=0.01)
    parser.add_argument("--psi2", type=float, default=1.5)
    parser.add_argument("--sign-fix", action="store_true", help="Flip the signs of tau and kappa")
    parser.add_argument("--out", type=Path, default=RESULTS_DIR)

    args = parser.parse_args()
    grid = np.arange(args.psi1_from, args.psi1_to + 0.5 * args.step, args.step)
    sweep_policy(grid, args.psi2, args.sign_fix, args.out)


if __name__ == "__main__":
    main()
