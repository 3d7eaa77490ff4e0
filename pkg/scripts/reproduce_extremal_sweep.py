#!/usr/bin/env -S uv run
"""
Minimal and maximal ASE of every subspace dimension, for single qudits d_B = 3 .. 16.

Long-running: each (d_B, d_S) pair runs BFGS from many random starts. Writes one CSV per
host dimension (d_S,min_ase,max_ase,intrinsic_small,intrinsic_big) and prints the rows
where the minimal ASE decreases with growing d_S.

Usage:
    scripts/reproduce_extremal_sweep.py --out sweeps/ --restarts 100
    scripts/reproduce_extremal_sweep.py --out sweeps/ --dims 3-6 --restarts 10
"""

from __future__ import annotations

import sys
from pathlib import Path

import typer

# Add src to path
sys.path.insert(0, str(Path(__file__).parent.parent))

from src.cli.logger import CLILogger
from src.domain.spaces import HilbertSpec
from src.services.optimize import OptimizerConfig, extremal_sweep, sweep_csv


def _dims(text: str) -> list[int]:
    low, _, high = text.partition('-')
    return list(range(int(low), int(high or low) + 1))


def main(
    out: Path = typer.Option(Path('sweeps'), '--out', help='Output directory'),
    dims: str = typer.Option('3-16', '--dims', help="Host dimensions, e.g. '3-16' or '8'"),
    restarts: int = typer.Option(100, '--restarts'),
    seed: int = typer.Option(0, '--seed'),
    threads: int | None = typer.Option(None, '--threads'),
    verbose: bool = typer.Option(False, '--verbose', '-v'),
) -> None:
    out.mkdir(parents=True, exist_ok=True)
    log = CLILogger(verbose)
    config = OptimizerConfig(restarts=restarts, seed=seed)

    for big_dim in _dims(dims):
        big = HilbertSpec.from_dimension(big_dim)
        rows = extremal_sweep(big, range(1, big_dim + 1), config, threads=threads, log=log)
        target = out / f'extremal_d{big_dim}.csv'
        target.write_text(sweep_csv(rows))
        typer.secho(f'Wrote {target}', fg=typer.colors.GREEN, err=True)

        for previous, row in zip(rows, rows[1:], strict=False):
            if row.min_ase < previous.min_ase - 1e-6:
                typer.echo(f'd_B={big_dim}: min ASE drops {previous.min_ase:.6f} -> {row.min_ase:.6f} at d_S={row.d_S}')


if __name__ == '__main__':
    typer.run(main)
