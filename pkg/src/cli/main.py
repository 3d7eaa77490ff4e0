#!/usr/bin/env python3
"""
Command-line interface for subspace-magic.

Every command prints (or writes with --output) one JSON record holding the parameters
together with the results; list-valued results can also be written as CSV.
Exit codes: 0 success, 1 domain/validation errors, 2 I/O errors.
"""

from __future__ import annotations

import contextlib
import enum
import logging
import math
import traceback
from collections.abc import Iterator, Sequence
from fractions import Fraction
from typing import Any

import numpy as np
import pydantic
import typer

from src.cli.loaders import load_embedding, load_isotropic, load_projector, load_state
from src.cli.logger import CLILogger
from src.config import settings
from src.domain.codes import IsotropicSet, PhaseMap
from src.domain.operators import IntArray, SubspaceProjector
from src.domain.spaces import Flavor, HilbertSpec
from src.domain.states import PureState, SpinState, two_j_of
from src.exceptions import DomainError, InputFileError, PreconditionError, SubspaceMagicError
from src.schemas.operations.results import (
    AseReport,
    ComplementReport,
    EntropyReport,
    ExtremizationReport,
    GapCurvePoint,
    IndexSet,
    MajoranaReport,
    PolyhedronReport,
    ScalarResult,
    SpaceInfo,
    SymQubitRow,
)
from src.schemas.base import StrictModel, csv_text
from src.schemas.types import matrix_to_rows
from src.services import averages, codes, encodings, estimate, magic, optimize
from src.services.sampling import haar_state
from src.storage.local import backend_for, encode_json

app = typer.Typer(
    name='subspace-magic',
    help='Stabilizer entropies and average magic gaps of subspaces',
    add_completion=False,
)
se_app = typer.Typer(help='Stabilizer entropies of single states')
ase_app = typer.Typer(help='Intrinsic and extrinsic average stabilizer entropies')
code_app = typer.Typer(help='Stabilizer codespaces from isotropic sets')
optimize_app = typer.Typer(help='Extremize the ASE over subspaces')
mc_app = typer.Typer(help='Monte Carlo estimates')
complement_app = typer.Typer(help='Support on the orthogonal complement')
examples_app = typer.Typer(help='Worked examples')
gap_app = typer.Typer(help='ASE gaps (shortcuts to the code commands)')
app.add_typer(se_app, name='se')
app.add_typer(ase_app, name='ase')
app.add_typer(code_app, name='code')
app.add_typer(optimize_app, name='optimize')
app.add_typer(mc_app, name='mc')
app.add_typer(complement_app, name='complement')
app.add_typer(examples_app, name='examples')
app.add_typer(gap_app, name='gap')


class OutputFormat(enum.StrEnum):
    JSON = 'json'
    CSV = 'csv'


# ==============================================================================
# Shared helpers
# ==============================================================================


@contextlib.contextmanager
def _handle_errors(verbose: bool) -> Iterator[None]:
    """Map library errors to exit codes: I/O -> 2, domain and validation -> 1."""
    logging.basicConfig(level=logging.INFO if verbose else settings.LOG_LEVEL)
    try:
        yield
    except (InputFileError, OSError) as e:
        typer.secho(f'Error: {e}', fg=typer.colors.RED, err=True)
        raise typer.Exit(2) from e
    except (SubspaceMagicError, pydantic.ValidationError) as e:
        typer.secho(f'Error: {e}', fg=typer.colors.RED, err=True)
        raise typer.Exit(1) from e
    except Exception as e:
        typer.secho(f'Error: Unexpected {type(e).__name__}: {e}', fg=typer.colors.RED, err=True)
        if verbose:
            typer.echo(traceback.format_exc(), err=True)
        raise typer.Exit(1) from e


def _emit(payload: StrictModel | Sequence[StrictModel], output: str, fmt: OutputFormat = OutputFormat.JSON) -> None:
    data: Any = payload.record() if isinstance(payload, StrictModel) else [item.record() for item in payload]
    if fmt is OutputFormat.CSV:
        rows = data if isinstance(data, list) else [data]
        try:
            encoded = csv_text(rows).encode()
        except ValueError as e:
            raise DomainError(f'{e}; use --format json') from e
    else:
        encoded = encode_json(data)
    backend, name = backend_for(output)
    location = backend.save(name, encoded)
    if location != '-':
        typer.secho(f'Wrote {location}', fg=typer.colors.GREEN, err=True)


def _space(spec: HilbertSpec) -> SpaceInfo:
    return SpaceInfo(d=spec.d, n=spec.n, flavor=spec.flavor.value, dim=spec.dim)


def _spec(d: int, n: int, flavor: str | None) -> HilbertSpec:
    return HilbertSpec.natural(d, n) if flavor is None else HilbertSpec(d, n, flavor)


def _subspace(projector: str | None, embedding: str | None) -> SubspaceProjector:
    if (projector is None) == (embedding is None):
        raise PreconditionError('Pass exactly one of --projector or --embedding')
    if projector is not None:
        return load_projector(projector)
    assert embedding is not None
    return load_embedding(embedding).projector()


def _parse_ints(text: str) -> list[int]:
    """'1,2,4' or '1-6'."""
    if '-' in text and ',' not in text:
        low, high = (int(part) for part in text.split('-', 1))
        return list(range(low, high + 1))
    return [int(part) for part in text.split(',') if part]


def _named_state(name: str, spec: HilbertSpec, seed: int) -> PureState:
    if name == 'zero':
        return PureState.basis(spec.dim)
    if name == 'plus':
        return PureState.normalized(np.ones(spec.dim))
    if name == 't':
        single = np.zeros(spec.d, dtype=np.complex128)
        single[0], single[1] = 1.0, np.exp(1j * np.pi / 4)
        state = PureState.normalized(single)
        for _ in range(spec.n - 1):
            state = state.tensor(PureState.normalized(single))
        return state
    if name == 'sic':
        if spec.dim != 2:
            raise DomainError('The sic state is the qubit SIC fiducial; use d=2, n=1')
        theta = math.acos(math.sqrt((1 + 1 / math.sqrt(3)) / 2))
        return PureState([math.cos(theta), np.exp(1j * np.pi / 4) * math.sin(theta)])
    if name == 'haar':
        return haar_state(spec.dim, np.random.default_rng(seed))
    if name.startswith('file:'):
        return load_state(name.removeprefix('file:'), spec)
    raise DomainError(f'Unknown state {name!r}; expected t, zero, plus, sic, haar or file:PATH')


# Common options
_OUTPUT = typer.Option('-', '--output', '-o', help="Output path, or '-' for stdout")
_FORMAT = typer.Option(OutputFormat.JSON, '--format', help='json or csv')
_VERBOSE = typer.Option(False, '--verbose', '-v', help='Verbose output')
_SEED = typer.Option(None, '--seed', help='Random seed (default from settings)')
_THREADS = typer.Option(None, '--threads', help='Worker threads (default: physical cores)')
_FLAVOR = typer.Option(None, '--flavor', help='odd, even or multiqubit (default from d and n)')
_SMALL_FLAVOR = typer.Option(None, '--small-flavor', help='Flavor of the logical space')


# ==============================================================================
# se
# ==============================================================================


@se_app.command('state')
def se_state(
    d: int = typer.Option(2, '--d', help='Local dimension'),
    n: int = typer.Option(1, '--n', help='Number of qudits'),
    state: str = typer.Option('t', '--state', help='t, zero, plus, sic, haar or file:PATH'),
    alpha: float = typer.Option(2.0, '--alpha', help='Renyi index'),
    flavor: str | None = _FLAVOR,
    seed: int | None = _SEED,
    output: str = _OUTPUT,
    verbose: bool = _VERBOSE,
) -> None:
    """Linear and Renyi stabilizer entropies of one pure state."""
    with _handle_errors(verbose):
        spec = _spec(d, n, flavor)
        psi = _named_state(state, spec, settings.DEFAULT_SEED if seed is None else seed)
        linear = magic.linear_se(spec, psi)
        report = EntropyReport(
            space=_space(spec),
            state=state,
            M=linear,
            alpha=alpha,
            renyi=magic.renyi_se(spec, psi, alpha),
            st_norm=magic.st_norm(spec, psi),
            robustness_lower_bound=magic.robustness_bounds(spec, psi).best,
            upper_bound=magic.se_upper_bound(spec, alpha),
        )
        _emit(report, output)


# ==============================================================================
# ase
# ==============================================================================


@ase_app.command('intrinsic')
def ase_intrinsic(
    dim: int = typer.Option(..., '--dim', help='Dimension of the space'),
    flavor: str | None = _FLAVOR,
    output: str = _OUTPUT,
    verbose: bool = _VERBOSE,
) -> None:
    """Closed-form intrinsic ASE."""
    with _handle_errors(verbose):
        resolved = flavor or Flavor.default_for(dim).value
        value = averages.intrinsic_ase_exact(dim, resolved if dim > 1 else None)
        _emit(
            ScalarResult(name='intrinsic_ase', value=float(value), fraction=str(value), parameters={'dim': dim, 'flavor': resolved}),
            output,
        )


def _ase_report(
    projector: SubspaceProjector, method: str, small_flavor: str | None, threads: int | None
) -> AseReport:
    extrinsic = averages.extrinsic_ase(projector, method, threads)
    intrinsic: Fraction | None = None
    if small_flavor is not None or projector.rank == 1:
        intrinsic = averages.intrinsic_ase_exact(projector.rank, small_flavor if projector.rank > 1 else None)
    return AseReport(
        space=_space(projector.big),
        small_dim=projector.rank,
        small_flavor=small_flavor,
        method=method,
        extrinsic=extrinsic,
        intrinsic=None if intrinsic is None else float(intrinsic),
        intrinsic_fraction=None if intrinsic is None else str(intrinsic),
        gap=None if intrinsic is None else extrinsic - float(intrinsic),
    )


@ase_app.command('extrinsic')
def ase_extrinsic(
    projector: str | None = typer.Option(None, '--projector', help='Projector JSON file'),
    embedding: str | None = typer.Option(None, '--embedding', help='Embedding JSON file'),
    method: str = typer.Option('auto', '--method', help='auto, characteristic or compressed'),
    small_flavor: str | None = _SMALL_FLAVOR,
    threads: int | None = _THREADS,
    output: str = _OUTPUT,
    verbose: bool = _VERBOSE,
) -> None:
    """Exact extrinsic ASE of a subspace (and the gap when --small-flavor is given)."""
    with _handle_errors(verbose):
        _emit(_ase_report(_subspace(projector, embedding), method, small_flavor, threads), output)


@ase_app.command('gap')
def ase_gap(
    projector: str | None = typer.Option(None, '--projector', help='Projector JSON file'),
    embedding: str | None = typer.Option(None, '--embedding', help='Embedding JSON file'),
    small_flavor: str | None = _SMALL_FLAVOR,
    method: str = typer.Option('auto', '--method', help='auto, characteristic or compressed'),
    threads: int | None = _THREADS,
    output: str = _OUTPUT,
    verbose: bool = _VERBOSE,
) -> None:
    """ASE gap: extrinsic minus intrinsic (flavor defaults from d_S)."""
    with _handle_errors(verbose):
        subspace = _subspace(projector, embedding)
        resolved = small_flavor or Flavor.default_for(subspace.rank).value
        _emit(_ase_report(subspace, method, resolved, threads), output)


@ase_app.command('random-curve')
def ase_random_curve(
    d: int = typer.Option(..., '--d'),
    n: int = typer.Option(1, '--n'),
    flavor: str | None = _FLAVOR,
    fmt: OutputFormat = _FORMAT,
    output: str = _OUTPUT,
    verbose: bool = _VERBOSE,
) -> None:
    """Expected gap of a Haar-random d_S-dimensional subspace, d_S = 1 .. d^n."""
    with _handle_errors(verbose):
        big = _spec(d, n, flavor)
        rows = [
            GapCurvePoint(
                small_dim=small_dim,
                small_flavor=None if small_dim == 1 else Flavor.default_for(small_dim).value,
                expected_gap=float(gap),
                fraction=str(gap),
            )
            for small_dim, gap in averages.random_subspace_gap_curve(big)
        ]
        _emit(rows, output, fmt)


@ase_app.command('oracle')
def ase_oracle(
    projector: str = typer.Option(..., '--projector', help='Projector JSON file'),
    output: str = _OUTPUT,
    verbose: bool = _VERBOSE,
) -> None:
    """Extrinsic ASE by dense contraction (d_B <= DENSE_ORACLE_MAX_DIM)."""
    with _handle_errors(verbose):
        loaded = load_projector(projector)
        value = averages.dense_average_oracle(loaded)
        _emit(ScalarResult(name='dense_oracle', value=value, parameters={'dim': loaded.big.dim, 'rank': loaded.rank}), output)


# ==============================================================================
# code
# ==============================================================================


def _code_source(builtin: str | None, file: str | None, gauge: str | None) -> tuple[str, IsotropicSet, PhaseMap]:
    chosen = [value for value in (builtin, file, gauge) if value is not None]
    if len(chosen) != 1:
        raise PreconditionError('Pass exactly one of --builtin, --file or --gauge')
    if builtin is not None:
        catalog = codes.builtin_codes()
        if builtin not in catalog:
            raise DomainError(f'Unknown builtin code {builtin!r}; expected one of {sorted(catalog)}')
        code = catalog[builtin]
        return code.name, code.isotropic, code.phases
    if file is not None:
        isotropic, phases = load_isotropic(file)
        return file, isotropic, phases
    assert gauge is not None
    parts = _parse_ints(gauge.replace('-', ','))
    if len(parts) != 2:
        raise PreconditionError(f"--gauge expects 'd,n', got {gauge!r}")
    d, n = parts
    isotropic = codes.zd_gauge_set(d, n)
    return f'gauge {d},{n}', isotropic, PhaseMap.trivial(isotropic)


@code_app.command('analyze')
def code_analyze(
    builtin: str | None = typer.Option(None, '--builtin', help='422 or 412'),
    file: str | None = typer.Option(None, '--file', help='Isotropic-set JSON file'),
    gauge: str | None = typer.Option(None, '--gauge', help="Z_d gauge set 'd,n'"),
    small_flavor: str | None = _SMALL_FLAVOR,
    exact: bool = typer.Option(True, '--exact/--no-exact', help='Also compute the extrinsic ASE exactly'),
    threads: int | None = _THREADS,
    output: str = _OUTPUT,
    verbose: bool = _VERBOSE,
) -> None:
    """Classify, enumerate A_S and compare the closed-form gap with the exact one."""
    with _handle_errors(verbose):
        name, isotropic, phases = _code_source(builtin, file, gauge)
        _emit(codes.code_report(name, isotropic, phases, small_flavor, exact, threads), output)


gap_app.command('code', help='Same as `code analyze`.')(code_analyze)


def _index_set(name: str, isotropic: IsotropicSet, indices: IntArray) -> IndexSet:
    return IndexSet(name=name, space=_space(isotropic.spec), size=int(indices.shape[0]), indices=indices.tolist())


@code_app.command('perp')
def code_perp(
    builtin: str | None = typer.Option(None, '--builtin'),
    file: str | None = typer.Option(None, '--file'),
    gauge: str | None = typer.Option(None, '--gauge'),
    output: str = _OUTPUT,
    verbose: bool = _VERBOSE,
) -> None:
    """List S^perp."""
    with _handle_errors(verbose):
        name, isotropic, _ = _code_source(builtin, file, gauge)
        _emit(_index_set(f'{name} perp', isotropic, codes.perp(isotropic)), output)


@code_app.command('a-set')
def code_a_set(
    builtin: str | None = typer.Option(None, '--builtin'),
    file: str | None = typer.Option(None, '--file'),
    gauge: str | None = typer.Option(None, '--gauge'),
    output: str = _OUTPUT,
    verbose: bool = _VERBOSE,
) -> None:
    """List A_S = {a in S^perp : 2a in S}."""
    with _handle_errors(verbose):
        name, isotropic, _ = _code_source(builtin, file, gauge)
        _emit(_index_set(f'{name} A_S', isotropic, codes.a_set(isotropic)), output)


# ==============================================================================
# optimize
# ==============================================================================


def _optimizer_config(restarts: int, objective: str, samples: int | None, seed: int | None, direction: str) -> optimize.OptimizerConfig:
    return optimize.OptimizerConfig(
        restarts=restarts, objective=objective, mc_samples=samples, seed=seed, direction=direction
    )


@optimize_app.command('extremize')
def optimize_extremize(
    d: int = typer.Option(..., '--d'),
    n: int = typer.Option(1, '--n'),
    small_dim: int = typer.Option(..., '--small-dim'),
    flavor: str | None = _FLAVOR,
    small_flavor: str | None = _SMALL_FLAVOR,
    direction: str = typer.Option('minimize', '--direction', help='minimize or maximize'),
    restarts: int = typer.Option(8, '--restarts'),
    objective: str = typer.Option('auto', '--objective', help='auto, exact or monte_carlo'),
    samples: int | None = typer.Option(None, '--samples', help='Samples for the Monte Carlo objective'),
    seed: int | None = _SEED,
    threads: int | None = _THREADS,
    output: str = _OUTPUT,
    verbose: bool = _VERBOSE,
) -> None:
    """Best subspace ASE over restarts."""
    with _handle_errors(verbose):
        big = _spec(d, n, flavor)
        config = _optimizer_config(restarts, objective, samples, seed, direction)
        result = optimize.extremize_ase(big, small_dim, config, threads, CLILogger(verbose))
        resolved_small = small_flavor or (Flavor.default_for(small_dim).value if small_dim > 1 else None)
        report = ExtremizationReport(
            space=_space(big),
            small_dim=small_dim,
            direction=result.direction.value,
            objective=result.objective.value,
            value=result.value,
            exact_value=result.exact_value,
            intrinsic_small=averages.intrinsic_ase(small_dim, resolved_small),
            restart_values=list(result.restart_values),
            seed=result.seed,
            columns=matrix_to_rows(result.embedding.columns),
        )
        _emit(report, output)


@optimize_app.command('sweep')
def optimize_sweep(
    d: int = typer.Option(..., '--d'),
    n: int = typer.Option(1, '--n'),
    small_dims: str | None = typer.Option(None, '--small-dims', help="'1-7' or '2,4' (default 1 .. d^n)"),
    flavor: str | None = _FLAVOR,
    restarts: int = typer.Option(8, '--restarts'),
    objective: str = typer.Option('auto', '--objective'),
    samples: int | None = typer.Option(None, '--samples'),
    seed: int | None = _SEED,
    threads: int | None = _THREADS,
    fmt: OutputFormat = typer.Option(OutputFormat.CSV, '--format', help='json or csv'),
    output: str = _OUTPUT,
    verbose: bool = _VERBOSE,
) -> None:
    """Minimum and maximum ASE per subspace dimension (CSV by default)."""
    with _handle_errors(verbose):
        big = _spec(d, n, flavor)
        dims = _parse_ints(small_dims) if small_dims else list(range(1, big.dim + 1))
        config = _optimizer_config(restarts, objective, samples, seed, 'minimize')
        rows = optimize.extremal_sweep(big, dims, config, threads=threads, log=CLILogger(verbose))
        _emit(rows, output, fmt)


# ==============================================================================
# mc
# ==============================================================================


@mc_app.command('ase')
def mc_ase(
    projector: str | None = typer.Option(None, '--projector'),
    embedding: str | None = typer.Option(None, '--embedding'),
    samples: int = typer.Option(1000, '--samples'),
    seed: int | None = _SEED,
    threads: int | None = _THREADS,
    output: str = _OUTPUT,
    verbose: bool = _VERBOSE,
) -> None:
    """Monte Carlo extrinsic ASE with its standard error."""
    with _handle_errors(verbose):
        _emit(estimate.mc_ase(_subspace(projector, embedding), samples, seed, threads), output)


@mc_app.command('preset')
def mc_preset(
    projector: str | None = typer.Option(None, '--projector'),
    embedding: str | None = typer.Option(None, '--embedding'),
    runs: int | None = typer.Option(None, '--runs', help='Default PRESET_RUNS'),
    samples: int | None = typer.Option(None, '--samples', help='Default PRESET_SAMPLES'),
    seed: int | None = _SEED,
    threads: int | None = _THREADS,
    output: str = _OUTPUT,
    verbose: bool = _VERBOSE,
) -> None:
    """Average of independent Monte Carlo runs (20 x 1000 by default)."""
    with _handle_errors(verbose):
        subspace = _subspace(projector, embedding)
        _emit(estimate.mc_ase_preset(subspace, seed, runs, samples, threads, CLILogger(verbose)), output)


@mc_app.command('convergence')
def mc_convergence(
    projector: str = typer.Option(..., '--projector'),
    grid: str = typer.Option('100,200,400,800,1600', '--grid', help='Comma-separated sample counts'),
    repetitions: int = typer.Option(10, '--repetitions'),
    seed: int | None = _SEED,
    threads: int | None = _THREADS,
    fmt: OutputFormat = _FORMAT,
    output: str = _OUTPUT,
    verbose: bool = _VERBOSE,
) -> None:
    """Squared error against the exact ASE as the sample count grows."""
    with _handle_errors(verbose):
        points = estimate.mc_convergence_curve(load_projector(projector), _parse_ints(grid), repetitions, seed, threads)
        _emit(points, output, fmt)


@mc_app.command('ensemble')
def mc_ensemble(
    d: int = typer.Option(..., '--d'),
    n: int = typer.Option(1, '--n'),
    small_dim: int = typer.Option(..., '--small-dim'),
    subspaces: int = typer.Option(750, '--subspaces'),
    samples: int = typer.Option(0, '--samples', help='Samples per subspace; 0 scores each subspace exactly'),
    flavor: str | None = _FLAVOR,
    seed: int | None = _SEED,
    threads: int | None = _THREADS,
    output: str = _OUTPUT,
    verbose: bool = _VERBOSE,
) -> None:
    """Mean and spread of the ASE over Haar-random subspaces."""
    with _handle_errors(verbose):
        big = _spec(d, n, flavor)
        report = estimate.subspace_ensemble_stats(
            big, small_dim, subspaces, samples or None, seed, threads, CLILogger(verbose)
        )
        _emit(report, output)


# ==============================================================================
# complement
# ==============================================================================


@complement_app.command('per-state')
def complement_per_state(
    embedding: str = typer.Option(..., '--embedding'),
    states: int = typer.Option(1, '--states', help='Number of Haar states to average over'),
    restarts: int = typer.Option(4, '--restarts'),
    seed: int | None = _SEED,
    threads: int | None = _THREADS,
    output: str = _OUTPUT,
    verbose: bool = _VERBOSE,
) -> None:
    """Optimal complement support chosen separately for each state."""
    with _handle_errors(verbose):
        loaded = load_embedding(embedding)
        base = settings.DEFAULT_SEED if seed is None else seed
        if states == 1:
            psi = haar_state(loaded.small_dim, np.random.default_rng(base))
            optimum = estimate.optimal_complement_per_state(loaded, psi, restarts, base, threads=threads)
            report = ComplementReport(
                kind='per-state',
                big_dim=loaded.big.dim,
                small_dim=loaded.small_dim,
                value=optimum.value,
                baseline=magic.linear_se(loaded.big, loaded.apply(psi.amplitudes)),
                samples=1,
                restarts=restarts,
                seed=base,
                kappa=[complex(v) for v in optimum.kappa],
            )
        else:
            result = estimate.average_optimal_complement(loaded, states, restarts, base, threads, CLILogger(verbose))
            report = ComplementReport(
                kind='per-state',
                big_dim=loaded.big.dim,
                small_dim=loaded.small_dim,
                value=result.mean,
                stderr=result.stderr,
                samples=result.samples,
                restarts=restarts,
                seed=base,
            )
        _emit(report, output)


@complement_app.command('fixed')
def complement_fixed(
    embedding: str = typer.Option(..., '--embedding'),
    samples: int = typer.Option(500, '--samples'),
    restarts: int = typer.Option(4, '--restarts'),
    seed: int | None = _SEED,
    threads: int | None = _THREADS,
    output: str = _OUTPUT,
    verbose: bool = _VERBOSE,
) -> None:
    """Single complement support minimizing the average SE of the subspace."""
    with _handle_errors(verbose):
        loaded = load_embedding(embedding)
        kappa, result = estimate.optimal_fixed_complement(loaded, samples, restarts, seed, threads=threads)
        report = ComplementReport(
            kind='fixed',
            big_dim=loaded.big.dim,
            small_dim=loaded.small_dim,
            value=result.mean,
            stderr=result.stderr,
            baseline=estimate.mc_ase(loaded, samples, result.seed, threads).mean,
            samples=samples,
            restarts=restarts,
            seed=result.seed,
            kappa=[complex(v) for v in kappa],
        )
        _emit(report, output)


@complement_app.command('relative-change')
def complement_relative_change(
    d: int = typer.Option(..., '--d'),
    n: int = typer.Option(1, '--n'),
    small_dim: int = typer.Option(..., '--small-dim'),
    subspaces: int = typer.Option(100, '--subspaces'),
    samples: int = typer.Option(200, '--samples'),
    restarts: int = typer.Option(2, '--restarts'),
    flavor: str | None = _FLAVOR,
    seed: int | None = _SEED,
    threads: int | None = _THREADS,
    output: str = _OUTPUT,
    verbose: bool = _VERBOSE,
) -> None:
    """Mean relative ASE change from the optimal fixed complement over random subspaces."""
    with _handle_errors(verbose):
        big = _spec(d, n, flavor)
        report = estimate.complement_relative_change(
            big, small_dim, subspaces, samples, restarts, seed, threads, CLILogger(verbose)
        )
        _emit(report, output)


# ==============================================================================
# examples
# ==============================================================================


@examples_app.command('gss')
def example_gss(
    flavor: str = typer.Option('multiqubit', '--flavor', help='multiqubit (3 qubits) or even (one 8-dim qudit)'),
    output: str = _OUTPUT,
    verbose: bool = _VERBOSE,
) -> None:
    """Two-dimensional ground space of a frustration-free three-qubit Hamiltonian."""
    with _handle_errors(verbose):
        _emit(_ase_report(encodings.gss_projector(flavor), 'auto', Flavor.default_for(2).value, None), output)


@examples_app.command('sym-qubits')
def example_sym_qubits(
    two_j_max: int = typer.Option(9, '--two-j-max', help='Largest 2j'),
    samples: int = typer.Option(2000, '--samples', help='Samples for the separable encoding'),
    seed: int | None = _SEED,
    threads: int | None = _THREADS,
    fmt: OutputFormat = _FORMAT,
    output: str = _OUTPUT,
    verbose: bool = _VERBOSE,
) -> None:
    """Spin j intrinsically, as symmetrized qubits and as separable Majorana qubits."""
    with _handle_errors(verbose):
        points = encodings.sym_qubit_curve(two_j_max, samples, seed, threads, CLILogger(verbose))
        rows = [
            SymQubitRow(
                j=str(Fraction(point.two_j, 2)),
                intrinsic=point.intrinsic,
                symmetrized=point.symmetrized,
                separable=point.separable,
                separable_stderr=point.separable_stderr,
            )
            for point in points
        ]
        _emit(rows, output, fmt)


@examples_app.command('majorana')
def example_majorana(
    j: float = typer.Option(1.5, '--j', help='Spin'),
    seed: int | None = _SEED,
    output: str = _OUTPUT,
    verbose: bool = _VERBOSE,
) -> None:
    """Majorana stars of a Haar-random spin-j state and the round-trip fidelity."""
    with _handle_errors(verbose):
        two_j = two_j_of(j)
        rng = np.random.default_rng(settings.DEFAULT_SEED if seed is None else seed)
        state = SpinState(two_j=two_j, amplitudes=haar_state(two_j + 1, rng).amplitudes)
        stars = encodings.majorana_roots(state)
        product = encodings.symmetrize_product(encodings.roots_to_product_state(stars))
        encoded = encodings.symmetric_qubit_embedding(Fraction(two_j, 2)).apply(state.amplitudes)
        report = MajoranaReport(
            j=str(Fraction(two_j, 2)),
            amplitudes=[complex(a) for a in state.amplitudes],
            roots=list(stars.points),
            bloch=[encodings.roots_to_bloch(point).tolist() for point in stars.points],
            fidelity=abs(complex(np.vdot(encoded, product.amplitudes))),
        )
        _emit(report, output)


@examples_app.command('polyhedron')
def example_polyhedron(
    faces: int = typer.Option(4, '--faces'),
    spin: float = typer.Option(0.5, '--spin'),
    exact: bool = typer.Option(True, '--exact/--mc', help='Exact ASE or the 20 x 1000 Monte Carlo preset'),
    seed: int | None = _SEED,
    threads: int | None = _THREADS,
    output: str = _OUTPUT,
    verbose: bool = _VERBOSE,
) -> None:
    """Gauge-invariant (spin-0) subspace of a quantum polyhedron."""
    with _handle_errors(verbose):
        projector = encodings.polyhedron_projector(faces, Fraction(two_j_of(spin), 2))
        small = projector.rank
        intrinsic = averages.intrinsic_ase(small, (Flavor.ODD if small % 2 else Flavor.EVEN) if small > 1 else None)
        stderr: float | None = None
        if exact:
            extrinsic = averages.extrinsic_ase(projector, threads=threads)
        else:
            result = estimate.mc_ase_preset(projector, seed, threads=threads, log=CLILogger(verbose))
            extrinsic, stderr = result.mean, result.run_spread
        report = PolyhedronReport(
            faces=faces,
            spin=str(Fraction(two_j_of(spin), 2)),
            big_dim=projector.big.dim,
            small_dim=small,
            method='exact' if exact else 'mc',
            extrinsic=extrinsic,
            stderr=stderr,
            intrinsic=intrinsic,
            gap=extrinsic - intrinsic,
        )
        _emit(report, output)


@examples_app.command('gauge')
def example_gauge(
    d: int = typer.Option(3, '--d'),
    n: int = typer.Option(2, '--n'),
    small_flavor: str | None = _SMALL_FLAVOR,
    output: str = _OUTPUT,
    verbose: bool = _VERBOSE,
) -> None:
    """Z_d gauge-invariant subspace of n sites."""
    with _handle_errors(verbose):
        isotropic = codes.zd_gauge_set(d, n)
        _emit(codes.code_report(f'gauge {d},{n}', isotropic, small_flavor=small_flavor), output)


@examples_app.command('422')
def example_422(
    output: str = _OUTPUT,
    verbose: bool = _VERBOSE,
) -> None:
    """[[4,2,2]] code read as two qubits and as a 4-dim qudit, and its [[4,1,2]] subcode."""
    with _handle_errors(verbose):
        catalog = codes.builtin_codes()
        code422, code412 = catalog['422'], catalog['412']
        reports = [
            codes.code_report('422', code422.isotropic, code422.phases, Flavor.MULTIQUBIT),
            codes.code_report('422', code422.isotropic, code422.phases, Flavor.EVEN),
            codes.code_report('412', code412.isotropic, code412.phases, Flavor.EVEN),
        ]
        _emit(reports, output)


def main() -> None:
    """Entry point for CLI."""
    app()


if __name__ == '__main__':
    main()
