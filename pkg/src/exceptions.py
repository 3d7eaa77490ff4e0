"""
Shared exceptions for subspace-magic.

Domain-specific exceptions used across services and the CLI.

Exception Hierarchy:
    SubspaceMagicError (base)
    ├── DimensionError (shape/length mismatch)
    ├── DomainError (argument outside the mathematical domain)
    │   └── FlavorMismatchError (flavor incompatible with d, n or d_S)
    ├── PreconditionError (input violates a documented invariant)
    │   ├── NotNormalizedError (state norm differs from 1)
    │   ├── NotAnIsometryError (columns not orthonormal)
    │   ├── NotAProjectorError (idempotency, hermiticity or trace failure)
    │   └── ComplementError (vector not supported on the complement)
    ├── NumericalIntegrityError (imaginary residue, negative entropy, root residuals)
    ├── CodeStructureError (isotropic sets and stabilizer phases)
    │   ├── IsotropyError (pair with non-vanishing symplectic form)
    │   ├── PhaseConsistencyError (phase map does not give a stabilizer group)
    │   └── NontrivialPhaseError (closed form requested for a non-trivial phase map)
    ├── GroupStructureError (finite group representations)
    │   ├── NotAGroupError (closure failure)
    │   └── BadCharacterError (isotypic projector not idempotent)
    ├── EmptySectorError (empty spin-0 or isotypic sector)
    ├── SizeGuardError (enumeration or dense-tensor guard exceeded)
    ├── RankDeficientParametersError (optimizer parameters give a singular frame)
    ├── OptimizationError (every restart failed)
    ├── InternalError (self-check failure)
    └── InputFileError (unreadable or malformed input file)
"""

from __future__ import annotations

from typing import Any


class SubspaceMagicError(Exception):
    """Base exception for all subspace-magic errors."""


class DimensionError(SubspaceMagicError):
    """Raised when array shapes or index lengths do not match."""

    def __init__(self, what: str, expected: object, actual: object) -> None:
        self.what = what
        self.expected = expected
        self.actual = actual
        super().__init__(f'{what}: expected {expected}, got {actual}')


class DomainError(SubspaceMagicError):
    """Raised when an argument lies outside the mathematical domain of an operation."""


class FlavorMismatchError(DomainError):
    """Raised when an averaging flavor does not fit the dimension it is applied to."""

    def __init__(self, flavor: str, detail: str) -> None:
        self.flavor = flavor
        self.detail = detail
        super().__init__(f"Flavor '{flavor}' is not allowed here: {detail}")


class PreconditionError(SubspaceMagicError):
    """Base exception for inputs that violate a documented invariant."""


class NotNormalizedError(PreconditionError):
    """Raised when a pure state is not unit norm."""

    def __init__(self, norm: float, tolerance: float) -> None:
        self.norm = norm
        self.tolerance = tolerance
        super().__init__(f'State norm is {norm:.12g}; expected 1 within {tolerance:g}')


class NotAnIsometryError(PreconditionError):
    """Raised when embedding columns are not orthonormal."""

    def __init__(self, deviation: float, tolerance: float) -> None:
        self.deviation = deviation
        self.tolerance = tolerance
        super().__init__(f'Embedding isometry violated: |V^dag V - I| = {deviation:.3e} > {tolerance:g}')


class NotAProjectorError(PreconditionError):
    """Raised when a matrix fails one of the projector invariants."""

    def __init__(self, invariant: str, deviation: float, tolerance: float) -> None:
        self.invariant = invariant
        self.deviation = deviation
        self.tolerance = tolerance
        super().__init__(f'Projector {invariant} violated: deviation {deviation:.3e} > {tolerance:g}')


class ComplementError(PreconditionError):
    """Raised when a complement vector is missing or overlaps the subspace."""


class NumericalIntegrityError(SubspaceMagicError):
    """Raised when a computed quantity fails a numerical sanity check."""


class CodeStructureError(SubspaceMagicError):
    """Base exception for isotropic-set and stabilizer-phase failures."""


class IsotropyError(CodeStructureError):
    """Raised when two indices of a would-be isotropic set do not commute."""

    def __init__(self, a: tuple[int, ...], b: tuple[int, ...], form: int, d: int) -> None:
        self.a = a
        self.b = b
        self.form = form
        self.d = d
        super().__init__(f'Indices {a} and {b} have symplectic form {form} (mod {2 * d}); not isotropic mod {d}')


class PhaseConsistencyError(CodeStructureError):
    """Raised when a phase map does not make the displacements a stabilizer group."""


class NontrivialPhaseError(CodeStructureError):
    """Raised when a closed form that assumes trivial phases gets anything else."""


class GroupStructureError(SubspaceMagicError):
    """Base exception for finite group representation failures."""


class NotAGroupError(GroupStructureError):
    """Raised when a list of matrices is not closed under multiplication."""

    def __init__(self, left: int, right: int) -> None:
        self.left = left
        self.right = right
        super().__init__(f'Product of elements {left} and {right} is not in the list (closure failure)')


class BadCharacterError(GroupStructureError):
    """Raised when character values do not yield an idempotent isotypic projector."""


class EmptySectorError(SubspaceMagicError):
    """Raised when the requested invariant or isotypic sector is zero-dimensional."""

    def __init__(self, sector: str, context: str) -> None:
        self.sector = sector
        self.context = context
        super().__init__(f'The {sector} sector is empty for {context}')


class SizeGuardError(SubspaceMagicError):
    """Raised when a dense or enumerative computation would exceed its size guard."""

    def __init__(self, what: str, size: int, limit: int) -> None:
        self.what = what
        self.size = size
        self.limit = limit
        super().__init__(f'{what}: size {size:,} exceeds limit {limit:,}')


class RankDeficientParametersError(SubspaceMagicError):
    """Raised when a parameter vector maps to a rank-deficient frame (caller should perturb)."""


class OptimizationError(SubspaceMagicError):
    """Raised when every optimizer restart fails; carries the best point found anyway."""

    def __init__(self, message: str, best_value: float | None = None, best: Any = None) -> None:
        self.best_value = best_value
        self.best = best
        super().__init__(message)


class InternalError(SubspaceMagicError):
    """Raised when an internal self-check fails (indicates a bug, not bad input)."""


class InputFileError(SubspaceMagicError):
    """Raised when an input file cannot be read or decoded."""

    def __init__(self, path: str, reason: str) -> None:
        self.path = path
        self.reason = reason
        super().__init__(f'Cannot read {path}: {reason}')
