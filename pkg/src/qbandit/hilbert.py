"""State vectors and structured unitaries on an (agent x environment) product space.

The composite space has one axis of size N for agent actions and one of size M
for environment outcomes; basis state |x y> sits at flat index x * M + y.
Operators are kept in structured form (sign flips, block-diagonal unitaries,
rank-one reflections) so applying one costs O(N*M) or O(N*M^2) instead of
O((N*M)^2).  `densify` builds the equivalent dense matrix directly from each
operator's definition and exists as an independent route for cross-checking
`apply`; it is never used on the hot path.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, InvalidOperator

# Payload unitarity check; looser than application accuracy to absorb
# orthonormalization roundoff.
UNITARY_TOL = 1e-10
# States must arrive normalized; applications keep them that way to ~1e-15.
STATE_NORM_TOL = 1e-9
# densify is a test oracle, not a scalable path.
DENSIFY_CAP = 4096


def basis_index(dims: tuple[int, int], x: int, y: int) -> int:
    """Flat index of |x y> under the row-major (x * M + y) convention."""
    n, m = dims
    if not (0 <= x < n and 0 <= y < m):
        raise DimensionError(f"basis label ({x}, {y}) outside dims {dims}")
    return x * m + y


@dataclass(frozen=True)
class StateVector:
    """Normalized complex amplitudes over the composite basis.

    dims is (N, M); amps has length N * M with amps[x * M + y] = <x y|s>.
    """

    dims: tuple[int, int]
    amps: np.ndarray

    def __post_init__(self) -> None:
        n, m = self.dims
        if n < 1 or m < 1:
            raise DimensionError(f"dims must be positive, got {self.dims}")
        amps = np.array(self.amps, dtype=np.complex128)
        if amps.shape != (n * m,):
            raise DimensionError(
                f"amplitude vector has shape {amps.shape}, expected ({n * m},)"
            )
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > STATE_NORM_TOL:
            raise ValueError(f"state norm {norm!r} is not 1 within {STATE_NORM_TOL}")
        amps.setflags(write=False)
        object.__setattr__(self, "amps", amps)
        object.__setattr__(self, "dims", (int(n), int(m)))


def basis_state(dims: tuple[int, int], index: int = 0) -> StateVector:
    """The computational basis state at the given flat index."""
    n, m = dims
    if not (0 <= index < n * m):
        raise DimensionError(f"basis index {index} outside dims {dims}")
    amps = np.zeros(n * m, dtype=np.complex128)
    amps[index] = 1.0
    return StateVector(dims, amps)


def _require_unitary(matrix: np.ndarray, what: str) -> None:
    d = matrix.shape[0]
    gram = matrix.conj().T @ matrix
    dev = float(np.abs(gram - np.eye(d)).max())
    if dev > UNITARY_TOL:
        raise InvalidOperator(f"{what} is not unitary: max |U*U - I| = {dev:.3e}")


@dataclass(frozen=True)
class DiagonalSign:
    """Phase oracle: flips the sign of every basis state selected by mask (N, M)."""

    mask: np.ndarray

    def __post_init__(self) -> None:
        mask = np.array(self.mask, dtype=bool)
        if mask.ndim != 2:
            raise InvalidOperator(f"mask must be 2-d (N, M), got shape {mask.shape}")
        mask.setflags(write=False)
        object.__setattr__(self, "mask", mask)

    @property
    def dims(self) -> tuple[int, int]:
        return self.mask.shape


@dataclass(frozen=True)
class BlockEnvUnitary:
    """Action-controlled environment unitary: block x acts on the y axis, (N, M, M)."""

    blocks: np.ndarray

    def __post_init__(self) -> None:
        blocks = np.array(self.blocks, dtype=np.complex128)
        if blocks.ndim != 3 or blocks.shape[1] != blocks.shape[2]:
            raise InvalidOperator(
                f"blocks must have shape (N, M, M), got {blocks.shape}"
            )
        gram = np.einsum("xji,xjk->xik", blocks.conj(), blocks)
        eye = np.eye(blocks.shape[1])
        dev = float(np.abs(gram - eye).max())
        if dev > UNITARY_TOL:
            raise InvalidOperator(f"a block is not unitary: max |U*U - I| = {dev:.3e}")
        blocks.setflags(write=False)
        object.__setattr__(self, "blocks", blocks)

    @property
    def dims(self) -> tuple[int, int]:
        return (self.blocks.shape[0], self.blocks.shape[1])


@dataclass(frozen=True)
class PrepUnitary:
    """Agent-side unitary acting as matrix (N, N) tensored with identity on y."""

    matrix: np.ndarray
    env_dim: int

    def __post_init__(self) -> None:
        matrix = np.array(self.matrix, dtype=np.complex128)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise InvalidOperator(f"matrix must be square, got shape {matrix.shape}")
        if self.env_dim < 1:
            raise InvalidOperator(f"env_dim must be positive, got {self.env_dim}")
        _require_unitary(matrix, "agent preparation matrix")
        matrix.setflags(write=False)
        object.__setattr__(self, "matrix", matrix)
        object.__setattr__(self, "env_dim", int(self.env_dim))

    @property
    def dims(self) -> tuple[int, int]:
        return (self.matrix.shape[0], self.env_dim)


@dataclass(frozen=True)
class CompositeReflection:
    """2|a><a| - I about one basis state of the composite space."""

    dims: tuple[int, int]
    anchor: int = 0

    def __post_init__(self) -> None:
        n, m = self.dims
        if not (0 <= self.anchor < n * m):
            raise InvalidOperator(f"anchor {self.anchor} outside dims {self.dims}")
        object.__setattr__(self, "dims", (int(n), int(m)))
        object.__setattr__(self, "anchor", int(self.anchor))


@dataclass(frozen=True)
class TensorReflection:
    """(2|ax><ax| - I) tensor (2|ay><ay| - I), one reflection per factor."""

    dims: tuple[int, int]
    anchor_x: int = 0
    anchor_y: int = 0

    def __post_init__(self) -> None:
        n, m = self.dims
        if not (0 <= self.anchor_x < n and 0 <= self.anchor_y < m):
            raise InvalidOperator(
                f"anchors ({self.anchor_x}, {self.anchor_y}) outside dims {self.dims}"
            )
        object.__setattr__(self, "dims", (int(n), int(m)))
        object.__setattr__(self, "anchor_x", int(self.anchor_x))
        object.__setattr__(self, "anchor_y", int(self.anchor_y))


@dataclass(frozen=True)
class DenseMatrix:
    """Explicit (N*M, N*M) unitary; the fallback/oracle representation."""

    dims: tuple[int, int]
    matrix: np.ndarray

    def __post_init__(self) -> None:
        n, m = self.dims
        matrix = np.array(self.matrix, dtype=np.complex128)
        if matrix.shape != (n * m, n * m):
            raise DimensionError(
                f"matrix shape {matrix.shape} does not match dims {self.dims}"
            )
        _require_unitary(matrix, "dense matrix")
        matrix.setflags(write=False)
        object.__setattr__(self, "matrix", matrix)
        object.__setattr__(self, "dims", (int(n), int(m)))


OperatorSpec = (
    DiagonalSign
    | BlockEnvUnitary
    | PrepUnitary
    | CompositeReflection
    | TensorReflection
    | DenseMatrix
)


def apply(op: OperatorSpec, s: StateVector) -> StateVector:
    """Apply a structured operator to a state without materializing a matrix."""
    if op.dims != s.dims:
        raise DimensionError(f"operator dims {op.dims} do not match state {s.dims}")
    n, m = s.dims
    if isinstance(op, DiagonalSign):
        out = np.where(op.mask.reshape(-1), -s.amps, s.amps)
    elif isinstance(op, BlockEnvUnitary):
        out = np.einsum("xij,xj->xi", op.blocks, s.amps.reshape(n, m)).reshape(-1)
    elif isinstance(op, PrepUnitary):
        out = (op.matrix @ s.amps.reshape(n, m)).reshape(-1)
    elif isinstance(op, CompositeReflection):
        out = -s.amps
        out[op.anchor] = s.amps[op.anchor]
    elif isinstance(op, TensorReflection):
        sign_x = np.full(n, -1.0)
        sign_x[op.anchor_x] = 1.0
        sign_y = np.full(m, -1.0)
        sign_y[op.anchor_y] = 1.0
        out = (s.amps.reshape(n, m) * np.outer(sign_x, sign_y)).reshape(-1)
    elif isinstance(op, DenseMatrix):
        out = op.matrix @ s.amps
    else:
        raise InvalidOperator(f"unknown operator kind {type(op).__name__}")
    return StateVector(s.dims, out)


def adjoint(op: OperatorSpec) -> OperatorSpec:
    """The conjugate-transpose operator; sign flips and reflections are their own."""
    if isinstance(op, (DiagonalSign, CompositeReflection, TensorReflection)):
        return op
    if isinstance(op, BlockEnvUnitary):
        return BlockEnvUnitary(op.blocks.conj().transpose(0, 2, 1))
    if isinstance(op, PrepUnitary):
        return PrepUnitary(op.matrix.conj().T, op.env_dim)
    if isinstance(op, DenseMatrix):
        return DenseMatrix(op.dims, op.matrix.conj().T)
    raise InvalidOperator(f"unknown operator kind {type(op).__name__}")


def densify(op: OperatorSpec, cap: int = DENSIFY_CAP) -> np.ndarray:
    """Dense matrix built from the operator's definition (cross-check oracle only)."""
    n, m = op.dims
    d = n * m
    if d > cap:
        raise DimensionError(f"densify cap exceeded: {d} > {cap}")
    if isinstance(op, DiagonalSign):
        return np.diag(np.where(op.mask.reshape(-1), -1.0, 1.0)).astype(np.complex128)
    if isinstance(op, BlockEnvUnitary):
        out = np.zeros((d, d), dtype=np.complex128)
        for x in range(n):
            out[x * m:(x + 1) * m, x * m:(x + 1) * m] = op.blocks[x]
        return out
    if isinstance(op, PrepUnitary):
        return np.kron(op.matrix, np.eye(m, dtype=np.complex128))
    if isinstance(op, CompositeReflection):
        out = -np.eye(d, dtype=np.complex128)
        out[op.anchor, op.anchor] = 1.0
        return out
    if isinstance(op, TensorReflection):
        sx = -np.eye(n, dtype=np.complex128)
        sx[op.anchor_x, op.anchor_x] = 1.0
        sy = -np.eye(m, dtype=np.complex128)
        sy[op.anchor_y, op.anchor_y] = 1.0
        return np.kron(sx, sy)
    if isinstance(op, DenseMatrix):
        return np.array(op.matrix)
    raise InvalidOperator(f"unknown operator kind {type(op).__name__}")


def inner(a: StateVector, b: StateVector) -> complex:
    """<a|b>, conjugate-linear in the first argument."""
    if a.dims != b.dims:
        raise DimensionError(f"state dims differ: {a.dims} vs {b.dims}")
    return complex(np.vdot(a.amps, b.amps))


def marginal_over_y(s: StateVector) -> np.ndarray:
    """Probability of each agent action after discarding the environment axis."""
    n, m = s.dims
    return (np.abs(s.amps.reshape(n, m)) ** 2).sum(axis=1)
