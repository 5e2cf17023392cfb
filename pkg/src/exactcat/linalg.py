"""Dense exact linear algebra over a prime field F_p.

Everything here returns canonical, rref-derived bases so that two computed
subspaces can be compared by plain matrix equality.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "DimensionError",
    "PrimeField",
    "Matrix",
    "rref",
    "rank",
    "kernel_basis",
    "cokernel_projection",
    "column_space",
    "solve",
    "is_invertible",
    "inverse",
    "identity",
    "zeros",
    "hstack",
    "vstack",
    "block_diag",
    "subspace_contains",
]

MAX_CHARACTERISTIC = 97


class DimensionError(ValueError):
    """Raised when matrix shapes or fields do not fit together."""


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class PrimeField:
    p: int

    def __post_init__(self) -> None:
        if not isinstance(self.p, (int, np.integer)) or isinstance(self.p, bool):
            raise TypeError(f"characteristic must be an integer, got {self.p!r}")
        if not 2 <= self.p <= MAX_CHARACTERISTIC or not _is_prime(int(self.p)):
            raise ValueError(f"characteristic must be a prime in [2, {MAX_CHARACTERISTIC}], got {self.p}")
        object.__setattr__(self, "p", int(self.p))

    def inv(self, a: int) -> int:
        a = int(a) % self.p
        if a == 0:
            raise ZeroDivisionError("0 has no inverse")
        return pow(a, -1, self.p)

    def elements(self) -> range:
        return range(self.p)

    def __repr__(self) -> str:
        return f"F{self.p}"


class Matrix:
    """Immutable dense matrix with entries in [0, p).

    ``Matrix(F, [[1, 0], [0, 1]])`` builds from nested lists; pass ``shape``
    when the grid is empty (0 x n or n x 0 matrices are legal).
    """

    __slots__ = ("field", "_a")

    def __init__(self, field: PrimeField, entries, shape: tuple[int, int] | None = None):
        a = np.array(entries, dtype=np.int64)
        if shape is not None:
            if a.size != shape[0] * shape[1]:
                raise DimensionError(f"{a.size} entries cannot fill shape {shape}")
            a = a.reshape(shape)
        elif a.ndim == 1 and a.size == 0:
            a = a.reshape(0, 0)
        if a.ndim != 2:
            raise DimensionError(f"matrix entries must form a 2-d grid, got ndim={a.ndim}")
        a = np.mod(a, field.p)
        a.setflags(write=False)
        self.field = field
        self._a = a

    @classmethod
    def _wrap(cls, field: PrimeField, a: np.ndarray) -> Matrix:
        m = cls.__new__(cls)
        a = np.mod(a, field.p).astype(np.int64, copy=False)
        a.setflags(write=False)
        m.field = field
        m._a = a
        return m

    @property
    def array(self) -> np.ndarray:
        return self._a

    @property
    def rows(self) -> int:
        return self._a.shape[0]

    @property
    def cols(self) -> int:
        return self._a.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self._a.shape  # type: ignore[return-value]

    @property
    def T(self) -> Matrix:
        return Matrix._wrap(self.field, self._a.T.copy())

    def _check_field(self, other: Matrix) -> None:
        if self.field != other.field:
            raise DimensionError(f"field mismatch: {self.field} vs {other.field}")

    def __matmul__(self, other: Matrix) -> Matrix:
        self._check_field(other)
        if self.cols != other.rows:
            raise DimensionError(f"cannot multiply {self.shape} by {other.shape}")
        return Matrix._wrap(self.field, self._a @ other._a)

    def __add__(self, other: Matrix) -> Matrix:
        self._check_field(other)
        if self.shape != other.shape:
            raise DimensionError(f"cannot add {self.shape} and {other.shape}")
        return Matrix._wrap(self.field, self._a + other._a)

    def __sub__(self, other: Matrix) -> Matrix:
        self._check_field(other)
        if self.shape != other.shape:
            raise DimensionError(f"cannot subtract {other.shape} from {self.shape}")
        return Matrix._wrap(self.field, self._a - other._a)

    def __neg__(self) -> Matrix:
        return Matrix._wrap(self.field, -self._a)

    def scale(self, c: int) -> Matrix:
        return Matrix._wrap(self.field, self._a * (int(c) % self.field.p))

    def __getitem__(self, idx):
        return int(self._a[idx])

    def is_zero(self) -> bool:
        return not self._a.any()

    def tolist(self) -> list[list[int]]:
        return self._a.tolist()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.field == other.field and self.shape == other.shape and np.array_equal(self._a, other._a)

    def __hash__(self) -> int:
        return hash((self.field.p, self.shape, self._a.tobytes()))

    def __repr__(self) -> str:
        return f"Matrix({self.field}, {self.tolist()}, shape={self.shape})"


def identity(field: PrimeField, n: int) -> Matrix:
    return Matrix._wrap(field, np.eye(n, dtype=np.int64))


def zeros(field: PrimeField, rows: int, cols: int) -> Matrix:
    return Matrix._wrap(field, np.zeros((rows, cols), dtype=np.int64))


def _row_reduce(field: PrimeField, a: np.ndarray) -> tuple[np.ndarray, list[int]]:
    p = field.p
    a = a.copy()
    nrows, ncols = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            a[[r, k]] = a[[k, r]]
        a[r] = (a[r] * field.inv(a[r, c])) % p
        col = a[:, c].copy()
        col[r] = 0
        if col.any():
            a = (a - np.outer(col, a[r])) % p
        pivots.append(c)
        r += 1
    return a, pivots


def rref(m: Matrix) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and the list of pivot columns."""
    a, pivots = _row_reduce(m.field, m.array)
    return Matrix._wrap(m.field, a), pivots


def rank(m: Matrix) -> int:
    return len(_row_reduce(m.field, m.array)[1])


def kernel_basis(m: Matrix) -> Matrix:
    """Columns form the canonical basis of the null space of ``m``.

    One column per free variable, in increasing order of the free column.
    """
    p = m.field.p
    a, pivots = _row_reduce(m.field, m.array)
    free = [c for c in range(m.cols) if c not in set(pivots)]
    basis = np.zeros((m.cols, len(free)), dtype=np.int64)
    for j, f in enumerate(free):
        basis[f, j] = 1
        for r, pc in enumerate(pivots):
            basis[pc, j] = (-a[r, f]) % p
    return Matrix._wrap(m.field, basis)


def cokernel_projection(m: Matrix) -> Matrix:
    """Surjection ``q`` with ``q @ m == 0`` and ``ker q == col(m)``.

    The rows of ``q`` are the canonical basis of the left null space of ``m``.
    """
    return kernel_basis(m.T).T


def column_space(m: Matrix) -> Matrix:
    """Canonical basis (as columns) of the column space of ``m``."""
    a, pivots = _row_reduce(m.field, m.array.T)
    return Matrix._wrap(m.field, a[: len(pivots)].T.copy())


def subspace_contains(big: Matrix, small: Matrix) -> bool:
    """Whether col(small) is contained in col(big)."""
    if big.rows != small.rows:
        raise DimensionError(f"ambient dimensions differ: {big.rows} vs {small.rows}")
    return rank(hstack([big, small])) == rank(big)


def solve(a: Matrix, b: Matrix) -> Matrix | None:
    """Canonical solution of ``a @ x == b`` (free variables set to 0), or None."""
    if a.rows != b.rows:
        raise DimensionError(f"row counts differ: {a.rows} vs {b.rows}")
    a._check_field(b)
    n = a.cols
    aug, pivots = _row_reduce(a.field, np.hstack([a.array, b.array]))
    if pivots and pivots[-1] >= n:
        return None
    x = np.zeros((n, b.cols), dtype=np.int64)
    for r, pc in enumerate(pivots):
        x[pc] = aug[r, n:]
    return Matrix._wrap(a.field, x)


def is_invertible(m: Matrix) -> bool:
    return m.rows == m.cols and rank(m) == m.rows


def inverse(m: Matrix) -> Matrix:
    if not is_invertible(m):
        raise ValueError(f"matrix of shape {m.shape} is not invertible")
    x = solve(m, identity(m.field, m.rows))
    assert x is not None
    return x


def _common_field(blocks: Sequence[Matrix]) -> PrimeField:
    if not blocks:
        raise DimensionError("need at least one block")
    field = blocks[0].field
    for b in blocks[1:]:
        field_other = b.field
        if field_other != field:
            raise DimensionError(f"field mismatch: {field} vs {field_other}")
    return field


def hstack(blocks: Iterable[Matrix]) -> Matrix:
    blocks = list(blocks)
    field = _common_field(blocks)
    if len({b.rows for b in blocks}) != 1:
        raise DimensionError(f"hstack needs equal row counts, got {[b.shape for b in blocks]}")
    return Matrix._wrap(field, np.hstack([b.array for b in blocks]))


def vstack(blocks: Iterable[Matrix]) -> Matrix:
    blocks = list(blocks)
    field = _common_field(blocks)
    if len({b.cols for b in blocks}) != 1:
        raise DimensionError(f"vstack needs equal column counts, got {[b.shape for b in blocks]}")
    return Matrix._wrap(field, np.vstack([b.array for b in blocks]))


def block_diag(blocks: Iterable[Matrix]) -> Matrix:
    blocks = list(blocks)
    field = _common_field(blocks)
    out = np.zeros((sum(b.rows for b in blocks), sum(b.cols for b in blocks)), dtype=np.int64)
    r = c = 0
    for b in blocks:
        out[r : r + b.rows, c : c + b.cols] = b.array
        r += b.rows
        c += b.cols
    return Matrix._wrap(field, out)
