"""Dense linear algebra over the prime field, backed by numpy ``int64`` arrays.

Entries are kept reduced in ``[0, p)``; with ``p <= 19`` every intermediate
product fits comfortably in 64 bits.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .errors import DomainError, SingularError
from .gfp import inv_mod


def as_matrix(rows: Sequence[Sequence[int]] | np.ndarray, p: int, ncols: int | None = None) -> np.ndarray:
    arr = np.asarray(rows, dtype=np.int64)
    if arr.ndim == 1:
        arr = arr.reshape(0 if arr.size == 0 else 1, -1) if ncols is None else arr.reshape(-1, ncols)
    if arr.size == 0 and ncols is not None:
        arr = arr.reshape(-1, ncols)
    return np.mod(arr, p)


def rref(matrix: Sequence[Sequence[int]] | np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form mod ``p``; returns the matrix and its pivot columns."""
    a = as_matrix(matrix, p).copy()
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
        a[r] = (a[r] * inv_mod(int(a[r, c]), p)) % p
        col = a[:, c].copy()
        col[r] = 0
        hit = np.flatnonzero(col)
        if hit.size:
            a[hit] = (a[hit] - np.outer(col[hit], a[r])) % p
        pivots.append(c)
        r += 1
    return a, pivots


def rank(matrix: Sequence[Sequence[int]] | np.ndarray, p: int) -> int:
    """Rank mod ``p`` by forward elimination (no back substitution)."""
    a = as_matrix(matrix, p).copy()
    if a.size == 0:
        return 0
    if a.shape[0] > a.shape[1]:
        a = a.T.copy()
    nrows, ncols = a.shape
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
        a[r] = (a[r] * inv_mod(int(a[r, c]), p)) % p
        below = a[r + 1 :, c]
        hit = np.flatnonzero(below)
        if hit.size:
            idx = hit + r + 1
            a[idx] = (a[idx] - np.outer(a[idx, c], a[r])) % p
        r += 1
    return r


def row_basis(matrix: Sequence[Sequence[int]] | np.ndarray, p: int) -> np.ndarray:
    """A basis (in reduced echelon form) of the row space."""
    red, piv = rref(matrix, p)
    return red[: len(piv)]


def nullspace(matrix: Sequence[Sequence[int]] | np.ndarray, p: int, ncols: int | None = None) -> np.ndarray:
    """Basis of the right kernel ``{v : M v = 0}`` as the rows of the result."""
    a = as_matrix(matrix, p, ncols)
    n = a.shape[1]
    red, piv = rref(a, p)
    free = [c for c in range(n) if c not in set(piv)]
    basis = np.zeros((len(free), n), dtype=np.int64)
    for row_idx, f in enumerate(free):
        basis[row_idx, f] = 1
        for i, pc in enumerate(piv):
            basis[row_idx, pc] = (-red[i, f]) % p
    return basis


def inverse(matrix: Sequence[Sequence[int]] | np.ndarray, p: int) -> np.ndarray:
    a = as_matrix(matrix, p)
    n, m = a.shape
    if n != m:
        raise DomainError("inverse needs a square matrix")
    aug = np.concatenate([a, np.eye(n, dtype=np.int64)], axis=1)
    red, piv = rref(aug, p)
    if piv[:n] != list(range(n)) or len(piv) < n:
        raise SingularError("matrix is singular modulo p")
    return red[:, n:]


def det(matrix: Sequence[Sequence[int]] | np.ndarray, p: int) -> int:
    a = as_matrix(matrix, p).copy()
    n, m = a.shape
    if n != m:
        raise DomainError("det needs a square matrix")
    result = 1
    for c in range(n):
        nz = np.flatnonzero(a[c:, c])
        if nz.size == 0:
            return 0
        k = c + int(nz[0])
        if k != c:
            a[[c, k]] = a[[k, c]]
            result = -result
        pivot = int(a[c, c])
        result = result * pivot % p
        inv_p = inv_mod(pivot, p)
        below = a[c + 1 :, c]
        hit = np.flatnonzero(below)
        if hit.size:
            idx = hit + c + 1
            factors = (a[idx, c] * inv_p) % p
            a[idx] = (a[idx] - np.outer(factors, a[c])) % p
    return result % p


def matmul(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    return (np.asarray(a, dtype=np.int64) @ np.asarray(b, dtype=np.int64)) % p


def in_row_space(basis: np.ndarray, v: np.ndarray, p: int) -> bool:
    if basis.size == 0:
        return not np.any(np.mod(v, p))
    return rank(np.vstack([basis, v]), p) == rank(basis, p)
