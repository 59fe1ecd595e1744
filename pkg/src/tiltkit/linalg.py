"""Exact dense linear algebra over a :class:`~tiltkit.field.Field`.

Subspaces are stored as matrices whose *columns* form a basis. All pivot
choices are the leftmost available column, so results are deterministic.
"""

from __future__ import annotations

import numpy as np

from .field import Field


def rref(M: np.ndarray, F: Field):
    """Reduced row echelon form. Returns ``(R, pivot_columns)``."""
    A = np.array(M, dtype=F.dtype, copy=True)
    if A.ndim != 2:
        raise ValueError("rref expects a matrix")
    rows, cols = A.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(A[r:, c] != 0)
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            A[[r, k]] = A[[k, r]]
        A[r] = F.normalize(A[r] * F.inv(A[r, c]))
        others = np.flatnonzero(A[:, c] != 0)
        others = others[others != r]
        if others.size:
            A[others] = F.normalize(A[others] - np.outer(A[others, c], A[r]))
        pivots.append(c)
        r += 1
    return A, pivots


def rank(M: np.ndarray, F: Field) -> int:
    if M.size == 0:
        return 0
    return len(rref(M, F)[1])


def nullspace(M: np.ndarray, F: Field) -> np.ndarray:
    """Basis (as columns) of ``{x : M x = 0}``."""
    rows, cols = M.shape
    if rows == 0:
        return F.eye(cols)
    R, piv = rref(M, F)
    free = [c for c in range(cols) if c not in set(piv)]
    N = F.zeros((cols, len(free)))
    for j, f in enumerate(free):
        N[f, j] = F.scalar(1)
        for i, pc in enumerate(piv):
            N[pc, j] = F.normalize(-R[i, f]) if F.p is not None else -R[i, f]
    return N


def independent_columns(V: np.ndarray, F: Field) -> list[int]:
    if V.shape[1] == 0 or V.shape[0] == 0:
        return []
    return rref(V, F)[1]


def span(V: np.ndarray, F: Field) -> np.ndarray:
    """A basis of the column space of ``V`` chosen among its columns."""
    return V[:, independent_columns(V, F)]


def solve(M: np.ndarray, b: np.ndarray, F: Field):
    """One solution ``x`` of ``M x = b`` (``b`` a vector or matrix), or ``None``."""
    vec = b.ndim == 1
    B = b.reshape(-1, 1) if vec else b
    rows, cols = M.shape
    if B.shape[1] == 0:
        return F.zeros((cols,) if vec else (cols, 0))
    R, piv = rref(np.concatenate([M, B], axis=1), F)
    if any(p >= cols for p in piv):
        return None
    X = F.zeros((cols, B.shape[1]))
    for i, pc in enumerate(piv):
        X[pc] = R[i, cols:]
    return X[:, 0] if vec else X


def coordinates(basis: np.ndarray, v: np.ndarray, F: Field) -> np.ndarray:
    """Coordinates of ``v`` in a basis given by independent columns."""
    x = solve(basis, v, F)
    if x is None:
        raise ValueError("vector not in span")
    return x


def in_span(V: np.ndarray, v: np.ndarray, F: Field) -> bool:
    if V.shape[1] == 0:
        return not np.any(v != 0)
    return rank(np.column_stack([V, v]), F) == rank(V, F)


def contains(V: np.ndarray, W: np.ndarray, F: Field) -> bool:
    """Whether the column space of ``W`` lies in that of ``V``."""
    if W.shape[1] == 0:
        return True
    if V.shape[1] == 0:
        return not np.any(W != 0)
    return rank(np.concatenate([V, W], axis=1), F) == rank(V, F)


def intersect(U: np.ndarray, W: np.ndarray, F: Field) -> np.ndarray:
    """Basis of the intersection of two column spaces."""
    n = U.shape[0]
    if U.shape[1] == 0 or W.shape[1] == 0:
        return F.zeros((n, 0))
    K = nullspace(np.concatenate([U, F.normalize(-W)], axis=1), F)
    if K.shape[1] == 0:
        return F.zeros((n, 0))
    return span(F.matmul(U, K[: U.shape[1]]), F)


def complement(U: np.ndarray, F: Field) -> np.ndarray:
    """Standard basis vectors completing the column space of ``U`` to the whole space."""
    n = U.shape[0]
    if U.shape[1] == 0:
        return F.eye(n)
    _, piv = rref(np.concatenate([U, F.eye(n)], axis=1), F)
    extra = [p - U.shape[1] for p in piv if p >= U.shape[1]]
    return F.eye(n)[:, extra]


def extend_basis(U: np.ndarray, W: np.ndarray, F: Field) -> list[int]:
    """Indices of columns of ``W`` that extend the independent columns ``U``
    to a basis of ``span(U) + span(W)``."""
    k = U.shape[1]
    if W.shape[1] == 0:
        return []
    _, piv = rref(np.concatenate([U, W], axis=1), F)
    return [p - k for p in piv if p >= k]


def inverse(M: np.ndarray, F: Field) -> np.ndarray:
    n = M.shape[0]
    if M.shape != (n, n):
        raise ValueError("not square")
    X = solve(M, F.eye(n), F)
    if X is None or rank(M, F) < n:
        raise ZeroDivisionError("singular matrix")
    return X
