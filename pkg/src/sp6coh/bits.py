"""Small F2 matrix utilities and packed-key encodings for matrix groups.

An n x n matrix over F2 (n <= 8) is packed into a single uint64 key:
row i occupies bits [n*i, n*(i+1)), row bits little-endian in the column
index.  Batched operations work on numpy arrays of keys or of unpacked
row words.
"""

from __future__ import annotations

import numpy as np


def pack_matrix(M) -> int:
    M = np.asarray(M, dtype=np.uint64) & 1
    n = M.shape[0]
    key = 0
    for i in range(n):
        row = 0
        for j in range(n):
            row |= int(M[i, j]) << j
        key |= row << (n * i)
    return key


def unpack_matrix(key: int, n: int) -> np.ndarray:
    M = np.zeros((n, n), dtype=np.uint8)
    for i in range(n):
        row = (key >> (n * i)) & ((1 << n) - 1)
        for j in range(n):
            M[i, j] = (row >> j) & 1
    return M


def keys_to_rows(keys: np.ndarray, n: int) -> np.ndarray:
    """(N,) uint64 keys -> (N, n) uint8 row words."""
    keys = np.asarray(keys, dtype=np.uint64)
    mask = np.uint64((1 << n) - 1)
    out = np.empty((len(keys), n), dtype=np.uint8)
    for i in range(n):
        out[:, i] = (keys >> np.uint64(n * i)) & mask
    return out

def rows_to_keys(rows: np.ndarray, n: int) -> np.ndarray:
    rows = rows.astype(np.uint64)
    keys = np.zeros(len(rows), dtype=np.uint64)
    for i in range(n):
        keys |= rows[:, i] << np.uint64(n * i)
    return keys


def right_mul_table(H: np.ndarray) -> np.ndarray:
    """Lookup table T with T[w] = (row w) * H for all 2**n row words."""
    n = H.shape[0]
    T = np.zeros(1 << n, dtype=np.uint8)
    Hrows = np.zeros(n, dtype=np.uint16)
    for i in range(n):
        r = 0
        for j in range(n):
            r |= int(H[i, j]) << j
        Hrows[i] = r
    for w in range(1 << n):
        acc = 0
        for i in range(n):
            if (w >> i) & 1:
                acc ^= int(Hrows[i])
        T[w] = acc
    return T


def rows_right_mul(rows: np.ndarray, table: np.ndarray) -> np.ndarray:
    return table[rows]


def rows_left_mul(G: np.ndarray, rows: np.ndarray) -> np.ndarray:
    """(g * m) for every unpacked m: row i of result = xor of rows j with G[i,j]=1."""
    n = G.shape[0]
    out = np.zeros_like(rows)
    for i in range(n):
        acc = np.zeros(len(rows), dtype=np.uint8)
        for j in range(n):
            if G[i, j]:
                acc ^= rows[:, j]
        out[:, i] = acc
    return out


def f2_mat_mul(A, B):
    return (np.asarray(A, dtype=np.uint8) @ np.asarray(B, dtype=np.uint8)) & 1


def f2_rank(M) -> int:
    A = (np.array(M, dtype=np.uint8) & 1).tolist()
    rows = len(A)
    cols = len(A[0]) if rows else 0
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if A[i][c]), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        for i in range(rows):
            if i != r and A[i][c]:
                A[i] = [(x + y) & 1 for x, y in zip(A[i], A[r])]
        r += 1
    return r


def f2_inverse(M) -> np.ndarray:
    n = len(M)
    A = [[int(M[i][j]) & 1 for j in range(n)] + [int(i == j) for j in range(n)]
         for i in range(n)]
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, n) if A[i][c]), None)
        assert piv is not None, "singular F2 matrix"
        A[r], A[piv] = A[piv], A[r]
        for i in range(n):
            if i != r and A[i][c]:
                A[i] = [(x + y) & 1 for x, y in zip(A[i], A[r])]
        r += 1
    return np.array([row[n:] for row in A], dtype=np.uint8)


def f2_nullspace(M) -> list:
    """Basis of the right nullspace of M over F2."""
    M = np.array(M, dtype=np.uint8) & 1
    rows, cols = M.shape
    A = M.tolist()
    pivots = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if A[i][c]), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        for i in range(rows):
            if i != r and A[i][c]:
                A[i] = [(x + y) & 1 for x, y in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for f in free:
        v = [0] * cols
        v[f] = 1
        for i, c in enumerate(pivots):
            if A[i][f]:
                v[c] = 1
        basis.append(np.array(v, dtype=np.uint8))
    return basis


def symplectic_basis(form: np.ndarray) -> np.ndarray:
    """Rows (a_1..a_m, b_1..b_m) with a_i form b_j^T = delta_ij, a form a^T = 0.

    The form must be nondegenerate alternating over F2.  Returns U with
    U form U^T equal to [[0, I], [I, 0]].
    """
    form = np.array(form, dtype=np.uint8) & 1
    n = form.shape[0]
    assert f2_rank(form) == n and not form.diagonal().any()
    remaining = [np.array([int(i == j) for j in range(n)], dtype=np.uint8) for i in range(n)]
    a_vecs, b_vecs = [], []
    while remaining:
        a = remaining.pop(0)
        b = next((v for v in remaining if (a @ form @ v) & 1), None)
        assert b is not None, "degenerate form"
        remaining.remove(b)
        reduced = []
        for v in remaining:
            v = v.copy()
            if (v @ form @ b) & 1:
                v ^= a
            if (v @ form @ a) & 1:
                v ^= b
            if v.any():
                reduced.append(v)
        # Drop dependent vectors from the reduced complement.
        indep = []
        for v in reduced:
            trial = indep + [v]
            if f2_rank(np.array(trial)) == len(trial):
                indep.append(v)
        remaining = indep
        a_vecs.append(a)
        b_vecs.append(b)
    U = np.array(a_vecs + b_vecs, dtype=np.uint8)
    m = len(a_vecs)
    J0 = np.zeros((n, n), dtype=np.uint8)
    J0[:m, m:] = np.eye(m, dtype=np.uint8)
    J0[m:, :m] = np.eye(m, dtype=np.uint8)
    assert np.array_equal((U @ form @ U.T) & 1, J0)
    return U


def standard_symplectic_form(n: int) -> np.ndarray:
    m = n // 2
    J0 = np.zeros((n, n), dtype=np.uint8)
    J0[:m, m:] = np.eye(m, dtype=np.uint8)
    J0[m:, :m] = np.eye(m, dtype=np.uint8)
    return J0
