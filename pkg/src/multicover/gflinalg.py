"""Dense linear algebra over a FieldCtx on int64 numpy arrays."""

from __future__ import annotations

import numpy as np

from multicover.ffield import FieldCtx


def as_matrix(M, ncols: int | None = None) -> np.ndarray:
    A = np.array(M, dtype=np.int64)
    if A.ndim == 1:
        A = A.reshape(0 if A.size == 0 else 1, -1) if ncols is None else A.reshape(-1, ncols)
    if A.size == 0 and ncols is not None:
        A = A.reshape(-1, ncols)
    return A


def rref(F: FieldCtx, M) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form with zero rows dropped, and the pivot columns."""
    A = np.array(M, dtype=np.int64, copy=True)
    if A.ndim != 2:
        raise ValueError("expected a matrix")
    rows, cols = A.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(A[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + nz[0]
        if piv != r:
            A[[r, piv]] = A[[piv, r]]
        A[r] = F.vmul(F.inv(int(A[r, c])), A[r])
        others = np.nonzero(A[:, c])[0]
        others = others[others != r]
        if others.size:
            A[others] = F.vsub(A[others], F.vmul(A[others, c][:, None], A[r][None, :]))
        pivots.append(c)
        r += 1
    return A[:r], pivots


def rank(F: FieldCtx, M) -> int:
    A = np.asarray(M)
    if A.size == 0:
        return 0
    return len(rref(F, A)[1])


def nullspace(F: FieldCtx, M, ncols: int | None = None) -> np.ndarray:
    """Basis (as rows) of {x : M x = 0}."""
    A = np.asarray(M, dtype=np.int64)
    if ncols is None:
        ncols = A.shape[1]
    A = A.reshape(-1, ncols)
    R, pivots = rref(F, A) if A.shape[0] else (A[:0], [])
    free = [c for c in range(ncols) if c not in pivots]
    basis = np.zeros((len(free), ncols), dtype=np.int64)
    for i, f in enumerate(free):
        basis[i, f] = 1
        for row, pc in enumerate(pivots):
            basis[i, pc] = F.neg(int(R[row, f]))
    return basis


def matmul(F: FieldCtx, A, B) -> np.ndarray:
    A = np.asarray(A, dtype=np.int64)
    B = np.asarray(B, dtype=np.int64)
    if F.e == 1:
        return (A @ B) % F.p
    out = np.zeros((A.shape[0], B.shape[1]), dtype=np.int64)
    for j in range(A.shape[1]):
        out = F.vadd(out, F.vmul(A[:, j][:, None], B[j][None, :]))
    return out


def solve_left(F: FieldCtx, G, b) -> tuple[np.ndarray | None, np.ndarray]:
    """Solve x G = b.

    Returns one solution (or None if inconsistent) together with a basis of
    the left kernel of G, so callers can tell whether the solution is unique.
    """
    G = np.asarray(G, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64).reshape(-1)
    k, n = G.shape
    aug = np.concatenate([G.T, b[:, None]], axis=1)
    R, pivots = rref(F, aug) if aug.shape[0] else (aug[:0], [])
    kernel = nullspace(F, G.T, ncols=k) if n else np.eye(k, dtype=np.int64)
    if k in pivots:
        return None, kernel
    x = np.zeros(k, dtype=np.int64)
    for row, pc in enumerate(pivots):
        x[pc] = R[row, k]
    return x, kernel


def same_rowspace(F: FieldCtx, A, B) -> bool:
    A = np.asarray(A, dtype=np.int64)
    B = np.asarray(B, dtype=np.int64)
    if A.shape[1] != B.shape[1]:
        return False
    Ra = rref(F, A)[0] if A.shape[0] else A[:0]
    Rb = rref(F, B)[0] if B.shape[0] else B[:0]
    return Ra.shape == Rb.shape and bool(np.array_equal(Ra, Rb))


def batched_rank(F: FieldCtx, stack) -> np.ndarray:
    """Ranks of a stack of matrices, shape (B, m, n) -> (B,)."""
    M = np.array(stack, dtype=np.int64, copy=True)
    nb, m, n = M.shape
    r = np.zeros(nb, dtype=np.int64)
    if m == 0 or n == 0:
        return r
    rows = np.arange(m)
    for c in range(n):
        cand = (M[:, :, c] != 0) & (rows[None, :] >= r[:, None])
        has = cand.any(axis=1)
        if not has.any():
            continue
        b = np.nonzero(has)[0]
        piv = np.argmax(cand[b], axis=1)
        rr = r[b]
        prow = M[b, piv].copy()
        M[b, piv] = M[b, rr]
        M[b, rr] = prow
        scale = F.vinv(prow[:, c])
        prow = F.vmul(scale[:, None], prow)
        M[b, rr] = prow
        factors = M[b, :, c].copy()
        factors[np.arange(b.size), rr] = 0
        M[b] = F.vsub(M[b], F.vmul(factors[:, :, None], prow[:, None, :]))
        r[b] += 1
    return r


def all_vectors(q: int, k: int, start: int = 0, stop: int | None = None) -> np.ndarray:
    """Rows enumerating F_q^k (mixed radix, last coordinate fastest)."""
    total = q**k
    stop = total if stop is None else min(stop, total)
    idx = np.arange(start, stop, dtype=np.int64)
    out = np.zeros((idx.size, k), dtype=np.int64)
    for j in range(k - 1, -1, -1):
        out[:, j] = idx % q
        idx //= q
    return out


def span(F: FieldCtx, G, chunk: int = 1 << 16):
    """Yield chunks of all codewords x G, x running through F_q^k."""
    G = np.asarray(G, dtype=np.int64)
    k = G.shape[0]
    total = F.order**k
    for start in range(0, total, chunk):
        msgs = all_vectors(F.order, k, start, start + chunk)
        if k == 0:
            yield msgs, np.zeros((msgs.shape[0], G.shape[1]), dtype=np.int64)
        else:
            yield msgs, matmul(F, msgs, G)


def random_matrix(F: FieldCtx, rows: int, cols: int, rng: np.random.Generator) -> np.ndarray:
    return rng.integers(0, F.order, size=(rows, cols), dtype=np.int64)
