"""Exact dense linear algebra over a prime field GF(p).

Matrices are 2-D numpy ``int64`` arrays with entries reduced to ``[0, p)``;
an array with zero rows (shape ``(0, n)``) is the empty matrix on ``n``
columns.  All routines are deterministic: pivots are always chosen as the
first nonzero entry of the current column, pivot rows are scaled to 1, and
kernel bases are read off the reduced row echelon form in free-column order.

The default prime is 32003, small enough that products fit comfortably in
both int64 and exact float64 arithmetic, which lets the rank routine use a
blocked elimination with BLAS matrix products for large inputs (every
intermediate value stays below 2**53, so the float path is exact).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

DEFAULT_PRIME = 32003

# below either threshold the simple per-pivot elimination wins; above,
# the blocked float64 path is used for rank computations
_BLOCK_MIN_DIM = 48
_BLOCK_MIN_SIZE = 16384
_PANEL = 64


class ContainmentViolated(Exception):
    """Raised when a claimed subspace containment fails."""


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class FieldPrime:
    """Configuration wrapper for the working prime."""

    p: int = DEFAULT_PRIME

    def __post_init__(self) -> None:
        if not _is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")
        if self.p <= 2:
            raise ValueError("p must be an odd prime")
        if self.p >= 2**26:
            # keeps k * p**2 < 2**53 for any block size used here
            raise ValueError("p too large for the exact float64 block path")


def normalize(a, p: int) -> np.ndarray:
    """Return ``a`` as an int64 array with entries reduced into [0, p)."""
    arr = np.asarray(a, dtype=np.int64)
    if arr.ndim != 2:
        raise ValueError("expected a 2-D matrix")
    return np.mod(arr, p)


def _inv(x: int, p: int) -> int:
    return pow(int(x), -1, p)


def rref(a, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form over GF(p).

    Returns ``(R, pivots)`` where pivots are the pivot column indices in
    increasing order.  Pivot entries are scaled to 1 and are the only
    nonzero entries in their columns.
    """
    A = normalize(a, p).copy()
    rows, cols = A.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        col = A[r:, c]
        nz = np.flatnonzero(col)
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            A[[r, i]] = A[[i, r]]
        piv = int(A[r, c])
        if piv != 1:
            A[r] = A[r] * _inv(piv, p) % p
        other = A[:, c].copy()
        other[r] = 0
        hit = np.flatnonzero(other)
        if hit.size:
            A[hit] = (A[hit] - np.outer(other[hit], A[r])) % p
        pivots.append(c)
        r += 1
    return A, pivots


def _rank_pivots(A: np.ndarray, p: int) -> int:
    # forward elimination only; A is a scratch copy
    rows, cols = A.shape
    r = 0
    for c in range(cols):
        if r == rows:
            break
        col = A[r:, c]
        nz = np.flatnonzero(col)
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            A[[r, i]] = A[[i, r]]
        inv = _inv(A[r, c], p)
        below = A[r + 1 :, c]
        hit = np.flatnonzero(below)
        if hit.size:
            mults = below[hit] * inv % p
            A[r + 1 :][hit, c:] = (A[r + 1 :][hit, c:] - np.outer(mults, A[r, c:])) % p
        r += 1
    return r


def _rank_blocked(A: np.ndarray, p: int) -> int:
    """Blocked LU-style forward elimination in exact float64 arithmetic.

    Panel columns are eliminated per pivot; trailing columns are updated
    once per panel with a matrix product.  With entries in [0, p) and
    p < 2**26 every product sum stays below 2**53, so this is exact.
    """
    F = A.astype(np.float64)
    rows, cols = F.shape
    r = 0
    c0 = 0
    while c0 < cols and r < rows:
        c1 = min(c0 + _PANEL, cols)
        panel = F[r:, c0:c1].copy()
        body = rows - r
        pivcols: list[int] = []
        k = 0
        for c in range(c1 - c0):
            colv = panel[k:, c]
            nz = np.flatnonzero(colv)
            if nz.size == 0:
                continue
            i = k + int(nz[0])
            if i != k:
                panel[[k, i]] = panel[[i, k]]
                F[[r + k, r + i]] = F[[r + i, r + k]]
            inv = float(_inv(int(panel[k, c]), p))
            below = panel[k + 1 :, c]
            hit = np.flatnonzero(below)
            if hit.size:
                mults = np.mod(below[hit] * inv, p)
                panel[k + 1 :, c:][hit] = np.mod(
                    panel[k + 1 :, c:][hit] - np.outer(mults, panel[k, c:]), p
                )
                # remember multipliers for the trailing update
                panel[k + 1 :, c][hit] = mults
            pivcols.append(c)
            k += 1
        if k and c1 < cols:
            pc = np.asarray(pivcols)
            # fix up the pivot rows' trailing columns (forward substitution)
            for j in range(1, k):
                lrow = panel[j, pc[:j]]
                hit = np.flatnonzero(lrow)
                if hit.size:
                    F[r + j, c1:] = np.mod(
                        F[r + j, c1:] - lrow[hit] @ F[r + hit, c1:], p
                    )
            if k < body:
                L = panel[k:, pc]
                F[r + k :, c1:] = np.mod(F[r + k :, c1:] - L @ F[r : r + k, c1:], p)
        r += k
        c0 = c1
    return r


def rank(a, p: int) -> int:
    A = normalize(a, p)
    rows, cols = A.shape
    if rows == 0 or cols == 0:
        return 0
    if min(rows, cols) <= _BLOCK_MIN_DIM or rows * cols <= _BLOCK_MIN_SIZE:
        return _rank_pivots(A.copy(), p)
    return _rank_blocked(A, p)


def kernel_basis(a, p: int) -> np.ndarray:
    """Canonical basis of the right nullspace, one row per basis vector.

    Rows are ordered by the free column they correspond to: row ``t`` has a
    1 in the ``t``-th free column of the RREF and the negated RREF column
    above the pivots elsewhere.  Always returns shape ``(cols - rank, cols)``.
    """
    A = normalize(a, p)
    cols = A.shape[1]
    R, pivots = rref(A, p)
    free = [c for c in range(cols) if c not in set(pivots)]
    ker = np.zeros((len(free), cols), dtype=np.int64)
    for t, f in enumerate(free):
        ker[t, f] = 1
        for i, c in enumerate(pivots):
            v = int(R[i, f])
            if v:
                ker[t, c] = p - v
    return ker


def row_stack(blocks: list[np.ndarray], cols: int) -> np.ndarray:
    """Stack row-basis blocks, tolerating empty ones."""
    blocks = [np.asarray(b, dtype=np.int64).reshape(-1, cols) for b in blocks]
    if not blocks:
        return np.zeros((0, cols), dtype=np.int64)
    return np.vstack(blocks)


def subspace_contains(big, small, p: int) -> bool:
    """Whether rowspace(small) is contained in rowspace(big)."""
    big = normalize(big, p)
    small = normalize(small, p)
    if small.shape[0] == 0:
        return True
    rb = rank(big, p)
    return rank(np.vstack([big, small]), p) == rb


def subspace_equal(u, w, p: int) -> bool:
    u = normalize(u, p)
    w = normalize(w, p)
    ru = rank(u, p)
    rw = rank(w, p)
    if ru != rw:
        return False
    return rank(np.vstack([u, w]), p) == ru


def subspace_intersection(u, w, p: int) -> np.ndarray:
    """Row basis of rowspace(u) ∩ rowspace(w)."""
    u = normalize(u, p)
    w = normalize(w, p)
    if u.shape[1] != w.shape[1]:
        raise ValueError("ambient dimensions differ")
    if u.shape[0] == 0 or w.shape[0] == 0:
        return np.zeros((0, u.shape[1]), dtype=np.int64)
    # pairs (x, y) with x·u + y·w = 0 give intersection vectors x·u
    stacked = np.vstack([u, w]).T
    ker = kernel_basis(stacked, p)
    if ker.shape[0] == 0:
        return np.zeros((0, u.shape[1]), dtype=np.int64)
    xs = ker[:, : u.shape[0]]
    vecs = xs @ u % p
    R, piv = rref(vecs, p)
    return R[: len(piv)]


def quotient_dim(vbasis, wbasis, p: int) -> int:
    """dim(V/W) for row-space bases with W ⊆ V (checked)."""
    V = normalize(vbasis, p)
    W = normalize(wbasis, p)
    rv = rank(V, p)
    rw = rank(W, p)
    if W.shape[0]:
        if rank(np.vstack([V, W]), p) != rv:
            raise ContainmentViolated("W is not contained in V")
    return rv - rw
