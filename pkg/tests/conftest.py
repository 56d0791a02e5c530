"""Shared test helpers: independent oracles kept deliberately naive."""

from __future__ import annotations

import numpy as np


def ff_rank(a, p: int) -> int:
    """Fraction-free Gaussian elimination rank over GF(p).

    Independent oracle: uses cross-multiplication row updates only, never a
    modular inverse, and plain Python lists.
    """
    m = [[int(x) % p for x in row] for row in np.asarray(a, dtype=np.int64)]
    rows = len(m)
    cols = len(m[0]) if rows else 0
    r = 0
    for c in range(cols):
        piv = None
        for i in range(r, rows):
            if m[i][c] % p != 0:
                piv = i
                break
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        a_rc = m[r][c]
        for i in range(r + 1, rows):
            f = m[i][c]
            if f % p == 0:
                continue
            m[i] = [(a_rc * m[i][j] - f * m[r][j]) % p for j in range(cols)]
        r += 1
        if r == rows:
            break
    return r


def random_fp_matrix(rng: np.random.Generator, rows: int, cols: int, p: int,
                     rank_cap: int | None = None) -> np.ndarray:
    """Random matrix, optionally forced to have rank <= rank_cap."""
    if rank_cap is None or rank_cap >= min(rows, cols):
        return rng.integers(0, p, size=(rows, cols), dtype=np.int64)
    left = rng.integers(0, p, size=(rows, rank_cap), dtype=np.int64)
    right = rng.integers(0, p, size=(rank_cap, cols), dtype=np.int64)
    return left @ right % p
