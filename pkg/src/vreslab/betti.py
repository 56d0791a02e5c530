"""Bigraded Betti numbers of cyclic modules via windowed Koszul homology.

For a module piece grid M_(i,j) with multiplication maps, the strand of the
Koszul complex on all n+m+2 variables at bidegree d has terms
K_k = direct sum over k-subsets T of M_(d - deg T); its homology dimensions
are the Betti numbers beta_{k,d}.  Every piece is at most N-dimensional for
point modules, so the table costs a sweep of small dense ranks.

Three certificates let the engine skip cells without rank work:
  * all referenced pieces have the free dimensions -> the strand is
    isomorphic to the strand of S itself, which is exact away from the
    origin;
  * multiplication by x0 is an isomorphism on every piece the contracting
    homotopy touches (checked through dimensions, valid when the
    presentation guarantees x0-maps are injective or surjective) -> the
    identity of the strand is null-homotopic;
  * n = 1 only: each fixed y-subset column of the strand is a two-variable
    Koszul strand; x0-injectivity kills its top homology, joint
    x-surjectivity (automatic for cyclic quotients in positive x-degree)
    kills its bottom, and a vanishing second difference of dimensions kills
    the middle by counting.  Exact columns force an exact total complex.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .cox import count_monomials, mult_map, t_binom, var_degree
from .diffcalc import IntMatrix, dh_p1p2
from .fp import rank, row_stack, rref, subspace_contains
from .points import (
    PointSet,
    evaluation_matrix,
    function_space_bases,
    generic_hilbert_matrix,
    min_cover_degree,
)


class ClosureViolated(Exception):
    """Degreewise pieces are not closed under variable multiplication."""


class DirtyBoundary(Exception):
    """The window boundary carries entries, so global reads are unsafe."""


@dataclass
class GradedModulePresentation:
    """Finite window of pieces of a cyclic bigraded module with its maps.

    ``map(var, d)`` returns the matrix of multiplication by a variable from
    the piece at d to the piece at d + deg(var), in the chosen bases
    (target dim x source dim).  Maps are built lazily and memoized.

    ``x0_iso_when_dims_equal`` certifies every x0-map in the window is
    injective or surjective; ``x0_injective`` certifies injectivity.  Both
    gate the skip certificates above, never the honest computation.
    """

    n: int
    m: int
    p: int
    window: tuple[int, int]
    dims: np.ndarray
    x0_injective: bool = False
    x0_iso_when_dims_equal: bool = False
    _builder: object = field(default=None, repr=False)
    _maps: dict = field(default_factory=dict, repr=False)

    def dim(self, d: tuple[int, int]) -> int:
        i, j = d
        if i < 0 or j < 0:
            return 0
        if i > self.window[0] or j > self.window[1]:
            raise IndexError(f"piece {d} outside window {self.window}")
        return int(self.dims[i, j])

    def map(self, var: int, d: tuple[int, int]) -> np.ndarray:
        key = (var, d)
        if key not in self._maps:
            self._maps[key] = self._builder(var, d)
        return self._maps[key]


def point_presentation(ps: PointSet, window: tuple[int, int]) -> GradedModulePresentation:
    """S/I_X on the window, pieces realized as point-function spaces.

    Multiplication by a variable is pointwise multiplication by its values,
    so x0 and y0 act as inclusions; every variable map is coordinatized by
    reading values at the target pivots.
    """
    fs = function_space_bases(ps, window)
    p = ps.p

    def build(var: int, d: tuple[int, int]) -> np.ndarray:
        dv = var_degree(var, ps.n, ps.m)
        tgt = (d[0] + dv[0], d[1] + dv[1])
        V = fs.bases[d]
        piv = fs.pivots[tgt]
        moved = V * ps.coordinate_values(var) % p
        return moved[:, piv].T.copy()

    return GradedModulePresentation(
        ps.n, ps.m, p, window, fs.dims.copy(),
        x0_injective=True, x0_iso_when_dims_equal=True, _builder=build)


def intersected_presentation(ps: PointSet, t: int,
                             window: tuple[int, int]) -> GradedModulePresentation:
    """S/(I_X ∩ <x>^t) on the window.

    Pieces with i < t are free (monomial bases); pieces with i >= t are the
    point-function spaces; the only mixed maps are the x-variable crossings
    from row t-1 into row t, realized by evaluating source monomials.
    """
    if t < 0:
        raise ValueError("t must be nonnegative")
    fs = function_space_bases(ps, window)
    p = ps.p
    wi, wj = window
    dims = fs.dims.copy()
    for i in range(min(t, wi + 1)):
        for j in range(wj + 1):
            dims[i, j] = t_binom(i, ps.n) * t_binom(j, ps.m)

    def build(var: int, d: tuple[int, int]) -> np.ndarray:
        dv = var_degree(var, ps.n, ps.m)
        tgt = (d[0] + dv[0], d[1] + dv[1])
        if tgt[0] < t:
            return mult_map(var, d, ps.n, ps.m)
        if d[0] >= t:
            V = fs.bases[d]
            piv = fs.pivots[tgt]
            moved = V * ps.coordinate_values(var) % p
            return moved[:, piv].T.copy()
        # crossing: evaluate each source monomial times the variable
        E = evaluation_matrix(ps, d)
        piv = fs.pivots[tgt]
        moved = E * ps.coordinate_values(var)[:, None] % p
        return moved[piv, :].copy()

    # x0 crossing maps from row t-1 have kernel I_(t-1,j) and image of
    # dimension H(t-1,j); both facts are visible in the sweep dims
    inj, iso_ok = True, True
    if 1 <= t <= wi:
        for j in range(wj + 1):
            full = t_binom(t - 1, ps.n) * t_binom(j, ps.m)
            injective = fs.dims[t - 1, j] == full
            surjective = fs.dims[t - 1, j] == fs.dims[t, j]
            inj = inj and injective
            iso_ok = iso_ok and (injective or surjective)
    return GradedModulePresentation(
        ps.n, ps.m, p, window, dims,
        x0_injective=inj, x0_iso_when_dims_equal=iso_ok, _builder=build)


def ideal_pieces_from_generators(gens, n: int, m: int, p: int,
                                 window: tuple[int, int]) -> dict:
    """Degreewise bases of the ideal generated by explicit forms.

    ``gens`` is a list of (degree, rows) with rows = coefficient vectors in
    the monomial basis of that degree.  Pieces are grown along the window by
    multiplying lower pieces into each bidegree.
    """
    wi, wj = window
    explicit: dict[tuple[int, int], list[np.ndarray]] = {}
    for d, rows in gens:
        explicit.setdefault(tuple(d), []).append(np.atleast_2d(np.asarray(rows)))
    pieces: dict[tuple[int, int], np.ndarray] = {}
    for i in range(wi + 1):
        for j in range(wj + 1):
            cols = count_monomials(n, m, (i, j))
            blocks = list(explicit.get((i, j), []))
            if i > 0 and pieces[(i - 1, j)].size:
                prev = pieces[(i - 1, j)]
                for v in range(n + 1):
                    blocks.append((mult_map(v, (i - 1, j), n, m) @ prev.T % p).T)
            if j > 0 and pieces[(i, j - 1)].size:
                prev = pieces[(i, j - 1)]
                for v in range(n + 1, n + m + 2):
                    blocks.append((mult_map(v, (i, j - 1), n, m) @ prev.T % p).T)
            stacked = row_stack(blocks, cols)
            R, piv = rref(stacked, p)
            pieces[(i, j)] = R[: len(piv)]
    return pieces


def quotient_presentation(pieces: dict, n: int, m: int, p: int,
                          window: tuple[int, int],
                          validate: bool = True) -> GradedModulePresentation:
    """S/J from degreewise ideal bases, via standard-monomial cosets.

    The quotient basis at each bidegree is the set of non-pivot monomials of
    the RREF'd ideal piece; multiplication maps multiply a standard monomial
    and reduce modulo the target piece.
    """
    wi, wj = window
    rrefs: dict[tuple[int, int], tuple[np.ndarray, np.ndarray, np.ndarray]] = {}
    dims = np.zeros((wi + 1, wj + 1), dtype=np.int64)
    for i in range(wi + 1):
        for j in range(wj + 1):
            cols = count_monomials(n, m, (i, j))
            raw = pieces.get((i, j))
            if raw is None or np.asarray(raw).size == 0:
                raw = np.zeros((0, cols), dtype=np.int64)
            R, piv = rref(np.asarray(raw), p)
            R = R[: len(piv)]
            piv = np.asarray(piv, dtype=np.int64)
            free = np.setdiff1d(np.arange(cols), piv)
            rrefs[(i, j)] = (R, piv, free)
            dims[i, j] = len(free)
    if validate:
        for i in range(wi + 1):
            for j in range(wj + 1):
                R = rrefs[(i, j)][0]
                if not R.size:
                    continue
                for var in range(n + m + 2):
                    dv = var_degree(var, n, m)
                    ti, tj = i + dv[0], j + dv[1]
                    if ti > wi or tj > wj:
                        continue
                    moved = (mult_map(var, (i, j), n, m) @ R.T % p).T
                    if not subspace_contains(rrefs[(ti, tj)][0], moved, p):
                        raise ClosureViolated(f"piece ({i},{j}) times var {var}")

    def build(var: int, d: tuple[int, int]) -> np.ndarray:
        dv = var_degree(var, n, m)
        tgt = (d[0] + dv[0], d[1] + dv[1])
        _, _, free_src = rrefs[d]
        R_tgt, piv_tgt, free_tgt = rrefs[tgt]
        M = mult_map(var, d, n, m)[:, free_src]
        if R_tgt.size:
            M = (M - R_tgt.T @ M[piv_tgt, :]) % p
        return M[free_tgt, :]

    return GradedModulePresentation(n, m, p, window, dims, _builder=build)


@dataclass
class BettiTable:
    """Sparse bigraded Betti numbers beta_{k,(i,j)} over a window."""

    n: int
    m: int
    window: tuple[int, int]
    entries: dict
    kmax: int
    boundary_clean: bool

    def beta(self, k: int, i: int, j: int) -> int:
        return self.entries.get((k, i, j), 0)

    def layer(self, k: int) -> dict:
        return {(i, j): b for (kk, i, j), b in self.entries.items() if kk == k}

    def max_stage(self) -> int:
        return max((k for (k, _, _) in self.entries), default=0)

    def total_by_stage(self) -> tuple:
        tops = self.max_stage()
        totals = [0] * (tops + 1)
        for (k, _, _), b in self.entries.items():
            totals[k] += b
        return tuple(totals)

    def signed_collapse(self) -> IntMatrix:
        wi, wj = self.window
        vals = np.zeros((wi + 1, wj + 1), dtype=np.int64)
        for (k, i, j), b in self.entries.items():
            vals[i, j] += (-1) ** k * b
        return IntMatrix(vals)

    def to_json(self) -> str:
        rows = [{"k": k, "i": i, "j": j, "beta": b}
                for (k, i, j), b in sorted(self.entries.items())]
        return json.dumps({"n": self.n, "m": self.m,
                           "window": list(self.window), "kmax": self.kmax,
                           "boundary_clean": self.boundary_clean,
                           "entries": rows}, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "BettiTable":
        data = json.loads(text)
        entries = {(r["k"], r["i"], r["j"]): r["beta"] for r in data["entries"]}
        return cls(data["n"], data["m"], tuple(data["window"]), entries,
                   data["kmax"], data["boundary_clean"])


def _subset_degree(T, n, m):
    a = sum(1 for v in T if v <= n)
    return a, len(T) - a


def _cert_free_strand(pres, d) -> bool:
    i, j = d
    for a in range(pres.n + 2):
        for b in range(pres.m + 2):
            ii, jj = i - a, j - b
            if ii < 0 or jj < 0:
                continue
            if pres.dims[ii, jj] != t_binom(ii, pres.n) * t_binom(jj, pres.m):
                return False
    return True


def _cert_x0_contraction(pres, d) -> bool:
    i, j = d
    for a in range(pres.n + 1):
        for b in range(pres.m + 2):
            jj = j - b
            if jj < 0:
                continue
            lo = pres.dims[i - 1 - a, jj] if i - 1 - a >= 0 else 0
            hi = pres.dims[i - a, jj] if i - a >= 0 else 0
            if lo != hi:
                return False
    return True


def _cert_exact_x_columns(pres, d) -> bool:
    i, j = d
    if pres.n != 1 or i < 1:
        return False
    for b in range(pres.m + 2):
        jj = j - b
        if jj < 0:
            continue
        d0 = pres.dims[i, jj]
        d1 = pres.dims[i - 1, jj] if i >= 1 else 0
        d2 = pres.dims[i - 2, jj] if i >= 2 else 0
        if d0 - 2 * d1 + d2 != 0:
            return False
    return True


def _strand_snapshot(pres, d, k):
    """Summands of K_k at d: (subset, piece degree, dim, offset)."""
    nvars = pres.n + pres.m + 2
    out = []
    offset = 0
    for T in combinations(range(nvars), k):
        a, b = _subset_degree(T, pres.n, pres.m)
        piece = (d[0] - a, d[1] - b)
        dim = pres.dim(piece)
        if dim:
            out.append((T, piece, dim, offset))
            offset += dim
    return out, offset


def _betti_cell(pres, d, kmax) -> dict:
    """Honest Koszul strand homology at one bidegree."""
    p = pres.p
    summands = {}
    dims = {}
    for k in range(kmax + 2):
        summands[k], dims[k] = _strand_snapshot(pres, d, k)
    ranks = {0: 0}
    for k in range(1, kmax + 2):
        src, tgt = summands[k], summands[k - 1]
        if not src or not tgt:
            ranks[k] = 0
            continue
        row_of = {T: (piece, dim, off) for T, piece, dim, off in tgt}
        mat = np.zeros((dims[k - 1], dims[k]), dtype=np.int64)
        for T, piece, dim, off in src:
            for pos, v in enumerate(T):
                U = T[:pos] + T[pos + 1:]
                if U not in row_of:
                    continue  # facet lands in a zero piece: zero block
                _, udim, uoff = row_of[U]
                block = pres.map(v, piece) % p
                if pos % 2:
                    block = (p - block) % p
                mat[uoff:uoff + udim, off:off + dim] = block
        ranks[k] = rank(mat, p)
    out = {}
    for k in range(kmax + 1):
        beta = dims.get(k, 0) - ranks.get(k, 0) - ranks.get(k + 1, 0)
        if beta:
            out[k] = beta
    return out


def betti_numbers(pres: GradedModulePresentation,
                  region: tuple[int, int] | None = None,
                  kmax: int | None = None,
                  certificates: bool = True) -> BettiTable:
    """Betti table of the presented module on the region (default window).

    boundary_clean records whether the outermost strip of the region is free
    of entries; when it is not, global reads (projective dimension, shape
    totals) are unreliable and callers should enlarge the window.
    """
    wi, wj = region if region is not None else pres.window
    if wi > pres.window[0] or wj > pres.window[1]:
        raise IndexError("region exceeds presentation window")
    if kmax is None:
        kmax = pres.n + pres.m + 2
    entries = {}
    for i in range(wi + 1):
        for j in range(wj + 1):
            d = (i, j)
            if certificates:
                if _cert_free_strand(pres, d):
                    if d == (0, 0) and pres.dim(d) == 1:
                        entries[(0, 0, 0)] = 1
                    continue
                if pres.x0_iso_when_dims_equal and _cert_x0_contraction(pres, d):
                    continue
                if pres.x0_injective and _cert_exact_x_columns(pres, d):
                    continue
            for k, beta in _betti_cell(pres, d, kmax).items():
                entries[(k, i, j)] = beta
    clean = not any(i == wi or j == wj for (_, i, j) in entries)
    return BettiTable(pres.n, pres.m, (wi, wj), entries, kmax, clean)


def pdim(bt: BettiTable) -> int:
    if not bt.boundary_clean:
        raise DirtyBoundary("entries touch the window boundary")
    return bt.max_stage()


def betti_window(N: int, n: int, m: int) -> tuple[int, int]:
    return N + n, min_cover_degree(N, m) + m + 2


def beta1_table(ps: PointSet, window: tuple[int, int]) -> dict:
    """Minimal generator counts of I_X by bidegree (k=1 Betti layer)."""
    pres = point_presentation(ps, window)
    return betti_numbers(pres, kmax=1).layer(1)


def beta1_from_ideal(ps: PointSet, d: tuple[int, int]) -> int:
    """Independent generator count: dim I_d minus dim of (S_1 * I)_d."""
    from .points import ideal_piece

    i, j = d
    cols = count_monomials(ps.n, ps.m, d)
    blocks = []
    for var in range(ps.n + ps.m + 2):
        dv = var_degree(var, ps.n, ps.m)
        src = (i - dv[0], j - dv[1])
        if src[0] < 0 or src[1] < 0:
            continue
        K = ideal_piece(ps, src)
        if K.size:
            blocks.append((mult_map(var, src, ps.n, ps.m) @ K.T % ps.p).T)
    moved = row_stack(blocks, cols)
    return ideal_piece(ps, d).shape[0] - rank(moved, ps.p)


@dataclass
class MrcReport:
    """Per-cell comparison of beta_1 against the difference-matrix reading."""

    window: tuple[int, int]
    generic: bool
    passed: bool
    predicted: dict
    beta1: dict
    mismatches: list


def mrc_window(N: int) -> tuple[int, int]:
    return N + 1, min_cover_degree(N, 2) + 1


def mrc_check(ps: PointSet, window: tuple[int, int] | None = None) -> MrcReport:
    """Check that beta_1 of I_X is read off the first negative entries of DH.

    Positivity of beta_1 at (i,j) is predicted exactly when DH(i,j) < 0 and
    no cell of the downset except the origin is positive; the predicted
    value is -DH(i,j).  Requires the generic Hilbert matrix; a non-generic
    set short-circuits with generic=False.
    """
    if (ps.n, ps.m) != (1, 2):
        raise ValueError("difference-matrix reading is specific to n=1, m=2")
    if window is None:
        window = mrc_window(ps.N)
    wi, wj = window
    pres = point_presentation(ps, window)
    H = IntMatrix(pres.dims)
    if H != generic_hilbert_matrix(ps.N, 1, 2, window):
        return MrcReport(window, False, False, {}, {}, [])
    dh = dh_p1p2(H).values
    pos_running = np.full((wi + 1, wj + 1), -(10 ** 9), dtype=np.int64)
    predicted = {}
    for i in range(wi + 1):
        for j in range(wj + 1):
            val = dh[i, j] if (i, j) != (0, 0) else 0
            best = val
            if i:
                best = max(best, pos_running[i - 1, j])
            if j:
                best = max(best, pos_running[i, j - 1])
            pos_running[i, j] = best
            if (i, j) != (0, 0) and dh[i, j] < 0 and best <= 0:
                predicted[(i, j)] = -int(dh[i, j])
    b1 = betti_numbers(pres, kmax=1).layer(1)
    mismatches = []
    for i in range(wi + 1):
        for j in range(wj + 1):
            if (i, j) == (0, 0):
                continue
            want = predicted.get((i, j), 0)
            got = b1.get((i, j), 0)
            if (got > 0) != (want > 0) or (want > 0 and got != want):
                mismatches.append({"cell": (i, j), "dh": int(dh[i, j]),
                                   "predicted": want, "beta1": got})
    return MrcReport(window, True, not mismatches, predicted, b1, mismatches)
