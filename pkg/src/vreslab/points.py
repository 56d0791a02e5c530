"""Finite point sets in P^n x P^m and their bigraded vanishing ideals.

Points are stored with normalized coordinates (first coordinate of each
factor equal to 1), so evaluation of monomials is well defined and the
degreewise kernel of evaluation is automatically the saturated vanishing
ideal piece.  The Hilbert matrix is computed by sweeping the window once,
growing the space of point functions with the diagonal variable actions,
which keeps every elimination at most N rows wide.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .cox import count_monomials, monomials, mult_map, t_binom
from .diffcalc import IntMatrix
from .fp import (
    DEFAULT_PRIME,
    kernel_basis,
    normalize,
    rref,
    row_stack,
    subspace_contains,
    subspace_equal,
    subspace_intersection,
)


class GenericityExhausted(Exception):
    """Raised when resampling cannot reach a generic configuration."""


class WindowTooSmall(Exception):
    """Raised when a window cannot certify the property asked about."""


class PreconditionT(Exception):
    """Raised when t is below the fiber bound required by a construction."""


@dataclass
class PointSet:
    """N distinct normalized points; xs is N x (n+1), ys is N x (m+1)."""

    n: int
    m: int
    p: int
    xs: np.ndarray
    ys: np.ndarray
    seed: int | None = None
    rejections: int = field(default=0, compare=False)

    def __post_init__(self) -> None:
        self.xs = normalize(self.xs, self.p)
        self.ys = normalize(self.ys, self.p)
        if self.xs.shape[1] != self.n + 1 or self.ys.shape[1] != self.m + 1:
            raise ValueError("coordinate widths do not match n, m")
        if self.xs.shape[0] != self.ys.shape[0] or self.xs.shape[0] == 0:
            raise ValueError("need matching nonempty coordinate arrays")
        if np.any(self.xs[:, 0] != 1) or np.any(self.ys[:, 0] != 1):
            raise ValueError("points must be normalized (leading coordinate 1)")
        seen = set()
        for a, b in zip(map(tuple, self.xs), map(tuple, self.ys)):
            if (a, b) in seen:
                raise ValueError("points must be pairwise distinct")
            seen.add((a, b))

    @property
    def N(self) -> int:
        return self.xs.shape[0]

    def coordinate_values(self, var: int) -> np.ndarray:
        """Values of one ring variable at all points (a length-N vector)."""
        if var <= self.n:
            return self.xs[:, var]
        return self.ys[:, var - self.n - 1]

    def subset(self, indices) -> "PointSet":
        idx = list(indices)
        return PointSet(self.n, self.m, self.p, self.xs[idx], self.ys[idx])

    def to_json(self) -> str:
        payload = {
            "n": self.n,
            "m": self.m,
            "p": self.p,
            "seed": self.seed,
            "points": [
                [list(map(int, a)), list(map(int, b))]
                for a, b in zip(self.xs, self.ys)
            ],
        }
        return json.dumps(payload, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "PointSet":
        data = json.loads(text)
        xs = [pt[0] for pt in data["points"]]
        ys = [pt[1] for pt in data["points"]]
        return cls(data["n"], data["m"], data["p"], np.array(xs), np.array(ys),
                   seed=data.get("seed"))


def min_cover_degree(N: int, b: int) -> int:
    """Smallest r with t_binom(r, b) >= N."""
    r = 0
    while t_binom(r, b) < N:
        r += 1
    return r


def hilbert_window(N: int, n: int, m: int) -> tuple[int, int]:
    return N + n, min_cover_degree(N, m) + m + 1


def betti_window(N: int, n: int, m: int) -> tuple[int, int]:
    return N + n, min_cover_degree(N, m) + m + 2


def random_points(n: int, m: int, N: int, seed: int, p: int = DEFAULT_PRIME,
                  require_generic: bool = False,
                  window: tuple[int, int] | None = None,
                  max_rejects: int = 100) -> PointSet:
    """Draw N distinct normalized points from a seeded PRNG stream.

    With ``require_generic`` the whole set is redrawn until its Hilbert
    matrix is generic on the given (default) window; the number of rejected
    sets is recorded on the result.
    """
    if N < 1:
        raise ValueError("N must be positive")
    if p <= N:
        raise ValueError("field too small for N distinct points")
    rng = np.random.default_rng(np.random.PCG64(seed))

    def draw() -> PointSet:
        seen: set[tuple] = set()
        xs, ys = [], []
        while len(xs) < N:
            coords = rng.integers(0, p, size=n + m, dtype=np.int64)
            key = tuple(int(c) for c in coords)
            if key in seen:
                continue
            seen.add(key)
            xs.append([1] + list(coords[:n]))
            ys.append([1] + list(coords[n:]))
        return PointSet(n, m, p, np.array(xs), np.array(ys), seed=seed)

    rejects = 0
    while True:
        ps = draw()
        if not require_generic or is_generic_hilbert(ps, window):
            ps.rejections = rejects
            return ps
        rejects += 1
        if rejects >= max_rejects:
            raise GenericityExhausted(
                f"no generic configuration after {max_rejects} draws")


def evaluation_matrix(ps: PointSet, degree: tuple[int, int]) -> np.ndarray:
    """N x dim S_(i,j) matrix of monomial values at the points."""
    basis = monomials(ps.n, ps.m, degree)
    exps = basis.array()
    out = np.ones((ps.N, len(basis)), dtype=np.int64)
    for var in range(ps.n + ps.m + 2):
        col = exps[:, var]
        top = int(col.max()) if col.size else 0
        if top == 0:
            continue
        powers = np.ones((ps.N, top + 1), dtype=np.int64)
        vals = ps.coordinate_values(var)
        for e in range(1, top + 1):
            powers[:, e] = powers[:, e - 1] * vals % ps.p
        out = out * powers[:, col] % ps.p
    return out


def ideal_piece(ps: PointSet, degree: tuple[int, int]) -> np.ndarray:
    """Row basis of the (i,j) piece of the vanishing ideal."""
    return kernel_basis(evaluation_matrix(ps, degree), ps.p)


@dataclass
class FunctionSpaces:
    """Evaluation images of every window piece, as subspaces of k^N.

    ``bases[(i, j)]`` is an RREF row basis of the functions obtained by
    evaluating S_(i,j); ``pivots[(i, j)]`` are its pivot columns, so the
    coordinates of a member function are just its values at the pivots.
    """

    window: tuple[int, int]
    dims: np.ndarray
    bases: dict[tuple[int, int], np.ndarray]
    pivots: dict[tuple[int, int], np.ndarray]


def function_space_bases(ps: PointSet, window: tuple[int, int],
                         base_row: int = 0) -> FunctionSpaces:
    """Sweep the window, growing evaluation images by variable action.

    For i > base_row the (i,j) space is spanned by the x-variable actions on
    the (i-1,j) space; along the base row the y-variables act on (i, j-1).
    Row ``base_row`` is seeded from an explicit evaluation matrix.
    """
    wi, wj = window
    p = ps.p
    xvals = [ps.xs[:, a] for a in range(ps.n + 1)]
    yvals = [ps.ys[:, b] for b in range(ps.m + 1)]
    dims = np.zeros((wi + 1, wj + 1), dtype=np.int64)
    bases: dict[tuple[int, int], np.ndarray] = {}
    pivots: dict[tuple[int, int], np.ndarray] = {}

    def put(i: int, j: int, rows: np.ndarray) -> None:
        R, piv = rref(rows, p)
        basis = R[: len(piv)]
        bases[(i, j)] = basis
        pivots[(i, j)] = np.asarray(piv, dtype=np.int64)
        dims[i, j] = len(piv)

    for j in range(wj + 1):
        if base_row == 0 and j == 0:
            seed_rows = np.ones((1, ps.N), dtype=np.int64)
        elif base_row == 0:
            prev = bases[(0, j - 1)]
            seed_rows = row_stack([prev * v % p for v in yvals], ps.N)
        else:
            seed_rows = evaluation_matrix(ps, (base_row, j)).T
        put(base_row, j, seed_rows)
    for i in range(base_row + 1, wi + 1):
        for j in range(wj + 1):
            prev = bases[(i - 1, j)]
            put(i, j, row_stack([prev * v % p for v in xvals], ps.N))
    return FunctionSpaces((wi, wj), dims, bases, pivots)


def hilbert_matrix(ps: PointSet, window: tuple[int, int]) -> IntMatrix:
    """Values rank(evaluation) on the window."""
    return IntMatrix(function_space_bases(ps, window).dims)


def generic_hilbert_matrix(N: int, n: int, m: int,
                           window: tuple[int, int]) -> IntMatrix:
    """min{N, dim S_(i,j)} on the window."""
    wi, wj = window
    vals = np.empty((wi + 1, wj + 1), dtype=np.int64)
    for i in range(wi + 1):
        for j in range(wj + 1):
            vals[i, j] = min(N, t_binom(i, n) * t_binom(j, m))
    return IntMatrix(vals)


def is_generic_hilbert(ps: PointSet, window: tuple[int, int] | None = None) -> bool:
    """Whether the Hilbert matrix attains the generic values on the window."""
    if window is None:
        window = hilbert_window(ps.N, ps.n, ps.m)
    wi, wj = window
    if t_binom(wi, ps.n) * t_binom(wj, ps.m) < ps.N:
        raise WindowTooSmall("window corner cannot reach the point count")
    return hilbert_matrix(ps, window) == generic_hilbert_matrix(ps.N, ps.n, ps.m, window)


@dataclass(frozen=True)
class Pi1Fibration:
    """Grouping of the points by their first-factor image."""

    ell: int
    fiber_sizes: tuple[int, ...]
    fibers: tuple[tuple[tuple[int, ...], tuple[int, ...]], ...]


def pi1_fibers(ps: PointSet) -> Pi1Fibration:
    order: list[tuple[int, ...]] = []
    members: dict[tuple[int, ...], list[int]] = {}
    for idx, row in enumerate(map(tuple, ps.xs)):
        if row not in members:
            members[row] = []
            order.append(row)
        members[row].append(idx)
    fibers = tuple((xv, tuple(members[xv])) for xv in order)
    return Pi1Fibration(len(order), tuple(len(members[xv]) for xv in order), fibers)


def intersected_piece(ps: PointSet, t: int, degree: tuple[int, int]) -> np.ndarray:
    """The (i,j) piece of I_X intersected with the t-th power of <x>.

    For i >= t this is the whole ideal piece; below the threshold it is zero.
    """
    if t < 0:
        raise ValueError("t must be nonnegative")
    i, j = degree
    if i >= t:
        return ideal_piece(ps, degree)
    return np.zeros((0, count_monomials(ps.n, ps.m, degree)), dtype=np.int64)


def y0_nonzerodivisor(ps: PointSet, window: tuple[int, int]) -> bool:
    """Degreewise injectivity of multiplication by y_0 on S/I_X.

    Checked via the monomial route: the preimage of the ideal under y_0
    must be no larger than the ideal itself.
    """
    y0 = ps.n + 1
    wi, wj = window
    for i in range(wi + 1):
        for j in range(1, wj + 1):
            src_ideal = ideal_piece(ps, (i, j - 1))
            tgt_ideal = ideal_piece(ps, (i, j))
            embed = mult_map(y0, (i, j - 1), ps.n, ps.m).T
            overlap = subspace_intersection(embed, tgt_ideal, ps.p)
            if overlap.shape[0] != src_ideal.shape[0]:
                return False
    return True


def _with_y0(rows: np.ndarray, ps: PointSet, degree: tuple[int, int]) -> np.ndarray:
    """Rows of a piece of <J, y0>: J_(i,j) plus y0 * S_(i,j-1)."""
    i, j = degree
    cols = count_monomials(ps.n, ps.m, degree)
    blocks = [rows]
    if j >= 1:
        blocks.append(mult_map(ps.n + 1, (i, j - 1), ps.n, ps.m).T)
    return row_stack(blocks, cols)


def decomposition_check(ps: PointSet, t: int, window: tuple[int, int],
                        allow_small_t: bool = False,
                        containment_only: bool = False) -> bool:
    """Degreewise primary-decomposition identity for I_X ∩ <x>^t.

    Compares, in every window bidegree, the piece of <I_X ∩ <x>^t, y0> with
    the intersection of the pieces of <I_{X_k}, y0> over the fibers of the
    first-projection and of <<x>^t, y0>.  With ``containment_only`` just the
    left-to-right containment is verified, which holds for every t >= 0.
    """
    fib = pi1_fibers(ps)
    if not allow_small_t and not containment_only and t < fib.ell - 1:
        raise PreconditionT(f"t={t} below fiber bound ell-1={fib.ell - 1}")
    fiber_sets = [ps.subset(idx) for _, idx in fib.fibers]
    wi, wj = window
    for i in range(wi + 1):
        for j in range(wj + 1):
            d = (i, j)
            cols = count_monomials(ps.n, ps.m, d)
            lhs = _with_y0(intersected_piece(ps, t, d), ps, d)
            components = [
                _with_y0(ideal_piece(fs, d), ps, d) for fs in fiber_sets
            ]
            if i < t:
                # the power-ideal component has an empty degree piece here
                components.append(_with_y0(np.zeros((0, cols), dtype=np.int64), ps, d))
            if containment_only:
                if not all(subspace_contains(c, lhs, ps.p) for c in components):
                    return False
                continue
            meet = components[0]
            for c in components[1:]:
                meet = subspace_intersection(meet, c, ps.p)
            if not subspace_equal(meet, lhs, ps.p):
                return False
    return True
