"""Directed-edge matrices over a graph: the non-backtracking operator,
its powers, and the derived step matrices the counting formulas consume.

All matrices are scipy CSR with int64 entries and are indexed by directed
edge ids (edge k yields ids 2k and 2k+1; reversal flips the low bit).
Counting formulas must stay exact, so products and reductions go through
checked wrappers that bound the result magnitude before computing and
raise IntegrityError instead of silently wrapping around.
"""

from __future__ import annotations

import numpy as np
import scipy.sparse as sp

from .graphs import DirectedEdgeIndex, Graph

INT64_GUARD = 2 ** 62


class IntegrityError(RuntimeError):
    """An exact-arithmetic guarantee would break (overflow or bad division)."""


def _max_abs(M) -> int:
    if sp.issparse(M):
        return int(np.abs(M.data).max()) if M.nnz else 0
    arr = np.asarray(M)
    return int(np.abs(arr).max()) if arr.size else 0


def checked_matmul(A, B, label: str, stats: dict | None = None):
    """Sparse product A @ B with an a-priori magnitude bound.

    |(AB)_ij| <= min(max|A| * max column sum of |B|,
                     max|B| * max row sum of |A|);
    if that bound reaches the int64 guard the formula is refused rather
    than evaluated wrongly.
    """
    a_max, b_max = _max_abs(A), _max_abs(B)
    if a_max and b_max:
        row_sum = int(np.abs(A).sum(axis=1).max())
        col_sum = int(np.abs(B).sum(axis=0).max())
        bound = min(a_max * col_sum, b_max * row_sum)
        if bound >= INT64_GUARD:
            raise IntegrityError(
                f"{label}: product magnitude bound {bound} exceeds int64 guard")
    out = A @ B
    if stats is not None and sp.issparse(out):
        stats["peak_product_nnz"] = max(stats.get("peak_product_nnz", 0), out.nnz)
    return out


def checked_hadamard(A, B, label: str):
    """Entrywise product with the same overflow discipline."""
    if _max_abs(A) * _max_abs(B) >= INT64_GUARD:
        raise IntegrityError(f"{label}: entrywise product exceeds int64 guard")
    return A.multiply(B).tocsr() if sp.issparse(A) else A * B


def checked_total(M, label: str) -> int:
    """Sum of all entries, refused if the int64 accumulator could wrap.

    Works on sparse matrices and plain arrays. The bound is a float
    estimate of the absolute entry total with a small safety margin,
    which still leaves a factor of two below the signed 64-bit limit.
    """
    data = M.data if sp.issparse(M) else np.asarray(M).ravel()
    if data.size == 0:
        return 0
    est = float(np.abs(data).astype(np.float64).sum())
    if est * 1.000001 >= float(INT64_GUARD):
        raise IntegrityError(f"{label}: entry total near the int64 guard")
    return int(data.sum())


def exact_div(x, d: int, label: str):
    """Integer division that must leave no remainder; arrays or scalars."""
    if d <= 0:
        raise ValueError("divisor must be positive")
    if sp.issparse(x):
        x = np.asarray(x.todense())
    if isinstance(x, np.ndarray):
        if np.any(x % d):
            raise IntegrityError(f"{label}: value not divisible by {d}")
        return x // d
    x = int(x)
    if x % d:
        raise IntegrityError(f"{label}: value {x} not divisible by {d}")
    return x // d


def binom2(v):
    return v * (v - 1) // 2


def binom3(v):
    return v * (v - 1) * (v - 2) // 6


def nonbacktracking_matrix(index: DirectedEdgeIndex) -> sp.csr_matrix:
    """B[e, f] = 1 iff f starts where e ends and f is not e reversed."""
    rows, cols = [], []
    for e in range(index.size):
        rev_e = e ^ 1
        for f in index.out_ids[index.head[e]]:
            if f != rev_e:
                rows.append(e)
                cols.append(f)
    data = np.ones(len(rows), dtype=np.int64)
    return sp.csr_matrix((data, (rows, cols)),
                         shape=(index.size, index.size), dtype=np.int64)


class EdgeSpace:
    """Shared home of B, its small powers, and the derived step matrices.

    Everything is computed lazily and cached; the caller usually keeps one
    EdgeSpace per graph and lets the formulas pull what they need.
    """

    def __init__(self, graph: Graph, index: DirectedEdgeIndex | None = None):
        self.graph = graph
        self.index = index if index is not None else DirectedEdgeIndex(graph)
        self.rev = np.arange(self.index.size, dtype=np.int64) ^ 1
        self.stats: dict = {"peak_product_nnz": 0}
        self._cache: dict = {}

    @property
    def size(self) -> int:
        return self.index.size

    # -- reversal conjugations ------------------------------------------

    def rowrev(self, M):
        """Row reversal: entry (e, f) becomes (rev e, f)."""
        return M[self.rev, :] if sp.issparse(M) else np.asarray(M)[self.rev]

    def colrev(self, M):
        """Column reversal: entry (e, f) becomes (e, rev f)."""
        return M[:, self.rev]

    def revvec(self, v):
        return np.asarray(v)[self.rev]

    # -- powers ----------------------------------------------------------

    def _get(self, key, build):
        val = self._cache.get(key)
        if val is None:
            val = build()
            self._cache[key] = val
        return val

    @property
    def B(self) -> sp.csr_matrix:
        return self._get("B", lambda: nonbacktracking_matrix(self.index))

    def power(self, k: int) -> sp.csr_matrix:
        """B^k for 1 <= k <= 4; higher powers only via the trace helpers."""
        if not 1 <= k <= 4:
            raise ValueError("only powers 1..4 are materialized")
        if k == 1:
            return self.B
        return self._get(
            ("pow", k),
            lambda: checked_matmul(self.power(k - 1), self.B, f"B^{k}",
                                   self.stats))

    # -- derived step matrices ------------------------------------------

    @property
    def triangle_step(self) -> sp.csr_matrix:
        """Two-steps closed into a triangle by the reverse single step."""
        return self._get("triangle_step", lambda: checked_hadamard(
            self.power(2), self.B.T.tocsr(), "triangle_step"))

    @property
    def wedge_step(self) -> sp.csr_matrix:
        """Two-steps whose endpoints do not bound a triangle."""
        return self._get("wedge_step",
                         lambda: (self.power(2) - self.triangle_step).tocsr())

    @property
    def square_step(self) -> sp.csr_matrix:
        """Two-steps matched by a reverse two-step: opposite sides of a square."""
        return self._get("square_step", lambda: checked_hadamard(
            self.power(2), self.power(2).T.tocsr(), "square_step"))

    @property
    def crossed_square_step(self) -> sp.csr_matrix:
        """Square steps whose reversed exit also closes a square (K4 marker)."""
        return self._get("crossed_square_step", lambda: checked_hadamard(
            self.square_step, self.colrev(self.square_step).tocsr(),
            "crossed_square_step"))

    @property
    def twin_wedge_step(self) -> sp.csr_matrix:
        """Two-step pairs reaching both orientations of the same far edge.

        Entry [e, f] is set when both endpoints of f neighbor the head of
        e while avoiding its tail, so f spans a triangle hanging off the
        head of e.
        """
        return self._get("twin_wedge_step", lambda: checked_hadamard(
            self.power(2), self.colrev(self.power(2)).tocsr(),
            "twin_wedge_step"))

    @property
    def triangle_exit_step(self) -> sp.csr_matrix:
        """Edges stepping out of a triangle erected on the current edge.

        Entry [e, f] is set when the tail of f neighbors both endpoints
        of e (closing a triangle over e) and the head of f lies outside
        e. The row-reversed sibling of the twin wedge step.
        """
        return self._get("triangle_exit_step", lambda: checked_hadamard(
            self.power(2), self.rowrev(self.power(2)).tocsr(),
            "triangle_exit_step"))

    @property
    def chordless_three_step(self) -> sp.csr_matrix:
        """Three-steps visiting five distinct vertices.

        Entries of B^3 are dropped wherever the reverse single step or
        either reversal-conjugate of B is nonzero, which removes the
        walks whose far endpoint collides with the starting edge. The
        diagonal is cleared as well: those are the closed walks around a
        triangle, which the index-collision masks cannot see.
        """
        def build():
            M = self.power(3).copy()
            for mask in (self.B.T.tocsr(), self.colrev(self.B).tocsr(),
                         self.rowrev(self.B).tocsr()):
                drop = M.multiply(mask != 0)
                M = (M - drop).tocsr()
            M.setdiag(0)
            M.eliminate_zeros()
            return M.tocsr()
        return self._get("chordless_three_step", build)

    @property
    def triangle_join_step(self) -> sp.csr_matrix:
        """Triangle exit step composed with the row-reversed triangle step.

        Entry [e, f] counts bowties: a triangle over e joined at one
        apex to a second triangle whose far edge is f.
        """
        return self._get("triangle_join_step", lambda: checked_matmul(
            self.triangle_exit_step, self.rowrev(self.triangle_step).tocsr(),
            "triangle_join_step", self.stats))

    # -- diagonals and traces of high powers ----------------------------
    #
    # Powers above B^4 are never held in memory. Diagonals come from
    # Hadamard pairings of small powers; the long traces are assembled in
    # row blocks so the peak footprint stays near nnz(B^4-block).

    def diag(self, k: int) -> np.ndarray:
        if k == 3:
            return self._get("diag3", lambda: np.asarray(
                self.power(2).multiply(self.B.T).sum(axis=1)).ravel())
        if k == 4:
            return self._get("diag4", lambda: np.asarray(
                self.square_step.sum(axis=1)).ravel())
        if k == 5:
            return self._get("diag5", lambda: np.asarray(
                self.power(2).multiply(self.power(3).T).sum(axis=1)).ravel())
        if k == 6:
            return self._get("diag6", lambda: np.asarray(
                self.power(3).multiply(self.power(3).T).sum(axis=1)).ravel())
        raise ValueError("diagonals available for k in 3..6")

    def trace(self, k: int, block: int = 2048) -> int:
        """tr(B^k) for 3 <= k <= 9 without materializing B^5 and above."""
        if 3 <= k <= 6:
            return checked_total(self.diag(k), f"trace:B^{k}")
        if k not in (7, 8, 9):
            raise ValueError("traces available for k in 3..9")
        B, B2 = self.B, self.power(2)
        total = 0
        for lo in range(0, self.size, block):
            hi = min(lo + block, self.size)
            left = checked_matmul(B2[lo:hi], B2, "trace:B^4 block", self.stats)
            if k == 7:
                right = self.power(3)[:, lo:hi]
            elif k == 8:
                right = checked_matmul(B2, B2[:, lo:hi], "trace:B^4 cols",
                                       self.stats)
            else:
                right = checked_matmul(
                    self.power(3), B2[:, lo:hi], "trace:B^5 cols", self.stats)
            pair = checked_hadamard(left, right.T.tocsr(), f"trace:B^{k} pairing")
            total += checked_total(pair, f"trace:B^{k}")
        return total

    # -- aggregation -----------------------------------------------------

    def gamma(self, edge_vec) -> np.ndarray:
        """Sum a directed-edge vector over each vertex's outgoing edges."""
        v = np.asarray(edge_vec).ravel()
        if v.shape[0] != self.size:
            raise ValueError("gamma expects a directed-edge-indexed vector")
        out = np.zeros(self.graph.n, dtype=v.dtype)
        np.add.at(out, np.asarray(self.index.tail), v)
        return out

    def rowsum(self, M) -> np.ndarray:
        return np.asarray(M.sum(axis=1)).ravel()

    def colsum(self, M) -> np.ndarray:
        return np.asarray(M.sum(axis=0)).ravel()
