"""Rooted subgraph counting formulas over the non-backtracking matrix.

The catalog (see catalog.py) is declarative: each motif id maps either to
an expression tree over directed-edge matrix primitives, to the row
reversal of a sibling id, or to a stated fraction of the gamma aggregation
of its edge-rooted counterpart. This module interprets those trees and
exposes the per-order evaluation entry points plus the general order-6
edge-rooted construction.

Expression language (nested tuples, first element is the op name):
  atoms (strings): "B", "B2", "B3", "tri", "wedge", "square", "crossed",
      "twin", "texit", "chordless3", "join"
  ("T", X)            matrix transpose
  ("rowrev", X)       index reversal on rows (vectors: the whole index)
  ("colrev", X)       index reversal on columns
  ("mm", X, Y)        matrix product (or matrix-vector when Y is a vector)
  ("had", X, Y)       entrywise product of like-shaped operands
  ("hadnot", X, M)    zero out entries of X wherever M is nonzero
  ("add", X, Y), ("sub", X, Y)
  ("sshift", X, c)    subtract the integer c from every vector entry
  ("scale", c, X)     multiply by the integer c
  ("binom", X, k)     entrywise binomial coefficient, k in {2, 3}
  ("rowsum", X), ("colsum", X)
  ("div", X, c)       exact division; nonzero remainder raises IntegrityError
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
import scipy.sparse as sp

from . import catalog
from .edge_matrix import (EdgeSpace, IntegrityError, checked_hadamard,
                          checked_matmul, exact_div)
from .graphs import Graph
from .oracle import automorphism_count_fixing


@dataclass(frozen=True)
class MotifId:
    order: int
    tag: str
    rooting: str  # "edge" | "vertex"

    def __post_init__(self):
        if self.rooting not in ("edge", "vertex"):
            raise ValueError("rooting must be 'edge' or 'vertex'")


@dataclass
class MotifResult:
    motif: MotifId
    values: np.ndarray
    total: int = field(init=False)

    def __post_init__(self):
        self.total = int(self.values.sum())


_ATOMS = {
    "B": lambda s: s.B,
    "B2": lambda s: s.power(2),
    "B3": lambda s: s.power(3),
    "tri": lambda s: s.triangle_step,
    "wedge": lambda s: s.wedge_step,
    "square": lambda s: s.square_step,
    "crossed": lambda s: s.crossed_square_step,
    "twin": lambda s: s.twin_wedge_step,
    "texit": lambda s: s.triangle_exit_step,
    "chordless3": lambda s: s.chordless_three_step,
    "join": lambda s: s.triangle_join_step,
}

_BINOM = {
    2: lambda x: x * (x - 1) // 2,
    3: lambda x: x * (x - 1) * (x - 2) // 6,
}


class Evaluator:
    """Evaluates expression trees against one EdgeSpace, memoizing subtrees."""

    def __init__(self, space: EdgeSpace):
        self.space = space
        self._memo: dict = {}

    def eval(self, expr):
        if isinstance(expr, str):
            return _ATOMS[expr](self.space)
        key = expr
        if key in self._memo:
            return self._memo[key]
        val = self._apply(expr)
        self._memo[key] = val
        return val

    def _apply(self, expr):
        op = expr[0]
        s = self.space
        if op == "T":
            return self.eval(expr[1]).T.tocsr()
        if op == "rowrev":
            x = self.eval(expr[1])
            return s.revvec(x) if isinstance(x, np.ndarray) else s.rowrev(x).tocsr()
        if op == "colrev":
            return s.colrev(self.eval(expr[1])).tocsr()
        if op == "mm":
            a, b = self.eval(expr[1]), self.eval(expr[2])
            if isinstance(b, np.ndarray):
                return _checked_matvec(a, b, _label(expr))
            return checked_matmul(a, b, _label(expr), s.stats)
        if op == "had":
            a, b = self.eval(expr[1]), self.eval(expr[2])
            return checked_hadamard(a, b, _label(expr))
        if op == "hadnot":
            a, m = self.eval(expr[1]), self.eval(expr[2])
            drop = a.multiply(m != 0)
            out = (a - drop).tocsr()
            out.eliminate_zeros()
            return out
        if op == "add":
            return _tocsr(self.eval(expr[1]) + self.eval(expr[2]))
        if op == "sub":
            return _tocsr(self.eval(expr[1]) - self.eval(expr[2]))
        if op == "sshift":
            return self.eval(expr[1]) - int(expr[2])
        if op == "scale":
            return int(expr[1]) * self.eval(expr[2])
        if op == "binom":
            x = self.eval(expr[1])
            f = _BINOM[int(expr[2])]
            if sp.issparse(x):
                out = x.tocsr(copy=True)
                out.data = f(out.data)
                out.eliminate_zeros()
                return out
            return f(x)
        if op == "rowsum":
            return s.rowsum(self.eval(expr[1]))
        if op == "colsum":
            return s.colsum(self.eval(expr[1]))
        if op == "div":
            return exact_div(self.eval(expr[1]), int(expr[2]), _label(expr))
        raise ValueError(f"unknown op {op!r}")


def _tocsr(x):
    return x.tocsr() if sp.issparse(x) else x


def _label(expr) -> str:
    return repr(expr)[:80]


def _checked_matvec(A, v: np.ndarray, label: str) -> np.ndarray:
    if A.nnz and v.size:
        row_nnz = int(np.diff(A.indptr).max()) if hasattr(A, "indptr") else v.size
        bound = int(np.abs(A.data).max()) * int(np.abs(v).max()) * max(row_nnz, 1)
        if bound >= 2 ** 62:
            raise IntegrityError(f"{label}: matrix-vector bound exceeds guard")
    return A @ v


def evaluate_catalog(space: EdgeSpace, entries: dict,
                     collect_errors: dict | None = None) -> dict[str, np.ndarray]:
    """Evaluate a block of catalog entries, resolving cross-references.

    With ``collect_errors`` given, an entry whose evaluation raises an
    IntegrityError is skipped and the error recorded under its id instead
    of aborting the whole block.
    """
    ev = Evaluator(space)
    values: dict[str, np.ndarray] = {}

    def value_of(mid: str) -> np.ndarray:
        if mid in values:
            return values[mid]
        entry = entries[mid]
        kind = entry["kind"]
        if kind == "expr":
            out = ev.eval(entry["expr"])
        elif kind == "rowrev_of":
            out = space.revvec(value_of(entry["of"]))
        elif kind == "gamma_of":
            agg = space.gamma(value_of(entry["of"]))
            frac = Fraction(entry["num"], entry["den"])
            scaled = agg * frac.numerator
            out = exact_div(scaled, frac.denominator, f"gamma:{mid}")
        else:
            raise ValueError(f"bad catalog entry kind {kind!r}")
        out = np.asarray(out).ravel()
        values[mid] = out
        return out

    for mid in entries:
        try:
            value_of(mid)
        except IntegrityError as exc:
            if collect_errors is None:
                raise
            collect_errors[mid] = str(exc)
    return values


def _results(space: EdgeSpace, order: int) -> list[MotifResult]:
    edge_entries, vertex_entries = catalog.entries_for_order(order)
    merged = {**edge_entries, **vertex_entries}
    values = evaluate_catalog(space, merged)
    out = []
    for mid in edge_entries:
        out.append(MotifResult(MotifId(order, mid, "edge"), values[mid]))
    for mid in vertex_entries:
        tag = mid[:-1] if mid.endswith("v") else mid
        out.append(MotifResult(MotifId(order, tag, "vertex"), values[mid]))
    return out


def eval_order3(space: EdgeSpace) -> list[MotifResult]:
    """All order-3 rooted counts: 3 edge-rooted, 3 vertex-rooted."""
    return _results(space, 3)


def eval_order4(space: EdgeSpace) -> list[MotifResult]:
    """All order-4 rooted counts: 15 edge-rooted, 11 vertex-rooted."""
    return _results(space, 4)


def eval_order5(space: EdgeSpace) -> list[MotifResult]:
    """All order-5 rooted counts: 90 edge-rooted, 55 vertex-rooted."""
    return _results(space, 5)


# ---------------------------------------------------------------------------
# order 6: one composition formula for every edge-rooted pattern
# ---------------------------------------------------------------------------

def _ordered_pair_index(n: int):
    pairs = [(p, q) for p in range(n) for q in range(n) if p != q]
    idx = {pq: i for i, pq in enumerate(pairs)}
    return pairs, idx


def pair_connection_matrix(G: Graph, pattern: Graph,
                           r: tuple[int, int], s: tuple[int, int]) -> np.ndarray:
    """Dense connection matrix of a fully double-pair-rooted order-4 pattern.

    Rows and columns are indexed by ordered pairs of distinct host
    vertices; with all four pattern vertices rooted the count at each
    location is 0 or 1 (the copy, if present, is pinned completely).
    """
    if pattern.n != 4:
        raise ValueError("pair connection matrices are for order-4 patterns")
    n = G.n
    pairs, _ = _ordered_pair_index(n)
    P = len(pairs)
    arr = np.array(pairs, dtype=np.int64)
    x, y = arr[:, 0], arr[:, 1]
    adj = np.zeros((n, n), dtype=bool)
    for u, v in G.edges:
        adj[u, v] = adj[v, u] = True

    out = np.ones((P, P), dtype=np.int64)
    # all four host vertices distinct
    for rowv in (x, y):
        for colv in (x, y):
            out *= (rowv[:, None] != colv[None, :])
    slot = {r[0]: ("row", 0), r[1]: ("row", 1), s[0]: ("col", 0), s[1]: ("col", 1)}
    rowvecs, colvecs = (x, y), (x, y)
    for u, v in pattern.edges:
        su, sv = slot[u], slot[v]
        if su[0] == "row" and sv[0] == "row":
            out *= adj[rowvecs[su[1]], rowvecs[sv[1]]][:, None]
        elif su[0] == "col" and sv[0] == "col":
            out *= adj[colvecs[su[1]], colvecs[sv[1]]][None, :]
        else:
            a = rowvecs[su[1]] if su[0] == "row" else rowvecs[sv[1]]
            b = colvecs[sv[1]] if sv[0] == "col" else colvecs[su[1]]
            out *= adj[a[:, None], b[None, :]]
    return out


def eval_order6_edge(space: EdgeSpace, F) -> MotifResult:
    """Edge-rooted count of any order-6 pattern via three order-4 slices.

    The four non-root vertices are split into two pairs; the three
    patterns induced on (roots+pair1), (pair1+pair2), (roots+pair2) are
    fully rooted, so composing their pair-indexed connection matrices and
    summing reconstructs each placement of F once per automorphism fixing
    the root edge. Dividing by that automorphism count gives the copy
    count. Intended for desk-scale graphs; the host pair space is dense.
    """
    pattern: Graph = F.graph
    root = tuple(F.r)
    if pattern.n != 6:
        raise ValueError("pattern must have order 6")
    if len(root) != 2 or not pattern.has_edge(*root):
        raise ValueError("root must be a directed edge of the pattern")
    if getattr(F, "s", ()) not in ((), None):
        raise ValueError("order-6 evaluation is edge-rooted only")
    G = space.graph
    a1, a2 = root
    rest = sorted(set(range(6)) - {a1, a2})
    b1, b2, c1, c2 = rest

    def induced(keep: tuple[int, ...]) -> Graph:
        pos = {v: i for i, v in enumerate(keep)}
        edges = [(pos[u], pos[v]) for u, v in pattern.edges
                 if u in pos and v in pos]
        return Graph(len(keep), edges)

    Fa = induced((a1, a2, b1, b2))
    Fb = induced((b1, b2, c1, c2))
    Fc = induced((a1, a2, c1, c2))
    ka = pair_connection_matrix(G, Fa, (0, 1), (2, 3))
    kb = pair_connection_matrix(G, Fb, (0, 1), (2, 3))
    kc = pair_connection_matrix(G, Fc, (0, 1), (2, 3))
    per_pair = ((ka @ kb) * kc).sum(axis=1)
    divisor = automorphism_count_fixing(pattern, (a1, a2))
    per_pair = exact_div(per_pair, divisor, "order6 root-fixing symmetry")

    pairs, idx = _ordered_pair_index(G.n)
    out = np.zeros(space.size, dtype=np.int64)
    for e in range(space.size):
        u, v = space.index.endpoints(e)
        out[e] = per_pair[idx[(u, v)]]
    return MotifResult(MotifId(6, "order6", "edge"), out)


def eval_k6_edge(space: EdgeSpace) -> MotifResult:
    """Edge-rooted 6-clique count straight from the derived step matrices.

    A 6-clique splits through any edge into three 4-cliques glued along
    three edges; the crossed-square step matrix is exactly the
    double-edge-rooted 4-clique connection matrix, and the composition
    overcounts each 6-clique 4! times per root edge.
    """
    K = space.crossed_square_step
    M = checked_matmul(K, K, "6-clique composition", space.stats)
    M = checked_hadamard(M, K, "6-clique composition")
    vec = exact_div(space.rowsum(M), 24, "6-clique symmetry")
    return MotifResult(MotifId(6, "K6", "edge"), vec)
