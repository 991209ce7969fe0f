# app/solvers/lp_oracle.py
"""
Exact brute-force oracle for small instances.

The payoff matrix is built over every viable searcher edge and every
k-subset trap set, then the zero-sum game is solved as a linear program in
exact rational arithmetic. The simplex runs on an integer tableau with
fraction-free pivots, started from the basis a floating-point solve
proposes. Small matrices are solved whole; larger ones by a double oracle
that grows a restricted subgame with pure best responses until neither
player can improve against the full matrix, which is the optimality
certificate.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import List, Optional, Sequence, Tuple

import numpy as np

from app.config import DEFAULT_LIMITS, SolverLimits
from app.core.errors import CapacityError
from app.core.game import (
    Certificates,
    GameInstance,
    HiderStrategy,
    Method,
    SearcherStrategy,
    Solution,
)
from app.core.subsets import Edge, to_mask

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PayoffMatrix:
    rows: Tuple[Edge, ...]
    cols: Tuple[Edge, ...]
    entries: Tuple[Tuple[Fraction, ...], ...]

    @property
    def shape(self) -> Tuple[int, int]:
        return len(self.rows), len(self.cols)


def enumerate_pure_strategies(
    instance: GameInstance,
    limits: SolverLimits = DEFAULT_LIMITS,
) -> Tuple[List[Edge], List[Edge]]:
    if instance.is_complete and instance.n > limits.oracle_max_n:
        raise CapacityError("n", instance.n, limits.oracle_max_n)
    n_rows = instance.hypergraph.edge_count(instance.n, instance.k)
    if n_rows > limits.oracle_max_rows:
        raise CapacityError("searcher pure strategies", n_rows, limits.oracle_max_rows)
    n_cols = instance.hider_count()
    if n_cols > limits.oracle_max_rows:
        raise CapacityError("C(n,k) hider pure strategies", n_cols, limits.oracle_max_rows)
    rows = list(dict.fromkeys(instance.hypergraph.viable_edges(instance.n, instance.k)))
    cols = list(instance.hider_sets())
    return rows, cols


def build_payoff_matrix(
    instance: GameInstance,
    limits: SolverLimits = DEFAULT_LIMITS,
) -> PayoffMatrix:
    rows, cols = enumerate_pure_strategies(instance, limits)
    col_masks = [to_mask(h) for h in cols]
    zero = Fraction(0)
    entries = []
    for s in rows:
        sm, rs = to_mask(s), instance.r(s)
        entries.append(tuple(zero if sm & hm else rs for hm in col_masks))
    return PayoffMatrix(rows=tuple(rows), cols=tuple(cols), entries=tuple(entries))


# -------------------------------------------------------------------
# Exact simplex
# -------------------------------------------------------------------
# a dense solve is used below this many matrix entries, else double oracle
DENSE_MAX_ENTRIES = 20_000
# consecutive degenerate pivots before switching to Bland's rule
STALL_PIVOTS = 50
_FLOAT_EPS = 1e-9


def _integer_matrix(A: Sequence[Sequence[Fraction]]) -> Tuple[List[List[int]], int]:
    """Scales a rational matrix to integers by the lcm L of its denominators."""
    L = 1
    for row in A:
        for v in row:
            L = lcm(L, v.denominator)
    return [[int(v * L) for v in row] for row in A], L


def _float_basis(A: np.ndarray) -> Optional[List[int]]:
    """
    Floating-point run of the packing simplex. Only the final basis is
    used, as a starting point for the exact tableau; None if it fails.
    """
    m, c = A.shape
    T = np.zeros((m + 1, c + m + 1))
    T[:m, :c] = A
    T[:m, c:c + m] = np.eye(m)
    T[:m, -1] = 1.0
    T[m, :c] = -1.0
    basis = list(range(c, c + m))
    bland, stall = False, 0
    for _ in range(20 * (m + c)):
        z = T[m, :-1]
        if bland:
            neg = np.flatnonzero(z < -_FLOAT_EPS)
            if neg.size == 0:
                return basis
            e = int(neg[0])
        else:
            e = int(np.argmin(z))
            if z[e] >= -_FLOAT_EPS:
                return basis
        col = T[:m, e]
        pos = col > _FLOAT_EPS
        if not pos.any():
            return None
        ratios = np.full(m, np.inf)
        ratios[pos] = T[:m, -1][pos] / col[pos]
        r = int(np.argmin(ratios))
        stall = stall + 1 if ratios[r] <= _FLOAT_EPS else 0
        bland = bland or stall > STALL_PIVOTS
        T[r] /= T[r, e]
        f = T[:, e].copy()
        f[r] = 0.0
        T -= np.outer(f, T[r])
        basis[r] = e
    return None


class _IntegerTableau:
    """
    Packing LP  max sum(w)  s.t.  A w <= 1, w >= 0  on an integer matrix,
    pivoted fraction-free: the true tableau is rows / d, and every
    division below is exact.
    """

    def __init__(self, A: List[List[int]]) -> None:
        m, c = len(A), len(A[0])
        self.m, self.c = m, c
        self.rows: List[List[int]] = []
        for i, row in enumerate(A):
            line = list(row) + [0] * m + [1]
            line[c + i] = 1
            self.rows.append(line)
        self.obj = [-1] * c + [0] * (m + 1)
        self.basis = list(range(c, c + m))
        self.d = 1
        self.pivots = 0

    def pivot(self, r: int, e: int) -> None:
        d = self.d
        prow = self.rows[r]
        p = prow[e]
        for i, row in enumerate(self.rows):
            if i == r:
                continue
            f = row[e]
            if f:
                self.rows[i] = [(a * p - f * b) // d for a, b in zip(row, prow)]
            else:
                self.rows[i] = [a * p // d for a in row]
        f = self.obj[e]
        self.obj = [(a * p - f * b) // d for a, b in zip(self.obj, prow)]
        self.basis[r] = e
        self.d = p
        if p < 0:
            self.rows = [[-a for a in row] for row in self.rows]
            self.obj = [-a for a in self.obj]
            self.d = -p
        self.pivots += 1

    def crash(self, target: Sequence[int]) -> bool:
        """Pivots the target columns into the basis; False if that basis is infeasible."""
        want = set(target)
        for e in target:
            if e in self.basis:
                continue
            candidates = [i for i in range(self.m) if self.basis[i] not in want and self.rows[i][e]]
            if not candidates:
                return False
            self.pivot(max(candidates, key=lambda i: abs(self.rows[i][e])), e)
        return all(row[-1] >= 0 for row in self.rows)

    def _ratio_row(self, e: int) -> Optional[int]:
        best = None
        for i, row in enumerate(self.rows):
            a = row[e]
            if a <= 0:
                continue
            if best is None:
                best = i
                continue
            lhs, rhs = row[-1] * self.rows[best][e], self.rows[best][-1] * a
            if lhs < rhs or (lhs == rhs and self.basis[i] < self.basis[best]):
                best = i
        return best

    def optimize(self) -> None:
        width = self.c + self.m
        bland, stall = False, 0
        while True:
            z = self.obj
            if bland:
                e = next((j for j in range(width) if z[j] < 0), None)
            else:
                e = min(range(width), key=z.__getitem__)
                if z[e] >= 0:
                    e = None
            if e is None:
                return
            r = self._ratio_row(e)
            # A > 0 keeps the problem bounded
            assert r is not None, "unbounded packing LP"
            stall = stall + 1 if self.rows[r][-1] == 0 else 0
            if stall > STALL_PIVOTS and not bland:
                logger.debug("simplex stalled after %d pivots; switching to Bland's rule", self.pivots)
                bland = True
            self.pivot(r, e)

    def solution(self) -> Tuple[List[Fraction], List[Fraction]]:
        w = [Fraction(0)] * self.c
        for i, var in enumerate(self.basis):
            if var < self.c:
                w[var] = Fraction(self.rows[i][-1], self.d)
        u = [Fraction(self.obj[self.c + i], self.d) for i in range(self.m)]
        return w, u


def _simplex_unit_packing(A: Sequence[Sequence[Fraction]]) -> Tuple[List[Fraction], List[Fraction]]:
    """
    max sum(w) s.t. A w <= 1, w >= 0, for a strictly positive matrix A.
    Returns (w, u) with u the optimal dual (min sum(u) s.t. A^T u >= 1).
    """
    A_int, scale = _integer_matrix(A)
    tab = _IntegerTableau(A_int)
    guess = _float_basis(np.array([[float(v) for v in row] for row in A], dtype=np.float64))
    if guess is not None and not tab.crash(guess):
        logger.debug("float basis rejected; starting from the slack basis")
        tab = _IntegerTableau(A_int)
    tab.optimize()
    w, u = tab.solution()
    logger.debug("simplex %dx%d finished after %d pivots", tab.m, tab.c, tab.pivots)
    return [x * scale for x in w], [x * scale for x in u]


@dataclass(frozen=True)
class MatrixGameResult:
    value: Fraction
    row_probs: Tuple[Fraction, ...]
    col_probs: Tuple[Fraction, ...]


def _solve_dense(M: Sequence[Sequence[Fraction]]) -> MatrixGameResult:
    """
    Whole-matrix game LP. The packing LP has one constraint per row, so the
    game is transposed (and negated) when the row player has more
    strategies than the column player.
    """
    m, c = len(M), len(M[0])
    if m <= c:
        shifted = [[v + 1 for v in row] for row in M]
        w, u = _simplex_unit_packing(shifted)
        sw, su = sum(w, Fraction(0)), sum(u, Fraction(0))
        return MatrixGameResult(
            value=1 / sw - 1,
            row_probs=tuple(x / su for x in u),
            col_probs=tuple(x / sw for x in w),
        )
    top = max(max(row) for row in M) + 1
    flipped = [[top - M[i][j] for i in range(m)] for j in range(c)]
    w, u = _simplex_unit_packing(flipped)
    sw, su = sum(w, Fraction(0)), sum(u, Fraction(0))
    return MatrixGameResult(
        value=top - 1 / sw,
        row_probs=tuple(x / sw for x in w),
        col_probs=tuple(x / su for x in u),
    )


def solve_matrix(M: Sequence[Sequence[Fraction]], restricted: Optional[bool] = None) -> MatrixGameResult:
    """
    Row player maximizes. With restricted=True only the subgame touched by
    best responses is ever handed to the simplex; None picks by size.
    """
    m, c = len(M), len(M[0])
    if restricted is None:
        restricted = m * c > DENSE_MAX_ENTRIES
    if all(v == 0 for row in M for v in row):
        return MatrixGameResult(Fraction(0), tuple([Fraction(1, m)] * m), tuple([Fraction(1, c)] * c))
    if not restricted:
        return _solve_dense(M)

    R: List[int] = [max(range(m), key=lambda i: (min(M[i]), -i))]
    C: List[int] = [min(range(c), key=lambda j: (M[R[0]][j], j))]
    rounds = 0
    while True:
        rounds += 1
        sub = _solve_dense([[M[i][j] for j in C] for i in R])
        v = sub.value
        p = dict(zip(R, sub.row_probs))
        q = dict(zip(C, sub.col_probs))

        col_vals = [sum((p[i] * M[i][j] for i in R if p[i]), Fraction(0)) for j in range(c)]
        row_vals = [sum((q[j] * M[i][j] for j in C if q[j]), Fraction(0)) for i in range(m)]
        j_best = min(range(c), key=lambda j: (col_vals[j], j))
        i_best = max(range(m), key=lambda i: (row_vals[i], -i))

        grew = False
        if col_vals[j_best] < v and j_best not in C:
            C.append(j_best)
            grew = True
        if row_vals[i_best] > v and i_best not in R:
            R.append(i_best)
            grew = True
        logger.debug("double oracle round %d: |R|=%d |C|=%d v=%s", rounds, len(R), len(C), v)
        if not grew:
            row_probs = [Fraction(0)] * m
            col_probs = [Fraction(0)] * c
            for i, pr in p.items():
                row_probs[i] = pr
            for j, pr in q.items():
                col_probs[j] = pr
            return MatrixGameResult(v, tuple(row_probs), tuple(col_probs))


def solve_lp(matrix: PayoffMatrix, restricted: Optional[bool] = None) -> Solution:
    M = matrix.entries
    res = solve_matrix(M, restricted=restricted)
    searcher = SearcherStrategy.from_atoms(
        (s, pr) for s, pr in zip(matrix.rows, res.row_probs) if pr
    )
    hider = HiderStrategy.from_atoms(
        (h, pr) for h, pr in zip(matrix.cols, res.col_probs) if pr
    )
    rows_idx = [i for i, pr in enumerate(res.row_probs) if pr]
    cols_idx = [j for j, pr in enumerate(res.col_probs) if pr]
    certificates = Certificates(
        searcher_payoffs=tuple(
            (h, sum((res.row_probs[i] * M[i][j] for i in rows_idx), Fraction(0)))
            for j, h in enumerate(matrix.cols)
        ),
        hider_payoffs=tuple(
            (s, sum((res.col_probs[j] * M[i][j] for j in cols_idx), Fraction(0)))
            for i, s in enumerate(matrix.rows)
        ),
    )
    solution = Solution(
        value=res.value,
        searcher=searcher,
        hider=hider,
        method=Method.LP_ORACLE,
        certificates=certificates,
    )
    assert solution.certified, "LP solution failed its own best-response sweep"
    return solution


def solve_oracle(instance: GameInstance, limits: SolverLimits = DEFAULT_LIMITS) -> Solution:
    return solve_lp(build_payoff_matrix(instance, limits))


def oracle_value(instance: GameInstance, limits: Optional[SolverLimits] = None) -> Fraction:
    return solve_oracle(instance, limits or DEFAULT_LIMITS).value


__all__ = [
    "PayoffMatrix",
    "enumerate_pure_strategies",
    "build_payoff_matrix",
    "DENSE_MAX_ENTRIES",
    "MatrixGameResult",
    "solve_matrix",
    "solve_lp",
    "solve_oracle",
    "oracle_value",
]
