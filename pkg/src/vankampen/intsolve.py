"""Exact solvability of integer linear systems ``A x = c`` over Z and Z/2.

Sparse elimination on unit pivots does the bulk of the work (coboundary
matrices are sparse with +-1 entries); whatever rows are left without a unit
entry are handed to a dense Smith normal form.  Every answer carries a
certificate that is checked before it is returned:

* a witness ``x`` with ``A x = c`` (mod 2 over Z/2), or
* a refutation: row multipliers ``y`` and a modulus ``d`` with
  ``y.A = 0 (mod d)`` and ``y.c != 0 (mod d)``; ``d = 0`` means exact zero.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Sequence


@dataclass
class SparseMatrix:
    nrows: int
    ncols: int
    rows: list[dict[int, int]]

    @classmethod
    def from_dense(cls, A: Sequence[Sequence[int]]) -> "SparseMatrix":
        ncols = len(A[0]) if A else 0
        return cls(len(A), ncols, [{j: v for j, v in enumerate(r) if v} for r in A])

    def to_dense(self) -> list[list[int]]:
        out = [[0] * self.ncols for _ in range(self.nrows)]
        for i, r in enumerate(self.rows):
            for j, v in r.items():
                out[i][j] = v
        return out

    def matvec(self, x: Sequence[int]) -> list[int]:
        return [sum(v * x[j] for j, v in r.items()) for r in self.rows]

    def rmatvec(self, y: Sequence[int]) -> list[int]:
        out = [0] * self.ncols
        for i, r in enumerate(self.rows):
            if y[i]:
                for j, v in r.items():
                    out[j] += y[i] * v
        return out


@dataclass
class Refutation:
    row: int  # index of the offending row in the transformed system
    modulus: int  # invariant factor the right-hand side fails to be divisible by
    value: int  # transformed right-hand side entry
    multipliers: dict[int, int]  # sparse y over the original rows


@dataclass
class SolveResult:
    solvable: bool
    witness: list[int] | None = None
    refutation: Refutation | None = None


def _as_sparse(A) -> SparseMatrix:
    if isinstance(A, SparseMatrix):
        return A
    return SparseMatrix.from_dense(A)


def solve_integer_system(A, c: Sequence[int], ring: str = "Z") -> SolveResult:
    """Decide ``A x = c`` over ``ring`` ("Z" or "Z/2")."""
    A = _as_sparse(A)
    if len(c) != A.nrows:
        raise ValueError("dimension mismatch")
    if ring not in ("Z", "Z/2"):
        raise ValueError(f"unknown ring {ring!r}")
    mod2 = ring == "Z/2"
    result = _Eliminator(A, c, mod2).run()
    _check(A, c, result, mod2)
    return result


def _check(A: SparseMatrix, c: Sequence[int], result: SolveResult, mod2: bool) -> None:
    if result.solvable:
        Ax = A.matvec(result.witness)
        ok = all((u - v) % 2 == 0 for u, v in zip(Ax, c)) if mod2 else Ax == list(c)
        if not ok:
            raise AssertionError("solver produced a wrong witness")
    else:
        ref = result.refutation
        y = [0] * A.nrows
        for i, v in ref.multipliers.items():
            y[i] = v
        yA = A.rmatvec(y)
        yc = sum(a * b for a, b in zip(y, c))
        d = ref.modulus
        if d == 0:
            ok = all(v == 0 for v in yA) and yc != 0
        else:
            ok = all(v % d == 0 for v in yA) and yc % d != 0
        if not ok:
            raise AssertionError("solver produced an invalid refutation")


class _Eliminator:
    def __init__(self, A: SparseMatrix, c: Sequence[int], mod2: bool):
        self.mod2 = mod2
        self.ncols = A.ncols
        if mod2:
            self.rows = [{j: 1 for j, v in r.items() if v % 2} for r in A.rows]
            self.rhs = [v % 2 for v in c]
        else:
            self.rows = [dict(r) for r in A.rows]
            self.rhs = list(c)
        self.cols: dict[int, set[int]] = {}
        for i, r in enumerate(self.rows):
            for j in r:
                self.cols.setdefault(j, set()).add(i)
        self.active = set(range(len(self.rows)))
        self.pivots: list[tuple[int, int]] = []
        # (target, source, factor): row_target += factor * row_source
        self.log: list[tuple[int, int, int]] = []

    def _unit_cols(self, r: int) -> list[int]:
        return [j for j, v in self.rows[r].items() if v in (1, -1)]

    def run(self) -> SolveResult:
        heap = [(len(self.rows[i]), i) for i in self.active]
        heapq.heapify(heap)
        stuck: set[int] = set()
        while heap:
            length, r = heapq.heappop(heap)
            if r not in self.active or length != len(self.rows[r]):
                continue
            row = self.rows[r]
            if not row:
                self.active.discard(r)
                if self.rhs[r]:
                    return self._refute(r, 0, self.rhs[r], {r: 1})
                continue
            units = self._unit_cols(r)
            if not units:
                stuck.add(r)
                continue
            stuck.discard(r)
            j = min(units, key=lambda k: (len(self.cols[k]), k))
            for k in self._pivot(r, j):
                heapq.heappush(heap, (len(self.rows[k]), k))
        return self._finish()

    def _pivot(self, r: int, j: int) -> list[int]:
        row = self.rows[r]
        p = row[j]
        self.active.discard(r)
        self.pivots.append((r, j))
        touched = []
        for k in list(self.cols[j]):
            if k == r or k not in self.active:
                continue
            factor = -self.rows[k][j] * p  # p is its own inverse
            self._add_row(k, r, factor)
            touched.append(k)
        for jj in row:
            self.cols[jj].discard(r)
        return touched

    def _add_row(self, k: int, r: int, factor: int) -> None:
        target = self.rows[k]
        for jj, v in self.rows[r].items():
            nv = target.get(jj, 0) + factor * v
            if self.mod2:
                nv %= 2
            if nv:
                if jj not in target:
                    self.cols[jj].add(k)
                target[jj] = nv
            elif jj in target:
                del target[jj]
                self.cols[jj].discard(k)
        rhs = self.rhs[k] + factor * self.rhs[r]
        self.rhs[k] = rhs % 2 if self.mod2 else rhs
        self.log.append((k, r, factor))

    def _expand(self, y: dict[int, int]) -> dict[int, int]:
        """Rewrite a combination of transformed rows in terms of original rows."""
        y = dict(y)
        for k, r, factor in reversed(self.log):
            a = y.get(k)
            if a:
                y[r] = y.get(r, 0) + a * factor
                if self.mod2:
                    y[r] %= 2
                if not y[r]:
                    del y[r]
        return y

    def _refute(self, row: int, modulus: int, value: int, y: dict[int, int]) -> SolveResult:
        multipliers = self._expand(y)
        if self.mod2:
            modulus = 2
        return SolveResult(False, refutation=Refutation(row, modulus, value, multipliers))

    def _finish(self) -> SolveResult:
        x = [0] * self.ncols
        residual = sorted(self.active)
        if residual:
            cols = sorted({j for i in residual for j in self.rows[i]})
            M = [[self.rows[i].get(j, 0) for j in cols] for i in residual]
            b = [self.rhs[i] for i in residual]
            D, U, V = smith_normal_form(M)
            Ub = [sum(u * v for u, v in zip(urow, b)) for urow in U]
            y = []
            for i in range(len(residual)):
                d = D[i][i] if i < len(cols) else 0
                if (d == 0 and Ub[i] != 0) or (d != 0 and Ub[i] % d):
                    comb = {residual[k]: U[i][k] for k in range(len(residual)) if U[i][k]}
                    return self._refute(residual[i], abs(d), Ub[i], comb)
                y.append(Ub[i] // d if d else 0)
            y += [0] * (len(cols) - len(y))
            for a, j in enumerate(cols):
                x[j] = sum(V[a][t] * y[t] for t in range(len(cols)))
        for r, j in reversed(self.pivots):
            row = self.rows[r]
            s = self.rhs[r] - sum(v * x[k] for k, v in row.items() if k != j)
            x[j] = row[j] * s
            if self.mod2:
                x[j] %= 2
        return SolveResult(True, witness=x)


def smith_normal_form(M: Sequence[Sequence[int]]):
    """Return ``(D, U, V)`` with ``U M V = D`` diagonal, ``U``, ``V`` unimodular
    and each diagonal entry dividing the next."""
    m = len(M)
    n = len(M[0]) if m else 0
    A = [list(r) for r in M]
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i, k):
        A[i], A[k] = A[k], A[i]
        U[i], U[k] = U[k], U[i]

    def swap_cols(i, k):
        for row in A:
            row[i], row[k] = row[k], row[i]
        for row in V:
            row[i], row[k] = row[k], row[i]

    def add_row(dst, src, f):  # row_dst += f * row_src
        A[dst] = [a + f * b for a, b in zip(A[dst], A[src])]
        U[dst] = [a + f * b for a, b in zip(U[dst], U[src])]

    def add_col(dst, src, f):
        for row in A:
            row[dst] += f * row[src]
        for row in V:
            row[dst] += f * row[src]

    t = 0
    while t < min(m, n):
        nonzero = [(abs(A[i][j]), i, j) for i in range(t, m) for j in range(t, n) if A[i][j]]
        if not nonzero:
            break
        _, i, j = min(nonzero)
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            done = True
            for i in range(t + 1, m):
                if A[i][t]:
                    q = A[i][t] // A[t][t]
                    add_row(i, t, -q)
                    if A[i][t]:
                        swap_rows(t, i)
                        done = False
            for j in range(t + 1, n):
                if A[t][j]:
                    q = A[t][j] // A[t][t]
                    add_col(j, t, -q)
                    if A[t][j]:
                        swap_cols(t, j)
                        done = False
            if not done:
                continue
            # enforce divisibility of the remaining block
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                        if A[i][j] % A[t][t]), None)
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if A[t][t] < 0:
            A[t] = [-a for a in A[t]]
            U[t] = [-a for a in U[t]]
        t += 1
    return A, U, V
