"""Exact sparse linear algebra over the integers and prime fields.

Boundary matrices are very sparse (at most ``2d`` entries per column) and
very wide. The workhorse is an elimination that pivots only on units (``±1``
over the integers, any nonzero entry mod p), picking the sparsest column and
then the shortest row, and deletes the pivot row and column afterwards. Unit
pivots are unimodular, so the Smith invariants of the input are ``1`` per
pivot plus the invariants of whatever is left, which is handed to a dense
Smith normal form.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from math import gcd

from .errors import DomainError


@dataclass
class SparseMatrix:
    """Column-sparse integer matrix; ``cols[j]`` maps row index to value."""

    nrows: int
    ncols: int
    cols: list = field(default_factory=list)

    @classmethod
    def from_dense(cls, rows) -> "SparseMatrix":
        rows = [list(r) for r in rows]
        nrows = len(rows)
        ncols = len(rows[0]) if rows else 0
        cols = [{i: rows[i][j] for i in range(nrows) if rows[i][j]} for j in range(ncols)]
        return cls(nrows, ncols, cols)

    @classmethod
    def zero(cls, nrows: int, ncols: int) -> "SparseMatrix":
        return cls(nrows, ncols, [{} for _ in range(ncols)])

    def to_dense(self) -> list:
        out = [[0] * self.ncols for _ in range(self.nrows)]
        for j, col in enumerate(self.cols):
            for i, v in col.items():
                out[i][j] = v
        return out

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def nnz(self) -> int:
        return sum(len(c) for c in self.cols)

    def entry(self, i: int, j: int) -> int:
        return self.cols[j].get(i, 0)

    def select_columns(self, indices) -> "SparseMatrix":
        return SparseMatrix(self.nrows, len(indices), [self.cols[j] for j in indices])

    def apply(self, vec: dict) -> dict:
        """Multiply by a sparse column vector given as ``{col: coeff}``."""
        out = {}
        for j, a in vec.items():
            for i, v in self.cols[j].items():
                out[i] = out.get(i, 0) + a * v
        return {i: v for i, v in out.items() if v}

    def compose(self, other: "SparseMatrix") -> "SparseMatrix":
        """Matrix product ``self @ other``."""
        if self.ncols != other.nrows:
            raise DomainError(f"shape mismatch {self.shape} @ {other.shape}")
        return SparseMatrix(self.nrows, other.ncols, [self.apply(c) for c in other.cols])

    def is_zero(self) -> bool:
        return all(not c for c in self.cols)


@dataclass
class EliminationResult:
    rank: int  # number of unit pivots
    leftover: list  # dense rows of the remaining Schur complement (nonzero rows only)
    modulus: int | None


def unit_eliminate(M: SparseMatrix, modulus: int | None = None) -> EliminationResult:
    """Eliminate on unit pivots until none remain.

    With ``modulus`` None the arithmetic is over the integers and only
    ``±1`` entries are used as pivots; otherwise everything is reduced mod
    the given prime and every nonzero entry is a pivot candidate.
    """
    p = modulus
    rows = [dict() for _ in range(M.nrows)]
    colrows = {}
    for j, col in enumerate(M.cols):
        entries = {}
        for i, v in col.items():
            if p is not None:
                v %= p
            if v:
                entries[i] = v
        if entries:
            colrows[j] = set(entries)
            for i, v in entries.items():
                rows[i][j] = v

    def is_unit(v):
        return v != 0 if p is not None else v in (1, -1)

    heap = [(len(s), j) for j, s in colrows.items()]
    heapq.heapify(heap)
    rank = 0
    while heap:
        cnt, c = heapq.heappop(heap)
        s = colrows.get(c)
        if s is None:
            continue
        if len(s) != cnt:
            if s:
                heapq.heappush(heap, (len(s), c))
            continue
        units = [r for r in s if is_unit(rows[r][c])]
        if not units:
            continue
        # shortest row first; ties broken by index for determinism
        r = min(units, key=lambda i: (len(rows[i]), i))
        prow = rows[r]
        inv = pow(prow[c], -1, p) if p is not None else prow[c]
        for r2 in sorted(s):
            if r2 == r:
                continue
            row2 = rows[r2]
            f = row2[c] * inv
            for c2, v in prow.items():
                nv = row2.get(c2, 0) - f * v
                if p is not None:
                    nv %= p
                if nv:
                    if c2 not in row2:
                        colrows[c2].add(r2)
                    row2[c2] = nv
                else:
                    del row2[c2]
                    colrows[c2].discard(r2)
        for c2 in prow:
            cs = colrows[c2]
            cs.discard(r)
            if c2 != c:
                if cs:
                    heapq.heappush(heap, (len(cs), c2))
                else:
                    del colrows[c2]
        del colrows[c]
        rows[r] = {}
        rank += 1

    left_rows = [row for row in rows if row]
    leftover = []
    if left_rows:
        cols = sorted({c for row in left_rows for c in row})
        pos = {c: k for k, c in enumerate(cols)}
        for row in left_rows:
            dense = [0] * len(cols)
            for c, v in row.items():
                dense[pos[c]] = v
            leftover.append(dense)
    return EliminationResult(rank, leftover, modulus)


def dense_snf_invariants(A) -> list:
    """Nonzero Smith invariants of a dense integer matrix (list of rows)."""
    A = [list(r) for r in A if any(r)]
    if not A:
        return []
    m, n = len(A), len(A[0])
    invariants = []
    t = 0
    while t < min(m, n):
        # pivot: smallest nonzero magnitude in the remaining block
        best = None
        for i in range(t, m):
            for j in range(t, n):
                v = A[i][j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
                    if best[0] == 1:
                        break
            if best and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        A[t], A[i] = A[i], A[t]
        for row in A:
            row[t], row[j] = row[j], row[t]
        while True:
            done = True
            piv = A[t][t]
            for i in range(t + 1, m):
                if A[i][t]:
                    q = A[i][t] // piv
                    if q:
                        A[i] = [a - q * b for a, b in zip(A[i], A[t])]
                    if A[i][t]:
                        done = False
            for j in range(t + 1, n):
                if A[t][j]:
                    q = A[t][j] // piv
                    if q:
                        for row in A:
                            row[j] -= q * row[t]
                    if A[t][j]:
                        done = False
            if done:
                # make the pivot divide the rest of the block
                bad = next(
                    ((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if A[i][j] % piv),
                    None,
                )
                if bad is None:
                    break
                A[t] = [a + b for a, b in zip(A[t], A[bad[0]])]
                continue
            # move the smallest remainder into the pivot slot and retry
            best = None
            for i in range(t, m):
                v = A[i][t]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, t)
            for j in range(t, n):
                v = A[t][j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), t, j)
            _, i, j = best
            A[t], A[i] = A[i], A[t]
            for row in A:
                row[t], row[j] = row[j], row[t]
        invariants.append(abs(A[t][t]))
        t += 1
    return invariants


def dense_rank_mod_p(A, p: int) -> int:
    A = [[v % p for v in r] for r in A]
    m = len(A)
    n = len(A[0]) if A else 0
    rank = 0
    for c in range(n):
        piv = next((i for i in range(rank, m) if A[i][c]), None)
        if piv is None:
            continue
        A[rank], A[piv] = A[piv], A[rank]
        inv = pow(A[rank][c], -1, p)
        A[rank] = [(v * inv) % p for v in A[rank]]
        for i in range(m):
            if i != rank and A[i][c]:
                f = A[i][c]
                A[i] = [(a - f * b) % p for a, b in zip(A[i], A[rank])]
        rank += 1
    return rank


def smith_normal_form(M) -> list:
    """Nonzero Smith invariants ``d1 | d2 | ...`` of an integer matrix.

    Accepts a :class:`SparseMatrix` or a dense list of rows.
    """
    if not isinstance(M, SparseMatrix):
        M = SparseMatrix.from_dense(M)
    res = unit_eliminate(M)
    return [1] * res.rank + dense_snf_invariants(res.leftover)


def matrix_rank(M: SparseMatrix, modulus: int | None = None) -> int:
    """Rank over the rationals (``modulus`` None) or over GF(modulus)."""
    res = unit_eliminate(M, modulus)
    if not res.leftover:
        return res.rank
    if modulus is None:
        return res.rank + len(dense_snf_invariants(res.leftover))
    return res.rank + dense_rank_mod_p(res.leftover, modulus)


@dataclass
class RankInfo:
    """Rank of a matrix together with its Smith invariants above 1 (integers only)."""

    rank: int
    torsion: list


def rank_and_torsion(M: SparseMatrix, ring) -> RankInfo:
    if ring.modulus is not None:
        return RankInfo(matrix_rank(M, ring.modulus), [])
    res = unit_eliminate(M)
    invs = dense_snf_invariants(res.leftover)
    torsion = [v for v in invs if v > 1] if ring.kind == "z" else []
    return RankInfo(res.rank + len(invs), torsion)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class Ring:
    """Coefficient ring tag: ``z`` (integers), ``q`` (rationals) or ``gf`` with a prime."""

    kind: str
    modulus: int | None = None

    @classmethod
    def parse(cls, text) -> "Ring":
        if isinstance(text, Ring):
            return text
        t = str(text).strip().lower()
        if t in ("z", "integers", "int"):
            return cls("z")
        if t in ("q", "rationals", "rat"):
            return cls("q")
        for prefix in ("gf:", "gf", "f", "z/"):
            if t.startswith(prefix) and t[len(prefix):].isdigit():
                p = int(t[len(prefix):])
                if not is_prime(p):
                    raise DomainError(f"{p} is not prime")
                return cls("gf", p)
        raise DomainError(f"unknown ring {text!r}")

    def reduce(self, v: int) -> int:
        return v % self.modulus if self.modulus else v

    def __str__(self):
        return f"gf:{self.modulus}" if self.kind == "gf" else self.kind


ZZ = Ring("z")
QQ = Ring("q")


def check_divisibility(invs: list) -> bool:
    return all(b % a == 0 for a, b in zip(invs, invs[1:]))


def gcd_all(values) -> int:
    g = 0
    for v in values:
        g = gcd(g, v)
    return g
