"""Integral simplicial homology on normalized chains, via Smith normal form."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from itertools import combinations

from .sset_core import FinCategory, FiniteSimplicialSet, nerve, order_complex

Matrix = list[list[int]]


# ---------------------------------------------------------------------------
# chain complexes


@dataclass
class ChainComplex:
    """Normalized chains: bases are the nondegenerate simplices of each degree."""

    bases: list[tuple[str, ...]]
    # boundary[d] maps degree d to degree d-1, stored column-wise as {row: coeff}
    columns: list[list[dict[int, int]]]

    def shape(self, d: int) -> tuple[int, int]:
        rows = len(self.bases[d - 1]) if 0 < d < len(self.bases) + 1 else 0
        cols = len(self.bases[d]) if d < len(self.bases) else 0
        return rows, cols

    def dense(self, d: int) -> Matrix:
        """The boundary matrix of degree d (rows: (d-1)-simplices)."""
        if d <= 0 or d >= len(self.bases):
            rows = len(self.bases[d - 1]) if 0 < d <= len(self.bases) else 0
            return [[] for _ in range(rows)]
        rows, cols = self.shape(d)
        M = [[0] * cols for _ in range(rows)]
        for c, col in enumerate(self.columns[d]):
            for r, v in col.items():
                M[r][c] = v
        return M


def chain_complex(X: FiniteSimplicialSet) -> ChainComplex:
    bases = [X.generators[d] for d in range(X.top_dim + 1)]
    pos = [{g: i for i, g in enumerate(b)} for b in bases]
    columns: list[list[dict[int, int]]] = [[]]
    for d in range(1, X.top_dim + 1):
        cols = []
        for g in bases[d]:
            col: dict[int, int] = {}
            for k, f in enumerate(X.faces[g]):
                if f.degeneracies:
                    continue
                r = pos[d - 1][f.generator]
                col[r] = col.get(r, 0) + (-1) ** k
            cols.append({r: v for r, v in col.items() if v})
        columns.append(cols)
    return ChainComplex(bases, columns)


def boundary_squared_zero(cc: ChainComplex) -> bool:
    for d in range(2, len(cc.bases)):
        for col in cc.columns[d]:
            acc: dict[int, int] = {}
            for r, v in col.items():
                for r2, w in cc.columns[d - 1][r].items():
                    acc[r2] = acc.get(r2, 0) + v * w
            if any(acc.values()):
                return False
    return True


# ---------------------------------------------------------------------------
# Smith normal form


def _identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def smith_normal_form(M: Sequence[Sequence[int]], transforms: bool = False):
    """Diagonalize an integer matrix by unimodular row and column operations.

    Returns ``(D, rank, factors)``; with ``transforms=True`` returns
    ``(D, rank, factors, U, V)`` where ``D == U @ M @ V``.
    """
    A = [list(map(int, row)) for row in M]
    m = len(A)
    n = len(A[0]) if m else 0
    U = _identity(m) if transforms else None
    V = _identity(n) if transforms else None

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        if U is not None:
            U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        if V is not None:
            for row in V:
                row[i], row[j] = row[j], row[i]

    def add_row(src, dst, q):  # row dst += q * row src
        A[dst] = [a + q * b for a, b in zip(A[dst], A[src])]
        if U is not None:
            U[dst] = [a + q * b for a, b in zip(U[dst], U[src])]

    def add_col(src, dst, q):  # col dst += q * col src
        for row in A:
            row[dst] += q * row[src]
        if V is not None:
            for row in V:
                row[dst] += q * row[src]

    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                v = A[i][j]
                if v and (best is None or abs(v) < abs(A[best[0]][best[1]])):
                    best = (i, j)
                    if abs(v) == 1:
                        break
            if best and abs(A[best[0]][best[1]]) == 1:
                break
        if best is None:
            break
        swap_rows(t, best[0])
        swap_cols(t, best[1])
        while True:
            p = A[t][t]
            dirty = False
            for i in range(t + 1, m):
                if A[i][t]:
                    q = A[i][t] // p
                    add_row(t, i, -q)
                    if A[i][t]:
                        dirty = True
            for j in range(t + 1, n):
                if A[t][j]:
                    q = A[t][j] // p
                    add_col(t, j, -q)
                    if A[t][j]:
                        dirty = True
            if dirty:
                # move the smallest remaining entry of row/column t to the pivot
                cands = [(abs(A[i][t]), i, t) for i in range(t, m) if A[i][t]]
                cands += [(abs(A[t][j]), t, j) for j in range(t, n) if A[t][j]]
                _, i, j = min(cands)
                swap_rows(t, i)
                swap_cols(t, j)
                continue
            bad = next(
                ((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if A[i][j] % p),
                None,
            )
            if bad is None:
                break
            add_row(bad[0], t, 1)
        if A[t][t] < 0:
            A[t] = [-a for a in A[t]]
            if U is not None:
                U[t] = [-a for a in U[t]]
        t += 1
    factors = [A[i][i] for i in range(min(m, n)) if A[i][i]]
    rank = len(factors)
    if transforms:
        return A, rank, factors, U, V
    return A, rank, factors


def _sparse_invariants(columns: list[dict[int, int]], nrows: int) -> tuple[int, list[int]]:
    """Rank and invariant factors of a sparse matrix given column-wise.

    Unit pivots are eliminated sparsely; the residue goes to the dense routine.
    """
    rows: dict[int, dict[int, int]] = {}
    for c, col in enumerate(columns):
        for r, v in col.items():
            rows.setdefault(r, {})[c] = v
    cols: dict[int, dict[int, int]] = {c: dict(col) for c, col in enumerate(columns) if col}
    units = 0
    progress = True
    while progress:
        progress = False
        for c in sorted(cols):
            col = cols.get(c)
            if not col:
                cols.pop(c, None)
                continue
            unit_rows = [r for r, v in col.items() if abs(v) == 1]
            if not unit_rows:
                continue
            r = min(unit_rows, key=lambda r: (len(rows[r]), r))
            v = col[r]
            prow = rows[r]
            for r2 in [x for x in col if x != r]:
                q = rows[r2][c] * v
                row2 = rows[r2]
                for c2, w in prow.items():
                    nv = row2.get(c2, 0) - q * w
                    if nv:
                        row2[c2] = nv
                        cols[c2][r2] = nv
                    else:
                        row2.pop(c2, None)
                        cols[c2].pop(r2, None)
                if not row2:
                    rows.pop(r2)
            for c2 in prow:
                if c2 != c:
                    cols[c2].pop(r, None)
            rows.pop(r)
            cols.pop(c)
            units += 1
            progress = True
    live_cols = sorted(c for c, col in cols.items() if col)
    live_rows = sorted(rows)
    if not live_cols:
        return units, [1] * units
    ri = {r: i for i, r in enumerate(live_rows)}
    dense = [[0] * len(live_cols) for _ in live_rows]
    for j, c in enumerate(live_cols):
        for r, v in cols[c].items():
            dense[ri[r]][j] = v
    _, rank, factors = smith_normal_form(dense)
    return units + rank, [1] * units + factors


# ---------------------------------------------------------------------------
# certificates


@dataclass
class HomologyCertificate:
    betti: tuple[int, ...]
    torsion: tuple[tuple[int, ...], ...]
    bound: int
    witness: str | None = None
    notes: list[str] = field(default_factory=list)

    @property
    def connected(self) -> bool:
        return bool(self.betti) and self.betti[0] == 1

    @property
    def acyclic(self) -> bool:
        """Reduced homology vanishes through the bound and the complex is connected."""
        return (
            self.connected
            and all(b == 0 for b in self.betti[1:])
            and all(not t for t in self.torsion)
        )

    @property
    def grade(self) -> str:
        if self.witness is not None and self.acyclic:
            return "witness"
        if self.acyclic:
            return "acyclic+connected"
        return "none"

    @property
    def contractible(self) -> bool:
        return self.grade != "none"

    def to_json(self) -> dict:
        return {
            "bound": self.bound,
            "betti": list(self.betti),
            "torsion": [list(t) for t in self.torsion],
            "connected": self.connected,
            "witness": self.witness,
            "grade": self.grade,
            "notes": list(self.notes),
        }


def homology(X: FiniteSimplicialSet, bound: int | None = None) -> HomologyCertificate:
    """H_d(X; Z) for d <= bound (default: top dimension)."""
    if bound is None:
        bound = X.top_dim
    cc = chain_complex(X)
    top = X.top_dim
    ranks: dict[int, int] = {}
    factors: dict[int, list[int]] = {}
    for d in range(1, min(bound + 1, top) + 1):
        nrows = len(cc.bases[d - 1])
        ranks[d], factors[d] = _sparse_invariants(cc.columns[d], nrows)
    betti = []
    torsion = []
    for d in range(bound + 1):
        n_d = len(cc.bases[d]) if d <= top else 0
        r_d = ranks.get(d, 0)
        r_up = ranks.get(d + 1, 0)
        betti.append(n_d - r_d - r_up)
        torsion.append(tuple(f for f in factors.get(d + 1, []) if f > 1))
    notes = []
    if bound >= top and X.meta.get("truncation") is not None:
        notes.append("top degree lies at the truncation bound")
    return HomologyCertificate(tuple(betti), tuple(torsion), bound, notes=notes)


def euler_characteristic(X: FiniteSimplicialSet) -> int:
    return sum((-1) ** d * n for d, n in enumerate(X.f_vector()))


def initial_or_final_object(C: FinCategory) -> str | None:
    for x in C.objects:
        if all(len(C.hom(x, y)) == 1 for y in C.objects):
            return f"initial:{x}"
    for x in C.objects:
        if all(len(C.hom(y, x)) == 1 for y in C.objects):
            return f"final:{x}"
    return None


def contractibility_certificate(
    obj: FinCategory | FiniteSimplicialSet, bound: int = 3
) -> HomologyCertificate:
    """Witness-backed when an initial/final object exists, homology grade otherwise.

    For a category the nerve is truncated one level above ``bound`` so that
    degrees up to ``bound`` are exact.
    """
    if isinstance(obj, FinCategory):
        witness = initial_or_final_object(obj)
        cert = homology(nerve(obj, bound + 1), bound)
        cert.witness = witness
        if witness is not None and not cert.acyclic:
            raise AssertionError("witness present but homology is not that of a point")
        return cert
    return homology(obj, bound)


def colk_poset(m: int, n: int) -> list[frozenset[tuple[int, int]]]:
    """Chains S of [m] x [n] (product order) whose projection to [m] is onto."""
    pts = [(a, b) for a in range(m + 1) for b in range(n + 1)]
    out = []
    for r in range(m + 1, len(pts) + 1):
        for S in combinations(pts, r):
            if {a for a, _ in S} != set(range(m + 1)):
                continue
            if all(p[1] <= q[1] for p, q in zip(S, S[1:])):  # sorted by first coordinate
                out.append(frozenset(S))
    return out


def colk_certificate(m: int, n: int, bound: int | None = None) -> HomologyCertificate:
    """Homology of the order complex of the colk poset, ordered by inclusion."""
    els = sorted(colk_poset(m, n), key=lambda S: (len(S), sorted(S)))

    def name(S) -> str:
        return "".join(f"{a}{b}" for a, b in sorted(S))

    X, _ = order_complex(els, lambda A, B: A < B, name)
    cert = homology(X, X.top_dim if bound is None else bound)
    cert.notes.append(f"{len(els)} elements, order complex f-vector {list(X.f_vector())}")
    return cert


__all__ = [
    "colk_poset", "colk_certificate",
    "ChainComplex", "HomologyCertificate", "chain_complex", "smith_normal_form", "homology",
    "contractibility_certificate", "initial_or_final_object", "euler_characteristic",
    "boundary_squared_zero",
]
