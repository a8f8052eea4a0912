"""Mapping complexes of the coherent nerve and the scaled nerve of marked simplicial categories.

A simplex of Hom(x, y) in the simplicial category attached to a finite
simplicial set S is written in a canonical form: a chain of nondegenerate
simplices of S ("beads") glued end to start, together with a strictly
increasing flag of vertex sets whose smallest member is exactly the set of
joints and whose largest member is everything.  Arbitrary formal composites are
brought to this form by restricting to the top of the flag, cutting at the
bottom of the flag, and collapsing degenerate beads.  This is the levelwise
coequalizer over the simplices of S, with composition by union built in.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product as iproduct
from typing import Callable, Iterable, Iterator, Mapping, Sequence

from .decorations import MarkedSSet, ScaledSSet
from .sset_core import (
    FinCategory,
    FiniteSimplicialSet,
    SimplexRef,
    SimplicialError,
    SimplicialMap,
    build_from_levels,
    build_from_nondegenerate,
    iter_maps,
    order_complex,
    product,
    surjection_from_word,
    word_from_surjection,
)

# ---------------------------------------------------------------------------
# the mapping posets of the coherent simplex


@dataclass(frozen=True)
class MappingPoset:
    n: int
    i: int
    j: int
    elements: tuple[frozenset[int], ...]

    def leq(self, a: frozenset[int], b: frozenset[int]) -> bool:
        return a <= b

    def nerve(self) -> FiniteSimplicialSet:
        X, _ = order_complex(self.elements, lambda a, b: a < b, _set_name)
        return X


def _set_name(s: Iterable[int]) -> str:
    return "{" + ",".join(str(v) for v in sorted(s)) + "}"


def mapping_poset(n: int, i: int, j: int) -> MappingPoset:
    if not 0 <= i <= j <= n:
        raise SimplicialError(f"window ({i},{j}) out of range for n = {n}")
    inner = list(range(i + 1, j))
    els = []
    for mask in range(2 ** len(inner)):
        s = {i, j} | {v for b, v in enumerate(inner) if mask >> b & 1}
        els.append(frozenset(s))
    els.sort(key=lambda s: (len(s), sorted(s)))
    return MappingPoset(n, i, j, tuple(els))


def compose_union(S: Iterable[int], T: Iterable[int]) -> frozenset[int]:
    S, T = frozenset(S), frozenset(T)
    if not S or not T or max(S) != min(T):
        raise SimplicialError("composable subsets must share the middle endpoint")
    return S | T


# ---------------------------------------------------------------------------
# normal forms for Hom_{C[S]}(x, y)

Key = tuple[tuple[str, ...], tuple[tuple[int, ...], ...]]


def _normalize(
    S: FiniteSimplicialSet,
    beads: Sequence[SimplexRef],
    flag: Sequence[Iterable[int]],
) -> tuple[Key, tuple[int, ...]]:
    """Canonical form of a formal composite of simplices with a flag of vertex sets.

    Positions are global necklace positions; joints must lie in every member.
    Returns the key (with strict flag) and the degeneracy word of repeats.
    """
    beads = list(beads)
    flag = [set(f) for f in flag]
    # 1. restrict every bead to the top of the flag
    top = sorted(flag[-1])
    pos = {p: i for i, p in enumerate(top)}
    new_beads = []
    off = 0
    for b in beads:
        d = S.dim(b)
        local = [p - off for p in top if off <= p <= off + d]
        if local[0] != 0 or local[-1] != d:
            raise SimplicialError("flag must contain every joint")
        new_beads.append(S.apply_monotone(b, local))
        off += d
    beads = new_beads
    flag = [{pos[p] for p in f} for f in flag]
    # 2. cut at every vertex of the bottom of the flag
    bottom = flag[0]
    cut = []
    off = 0
    for b in beads:
        d = S.dim(b)
        pts = [q for q in range(d + 1) if q in (0, d) or (off + q) in bottom]
        for a, c in zip(pts, pts[1:]):
            cut.append(S.apply_monotone(b, tuple(range(a, c + 1))))
        off += d
    beads = cut
    # 3. collapse degenerate beads
    out_beads = []
    remap = {0: 0}
    off = 0
    new_pos = 0
    for b in beads:
        d = S.dim(b)
        sig = surjection_from_word(b.degeneracies, d)
        for q in range(1, d + 1):
            remap[off + q] = new_pos + sig[q]
        if sig[-1] > 0:
            out_beads.append(SimplexRef(b.generator))
        new_pos += sig[-1]
        off += d
    flag = [frozenset(remap[p] for p in f) for f in flag]
    word = tuple(a for a in reversed(range(len(flag) - 1)) if flag[a] == flag[a + 1])
    dedup = [flag[0]] + [flag[a + 1] for a in range(len(flag) - 1) if flag[a] != flag[a + 1]]
    key = (tuple(b.generator for b in out_beads), tuple(tuple(sorted(f)) for f in dedup))
    return key, word


def _key_label(key: Key) -> str:
    beads, flag = key
    body = "+".join(beads) if beads else "id"
    return body + "[" + ";".join(".".join(map(str, f)) for f in flag) + "]"


def _bead_positions(S: FiniteSimplicialSet, beads: Sequence[str]) -> list[int]:
    out = [0]
    for b in beads:
        out.append(out[-1] + S.dim_of[b])
    return out


def _necklaces(
    S: FiniteSimplicialSet, x: str, y: str, max_beads: int
) -> Iterator[tuple[str, ...]]:
    starts: dict[str, list[str]] = {}
    for d in range(1, S.top_dim + 1):
        for g in S.generators[d]:
            starts.setdefault(S.vertex(SimplexRef(g), 0), []).append(g)
    last = {g: S.vertex(SimplexRef(g), S.dim_of[g]) for gs in starts.values() for g in gs}

    def rec(v: str, acc: list[str]) -> Iterator[tuple[str, ...]]:
        if v == y:
            yield tuple(acc)
        if len(acc) >= max_beads:
            return
        for g in starts.get(v, []):
            acc.append(g)
            yield from rec(last[g], acc)
            acc.pop()

    if x == y:
        yield ()
    for g in starts.get(x, []):
        yield from rec(last[g], [g])


def _ordered_partitions(items: Sequence[int], k: int) -> Iterator[list[frozenset[int]]]:
    """Ordered partitions of ``items`` into k nonempty blocks."""
    items = list(items)
    if k == 0:
        if not items:
            yield []
        return
    for labels in iproduct(range(k), repeat=len(items)):
        if len(set(labels)) == k:
            yield [frozenset(v for v, l in zip(items, labels) if l == b) for b in range(k)]


@dataclass
class HomComplex:
    S: FiniteSimplicialSet
    x: str
    y: str
    complex: FiniteSimplicialSet
    keys: dict[str, Key]
    labels: dict[Key, str]
    dim_bound: int


def hom_data(
    S: FiniteSimplicialSet,
    x: str,
    y: str,
    dim_bound: int,
    max_beads: int | None = None,
) -> HomComplex:
    """Hom(x, y) with the normal-form key of each generator."""
    for v in (x, y):
        if S.dim_of.get(v) != 0:
            raise SimplicialError(f"{v!r} is not a vertex")
    if max_beads is None:
        max_beads = len(S.generators[0])
    nondeg: dict[int, list[Key]] = {d: [] for d in range(dim_bound + 1)}
    for neck in _necklaces(S, x, y, max_beads):
        pos = _bead_positions(S, neck)
        joints = set(pos)
        interior = [p for p in range(pos[-1] + 1) if p not in joints]
        for k in range(0, min(len(interior), dim_bound) + 1):
            for blocks in _ordered_partitions(interior, k):
                acc = set(joints)
                flag = [tuple(sorted(acc))]
                for blk in blocks:
                    acc |= blk
                    flag.append(tuple(sorted(acc)))
                nondeg[k].append((neck, tuple(flag)))

    def face(key: Key, k: int):
        neck, flag = key
        beads = [SimplexRef(b) for b in neck]
        if not beads:
            raise SimplicialError("identity has no faces")
        return _normalize(S, beads, flag[:k] + flag[k + 1 :])

    X, names = build_from_nondegenerate(
        nondeg, face, _key_label, top_dim=dim_bound, meta={"truncation": dim_bound}
    )
    return HomComplex(S, x, y, X, {v: k for k, v in names.items()}, names, dim_bound)


def hom_complex(
    S: FiniteSimplicialSet, x: str, y: str, dim_bound: int, max_beads: int | None = None
) -> FiniteSimplicialSet:
    """Hom_{C[S]}(x, y) truncated at ``dim_bound``."""
    return hom_data(S, x, y, dim_bound, max_beads).complex


def compose_keys(S: FiniteSimplicialSet, a: Key, b: Key) -> Key:
    """Composite (first a, then b) of two simplices of equal dimension in normal form."""
    (na, fa), (nb, fb) = a, b
    if len(fa) != len(fb):
        raise SimplicialError("composing simplices of different dimensions")
    shift = _bead_positions(S, na)[-1]
    flag = [tuple(sorted(set(p) | {q + shift for q in r})) for p, r in zip(fa, fb)]
    return (na + nb, tuple(flag))


# ---------------------------------------------------------------------------
# marked edges from thin triangles


def _edge_atoms(Sb: ScaledSSet) -> tuple[list[tuple[str, str, Key]], list[tuple[str, str, Key]]]:
    S = Sb.base
    witnessed = []
    for t in sorted(Sb.thin):
        r = SimplexRef(t)
        witnessed.append((S.vertex(r, 0), S.vertex(r, 2), ((t,), ((0, 2), (0, 1, 2)))))
    plain = []
    for e in S.generators.get(1, ()) if S.top_dim >= 1 else ():
        r = SimplexRef(e)
        plain.append((S.vertex(r, 0), S.vertex(r, 1), ((e,), ((0, 1), (0, 1)))))
    return witnessed, plain


def composition_closure(
    Sb: ScaledSSet,
    seeds: Iterable[tuple[str, str, Key]],
    max_beads: int | None = None,
) -> set[tuple[str, str, Key]]:
    """Close a set of Hom-edges under composition with witnessed and degenerate edges."""
    S = Sb.base
    if max_beads is None:
        max_beads = len(S.generators[0])
    witnessed, plain = _edge_atoms(Sb)
    marked = set(seeds) | set(witnessed)
    atoms = sorted(set(witnessed) | set(plain) | marked)
    frontier = sorted(marked)
    while frontier:
        new = []
        for (u, v, a) in frontier:
            for (p, q, b) in atoms:
                if v == p:
                    c = (u, q, compose_keys(S, a, b))
                    if len(c[2][0]) <= max_beads and c not in marked:
                        marked.add(c)
                        new.append(c)
                if q == u:
                    c = (p, v, compose_keys(S, b, a))
                    if len(c[2][0]) <= max_beads and c not in marked:
                        marked.add(c)
                        new.append(c)
        frontier = sorted(new)
    return {m for m in marked if m[2][1][0] != m[2][1][1]}


def marked_closure(
    Sb: ScaledSSet, x: str, y: str, dim_bound: int = 2, max_beads: int | None = None
) -> MarkedSSet:
    """Hom(x, y) marked by composites of edges witnessed by thin triangles."""
    H = hom_data(Sb.base, x, y, max(dim_bound, 1), max_beads)
    closed = composition_closure(Sb, (), max_beads)
    cells = [H.labels[k] for (u, v, k) in closed if u == x and v == y and k in H.labels]
    return MarkedSSet(H.complex, cells)


def marked_hom_keys(M: MarkedSSet, H: HomComplex) -> set[Key]:
    return {H.keys[c] for c in M.cells}


# ---------------------------------------------------------------------------
# marked simplicial categories and their scaled nerves


class MarkedSimpCategory:
    """Objects, marked hom complexes, identities and composition.

    ``composition[(a, b, c)]`` is a simplicial map Hom(a,b) x Hom(b,c) -> Hom(a,c)
    defined on the generators of the product.
    """

    def __init__(
        self,
        objects: Iterable[str],
        homs: Mapping[tuple[str, str], MarkedSSet],
        identities: Mapping[str, str],
        composition: Mapping[tuple[str, str, str], Callable[[SimplexRef, SimplexRef], SimplexRef]],
        validate: bool = True,
    ) -> None:
        self.objects = tuple(sorted(objects))
        self.homs = dict(homs)
        self.identities = dict(identities)
        self._comp = dict(composition)
        if validate:
            self.validate()

    def hom(self, a: str, b: str) -> MarkedSSet | None:
        return self.homs.get((a, b))

    def comp(self, a: str, b: str, c: str, x: SimplexRef, y: SimplexRef) -> SimplexRef:
        """Composite of x in Hom(a,b) and y in Hom(b,c) (first x, then y)."""
        Hab, Hbc, Hac = self.homs[(a, b)].base, self.homs[(b, c)].base, self.homs[(a, c)].base
        n = Hab.dim(x)
        if Hbc.dim(y) != n:
            raise SimplicialError("composition needs simplices of equal dimension")
        common = sorted(set(x.degeneracies) & set(y.degeneracies), reverse=True)
        if common:
            sig = surjection_from_word(common, n)
            section = [sig.index(v) for v in range(sig[-1] + 1)]
            low = self._comp[(a, b, c)](Hab.apply_monotone(x, section), Hbc.apply_monotone(y, section))
            return Hac.apply_monotone(low, sig)
        return self._comp[(a, b, c)](x, y)

    def identity_simplex(self, a: str, n: int) -> SimplexRef:
        return SimplexRef(self.identities[a], tuple(reversed(range(n))))

    def validate(self, depth: int = 2) -> None:
        for a in self.objects:
            H = self.homs.get((a, a))
            if H is None or H.base.dim_of.get(self.identities[a]) != 0:
                raise SimplicialError(f"identity of {a!r} is not a vertex of Hom({a},{a})")
        for (a, b), H in self.homs.items():
            for n in range(min(depth, H.base.top_dim) + 1):
                for x in H.base.simplices(n):
                    if self.comp(a, a, b, self.identity_simplex(a, n), x) != x:
                        raise SimplicialError(f"left unit fails in Hom({a},{b})")
                    if self.comp(a, b, b, x, self.identity_simplex(b, n)) != x:
                        raise SimplicialError(f"right unit fails in Hom({a},{b})")
        for (a, b), H1 in self.homs.items():
            for c in self.objects:
                H2 = self.homs.get((b, c))
                if H2 is None:
                    continue
                if (a, c) not in self.homs:
                    raise SimplicialError(f"missing Hom({a},{c}) for composition")
                for d in self.objects:
                    H3 = self.homs.get((c, d))
                    if H3 is None:
                        continue
                    top = min(depth, H1.base.top_dim, H2.base.top_dim, H3.base.top_dim)
                    for n in range(top + 1):
                        for x in H1.base.simplices(n):
                            for y in H2.base.simplices(n):
                                xy = self.comp(a, b, c, x, y)
                                for z in H3.base.simplices(n):
                                    l = self.comp(a, c, d, xy, z)
                                    r = self.comp(a, b, d, x, self.comp(b, c, d, y, z))
                                    if l != r:
                                        raise SimplicialError("associativity fails")
        for (a, b), H1 in self.homs.items():
            for c in self.objects:
                H2 = self.homs.get((b, c))
                if H2 is None:
                    continue
                for e1 in H1.base.simplices(1):
                    for e2 in H2.base.simplices(1):
                        if H1.is_marked(e1) and H2.is_marked(e2):
                            if not self.homs[(a, c)].is_marked(self.comp(a, b, c, e1, e2)):
                                raise SimplicialError("composition does not preserve markings")

    @staticmethod
    def from_category(C: FinCategory) -> "MarkedSimpCategory":
        """Discrete hom complexes: every hom set becomes a set of vertices."""
        homs = {}
        for a in C.objects:
            for b in C.objects:
                ms = C.hom(a, b)
                if ms:
                    homs[(a, b)] = MarkedSSet(FiniteSimplicialSet({0: ms}, {}), ())

        def make(a, b, c):
            def comp(x: SimplexRef, y: SimplexRef) -> SimplexRef:
                return SimplexRef(C.comp(x.generator, y.generator))

            return comp

        comps = {
            (a, b, c): make(a, b, c)
            for (a, b) in homs
            for c in C.objects
            if (b, c) in homs
        }
        return MarkedSimpCategory(C.objects, homs, C.identities, comps)


def _eval_chain(H: FiniteSimplicialSet, table: Mapping[tuple, SimplexRef], chain: Sequence[frozenset]):
    strict = [chain[0]] + [chain[a + 1] for a in range(len(chain) - 1) if chain[a] != chain[a + 1]]
    img = table[tuple(strict)]
    if len(strict) == len(chain):
        return img
    theta = []
    idx = 0
    for a in range(len(chain)):
        if a and chain[a] != chain[a - 1]:
            idx += 1
        theta.append(idx)
    return H.apply_monotone(img, theta)


def _cube(i: int, j: int) -> tuple[FiniteSimplicialSet, dict[tuple, str]]:
    P = mapping_poset(j, i, j)
    return order_complex(P.elements, lambda a, b: a < b, _set_name)


class _NerveSimplex:
    """Objects X_0..X_n and, for each window i<j, a table chain -> Hom simplex."""

    __slots__ = ("objs", "tables", "_key")

    def __init__(self, objs: tuple[str, ...], tables: dict[tuple[int, int], dict[tuple, SimplexRef]]):
        self.objs = objs
        self.tables = tables
        self._key = (
            objs,
            tuple(
                (ij, tuple(sorted((tuple(tuple(sorted(s)) for s in ch), im) for ch, im in t.items())))
                for ij, t in sorted(tables.items())
            ),
        )

    def __eq__(self, other: object) -> bool:
        return isinstance(other, _NerveSimplex) and self._key == other._key

    def __hash__(self) -> int:
        return hash(self._key)

    def __lt__(self, other: "_NerveSimplex") -> bool:
        return self._key < other._key


def scaled_nerve(C: MarkedSimpCategory, dim_bound: int) -> ScaledSSet:
    """Simplicial nerve of C truncated at ``dim_bound``; thin triangles have marked comparison edge."""
    cubes: dict[tuple[int, int], tuple[FiniteSimplicialSet, dict[tuple, str]]] = {}

    def cube(i, j):
        if (i, j) not in cubes:
            cubes[(i, j)] = _cube(i, j)
        return cubes[(i, j)]

    def evaluate(objs, tables, i: int, j: int, chain: Sequence[frozenset]) -> SimplexRef:
        a, b = objs[i], objs[j]
        if i == j:
            return C.identity_simplex(a, len(chain) - 1)
        return _eval_chain(C.homs[(a, b)].base, tables[(i, j)], chain)

    def all_simplices(n: int) -> list[_NerveSimplex]:
        out = []
        windows = sorted(((i, j) for i in range(n + 1) for j in range(i + 1, n + 1)),
                         key=lambda w: (w[1] - w[0], w))
        for objs in iproduct(C.objects, repeat=n + 1):
            if any((objs[i], objs[j]) not in C.homs for i, j in windows):
                continue

            def rec(w: int, tables: dict) -> Iterator[dict]:
                if w == len(windows):
                    yield dict(tables)
                    return
                i, j = windows[w]
                Q, names = cube(i, j)
                label_to_chain = {v: k for k, v in names.items()}
                fixed = {}
                for lab, ch in label_to_chain.items():
                    common = set.intersection(*(set(s) for s in ch)) - {i, j}
                    if common:
                        k = min(common)
                        left = [frozenset(v for v in s if v <= k) for s in ch]
                        right = [frozenset(v for v in s if v >= k) for s in ch]
                        x = evaluate(objs, tables, i, k, left)
                        y = evaluate(objs, tables, k, j, right)
                        fixed[lab] = C.comp(objs[i], objs[k], objs[j], x, y)
                H = C.homs[(objs[i], objs[j])].base
                for m in iter_maps(Q, H, fixed=fixed):
                    tables[(i, j)] = {label_to_chain[lab]: im for lab, im in m.images.items()}
                    yield from rec(w + 1, tables)
                tables.pop((i, j), None)

            for tables in rec(0, {}):
                out.append(_NerveSimplex(tuple(objs), tables))
        return sorted(out)

    def restrict(sx: _NerveSimplex, theta: Sequence[int]) -> _NerveSimplex:
        m = len(theta) - 1
        objs = tuple(sx.objs[t] for t in theta)
        tables = {}
        for i in range(m + 1):
            for j in range(i + 1, m + 1):
                Q, names = cube(i, j)
                t = {}
                for ch in names:
                    img = [frozenset(theta[v] for v in s) for s in ch]
                    t[ch] = evaluate(sx.objs, sx.tables, theta[i], theta[j], img)
                tables[(i, j)] = t
        return _NerveSimplex(objs, tables)

    levels = [all_simplices(n) for n in range(dim_bound + 1)]

    def face(sx, k):
        n = len(sx.objs) - 1
        return restrict(sx, [v for v in range(n + 1) if v != k])

    def degen(sx, k):
        n = len(sx.objs) - 1
        return restrict(sx, [v if v <= k else v - 1 for v in range(n + 2)])

    counter: dict[int, int] = {}
    labels: dict[_NerveSimplex, str] = {}
    for n, level in enumerate(levels):
        for sx in level:
            counter[n] = counter.get(n, 0) + 1
            labels[sx] = (
                sx.objs[0] if n == 0 else f"{'>'.join(sx.objs)}#{counter[n]}"
            )
    X, refs = build_from_levels(levels, face, degen, lambda sx: labels[sx],
                                meta={"truncation": dim_bound})
    thin = []
    if dim_bound >= 2:
        for sx in levels[2]:
            r = refs[sx]
            if r.degeneracies:
                continue
            edge_chain = (frozenset({0, 2}), frozenset({0, 1, 2}))
            alpha = sx.tables[(0, 2)][edge_chain]
            if C.homs[(sx.objs[0], sx.objs[2])].is_marked(alpha):
                thin.append(r.generator)
    return ScaledSSet(X, thin)


__all__ = [
    "MappingPoset", "mapping_poset", "compose_union", "hom_complex", "hom_data", "HomComplex",
    "compose_keys", "marked_closure", "composition_closure", "MarkedSimpCategory",
    "scaled_nerve",
]
