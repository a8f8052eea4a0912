"""Barycentric subdivision of finite simplicial sets and the levels of F(X).

``sd0`` is the nerve of the opposite of the category of nondegenerate
simplices.  A k-simplex is a nondegenerate simplex sigma together with a
strictly decreasing chain of proper vertex subsets of sigma; its vertices are
sigma and the faces named by the chain.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

from .decorations import MarkedSSet, ScaledSSet
from .homology import HomologyCertificate, homology
from .sset_core import (
    FinCategory,
    FiniteSimplicialSet,
    SimplexRef,
    SimplicialError,
    build_from_nondegenerate,
    monotone_maps,
    nerve,
)


class ConditionStarError(SimplicialError):
    """A nondegenerate simplex has a degenerate face."""

    def __init__(self, simplex: str, k: int) -> None:
        super().__init__(f"face d{k} of nondegenerate {simplex!r} is degenerate")
        self.simplex = simplex
        self.k = k


def check_condition_star(X: FiniteSimplicialSet) -> tuple[str, int] | None:
    """First (generator, k) with a degenerate face, or None."""
    for d in range(1, X.top_dim + 1):
        for g in X.generators[d]:
            for k, f in enumerate(X.faces[g]):
                if f.degeneracies:
                    return g, k
    return None


@dataclass
class SubdividedComplex:
    base: FiniteSimplicialSet
    dim_labels: dict[str, int]
    edge_data: dict[str, tuple[str, str, tuple[int, ...]]]  # edge -> (source, target, image)
    marking: MarkedSSet | None = None

    def edge_between(self, source: str, image: tuple[int, ...]) -> str:
        for e, (s, _, im) in self.edge_data.items():
            if s == source and im == tuple(image):
                return e
        raise KeyError((source, image))

    def to_json(self) -> dict:
        out = self.marking.to_json() if self.marking is not None else self.base.to_json()
        out["dim_labels"] = dict(sorted(self.dim_labels.items()))
        return out


def _subset_name(s) -> str:
    return "".join(map(str, s)) if max(s, default=0) < 10 else ".".join(map(str, s))


def sd0(X: FiniteSimplicialSet) -> SubdividedComplex:
    bad = check_condition_star(X)
    if bad is not None:
        raise ConditionStarError(*bad)
    nondeg: dict[int, list[tuple]] = {}
    for g, d in X.dim_of.items():
        full = tuple(range(d + 1))
        subsets = [c for r in range(1, d + 1) for c in combinations(full, r)]

        def chains(prefix: tuple, last: tuple):
            yield prefix
            for s in subsets:
                if len(s) < len(last) and set(s) < set(last):
                    yield from chains(prefix + (s,), s)

        for ch in chains((), full):
            nondeg.setdefault(len(ch), []).append((g, ch))

    def face(key, k):
        g, ch = key
        if k == 0:
            top = ch[0]
            h = X.apply_monotone(SimplexRef(g), top).generator
            rel = tuple(tuple(top.index(v) for v in s) for s in ch[1:])
            return (h, rel), ()
        return (g, ch[: k - 1] + ch[k:]), ()

    def label(key) -> str:
        g, ch = key
        if not ch:
            return g
        return g + "/" + "/".join(_subset_name(s) for s in ch)

    for d in range(X.top_dim + 1):
        nondeg.setdefault(d, [])
    B, names = build_from_nondegenerate(nondeg, face, label, top_dim=X.top_dim)
    dim_labels = {g: X.dim_of[g] for g in X.dim_of}
    edges = {}
    for (g, ch), lab in names.items():
        if len(ch) == 1:
            tgt = X.apply_monotone(SimplexRef(g), ch[0]).generator
            edges[lab] = (g, tgt, ch[0])
    return SubdividedComplex(B, dim_labels, edges)


def sd_plus0(Xb: ScaledSSet) -> SubdividedComplex:
    """sd0 marked by convex images and by the long edge of thin triangles."""
    sd = sd0(Xb.base)
    marked = []
    for e, (src, _, image) in sd.edge_data.items():
        n = Xb.base.dim_of[src]
        convex = image == tuple(range(image[0], image[-1] + 1))
        long_edge = n == 2 and image == (0, 2) and src in Xb.thin
        if convex or long_edge:
            marked.append(e)
    sd.marking = MarkedSSet(sd.base, marked)
    return sd


# ---------------------------------------------------------------------------
# Q and F


def Q_levels(X: FiniteSimplicialSet, n_max: int) -> list[tuple[SimplexRef, ...]]:
    return [X.simplices(n) for n in range(n_max + 1)]


@dataclass
class FCategory:
    """The category of factorizations [n] -> [m] -> X with m bounded, and its fibers."""

    X: FiniteSimplicialSet
    n: int
    m_bound: int
    category: FinCategory
    objects: dict[str, tuple[tuple[int, ...], SimplexRef]]
    over: dict[str, SimplexRef] = field(default_factory=dict)


def _obj_name(f: tuple[int, ...], g: SimplexRef) -> str:
    return "(" + "".join(map(str, f)) + "|" + str(g) + ")"


def factorization_category(
    X: FiniteSimplicialSet, n: int, m_bound: int, sigma: SimplexRef | None = None
) -> FCategory:
    """Objects (f, g) with f: [n] -> [m] monotone, g an m-simplex, m <= m_bound.

    Morphisms (f, g) -> (f', g') are monotone h with h f = f' and g' h = g.
    With ``sigma`` given, only the fiber over sigma = g f is built.
    """
    objs: dict[str, tuple[tuple[int, ...], SimplexRef, int]] = {}
    for m in range(m_bound + 1):
        for f in monotone_maps(n, m):
            for g in X.simplices(m):
                s = X.apply_monotone(g, f)
                if sigma is not None and s != sigma:
                    continue
                objs[_obj_name(f, g)] = (f, g, m)
    by_data = {(f, g): name for name, (f, g, _) in objs.items()}
    maps_cache = {}
    morphisms: dict[str, tuple[str, str]] = {}
    hmap: dict[str, tuple[int, ...]] = {}
    identities = {}
    index: dict[tuple[str, tuple[int, ...]], str] = {}
    for name, (f, g, m) in objs.items():
        for m2 in range(m_bound + 1):
            key = (m, m2)
            if key not in maps_cache:
                maps_cache[key] = list(monotone_maps(m, m2))
            for h in maps_cache[key]:
                f2 = tuple(h[v] for v in f)
                for g2 in X.simplices(m2):
                    if (f2, g2) not in by_data:
                        continue
                    if X.apply_monotone(g2, h) != g:
                        continue
                    tgt = by_data[(f2, g2)]
                    mname = f"{name}>{tgt}:" + "".join(map(str, h))
                    morphisms[mname] = (name, tgt)
                    hmap[mname] = h
                    index[(name, h, tgt)] = mname
                    if tgt == name and h == tuple(range(m + 1)):
                        identities[name] = mname
    out_of: dict[str, list[str]] = {}
    for mname, (s, _) in morphisms.items():
        out_of.setdefault(s, []).append(mname)
    compose = {}
    for m1, (a, b) in morphisms.items():
        for m2 in out_of.get(b, []):
            c = morphisms[m2][1]
            h = tuple(hmap[m2][v] for v in hmap[m1])
            compose[(m1, m2)] = index[(a, h, c)]
    C = FinCategory(list(objs), morphisms, identities, compose, validate=False)
    over = {name: X.apply_monotone(g, f) for name, (f, g, _) in objs.items()}
    return FCategory(X, n, m_bound, C, {k: (f, g) for k, (f, g, _) in objs.items()}, over)


@dataclass
class FLevel:
    complex: FiniteSimplicialSet
    beta: dict[str, SimplexRef]  # vertex -> n-simplex of X
    fcat: FCategory

    def components(self) -> list[set[str]]:
        parent = {v: v for v in self.complex.generators[0]}

        def find(v):
            while parent[v] != v:
                parent[v] = parent[parent[v]]
                v = parent[v]
            return v

        if self.complex.top_dim >= 1:
            for e in self.complex.generators[1]:
                a, b = (f.generator for f in self.complex.faces[e])
                ra, rb = find(a), find(b)
                if ra != rb:
                    parent[max(ra, rb)] = min(ra, rb)
        comps: dict[str, set[str]] = {}
        for v in parent:
            comps.setdefault(find(v), set()).add(v)
        return sorted(comps.values(), key=lambda c: min(c))


def F_level(X: FiniteSimplicialSet, n: int, dim_bound: int) -> FLevel:
    """F(X)_n truncated: factorizations through [m] with m <= dim_bound, nerve up to dim_bound."""
    if dim_bound < 0:
        raise SimplicialError("dim_bound must be nonnegative")
    fc = factorization_category(X, n, dim_bound)
    N = nerve(fc.category.opposite(), dim_bound)
    return FLevel(N, dict(fc.over), fc)


def beta_fiber_certificate(
    X: FiniteSimplicialSet,
    n: int,
    sigma: SimplexRef,
    m_bound: int | None = None,
    bound: int = 2,
) -> HomologyCertificate:
    """Contractibility of the fiber of beta over sigma, backed by the object (id, sigma)."""
    if X.dim(sigma) != n:
        raise SimplicialError("sigma must be an n-simplex")
    if m_bound is None:
        m_bound = n
    fc = factorization_category(X, n, m_bound, sigma)
    C = fc.category
    w = _obj_name(tuple(range(n + 1)), sigma)
    witness = None
    if w in C.objects and all(len(C.hom(w, y)) == 1 for y in C.objects):
        witness = f"initial:{w}"
    cert = homology(nerve(C, bound + 1), bound)
    cert.witness = witness
    cert.notes.append(f"fiber objects={len(C.objects)} morphisms={len(C.morphisms)} m<={m_bound}")
    if witness is not None and not cert.acyclic:
        raise AssertionError("initial object present but homology is not that of a point")
    return cert


__all__ = [
    "SubdividedComplex", "sd0", "sd_plus0", "Q_levels", "F_level", "FLevel", "FCategory",
    "factorization_category", "beta_fiber_certificate", "check_condition_star",
    "ConditionStarError",
]
