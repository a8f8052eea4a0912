"""Anodyne generators, extension search and the bounded checks built on it.

Filtrations of prisms are handled combinatorially: a simplex of the nerve of
a finite poset is a strictly increasing chain, so subcomplexes are sets of
chains closed under taking nonempty subchains.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable, Hashable, Iterable, Mapping, Sequence

from .decorations import (
    CategoricalPattern,
    DecoratedMap,
    MarkedSSet,
    ScaledSSet,
    inclusion,
    preserves,
)
from .homology import HomologyCertificate, homology
from .sset_core import (
    FiniteSimplicialSet,
    SimplexRef,
    SimplicialError,
    SimplicialMap,
    build_from_levels,
    codegeneracy,
    coface,
    cone_left,
    horn,
    iter_maps,
    join,
    monotone_maps,
    product,
    pushout,
    relabel,
    simplex,
    simplex_ref,
)
from .verdict import Verdict, no, semi, yes


def _lab(verts: Iterable[int]) -> str:
    return "".join(map(str, verts))


def _horn_face_labels(n: int, i: int) -> list[tuple[int, str]]:
    return [(j, _lab(v for v in range(n + 1) if v != j)) for j in range(n + 1) if j != i]


# ---------------------------------------------------------------------------
# scaled generators


def _collapse_edge(X: FiniteSimplicialSet, edge: str) -> tuple[FiniteSimplicialSet, SimplicialMap]:
    """X with one edge collapsed to a point, keeping X's labels."""
    I, P = simplex(1), simplex(0)
    a, b = (f.generator for f in X.faces[edge])
    inc = SimplicialMap(I, X, {"0": SimplexRef(b), "1": SimplexRef(a), "01": SimplexRef(edge)})
    col = SimplicialMap(I, P, {"0": SimplexRef("0"), "1": SimplexRef("0"), "01": SimplexRef("0", (0,))})
    po = pushout(inc, col)
    rename = {}
    for g in X.dim_of:
        im = po.left(SimplexRef(g))
        if not im.degeneracies:
            rename.setdefault(im.generator, g)
    Y = relabel(po.obj, rename)
    q = SimplicialMap(
        X, Y, {g: SimplexRef(rename[im.generator], im.degeneracies) for g, im in po.left.images.items()}
    )
    return Y, q


def scaled_generator(kind: str, n: int | None = None, i: int | None = None, variant: str = "proof") -> DecoratedMap:
    """Generators of the scaled anodyne maps.

    ``kind`` is "A" (needs 0 < i < n), "B", or "C" (needs n > 2).  For B,
    ``variant="proof"`` adds the thin triangles 014 and 034; ``"literal"``
    adds 034 and 134 instead.
    """
    if kind == "A":
        if n is None or i is None or not 0 < i < n:
            raise SimplicialError("A(n, i) needs 0 < i < n")
        X, H = simplex(n), horn(n, i)
        sigma = _lab((i - 1, i, i + 1))
        src = ScaledSSet(H, [sigma] if sigma in H.dim_of else [])
        return inclusion(src, ScaledSSet(X, [sigma]), "A", n=n, i=i)
    if kind == "B":
        X = simplex(4)
        T = ["024", "123", "013", "134", "012"]
        added = {"proof": ["014", "034"], "literal": ["034", "134"]}.get(variant)
        if added is None:
            raise SimplicialError(f"unknown variant {variant!r}")
        return inclusion(ScaledSSet(X, T), ScaledSSet(X, T + added), "B", variant=variant)
    if kind == "C":
        if n is None or n <= 2:
            raise SimplicialError("C(n) needs n > 2")
        tgt, q_t = _collapse_edge(simplex(n), "01")
        src, q_s = _collapse_edge(horn(n, 0), "01")
        images = {}
        for g, im in q_s.images.items():
            if not im.degeneracies:
                images[im.generator] = q_t(SimplexRef(g))
        f = SimplicialMap(src, tgt, images)
        tri = _lab((0, 1, n))
        thin_t = [q_t(SimplexRef(tri)).generator]
        thin_s = [q_s(SimplexRef(tri)).generator] if tri in q_s.images else []
        return DecoratedMap(ScaledSSet(src, thin_s), ScaledSSet(tgt, thin_t), f, "C", {"n": n})
    raise SimplicialError(f"unknown generator kind {kind!r}")


def generator_name(f: DecoratedMap) -> str:
    if f.kind == "A":
        return f"A({f.params['n']},{f.params['i']})"
    if f.kind == "C":
        return f"C({f.params['n']})"
    return f.kind


def scaled_generators(dim_bound: int) -> list[DecoratedMap]:
    """All scaled generators whose source has dimension at most ``dim_bound``."""
    out = [scaled_generator("A", n, i) for n in range(2, dim_bound + 1) for i in range(1, n)]
    if dim_bound >= 4:
        out.append(scaled_generator("B"))
    out += [scaled_generator("C", n) for n in range(3, dim_bound + 1)]
    return out


# ---------------------------------------------------------------------------
# pattern generators


@dataclass
class PatternGenerator:
    map: DecoratedMap
    over: SimplicialMap  # target -> pattern base

    @property
    def kind(self) -> str:
        return self.map.kind


def _simplex_over(n: int, x: SimplexRef, S: FiniteSimplicialSet) -> SimplicialMap:
    D = simplex(n)
    images = {g: S.apply_monotone(x, tuple(int(c) for c in g)) for g in D.dim_of}
    return SimplicialMap(D, S, images)


def _marked(X: FiniteSimplicialSet, edges: Iterable[str] = ()) -> MarkedSSet:
    return MarkedSSet(X, list(edges))


def _sharp(X: FiniteSimplicialSet) -> MarkedSSet:
    return MarkedSSet(X, X.generators.get(1, ()))


def _sub_inclusion(src: MarkedSSet, tgt: MarkedSSet, kind: str, **params) -> DecoratedMap:
    return inclusion(src, tgt, kind, **params)


def pattern_generator(kind: str, pattern: CategoricalPattern, **params) -> PatternGenerator:
    """Generators of the pattern-anodyne maps, with their structure map to the base.

    Parameters by kind: A0 ``simplex`` (a 2-simplex), A1 ``map`` (collapsed_K -> S),
    B0 ``edge``, B1 ``alpha``, C0 ``simplex`` (n > 1), C1 ``simplex`` and ``i``,
    C2 ``alpha``, ``n`` and ``map`` (Delta^n * K -> S).
    """
    S = pattern.base
    if kind == "A0":
        t = params["simplex"]
        if S.dim(t) != 2:
            raise SimplicialError("A0 needs a 2-simplex")
        if not pattern.in_T(t):
            raise SimplicialError("A0: the triangle is not in T")
        for a, b in ((0, 1), (1, 2), (0, 2)):
            if not pattern.in_M(S.edge(t, a, b)):
                raise SimplicialError(f"A0: edge {a}{b} is not in M_S")
        D = simplex(2)
        m = _sub_inclusion(_marked(D, ["01", "12"]), _sharp(D), "A0")
        return PatternGenerator(m, _simplex_over(2, t, S))
    if kind == "A1":
        u: SimplicialMap = params["map"]
        Q = u.source
        for g, d in Q.dim_of.items():
            im = u(SimplexRef(g))
            if d == 1 and not pattern.in_M(im):
                raise SimplicialError(f"A1: edge {g} is not sent into M_S")
            if d == 2 and not pattern.in_T(im):
                raise SimplicialError(f"A1: triangle {g} is not sent into T")
        return PatternGenerator(_sub_inclusion(_marked(Q), _sharp(Q), "A1"), u)
    if kind == "B0":
        e = params["edge"]
        if S.dim(e) != 1 or not pattern.in_M(e):
            raise SimplicialError("B0: the edge is not in M_S")
        D = simplex(1)
        m = _sub_inclusion(_marked(D.subcomplex(["0"])), _sharp(D), "B0")
        return PatternGenerator(m, _simplex_over(1, e, S))
    if kind == "B1":
        cone = pattern.cones[params["alpha"]]
        CL = cone_left(cone.K)
        tgt = _sharp(CL.obj)
        src_base = CL.obj.subcomplex([CL.right.images[g].generator for g in cone.K.dim_of])
        m = _sub_inclusion(_sharp(src_base), tgt, "B1", alpha=params["alpha"])
        return PatternGenerator(m, cone.diagram)
    if kind == "C0":
        x = params["simplex"]
        n = S.dim(x)
        if n <= 1:
            raise SimplicialError("C0 needs n > 1")
        if not pattern.in_T(S.apply_monotone(x, (0, 1, n))):
            raise SimplicialError("C0: the restriction to {0,1,n} is not in T")
        m = _sub_inclusion(_marked(horn(n, 0), ["01"]), _marked(simplex(n), ["01"]), "C0", n=n)
        return PatternGenerator(m, _simplex_over(n, x, S))
    if kind == "C1":
        x, i = params["simplex"], params["i"]
        n = S.dim(x)
        if not 0 < i < n:
            raise SimplicialError("C1 needs 0 < i < n")
        m = _sub_inclusion(_marked(horn(n, i)), _marked(simplex(n)), "C1", n=n, i=i)
        return PatternGenerator(m, _simplex_over(n, x, S))
    if kind == "C2":
        return _pattern_c2(pattern, params["alpha"], params["n"], params["map"])
    raise SimplicialError(f"unknown pattern generator {kind!r}")


def _pattern_c2(pattern: CategoricalPattern, alpha: int, n: int, f: SimplicialMap) -> PatternGenerator:
    if n < 1:
        raise SimplicialError("C2 needs n >= 1")
    cone = pattern.cones[alpha]
    K = cone.K
    J = join(simplex(n), K)
    CL = cone_left(K)
    if f.source != J.obj:
        raise SimplicialError("C2: the map must be defined on Delta^n * K")
    top = SimplexRef(str(n))
    apex = CL.left(SimplexRef("c"))
    for b in K.dim_of:
        pairs = [(J.join(top, SimplexRef(b)), CL.join(apex, SimplexRef(b)))]
        pairs.append((J.right(SimplexRef(b)), CL.right(SimplexRef(b))))
        for mine, theirs in pairs:
            if f(mine) != cone.diagram(theirs):
                raise SimplicialError("C2: the map does not extend the cone diagram on {n} * K")
    if f(J.left(top)) != cone.diagram(apex):
        raise SimplicialError("C2: the map does not extend the cone diagram at the cone point")
    star = {J.left(top).generator} | {J.join(top, SimplexRef(b)).generator for b in K.dim_of}
    star |= {J.right(SimplexRef(b)).generator for b in K.dim_of}
    star_edges = [g for g in star if J.obj.dim_of[g] == 1]
    bd = [g for g in simplex(n).dim_of if len(g) < n + 1]
    keep = set(star)
    keep |= {J.left(SimplexRef(a)).generator for a in bd}
    keep |= {J.join(SimplexRef(a), SimplexRef(b)).generator for a in bd for b in K.dim_of}
    src = J.obj.subcomplex(keep)
    m = _sub_inclusion(_marked(src, star_edges), _marked(J.obj, star_edges), "C2", alpha=alpha, n=n)
    return PatternGenerator(m, f)


# ---------------------------------------------------------------------------
# extension search


def extensions(f: DecoratedMap, u: SimplicialMap, Z) -> list[SimplicialMap]:
    """All decoration-preserving v: target -> Z with v f = u."""
    if u.source != f.source.base:
        raise SimplicialError("u must be defined on the source of f")
    if not preserves(u, f.source, Z):
        raise SimplicialError("u does not preserve decorations")
    if not f.is_monomorphism:
        raise SimplicialError("extension search needs a monomorphism")
    tgt = f.target
    fixed = {f.underlying.images[g].generator: u.images[g] for g in f.source.base.dim_of}
    deg = tgt.degree

    def allowed(g: str, y: SimplexRef) -> bool:
        return tgt.base.dim_of[g] != deg or g not in tgt.cells or Z.decorated(y)

    out = []
    for v in iter_maps(tgt.base, Z.base, fixed, allowed):
        if all(v(f.underlying.images[g]) == u.images[g] for g in f.source.base.dim_of):
            out.append(v)
    return out


def decorated_maps(A, Z) -> list[SimplicialMap]:
    """All decoration-preserving maps A -> Z."""
    deg = A.degree

    def allowed(g: str, y: SimplexRef) -> bool:
        return A.base.dim_of[g] != deg or g not in A.cells or Z.decorated(y)

    return list(iter_maps(A.base, Z.base, allowed=allowed))


def is_weak_bicategory(Z: ScaledSSet, dim_bound: int) -> Verdict:
    """Extension property against every scaled generator with source dimension <= dim_bound."""
    if dim_bound < 2:
        raise SimplicialError("dim_bound must be at least 2")
    extra = {}
    trunc = Z.base.meta.get("truncation")
    if trunc is not None and trunc < dim_bound:
        # horns above a truncation have no fillers to find
        dim_bound, extra = max(trunc, 2), {"capped_at_truncation": trunc}
    checked = 0
    for f in scaled_generators(dim_bound):
        for u in decorated_maps(f.source, Z):
            checked += 1
            if not extensions(f, u, Z):
                return no(
                    {"generator": generator_name(f), "map": u.to_json()},
                    f"no extension along {generator_name(f)}",
                )
    return semi(f"all generator instances extend up to dimension {dim_bound}", instances=checked, bound=dim_bound, **extra)


# ---------------------------------------------------------------------------
# filtrations of prisms


Chain = tuple


def chains_of(elements: Sequence[Hashable], leq: Callable[[Hashable, Hashable], bool]) -> set[Chain]:
    """All nonempty chains of a finite poset, each sorted increasingly."""
    els = sorted(elements)
    out: set[Chain] = set()

    def rec(ch: tuple):
        out.add(ch)
        for e in els:
            if e > ch[-1] and leq(ch[-1], e) and e != ch[-1]:
                rec(ch + (e,))

    for e in els:
        rec((e,))
    return out


def _grid(a: int, b: int) -> tuple[list[tuple[int, int]], Callable]:
    els = [(i, j) for i in range(a + 1) for j in range(b + 1)]
    return els, lambda p, q: p[0] <= q[0] and p[1] <= q[1]


def _subchains(ch: Chain) -> set[Chain]:
    return {tuple(ch[k] for k in S) for r in range(1, len(ch) + 1) for S in combinations(range(len(ch)), r)}


@dataclass
class FiltrationStep:
    simplex: Chain
    horn: int
    decorated: tuple[tuple[int, ...], ...] = ()  # vertex positions that must be decorated
    name: str = ""


@dataclass
class FiltrationCertificate:
    family: str
    params: dict
    steps: list[dict]
    final_equals_ambient: bool
    ok: bool
    mismatch: dict | None = None

    def to_json(self) -> dict:
        return {
            "family": self.family, "params": self.params, "ok": self.ok,
            "final_equals_ambient": self.final_equals_ambient, "steps": self.steps,
            "mismatch": self.mismatch,
        }


def _horn_positions(m: int, k: int) -> set[tuple[int, ...]]:
    full = set(range(m + 1))
    out = set()
    for r in range(1, m + 1):
        for S in combinations(range(m + 1), r):
            if not (full - {k}) <= set(S):
                out.add(S)
    return out


def verify_filtration(
    ambient: set[Chain],
    initial: set[Chain],
    steps: Sequence[FiltrationStep],
    decorated: set[Chain] = frozenset(),
    family: str = "",
    params: Mapping | None = None,
) -> FiltrationCertificate:
    """Each step meets the previous stage in exactly the stated horn."""
    stage = set(initial)
    report = []
    mismatch = None
    for idx, st in enumerate(steps):
        sigma = st.simplex
        m = len(sigma) - 1
        inter = {
            S for r in range(1, m + 2) for S in combinations(range(m + 1), r)
            if tuple(sigma[k] for k in S) in stage
        }
        expected = _horn_positions(m, st.horn)
        horn_ok = inter == expected and sigma in ambient
        deco_ok = all(tuple(sigma[k] for k in pos) in decorated for pos in st.decorated)
        report.append({
            "step": st.name or str(idx), "simplex": [list(v) for v in sigma], "horn": [m, st.horn],
            "horn_ok": horn_ok, "decorations_ok": deco_ok,
        })
        if (not horn_ok or not deco_ok) and mismatch is None:
            mismatch = {
                "step": st.name or str(idx),
                "missing": sorted(map(list, expected - inter)),
                "extra": sorted(map(list, inter - expected)),
                "undecorated": [list(p) for p in st.decorated if tuple(sigma[k] for k in p) not in decorated],
            }
        stage |= _subchains(sigma)
    final = stage == ambient
    ok = final and mismatch is None
    if not final and mismatch is None:
        mismatch = {"uncovered": sorted(map(lambda c: [list(v) for v in c], ambient - stage))[:5]}
    return FiltrationCertificate(family, dict(params or {}), report, final, ok, mismatch)


def preperc_family(n: int) -> FiltrationCertificate:
    """Delta^n x Delta^1 from Delta^n x {1} and the boundary prism by sigma_0..sigma_n."""
    if n < 1:
        raise SimplicialError("n must be positive")
    els, leq = _grid(n, 1)
    amb = chains_of(els, leq)
    initial = {c for c in amb if len({a for a, _ in c}) < n + 1 or all(b == 1 for _, b in c)}
    marked = {((n, 0), (n, 1))}
    steps = []
    for i in range(n + 1):
        sig = tuple((j, 0) if j <= i else (j - 1, 1) for j in range(n + 2))
        deco = ((n, n + 1),) if i == n else ()
        steps.append(FiltrationStep(sig, i + 1, deco, f"sigma_{i}"))
    return verify_filtration(amb, initial, steps, marked, "preperc", {"n": n})


def _sputer_thin(n: int, amb: set[Chain]) -> set[Chain]:
    """Thin triangles of the scaled cone on a flat Delta^n, with Delta^n x {0} added."""
    out = set()
    for c in amb:
        if len(c) != 3:
            continue
        firsts = [a for a, _ in c]
        seconds = [b for _, b in c]
        deg_image = len(set(firsts)) < 3
        cond_b = seconds != [0, 0, 1] or firsts[0] == firsts[1]
        if (deg_image and cond_b) or all(b == 0 for b in seconds):
            out.add(c)
    return out


def swww_family(n: int, i: int) -> FiltrationCertificate:
    """The tau_1..tau_{n-1} then sigma_0..sigma_n filtration of the cone on an inner horn."""
    if not 0 < i < n:
        raise SimplicialError("need 0 < i < n")
    els, leq = _grid(n, 1)
    amb = chains_of(els, leq)
    full = set(range(n + 1))

    def in_horn(face: set[int]) -> bool:
        return not (full - {i}) <= face

    initial = {c for c in amb if in_horn({a for a, _ in c}) or len({b for _, b in c}) == 1}
    thin = _sputer_thin(n, amb)

    def iota(a: int) -> int:
        return a if a < i else a + 1

    steps = []
    for k in range(1, n):
        tau = tuple((iota(j), 0) if j < k else (iota(j - 1), 1) for j in range(n + 1))
        steps.append(FiltrationStep(tau, k, ((k - 1, k, k + 1),), f"tau_{k}"))
    for k in range(n + 1):
        sig = tuple((j, 0) if j <= k else (j - 1, 1) for j in range(n + 2))
        if k < n:
            steps.append(FiltrationStep(sig, k + 1, ((k, k + 1, k + 2),), f"sigma_{k}"))
        else:
            steps.append(FiltrationStep(sig, i, ((i - 1, i, i + 1),), f"sigma_{k}"))
    return verify_filtration(amb, initial, steps, thin, "swww", {"n": n, "i": i})


def carpal_family(n: int) -> FiltrationCertificate:
    """Delta^1 x Delta^n from {0} x Delta^n and Delta^1 x boundary, marked by (Delta^1)^sharp x flat."""
    if n < 0:
        raise SimplicialError("n must be nonnegative")
    els, leq = _grid(1, n)
    amb = chains_of(els, leq)
    initial = {c for c in amb if all(a == 0 for a, _ in c) or len({b for _, b in c}) < n + 1}
    marked = {c for c in amb if len(c) == 2 and c[0][1] == c[1][1]}
    steps = []
    for i in range(n + 1):
        sig = tuple((0, j) if j <= n - i else (1, j - 1) for j in range(n + 2))
        deco = ((0, 1),) if i == n else ()
        steps.append(FiltrationStep(sig, n - i, deco, f"sigma_{i}"))
    return verify_filtration(amb, initial, steps, marked, "carpal", {"n": n})


FAMILIES = {"preperc": preperc_family, "swww": swww_family, "carpal": carpal_family}


# ---------------------------------------------------------------------------
# scaled slices (fat model)


@dataclass
class SliceResult:
    marked: MarkedSSet
    projection: SimplicialMap
    vertex: str
    dim_bound: int
    upper_thin: set[str] = field(default_factory=set)  # edges in M


def _reindex(C: FiniteSimplicialSet, key: tuple[SimplexRef, ...], theta: Sequence[int]) -> tuple[SimplexRef, ...]:
    """Precompose a prism map Delta^n x Delta^1 -> C with theta x id."""
    m = len(theta) - 1
    out = []
    for j in range(m + 1):
        pos = [theta[t] for t in range(j + 1)] + [theta[t - 1] + 1 for t in range(j + 1, m + 2)]
        out.append(C.apply_monotone(key[theta[j]], pos))
    return tuple(out)


def _prism_maps(Cb: ScaledSSet, x: str, n: int) -> list[tuple[SimplexRef, ...]]:
    C = Cb.base
    Dn, D1 = simplex(n), simplex(1)
    P = product(Dn, D1)
    fixed = {}
    for a, d in Dn.dim_of.items():
        bottom = P.pair(SimplexRef(a), D1.apply_monotone(SimplexRef("0"), (0,) * (d + 1)))
        fixed[bottom.generator] = C.degenerate_at(x, d)
    tops = []
    for j in range(n + 1):
        verts = [(t, 0) if t <= j else (t - 1, 1) for t in range(n + 2)]
        tops.append(P.pair(simplex_ref(Dn, [a for a, _ in verts]), simplex_ref(D1, [b for _, b in verts])))
    return sorted({tuple(phi(t) for t in tops) for phi in iter_maps(P.obj, C, fixed)})


def scaled_slice(Cb: ScaledSSet, x: str, dim_bound: int = 2) -> SliceResult:
    """Marked slice under x: prisms constant at x on the bottom, all edges in M, marked by M0."""
    C = Cb.base
    if C.dim_of.get(x) != 0:
        raise SimplicialError(f"{x!r} is not a vertex")

    def in_M(key, i, j) -> bool:
        return Cb.is_thin(C.apply_monotone(key[i], (i, i + 1, j + 1)))

    levels = []
    for n in range(dim_bound + 1):
        level = [k for k in _prism_maps(Cb, x, n) if all(in_M(k, i, j) for j in range(n + 1) for i in range(j))]
        levels.append(level)

    def face(e, k):
        return _reindex(C, e, coface(len(e) - 1, k))

    def degen(e, k):
        return _reindex(C, e, codegeneracy(len(e) - 1, k))

    def label(e) -> str:
        return "[" + "|".join(str(s) for s in e) + "]"

    X, refs = build_from_levels(levels, face, degen, label, meta={"truncation": dim_bound})
    marked = []
    for e in levels[1] if dim_bound >= 1 else []:
        r = refs[e]
        if not r.degeneracies and Cb.is_thin(e[0]) and Cb.is_thin(e[1]):
            marked.append(r.generator)
    images = {}
    by_label = {refs[e].generator: e for lvl in levels for e in lvl if not refs[e].degeneracies}
    for g, e in by_label.items():
        n = len(e) - 1
        images[g] = C.apply_monotone(e[0], tuple(range(1, n + 2)))
    proj = SimplicialMap(X, C, images)
    return SliceResult(MarkedSSet(X, marked), proj, x, dim_bound)


def hom_via_slice(Cb: ScaledSSet, x: str, y: str, dim_bound: int = 2) -> MarkedSSet:
    """The fiber of the slice under x over the vertex y."""
    sl = scaled_slice(Cb, x, dim_bound)
    X = sl.marked.base
    keep = [g for g, d in X.dim_of.items() if set(Cb.base.vertices_of(sl.projection(SimplexRef(g)))) == {y}]
    F = X.subcomplex(keep) if keep else FiniteSimplicialSet({}, {}, top_dim=0)
    F.meta["truncation"] = dim_bound
    return sl.marked.restrict(F)


# ---------------------------------------------------------------------------
# fibered objects over a categorical pattern


def pullback_over(
    X: FiniteSimplicialSet, p: SimplicialMap, sigma: SimplexRef, bound: int
) -> tuple[FiniteSimplicialSet, SimplicialMap, dict]:
    """X x_S Delta^k along a k-simplex sigma of S, through dimension ``bound``."""
    S = p.target
    k = S.dim(sigma)
    D = simplex(k)
    levels = []
    for n in range(bound + 1):
        level = []
        for theta in monotone_maps(n, k):
            base = S.apply_monotone(sigma, theta)
            for x in X.simplices(n):
                if p(x) == base:
                    level.append((x, theta))
        levels.append(level)

    def face(e, j):
        x, th = e
        n = len(th) - 1
        return X.face(x, j), tuple(th[t] for t in coface(n, j))

    def degen(e, j):
        x, th = e
        n = len(th) - 1
        return X.degeneracy(x, j), tuple(th[t] for t in codegeneracy(n, j))

    def label(e) -> str:
        return f"{e[0]}@{_lab(e[1])}"

    Y, refs = build_from_levels(levels, face, degen, label, meta={"truncation": bound})
    q_images = {}
    for e, r in refs.items():
        if not r.degeneracies:
            q_images[r.generator] = simplex_ref(D, e[1])
    return Y, SimplicialMap(Y, D, q_images), refs


def horn_lifting_failure(
    Y: FiniteSimplicialSet,
    q: SimplicialMap,
    n: int,
    i: int,
    fixed: Mapping[str, SimplexRef] | None = None,
) -> dict | None:
    """A horn Lambda^n_i -> Y over a simplex of the base with no filler, or None."""
    B = q.target
    faces = _horn_face_labels(n, i)
    filled: set[tuple] = set()
    for y in Y.simplices(n):
        filled.add((tuple(Y.face(y, j) for j, _ in faces), q(y)))
    base_index: dict[tuple, list[SimplexRef]] = {}
    for b in B.simplices(n):
        base_index.setdefault(tuple(B.face(b, j) for j, _ in faces), []).append(b)
    for u in iter_maps(horn(n, i), Y, fixed):
        fs = tuple(u(SimplexRef(lab)) for _, lab in faces)
        for b in base_index.get(tuple(q(f) for f in fs), []):
            if (fs, b) not in filled:
                return {"horn": [n, i], "faces": [str(f) for f in fs], "base": str(b)}
    return None


def is_cocartesian(Y: FiniteSimplicialSet, q: SimplicialMap, f: SimplexRef, bound: int) -> dict | None:
    """None if f lifts every Lambda^n_0 with first edge f for 2 <= n <= bound, else a witness."""
    for n in range(2, bound + 1):
        fixed = {"0": SimplexRef(Y.vertex(f, 0)), "1": SimplexRef(Y.vertex(f, 1)), "01": f}
        w = horn_lifting_failure(Y, q, n, 0, fixed)
        if w is not None:
            return w
    return None


def is_pattern_fibered(
    Xb: MarkedSSet, p: SimplicialMap, pattern: CategoricalPattern, dim_bound: int = 3
) -> Verdict:
    """Bounded check of the fibered-object conditions (1)-(4); cones must be constant on contractible K."""
    X, S = Xb.base, pattern.base
    if p.source != X or p.target != S:
        raise SimplicialError("structure map must go from the object to the pattern base")
    for e in Xb.marked:
        if not pattern.in_M(p(SimplexRef(e))):
            raise SimplicialError(f"marked edge {e} lies over an edge outside M_S")
    for cone in pattern.cones:
        if not cone.is_constant() or not homology(cone.K, max(cone.K.top_dim, 1)).acyclic:
            raise SimplicialError("only constant cones on weakly contractible K are supported")
    failures: list[dict] = []
    for n in range(2, dim_bound + 1):
        for i in range(1, n):
            w = horn_lifting_failure(X, p, n, i)
            if w is not None:
                failures.append({"condition": 1, **w})
                break
        if failures:
            break
    pull_cache: dict = {}

    def pulled(sigma: SimplexRef):
        if sigma not in pull_cache:
            pull_cache[sigma] = pullback_over(X, p, sigma, dim_bound)
        return pull_cache[sigma]

    def cocart(e: SimplexRef, sigma: SimplexRef) -> dict | None:
        Y, q, refs = pulled(sigma)
        return is_cocartesian(Y, q, refs[(e, (0, 1))], dim_bound)

    edges = [SimplexRef(g) for g in (X.generators.get(1, ()))]
    for e in edges:
        base = p(e)
        good = pattern.in_M(base) and cocart(e, base) is None
        if good != Xb.is_marked(e):
            failures.append({
                "condition": 3, "edge": str(e), "marked": Xb.is_marked(e), "cocartesian_over_M": good,
            })
            break
    for s in (S.generators.get(1, ())):
        sref = SimplexRef(s)
        if not pattern.in_M(sref):
            continue
        Y, q, refs = pulled(sref)
        for v in X.generators[0]:
            if p(SimplexRef(v)) != SimplexRef(S.vertex(sref, 0)):
                continue
            lifts = [e for e in edges if p(e) == sref and X.vertex(e, 0) == v]
            if not any(cocart(e, sref) is None for e in lifts):
                failures.append({"condition": 2, "base_edge": s, "vertex": v})
                break
    for e in edges:
        if not Xb.is_marked(e):
            continue
        for t in S.simplices(2):
            if pattern.in_T(t) and S.edge(t, 0, 1) == p(e):
                Y, q, refs = pulled(t)
                w = is_cocartesian(Y, q, refs[(e, (0, 1))], dim_bound)
                if w is not None:
                    failures.append({"condition": 4, "edge": str(e), "triangle": str(t), **w})
                    break
    if failures:
        out = no(failures[0], f"condition ({failures[0]['condition']}) fails")
        out.witness = {**failures[0], "conditions_failed": sorted({f["condition"] for f in failures})}
        return out
    return semi(f"conditions (1)-(4) hold through dimension {dim_bound}", bound=dim_bound)


# ---------------------------------------------------------------------------
# flatness over Delta^2


def double_slice_fiber(M: FiniteSimplicialSet, p: SimplicialMap, f: SimplexRef, bound: int) -> FiniteSimplicialSet:
    """D_{C//E}: simplices z of M from C to E through the fiber over 1 with long edge f."""
    C, E = M.vertex(f, 0), M.vertex(f, 1)
    levels = []
    for n in range(bound + 1):
        level = []
        for z in M.simplices(n + 2):
            vs = M.vertices_of(z)
            if vs[0] != C or vs[-1] != E or M.edge(z, 0, n + 2) != f:
                continue
            if all(p.target.vertices_of(p(SimplexRef(v)))[0] == "1" for v in vs[1:-1]):
                level.append(z)
        levels.append(level)

    def face(z, k):
        return M.face(z, k + 1)

    def degen(z, k):
        return M.degeneracy(z, k + 1)

    def label(z) -> str:
        return str(z)

    D, _ = build_from_levels(levels, face, degen, label, meta={"truncation": bound})
    return D


def is_flat_over_triangle(
    M: FiniteSimplicialSet, p: SimplicialMap, f: SimplexRef, bound: int = 2
) -> HomologyCertificate:
    """Homology certificate for D_{C//E} (degrees <= bound)."""
    T = p.target
    if T != simplex(2):
        raise SimplicialError("projection must land in Delta^2")
    if p(f) != SimplexRef("02"):
        raise SimplicialError("f must lie over the edge 02")
    D = double_slice_fiber(M, p, f, bound + 1)
    cert = homology(D, bound)
    cert.notes.append(f"double slice f-vector {list(D.f_vector())}")
    return cert


__all__ = [
    "scaled_generator", "scaled_generators", "generator_name", "pattern_generator",
    "PatternGenerator", "extensions", "decorated_maps", "is_weak_bicategory",
    "FiltrationStep", "FiltrationCertificate", "verify_filtration", "preperc_family",
    "swww_family", "carpal_family", "FAMILIES", "chains_of", "scaled_slice", "hom_via_slice",
    "SliceResult", "pullback_over", "horn_lifting_failure", "is_cocartesian",
    "is_pattern_fibered", "double_slice_fiber", "is_flat_over_triangle",
]
