"""Set-level Segal theory.

Category objects among finite simplicial sets, their groupoid cores, the
collapsed-Delta^3 detector of invertible edges, and preSegal data enriched in
finite sets together with the free category they generate.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import product as iproduct
from typing import Callable, Iterator, Mapping, Sequence

from .sset_core import (
    FinCategory,
    FiniteSimplicialSet,
    SimplexRef,
    SimplicialError,
    SimplicialMap,
    _UnionFind,
    build_from_levels,
    codegeneracy,
    coface,
    collapsed_K,
    is_monotone,
    iter_maps,
    monotone_maps,
    nerve,
)
from .verdict import Verdict, no, semi, yes


class SegalError(SimplicialError):
    """A Segal comparison map fails to be bijective."""

    def __init__(self, message: str, witness: dict | None = None) -> None:
        super().__init__(message)
        self.witness = witness or {}


# ---------------------------------------------------------------------------
# category objects


def _effective_bound(X: FiniteSimplicialSet, n_max: int) -> int:
    t = X.meta.get("truncation")
    return n_max if t is None else min(n_max, int(t))


def spine(X: FiniteSimplicialSet, x: SimplexRef) -> tuple[SimplexRef, ...]:
    return tuple(X.edge(x, i, i + 1) for i in range(X.dim(x)))


def _edges_by_source(X: FiniteSimplicialSet) -> dict[str, list[SimplexRef]]:
    out: dict[str, list[SimplexRef]] = {}
    for e in X.simplices(1):
        out.setdefault(X.vertex(e, 0), []).append(e)
    return out


def _composable_chains(X: FiniteSimplicialSet, n: int) -> Iterator[tuple[SimplexRef, ...]]:
    by_src = _edges_by_source(X)

    def rec(chain: tuple[SimplexRef, ...]):
        if len(chain) == n:
            yield chain
            return
        for e in by_src.get(X.vertex(chain[-1], 1), []):
            yield from rec(chain + (e,))

    for e in X.simplices(1):
        yield from rec((e,))


def is_category_object(X: FiniteSimplicialSet, n_max: int = 3) -> Verdict:
    """Bijectivity of X_n -> X_1 x_{X_0} ... x_{X_0} X_1 for 2 <= n <= n_max.

    Truncated inputs (nerves built to a dimension bound) are checked up to
    their truncation only.
    """
    top = _effective_bound(X, n_max)
    for n in range(2, top + 1):
        seen: dict[tuple, SimplexRef] = {}
        for x in X.simplices(n):
            sp = spine(X, x)
            if sp in seen:
                return no(
                    {"n": n, "simplices": [str(seen[sp]), str(x)], "spine": [str(e) for e in sp]},
                    f"two {n}-simplices share a spine",
                )
            seen[sp] = x
        for chain in _composable_chains(X, n):
            if chain not in seen:
                return no(
                    {"n": n, "spine": [str(e) for e in chain]},
                    f"composable {n}-chain without a filler",
                )
    return yes(f"Segal maps bijective for 2 <= n <= {top}", n_max=top)


def _morphism_name(X: FiniteSimplicialSet, e: SimplexRef) -> str:
    return f"id[{e.generator}]" if e.degeneracies else e.generator


def to_category(X: FiniteSimplicialSet, n_max: int = 3) -> FinCategory:
    """The category whose nerve is X; requires the Segal check through n_max >= 3."""
    v = is_category_object(X, max(n_max, 3))
    if not v:
        raise SegalError(v.detail, v.witness)
    objects = list(X.generators[0])
    morphisms = {}
    identities = {}
    for e in X.simplices(1):
        name = _morphism_name(X, e)
        morphisms[name] = (X.vertex(e, 0), X.vertex(e, 1))
        if e.degeneracies:
            identities[e.generator] = name
    compose = {}
    for t in X.simplices(2):
        f, g = X.edge(t, 0, 1), X.edge(t, 1, 2)
        compose[(_morphism_name(X, f), _morphism_name(X, g))] = _morphism_name(X, X.edge(t, 0, 2))
    return FinCategory(objects, morphisms, identities, compose)


def _nerve_ref(C: FinCategory, chain: Sequence[str], objs: Sequence[str]) -> SimplexRef:
    word = tuple(i for i in reversed(range(len(chain))) if C.is_identity(chain[i]))
    kept = [m for m in chain if not C.is_identity(m)]
    return SimplexRef(",".join(kept) if kept else objs[0], word)


def comparison_map(X: FiniteSimplicialSet, C: FinCategory, N: FiniteSimplicialSet) -> SimplicialMap:
    """X -> N(C) sending a simplex to the chain of its spine."""
    images = {}
    for g, d in X.dim_of.items():
        x = SimplexRef(g)
        if d == 0:
            images[g] = SimplexRef(g)
            continue
        chain = [_morphism_name(X, e) for e in spine(X, x)]
        images[g] = _nerve_ref(C, chain, [X.vertex(x, 0)])
    return SimplicialMap(X, N, images)


def nerve_round_trip(X: FiniteSimplicialSet, n_max: int = 3) -> Verdict:
    """X is isomorphic to the nerve of to_category(X) through X's top dimension."""
    try:
        C = to_category(X, n_max)
    except SegalError as exc:
        return no(exc.witness, str(exc))
    N = nerve(C, X.top_dim)
    try:
        phi = comparison_map(X, C, N)
    except SimplicialError as exc:
        return no({"error": str(exc)}, "spine map is not simplicial")
    if not phi.is_isomorphism():
        return no({"f_source": list(X.f_vector()), "f_nerve": list(N.f_vector())}, "not bijective")
    return yes("comparison map is an isomorphism", dim=X.top_dim)


# ---------------------------------------------------------------------------
# invertible edges


def invertible_edges(X: FiniteSimplicialSet) -> set[SimplexRef]:
    C = to_category(X)
    return {e for e in X.simplices(1) if C.is_isomorphism(_morphism_name(X, e))}


def invertible_core(X: FiniteSimplicialSet) -> FiniteSimplicialSet:
    """The simplicial subset of simplices all of whose edges are invertible."""
    inv = invertible_edges(X)
    keep = []
    for g, d in X.dim_of.items():
        x = SimplexRef(g)
        if all(X.edge(x, i, j) in inv for j in range(d + 1) for i in range(j)):
            keep.append(g)
    core = X.subcomplex(keep)
    core.meta.update(X.meta)
    return core


def is_groupoid_object(X: FiniteSimplicialSet, n_max: int = 3) -> Verdict:
    v = is_category_object(X, n_max)
    if not v:
        return v
    C = to_category(X, n_max)
    for e in X.simplices(1):
        if not C.is_isomorphism(_morphism_name(X, e)):
            return no({"edge": str(e)}, "edge is not invertible")
    return yes("category object with all edges invertible")


def detect_invertibles_via_K(X: FiniteSimplicialSet) -> set[SimplexRef]:
    """Images of the middle edge 12 of collapsed_K under all maps K -> X."""
    K = collapsed_K()
    mid = SimplexRef("12")
    return {phi(mid) for phi in iter_maps(K, X)}


# ---------------------------------------------------------------------------
# random finite categories


def random_category(
    rng: random.Random, max_objects: int = 4, max_morphisms: int = 10, tries: int = 200
) -> FinCategory:
    """Subcategory of finite sets generated by a few random functions.

    Objects are sets of size 1 or 2; generators are resampled until the
    closure under composition has at most ``max_morphisms`` morphisms.
    """
    for _ in range(tries):
        k = rng.randint(1, max_objects)
        names = [chr(ord("A") + i) for i in range(k)]
        size = {o: rng.randint(1, 2) for o in names}
        arrows: set[tuple[str, str, tuple[int, ...]]] = {
            (o, o, tuple(range(size[o]))) for o in names
        }
        for _ in range(rng.randint(0, 4)):
            a, b = rng.choice(names), rng.choice(names)
            arrows.add((a, b, tuple(rng.randrange(size[b]) for _ in range(size[a]))))
        frontier = set(arrows)
        while frontier and len(arrows) <= max_morphisms:
            new = set()
            for f in arrows:
                for g in arrows:
                    if f[1] == g[0] and (f in frontier or g in frontier):
                        h = (f[0], g[1], tuple(g[2][v] for v in f[2]))
                        if h not in arrows:
                            new.add(h)
            arrows |= new
            frontier = new
        if len(arrows) > max_morphisms:
            continue

        def nm(f):
            return f"{f[0]}{f[1]}:{''.join(map(str, f[2]))}"

        morph = {nm(f): (f[0], f[1]) for f in arrows}
        ident = {o: nm((o, o, tuple(range(size[o])))) for o in names}
        comp = {}
        for f in arrows:
            for g in arrows:
                if f[1] == g[0]:
                    comp[(nm(f), nm(g))] = nm((f[0], g[1], tuple(g[2][v] for v in f[2])))
        return FinCategory(names, morph, ident, comp)
    raise SimplicialError("could not sample a category within the size limits")


# ---------------------------------------------------------------------------
# preSegal data


Seq = tuple[str, ...]


class PreSegalSet:
    """An object set S with finite sets X([s_0..s_n]) and their reindexing action.

    ``act(seq, theta, x)`` applies X(theta) for monotone theta: [m] -> [n],
    landing in X(seq o theta).  Sequences are enumerated up to
    ``length_bound`` (the largest n).
    """

    def __init__(
        self,
        S: Sequence[str],
        values: Callable[[Seq], Sequence[str]],
        act: Callable[[Seq, tuple[int, ...], str], str],
        length_bound: int,
        kind: str = "custom",
        params: Mapping | None = None,
    ) -> None:
        self.S = tuple(S)
        self._values = values
        self._act = act
        self.length_bound = int(length_bound)
        self.kind = kind
        self.params = dict(params or {})
        self._cache: dict[Seq, tuple[str, ...]] = {}
        for s in self.S:
            if len(self.values((s,))) != 1:
                raise SimplicialError(f"X([{s}]) must be a singleton")

    def values(self, seq: Sequence[str]) -> tuple[str, ...]:
        seq = tuple(seq)
        hit = self._cache.get(seq)
        if hit is None:
            hit = tuple(self._values(seq))
            self._cache[seq] = hit
        return hit

    def act(self, seq: Sequence[str], theta: Sequence[int], x: str) -> str:
        seq, theta = tuple(seq), tuple(theta)
        if not is_monotone(theta) or (theta and not 0 <= theta[0] <= theta[-1] < len(seq)):
            raise SimplicialError(f"{theta} is not a monotone map into [{len(seq) - 1}]")
        return self._act(seq, theta, x)

    def point(self, s: str) -> str:
        return self.values((s,))[0]

    def degenerate(self, s: str) -> str:
        """The degenerate element of X([s, s])."""
        return self.act((s,), (0, 0), self.point(s))

    def sequences(self, n: int, start: str | None = None, end: str | None = None) -> Iterator[Seq]:
        for seq in iproduct(self.S, repeat=n + 1):
            if (start is None or seq[0] == start) and (end is None or seq[-1] == end):
                yield seq

    def elements(self, n: int) -> Iterator[tuple[Seq, str]]:
        for seq in self.sequences(n):
            for x in self.values(seq):
                yield seq, x

    def validate(self, bound: int | None = None) -> None:
        """Functoriality X(theta phi) = X(phi) X(theta) on elementary phi, within ``bound``."""
        bound = self.length_bound if bound is None else bound
        for n in range(bound + 1):
            for seq, x in self.elements(n):
                for m in range(bound + 1):
                    for theta in monotone_maps(m, n):
                        s2 = tuple(seq[t] for t in theta)
                        y = self.act(seq, theta, x)
                        if y not in self.values(s2):
                            raise SimplicialError(f"X({theta}) leaves X({s2}) on {seq}:{x}")
                        elem = [coface(m, k) for k in range(m + 1)] if m else []
                        elem += [codegeneracy(m, k) for k in range(m + 1)] if m + 1 <= bound else []
                        for phi in elem:
                            lhs = self.act(seq, tuple(theta[p] for p in phi), x)
                            if lhs != self.act(s2, phi, y):
                                raise SimplicialError(f"functoriality fails on {seq}:{x}")

    def to_json(self) -> dict:
        if self.kind == "custom":
            raise SimplicialError("custom preSegal data has no JSON form")
        return {"kind": self.kind, "length_bound": self.length_bound, **self.params}

    @staticmethod
    def from_json(obj: Mapping) -> "PreSegalSet":
        try:
            kind = obj["kind"]
            lb = obj.get("length_bound")
            if kind == "free":
                return free_simplex(int(obj["n"]), [str(a) for a in obj["A"]], lb)
            if kind == "category":
                return from_category(FinCategory.from_json(obj["category"]), lb or 3)
            if kind == "discrete":
                return discrete([str(s) for s in obj["objects"]], lb or 3)
            if kind == "monoid":
                table = {(str(a), str(b)): str(c) for a, b, c in obj["table"]}
                return monoid([str(e) for e in obj["elements"]], table, str(obj["unit"]), lb or 3)
        except (KeyError, TypeError, ValueError) as exc:
            raise SimplicialError(f"malformed preSegal JSON: {exc}") from exc
        raise SimplicialError(f"unknown preSegal kind {obj.get('kind')!r}")


def free_simplex(n: int, A: Sequence[str], length_bound: int | None = None) -> PreSegalSet:
    """Fr^n(A): empty on non-monotone sequences, a point on constant ones, A otherwise."""
    A = tuple(A)
    if "*" in A:
        raise SimplicialError("'*' is reserved for the point")
    S = tuple(str(i) for i in range(n + 1))

    def values(seq: Seq):
        ints = [int(s) for s in seq]
        if not is_monotone(ints):
            return ()
        return ("*",) if ints[0] == ints[-1] else A

    def act(seq: Seq, theta, x):
        return "*" if seq[theta[0]] == seq[theta[-1]] else x

    lb = n + 2 if length_bound is None else length_bound
    return PreSegalSet(S, values, act, lb, "free", {"n": n, "A": list(A)})


def from_category(C: FinCategory, length_bound: int = 3) -> PreSegalSet:
    """X([s_0..s_n]) = Hom(s_0, s_1) x ... x Hom(s_{n-1}, s_n); elements joined by '|'."""

    def values(seq: Seq):
        if len(seq) == 1:
            return ("*",)
        homs = [C.hom(a, b) for a, b in zip(seq, seq[1:])]
        return tuple("|".join(p) for p in iproduct(*homs))

    def act(seq: Seq, theta, x):
        if len(theta) == 1:
            return "*"
        ms = x.split("|") if len(seq) > 1 else []
        out = []
        for a, b in zip(theta, theta[1:]):
            h = C.identities[seq[a]]
            for m in ms[a:b]:
                h = C.comp(h, m)
            out.append(h)
        return "|".join(out)

    return PreSegalSet(C.objects, values, act, length_bound, "category", {"category": C.to_json()})


def discrete(objects: Sequence[str], length_bound: int = 3) -> PreSegalSet:
    """Points on constant sequences, empty elsewhere."""

    def values(seq: Seq):
        return ("*",) if len(set(seq)) == 1 else ()

    def act(seq, theta, x):
        return "*"

    return PreSegalSet(objects, values, act, length_bound, "discrete", {"objects": list(objects)})


def monoid(
    elements: Sequence[str], table: Mapping[tuple[str, str], str], unit: str, length_bound: int = 3
) -> PreSegalSet:
    """The one-object datum of a monoid; ``table[(a, b)]`` is "first a, then b"."""
    C = FinCategory(["x"], {e: ("x", "x") for e in elements}, {"x": unit}, dict(table))
    P = from_category(C, length_bound)
    P.kind = "monoid"
    P.params = {"elements": list(elements), "table": sorted([a, b, c] for (a, b), c in table.items()), "unit": unit}
    return P


# ---------------------------------------------------------------------------
# homotopy category and UnPre


def segal_condition(P: PreSegalSet, bound: int | None = None) -> Verdict:
    """X([s_0..s_n]) -> prod X([s_i, s_{i+1}]) bijective for 2 <= n <= bound."""
    bound = P.length_bound if bound is None else bound
    for n in range(2, bound + 1):
        for seq in P.sequences(n):
            target = list(iproduct(*(P.values(seq[i : i + 2]) for i in range(n))))
            images = {}
            for x in P.values(seq):
                key = tuple(P.act(seq, (i, i + 1), x) for i in range(n))
                if key in images:
                    return no({"sequence": list(seq), "elements": [images[key], x]}, "not injective")
                images[key] = x
            if len(images) != len(target):
                missing = next(t for t in target if t not in images)
                return no({"sequence": list(seq), "missing": list(missing)}, "not surjective")
    return yes(f"Segal condition through length {bound}", bound=bound)


def homotopy_category_presegal(P: PreSegalSet) -> FinCategory:
    """Objects S, Hom(x, y) = X([x, y]), composition through X([x, y, z])."""
    v = segal_condition(P, max(P.length_bound, 3))
    if not v:
        raise SegalError(v.detail, v.witness)

    def nm(x: str, y: str, e: str) -> str:
        return f"{x}>{y}:{e}"

    morph = {nm(x, y, e): (x, y) for x in P.S for y in P.S for e in P.values((x, y))}
    ident = {x: nm(x, x, P.degenerate(x)) for x in P.S}
    comp = {}
    for seq in P.sequences(2):
        x, y, z = seq
        for c in P.values(seq):
            a, b = P.act(seq, (0, 1), c), P.act(seq, (1, 2), c)
            comp[(nm(x, y, a), nm(y, z, b))] = nm(x, z, P.act(seq, (0, 2), c))
    return FinCategory(P.S, morph, ident, comp)


def unpre(P: PreSegalSet, n_max: int) -> FiniteSimplicialSet:
    """The simplicial set with n-simplices the pairs (s_0..s_n, x in X([s_0..s_n]))."""
    levels = [list(P.elements(n)) for n in range(n_max + 1)]

    def face(e, k):
        seq, x = e
        n = len(seq) - 1
        th = coface(n, k)
        return tuple(seq[t] for t in th), P.act(seq, th, x)

    def degen(e, k):
        seq, x = e
        n = len(seq) - 1
        th = codegeneracy(n, k)
        return tuple(seq[t] for t in th), P.act(seq, th, x)

    def label(e) -> str:
        seq, x = e
        return seq[0] if len(seq) == 1 else ".".join(seq) + ":" + x

    X, _ = build_from_levels(levels, face, degen, label, meta={"truncation": n_max})
    return X


# ---------------------------------------------------------------------------
# the free category F(S, X)


Element = tuple[Seq, tuple[int, ...], tuple[str, ...]]  # (sequence, cuts, piece values)


def _pieces(seq: Seq, cuts: tuple[int, ...]) -> list[Seq]:
    return [seq[a : b + 1] for a, b in zip(cuts, cuts[1:])]


def _cut_sets(n: int) -> Iterator[tuple[int, ...]]:
    inner = range(1, n)
    for mask in range(1 << (n - 1)):
        yield (0,) + tuple(i for k, i in enumerate(inner) if mask >> k & 1) + (n,)


def _j_objects(P: PreSegalSet, x: str, y: str, bound: int):
    """JObjects with endpoints x, y, 1 <= n <= bound and nonempty H."""
    for n in range(1, bound + 1):
        for seq in P.sequences(n, x, y):
            for cuts in _cut_sets(n):
                vals = [P.values(p) for p in _pieces(seq, cuts)]
                if all(vals):
                    yield seq, cuts, vals


def _h_map(P: PreSegalSet, seq: Seq, cuts, f, cuts2, elems) -> tuple[str, ...] | None:
    """H(f) on one element; None when f is not a J-morphism for these cuts."""
    out = []
    for a2, b2 in zip(cuts2, cuts2[1:]):
        lo, hi = f[a2], f[b2]
        j = next((j for j in range(len(cuts) - 1) if cuts[j] <= lo and hi <= cuts[j + 1]), None)
        if j is None:
            return None
        base = cuts[j]
        theta = tuple(f[t] - base for t in range(a2, b2 + 1))
        out.append(P.act(seq[base : cuts[j + 1] + 1], theta, elems[j]))
    return tuple(out)


@dataclass
class _Colimit:
    reps: list[Element]
    class_of: dict[Element, int]


def _colimit(P: PreSegalSet, x: str, y: str, bound: int) -> _Colimit:
    uf = _UnionFind()
    elements: list[Element] = []
    objs = list(_j_objects(P, x, y, bound))
    for seq, cuts, vals in objs:
        for elems in iproduct(*vals):
            e = (seq, cuts, elems)
            uf.find(e)
            elements.append(e)
    for seq, cuts, vals in objs:
        n = len(seq) - 1
        for n2 in range(1, bound + 1):
            for f in monotone_maps(n2, n):
                if f[0] != 0 or f[-1] != n:
                    continue
                seq2 = tuple(seq[t] for t in f)
                for cuts2 in _cut_sets(n2):
                    if (seq2, cuts2, f) == (seq, cuts, tuple(range(n + 1))):
                        continue
                    for elems in iproduct(*vals):
                        img = _h_map(P, seq, cuts, f, cuts2, elems)
                        if img is None:
                            break
                        uf.union((seq, cuts, elems), (seq2, cuts2, img))
    groups: dict[Element, list[Element]] = {}
    for e in elements:
        groups.setdefault(uf.find(e), []).append(e)

    def key(e: Element):
        return (len(e[0]), e[0], len(e[1]), e[1], e[2])

    reps = sorted((min(g, key=key) for g in groups.values()), key=key)
    index = {r: i for i, r in enumerate(reps)}
    class_of = {}
    for g in groups.values():
        i = index[min(g, key=key)]
        for e in g:
            class_of[e] = i
    return _Colimit(reps, class_of)


@dataclass
class FreeHom:
    """Hom(x, y) in the free category, as colimit classes with representatives."""

    x: str
    y: str
    bound: int
    reps: list[Element]
    stabilized: bool
    class_of: dict[Element, int] = field(repr=False, default_factory=dict)

    def __len__(self) -> int:
        return len(self.reps)

    def labels(self) -> list[str]:
        return [element_label(e) for e in self.reps]

    def to_json(self) -> dict:
        return {
            "from": self.x, "to": self.y, "bound": self.bound, "count": len(self.reps),
            "stabilized": self.stabilized, "representatives": self.labels(),
        }


def element_label(e: Element) -> str:
    seq, cuts, elems = e
    parts = [".".join(p) + ":" + v for p, v in zip(_pieces(seq, cuts), elems)]
    return " ; ".join(parts)


def free_category(P: PreSegalSet, x: str, y: str, length_bound: int) -> FreeHom:
    """Colimit of H over J_{x,y}(S) truncated at sequence length ``length_bound``.

    Stabilized when the classes at bounds L and L+1 correspond bijectively.
    """
    if x not in P.S or y not in P.S:
        raise SimplicialError("endpoints must be objects")
    if length_bound < 1:
        raise SimplicialError("length_bound must be at least 1")
    lo = _colimit(P, x, y, length_bound)
    hi = _colimit(P, x, y, length_bound + 1)
    images = [hi.class_of[r] for r in lo.reps]
    stable = len(set(images)) == len(lo.reps) == len(hi.reps)
    return FreeHom(x, y, length_bound, lo.reps, stable, lo.class_of)


def _concat(a: Element, b: Element) -> Element:
    n = len(a[0]) - 1
    return (a[0] + b[0][1:], a[1] + tuple(c + n for c in b[1][1:]), a[2] + b[2])


def unit_element(P: PreSegalSet, s: str, t: str, e: str) -> Element:
    return ((s, t), (0, 1), (e,))


@dataclass
class FreeCategory:
    category: FinCategory
    homs: dict[tuple[str, str], FreeHom]
    unit: Callable[[str, str, str], str]  # (s, t, e in X([s,t])) -> morphism name
    stabilized: bool


def free_category_full(P: PreSegalSet, length_bound: int) -> FreeCategory:
    """F(S, X) as a finite category; composition concatenates representatives."""
    homs = {(x, y): free_category(P, x, y, length_bound) for x in P.S for y in P.S}
    extra: dict[tuple[str, str, int], _Colimit] = {}

    def lookup(x: str, y: str, e: Element) -> int:
        h = homs[(x, y)]
        if e in h.class_of:
            return h.class_of[e]
        n = len(e[0]) - 1
        key = (x, y, n)
        if key not in extra:
            extra[key] = _colimit(P, x, y, n)
        c = extra[key]
        rep = c.reps[c.class_of[e]]
        return h.class_of[rep]

    def nm(x: str, y: str, i: int) -> str:
        return f"{x}>{y}#{i}"

    morph = {nm(x, y, i): (x, y) for (x, y), h in homs.items() for i in range(len(h))}
    ident = {x: nm(x, x, lookup(x, x, unit_element(P, x, x, P.degenerate(x)))) for x in P.S}
    comp = {}
    for (x, y), h1 in homs.items():
        for z in P.S:
            h2 = homs[(y, z)]
            for i, a in enumerate(h1.reps):
                for j, b in enumerate(h2.reps):
                    comp[(nm(x, y, i), nm(y, z, j))] = nm(x, z, lookup(x, z, _concat(a, b)))
    C = FinCategory(P.S, morph, ident, comp)
    stable = all(h.stabilized for h in homs.values())

    def unit(s: str, t: str, e: str) -> str:
        return nm(s, t, lookup(s, t, unit_element(P, s, t, e)))

    return FreeCategory(C, homs, unit, stable)


# ---------------------------------------------------------------------------
# the adjunction F -| G


def functors(D: FinCategory, C: FinCategory) -> Iterator[dict[str, str]]:
    """All functors D -> C, as maps on objects and morphisms (one dict)."""
    order = list(D.morphisms)
    constraints: dict[str, list[tuple[str, str, str]]] = {m: [] for m in order}
    pos = {m: i for i, m in enumerate(order)}
    for (f, g), h in D.compose.items():
        last = max((f, g, h), key=lambda m: pos[m])
        constraints[last].append((f, g, h))

    def rec(i: int, assign: dict[str, str]):
        if i == len(order):
            yield dict(assign)
            return
        m = order[i]
        a, b = D.morphisms[m]
        if D.is_identity(m):
            cands = [C.identities[assign[a]]]
        else:
            cands = C.hom(assign[a], assign[b])
        for c in cands:
            assign[m] = c
            if all(C.comp(assign[f], assign[g]) == assign[h] for f, g, h in constraints[m]):
                yield from rec(i + 1, assign)
        assign.pop(m, None)

    for objs in iproduct(C.objects, repeat=len(D.objects)):
        yield from rec(0, dict(zip(D.objects, objs)))


def _edge_pairs(P: PreSegalSet) -> list[tuple[str, str]]:
    return [(s, t) for s in P.S for t in P.S if P.values((s, t))]


def presegal_maps(P: PreSegalSet, C: FinCategory, bound: int | None = None) -> Iterator[dict]:
    """Maps (S, X) -> G(C), as object maps plus values on X([s, t]).

    Values on longer sequences are forced by composition; the remaining
    conditions are checked on sequences up to ``bound``.
    """
    bound = P.length_bound if bound is None else bound
    pairs = _edge_pairs(P)
    checks = []
    for n in range(2, bound + 1):
        for seq, x in P.elements(n):
            checks.append((seq, x))
    for objs in iproduct(C.objects, repeat=len(P.S)):
        alpha = dict(zip(P.S, objs))
        slots = [(s, t, e) for s, t in pairs for e in P.values((s, t))]
        options = []
        for s, t, e in slots:
            if s == t and e == P.degenerate(s):
                options.append([C.identities[alpha[s]]])
            else:
                options.append(C.hom(alpha[s], alpha[t]))
        for choice in iproduct(*options):
            m = {slot: c for slot, c in zip(slots, choice)}
            if all(_natural(P, C, alpha, m, seq, x) for seq, x in checks):
                yield {"objects": alpha, "edges": m}


def _natural(P, C, alpha, m, seq, x) -> bool:
    n = len(seq) - 1
    edge = [m[(seq[k], seq[k + 1], P.act(seq, (k, k + 1), x))] for k in range(n)]
    for i in range(n + 1):
        acc = C.identities[alpha[seq[i]]]
        for j in range(i + 1, n + 1):
            acc = C.comp(acc, edge[j - 1])
            if m[(seq[i], seq[j], P.act(seq, (i, j), x))] != acc:
                return False
    return True


def adjunction_check(
    P: PreSegalSet,
    C: FinCategory,
    length_bound: int | None = None,
    free: FreeCategory | None = None,
) -> Verdict:
    """Functors F(S, X) -> C biject with preSegal maps (S, X) -> G(C) through the unit.

    ``free`` may carry a precomputed F(S, X) at the same bound.
    """
    L = length_bound if length_bound is not None else P.length_bound
    F = free if free is not None else free_category_full(P, L)
    if not F.stabilized:
        unstable = [list(k) for k, h in sorted(F.homs.items()) if not h.stabilized]
        raise SimplicialError(f"free category not stabilized at bound {L}: {unstable}")
    right = {_map_key(m) for m in presegal_maps(P, C, L)}
    images = set()
    n_left = 0
    for phi in functors(F.category, C):
        n_left += 1
        alpha = {s: phi[s] for s in P.S}
        edges = {
            (s, t, e): phi[F.unit(s, t, e)] for s, t in _edge_pairs(P) for e in P.values((s, t))
        }
        k = _map_key({"objects": alpha, "edges": edges})
        if k not in right:
            return no({"functor": dict(sorted(phi.items()))}, "unit image is not a preSegal map")
        images.add(k)
    if len(images) != n_left:
        return no({"functors": n_left, "distinct_images": len(images)}, "unit map is not injective")
    if images != right:
        missing = sorted(right - images)[0]
        return no({"preSegal_map": [list(map(list, part)) for part in missing]}, "not surjective")
    return semi(
        "bijection on functors and preSegal maps within the bound",
        functors=n_left, presegal_maps=len(right), bound=L,
    )


def _map_key(m: dict) -> tuple:
    return (tuple(sorted(m["objects"].items())), tuple(sorted(m["edges"].items())))


__all__ = [
    "SegalError", "is_category_object", "to_category", "nerve_round_trip", "comparison_map",
    "invertible_edges", "invertible_core", "is_groupoid_object", "detect_invertibles_via_K",
    "random_category", "PreSegalSet", "free_simplex", "from_category", "discrete", "monoid",
    "segal_condition", "homotopy_category_presegal", "unpre", "free_category", "FreeHom",
    "free_category_full", "FreeCategory", "functors", "presegal_maps", "adjunction_check",
    "element_label", "spine",
]
