"""Marked and scaled simplicial sets.

Decorations are stored on nondegenerate cells only; degenerate edges (resp.
triangles) count as marked (resp. thin) implicitly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence, Union

from .sset_core import (
    FiniteSimplicialSet,
    SimplexRef,
    SimplicialError,
    SimplicialMap,
    cone_left,
    product,
    pushout,
)


class _Decorated:
    degree: int = 0
    base: FiniteSimplicialSet
    cells: frozenset[str]

    def __init__(self, base: FiniteSimplicialSet, cells: Iterable[str | SimplexRef] = ()) -> None:
        keep = set()
        for c in cells:
            if isinstance(c, SimplexRef):
                if c.degeneracies:
                    continue
                c = c.generator
            if base.dim_of.get(c) != self.degree:
                raise SimplicialError(f"{c!r} is not a nondegenerate {self.degree}-simplex")
            keep.add(c)
        self.base = base
        self.cells = frozenset(keep)

    def decorated(self, x: SimplexRef) -> bool:
        if self.base.dim(x) != self.degree:
            raise SimplicialError(f"expected a {self.degree}-simplex")
        return bool(x.degeneracies) or x.generator in self.cells

    def __eq__(self, other: object) -> bool:
        return type(self) is type(other) and self.base == other.base and self.cells == other.cells

    def __hash__(self) -> int:
        return hash((type(self).__name__, self.cells))

    def with_cells(self, cells: Iterable[str | SimplexRef]):
        return type(self)(self.base, cells)

    def restrict(self, sub: FiniteSimplicialSet):
        return type(self)(sub, [c for c in self.cells if c in sub.dim_of])

    def nondegenerate_decorated(self) -> list[str]:
        return sorted(self.cells)


class MarkedSSet(_Decorated):
    """A simplicial set with a set of marked edges."""

    degree = 1
    kind = "marked"

    @property
    def marked(self) -> frozenset[str]:
        return self.cells

    def is_marked(self, x: SimplexRef) -> bool:
        return self.decorated(x)

    def to_json(self) -> dict:
        out = self.base.to_json()
        out["marked"] = [SimplexRef(c).to_json() for c in sorted(self.cells)]
        return out

    def __repr__(self) -> str:
        return f"MarkedSSet(f_vector={self.base.f_vector()}, marked={len(self.cells)})"


class ScaledSSet(_Decorated):
    """A simplicial set with a set of thin 2-simplices."""

    degree = 2
    kind = "scaled"

    @property
    def thin(self) -> frozenset[str]:
        return self.cells

    def is_thin(self, x: SimplexRef) -> bool:
        return self.decorated(x)

    def to_json(self) -> dict:
        out = self.base.to_json()
        out["thin"] = [SimplexRef(c).to_json() for c in sorted(self.cells)]
        return out

    def __repr__(self) -> str:
        return f"ScaledSSet(f_vector={self.base.f_vector()}, thin={len(self.cells)})"


Decorated = Union[MarkedSSet, ScaledSSet]


def load_decorated(obj: Mapping) -> Decorated | FiniteSimplicialSet:
    base = FiniteSimplicialSet.from_json(obj)
    if "thin" in obj:
        return ScaledSSet(base, [SimplexRef.from_json(r) for r in obj["thin"]])
    if "marked" in obj:
        return MarkedSSet(base, [SimplexRef.from_json(r) for r in obj["marked"]])
    return base


def decorate(X: FiniteSimplicialSet, style: str, kind: str) -> Decorated:
    if kind not in ("marked", "scaled"):
        raise SimplicialError(f"unknown decoration kind {kind!r}")
    cls = MarkedSSet if kind == "marked" else ScaledSSet
    if style == "flat":
        return cls(X, ())
    if style == "sharp":
        return cls(X, X.generators.get(cls.degree, ()) if X.top_dim >= cls.degree else ())
    raise SimplicialError(f"unknown style {style!r}")


def flat(X: FiniteSimplicialSet, kind: str = "scaled") -> Decorated:
    return decorate(X, "flat", kind)


def sharp(X: FiniteSimplicialSet, kind: str = "scaled") -> Decorated:
    return decorate(X, "sharp", kind)


def preserves(f: SimplicialMap, A: Decorated, B: Decorated) -> bool:
    return all(B.decorated(f(SimplexRef(c))) for c in A.cells)


@dataclass
class DecoratedMap:
    """A decoration-preserving simplicial map, optionally tagged with a generator family."""

    source: Decorated
    target: Decorated
    underlying: SimplicialMap
    kind: str = ""
    params: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        if type(self.source) is not type(self.target):
            raise SimplicialError("source and target decorations differ in kind")
        if not preserves(self.underlying, self.source, self.target):
            raise SimplicialError("map does not preserve decorations")

    @property
    def is_monomorphism(self) -> bool:
        return self.underlying.is_injective()

    def __call__(self, x: SimplexRef) -> SimplexRef:
        return self.underlying(x)


def inclusion(sub: Decorated, amb: Decorated, kind: str = "", **params) -> DecoratedMap:
    """The identity-on-labels inclusion of a decorated subcomplex."""
    m = SimplicialMap(sub.base, amb.base, {g: SimplexRef(g) for g in sub.base.dim_of})
    return DecoratedMap(sub, amb, m, kind, dict(params))


@dataclass
class DecoratedProduct:
    obj: Decorated
    left: DecoratedMap
    right: DecoratedMap


def product_decorated(A: Decorated, B: Decorated) -> DecoratedProduct:
    """A cell of A x B is decorated iff both projections are decorated."""
    if type(A) is not type(B):
        raise SimplicialError("product of differently decorated sets")
    P = product(A.base, B.base)
    deg = A.degree
    cells = [
        g
        for g in P.obj.generators.get(deg, ())
        if A.decorated(P.left(SimplexRef(g))) and B.decorated(P.right(SimplexRef(g)))
    ]
    obj = type(A)(P.obj, cells)
    return DecoratedProduct(obj, DecoratedMap(obj, A, P.left), DecoratedMap(obj, B, P.right))


@dataclass
class DecoratedPushout:
    obj: Decorated
    left: DecoratedMap
    right: DecoratedMap


def pushout_decorated(f: DecoratedMap, g: DecoratedMap) -> DecoratedPushout:
    """Pushout of underlying sets, decorated by the union of images."""
    po = pushout(f.underlying, g.underlying)
    X, Y = f.target, g.target
    cells = set()
    for c in X.cells:
        im = po.left(SimplexRef(c))
        if not im.degeneracies:
            cells.add(im.generator)
    for c in Y.cells:
        im = po.right(SimplexRef(c))
        if not im.degeneracies:
            cells.add(im.generator)
    obj = type(X)(po.obj, cells)
    return DecoratedPushout(obj, DecoratedMap(X, obj, po.left), DecoratedMap(Y, obj, po.right))


def union_decorations(X: Decorated, *others: Decorated) -> Decorated:
    cells = set(X.cells)
    for o in others:
        cells |= o.cells
    return type(X)(X.base, cells)


# ---------------------------------------------------------------------------
# categorical patterns


@dataclass
class Cone:
    K: FiniteSimplicialSet
    diagram: SimplicialMap  # K^< -> S

    def is_constant(self) -> bool:
        S = self.diagram.target
        verts = {v for im in self.diagram.images.values() for v in S.vertices_of(im)}
        return len(verts) == 1 and all(
            S.dim_of[im.generator] == 0 for im in self.diagram.images.values()
        )


@dataclass
class CategoricalPattern:
    base: FiniteSimplicialSet
    M_S: frozenset[str]
    T: frozenset[str]
    cones: list[Cone] = field(default_factory=list)

    def __post_init__(self) -> None:
        self.M_S = frozenset(MarkedSSet(self.base, self.M_S).cells)
        self.T = frozenset(ScaledSSet(self.base, self.T).cells)
        for cone in self.cones:
            cl = cone_left(cone.K).obj
            if cone.diagram.source != cl:
                raise SimplicialError("cone diagram must be defined on K^<")
            for g, d in cl.dim_of.items():
                im = cone.diagram(SimplexRef(g))
                if d == 1 and not self.in_M(im):
                    raise SimplicialError("cone diagram sends an edge outside M_S")
                if d == 2 and not self.in_T(im):
                    raise SimplicialError("cone diagram sends a triangle outside T")

    def in_M(self, e: SimplexRef) -> bool:
        return bool(e.degeneracies) or e.generator in self.M_S

    def in_T(self, t: SimplexRef) -> bool:
        return bool(t.degeneracies) or t.generator in self.T

    def marked(self) -> MarkedSSet:
        return MarkedSSet(self.base, self.M_S)

    def scaled(self) -> ScaledSSet:
        return ScaledSSet(self.base, self.T)


def sharp_pattern(S: FiniteSimplicialSet) -> CategoricalPattern:
    return CategoricalPattern(
        S,
        frozenset(S.generators.get(1, ()) if S.top_dim >= 1 else ()),
        frozenset(S.generators.get(2, ()) if S.top_dim >= 2 else ()),
    )


def degeneracy_closed(X: Decorated) -> bool:
    """Every degenerate cell of the right degree is decorated (always true by storage)."""
    return all(X.decorated(x) for x in X.base.simplices(X.degree) if x.degeneracies)


__all__ = [
    "MarkedSSet", "ScaledSSet", "DecoratedMap", "CategoricalPattern", "Cone", "decorate",
    "flat", "sharp", "product_decorated", "pushout_decorated", "inclusion", "preserves",
    "load_decorated", "union_decorations", "sharp_pattern", "degeneracy_closed",
]
