"""Finite simplicial sets in Eilenberg-Zilber normal form.

Every simplex is a :class:`SimplexRef`: a nondegenerate generator together with a
strictly decreasing degeneracy word.  All simplicial operators are funnelled
through :meth:`FiniteSimplicialSet.apply_monotone`, which precomposes a simplex
with an arbitrary monotone map of ordinals.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable, Hashable, Iterable, Iterator, Mapping, Sequence


class SimplicialError(ValueError):
    """Raised on malformed simplicial data or out-of-range operators."""


# ---------------------------------------------------------------------------
# monotone maps of ordinals, encoded as tuples of values


def surjection_from_word(word: Sequence[int], n: int) -> tuple[int, ...]:
    """The surjection [n] -> [n - len(word)] whose merged positions are ``word``."""
    merged = set(word)
    out = [0]
    for i in range(1, n + 1):
        out.append(out[-1] if (i - 1) in merged else out[-1] + 1)
    return tuple(out)


def word_from_surjection(theta: Sequence[int]) -> tuple[int, ...]:
    return tuple(i for i in reversed(range(len(theta) - 1)) if theta[i] == theta[i + 1])


def coface(n: int, k: int) -> tuple[int, ...]:
    """delta^k : [n-1] -> [n]."""
    return tuple(j if j < k else j + 1 for j in range(n))


def codegeneracy(n: int, k: int) -> tuple[int, ...]:
    """sigma^k : [n+1] -> [n]."""
    return tuple(j if j <= k else j - 1 for j in range(n + 2))


def is_monotone(theta: Sequence[int]) -> bool:
    return all(a <= b for a, b in zip(theta, theta[1:]))


def monotone_maps(m: int, n: int) -> Iterator[tuple[int, ...]]:
    """All monotone maps [m] -> [n] in lexicographic order."""

    def rec(prefix: list[int], lo: int) -> Iterator[tuple[int, ...]]:
        if len(prefix) == m + 1:
            yield tuple(prefix)
            return
        for v in range(lo, n + 1):
            prefix.append(v)
            yield from rec(prefix, v)
            prefix.pop()

    yield from rec([], 0)


def normalize_word(word: Iterable[int], base_dim: int) -> tuple[int, ...]:
    """Normal form of the operator s_{w_1} ... s_{w_k} applied to a ``base_dim``-simplex.

    The word is read as written: s_{w_k} is applied first.
    """
    word = list(word)
    theta = tuple(range(base_dim + 1))
    dim = base_dim
    for i in reversed(word):
        if not 0 <= i <= dim:
            raise SimplicialError(f"degeneracy s_{i} out of range on a {dim}-simplex")
        sig = codegeneracy(dim, i)
        theta = tuple(theta[s] for s in sig)
        dim += 1
    return word_from_surjection(theta)


# ---------------------------------------------------------------------------


@dataclass(frozen=True, order=True)
class SimplexRef:
    """A simplex s_{i_1} ... s_{i_k} g with i_1 > ... > i_k."""

    generator: str
    degeneracies: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        w = tuple(self.degeneracies)
        object.__setattr__(self, "degeneracies", w)
        if any(a <= b for a, b in zip(w, w[1:])) or any(i < 0 for i in w):
            raise SimplicialError(f"degeneracy word {w} is not strictly decreasing")

    @property
    def is_degenerate(self) -> bool:
        return bool(self.degeneracies)

    def to_json(self) -> dict:
        return {"g": self.generator, "word": list(self.degeneracies)}

    @staticmethod
    def from_json(obj: Mapping) -> "SimplexRef":
        return SimplexRef(str(obj["g"]), tuple(int(i) for i in obj.get("word", ())))

    def __str__(self) -> str:
        if not self.degeneracies:
            return self.generator
        return "".join(f"s{i}" for i in self.degeneracies) + ":" + self.generator


class FiniteSimplicialSet:
    """Generators per dimension plus a face table; immutable after construction."""

    def __init__(
        self,
        generators: Mapping[int, Iterable[str]],
        faces: Mapping[str, Sequence[SimplexRef]],
        top_dim: int | None = None,
        meta: Mapping | None = None,
        validate: bool = True,
    ) -> None:
        gens = {int(d): tuple(sorted(set(labels))) for d, labels in generators.items()}
        if top_dim is None:
            top_dim = max((d for d, ls in gens.items() if ls), default=0)
        self.top_dim = int(top_dim)
        self.generators: dict[int, tuple[str, ...]] = {
            d: gens.get(d, ()) for d in range(self.top_dim + 1)
        }
        if any(d > self.top_dim and ls for d, ls in gens.items()):
            raise SimplicialError("generator above top_dim")
        self.dim_of: dict[str, int] = {}
        for d, labels in self.generators.items():
            for g in labels:
                if g in self.dim_of:
                    raise SimplicialError(f"label {g!r} used in two dimensions")
                self.dim_of[g] = d
        self.faces: dict[str, tuple[SimplexRef, ...]] = {}
        for g, d in self.dim_of.items():
            if d == 0:
                self.faces[g] = ()
                continue
            if g not in faces:
                raise SimplicialError(f"missing faces for {g!r}")
            fs = tuple(faces[g])
            if len(fs) != d + 1:
                raise SimplicialError(f"{g!r} needs {d + 1} faces, got {len(fs)}")
            self.faces[g] = fs
        self.meta = dict(meta or {})
        self._face_cache: dict[tuple[str, tuple[int, ...]], SimplexRef] = {}
        self._simplices_cache: dict[int, tuple[SimplexRef, ...]] = {}
        if validate:
            self.validate()

    # -- basic queries -----------------------------------------------------

    def dim(self, x: SimplexRef) -> int:
        try:
            return self.dim_of[x.generator] + len(x.degeneracies)
        except KeyError:
            raise SimplicialError(f"unknown generator {x.generator!r}") from None

    def f_vector(self) -> tuple[int, ...]:
        return tuple(len(self.generators[d]) for d in range(self.top_dim + 1))

    def labels(self) -> list[str]:
        return [g for d in range(self.top_dim + 1) for g in self.generators[d]]

    def num_generators(self) -> int:
        return len(self.dim_of)

    def is_empty(self) -> bool:
        return not self.dim_of

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FiniteSimplicialSet):
            return NotImplemented
        return (
            self.top_dim == other.top_dim
            and self.generators == other.generators
            and self.faces == other.faces
        )

    def __hash__(self) -> int:
        return hash((self.top_dim, tuple(self.generators.items())))

    def __repr__(self) -> str:
        return f"FiniteSimplicialSet(f_vector={self.f_vector()})"

    # -- operators ---------------------------------------------------------

    def _generator_face(self, g: str, image: tuple[int, ...]) -> SimplexRef:
        """g restricted along the injection with the given image."""
        key = (g, image)
        hit = self._face_cache.get(key)
        if hit is not None:
            return hit
        k = self.dim_of[g]
        if len(image) == k + 1:
            res = SimplexRef(g)
        else:
            missing = [v for v in range(k + 1) if v not in image]
            o = missing[-1]
            rest = tuple(v if v < o else v - 1 for v in image)
            res = self.apply_monotone(self.faces[g][o], rest)
        self._face_cache[key] = res
        return res

    def apply_monotone(self, x: SimplexRef, theta: Sequence[int]) -> SimplexRef:
        """x . theta for a monotone theta : [m] -> [dim x]."""
        n = self.dim(x)
        theta = tuple(theta)
        if not theta or not is_monotone(theta) or theta[0] < 0 or theta[-1] > n:
            raise SimplicialError(f"{theta} is not a monotone map into [{n}]")
        sigma = surjection_from_word(x.degeneracies, n)
        phi = tuple(sigma[t] for t in theta)
        image = tuple(sorted(set(phi)))
        pos = {v: i for i, v in enumerate(image)}
        eps = tuple(pos[v] for v in phi)
        y = self._generator_face(x.generator, image)
        sy = surjection_from_word(y.degeneracies, len(image) - 1)
        total = tuple(sy[e] for e in eps)
        return SimplexRef(y.generator, word_from_surjection(total))

    def face(self, x: SimplexRef, k: int) -> SimplexRef:
        n = self.dim(x)
        if n == 0 or not 0 <= k <= n:
            raise SimplicialError(f"face d_{k} out of range on a {n}-simplex")
        return self.apply_monotone(x, coface(n, k))

    def degeneracy(self, x: SimplexRef, k: int) -> SimplexRef:
        n = self.dim(x)
        if not 0 <= k <= n:
            raise SimplicialError(f"degeneracy s_{k} out of range on a {n}-simplex")
        return self.apply_monotone(x, codegeneracy(n, k))

    def apply_operator(self, x: SimplexRef, op: tuple[str, int]) -> SimplexRef:
        """``op`` is ``("face", k)`` or ``("degeneracy", k)``."""
        kind, k = op
        if kind in ("face", "d"):
            return self.face(x, k)
        if kind in ("degeneracy", "s"):
            return self.degeneracy(x, k)
        raise SimplicialError(f"unknown operator {kind!r}")

    def vertex(self, x: SimplexRef, i: int) -> str:
        return self.apply_monotone(x, (i,)).generator

    def vertices_of(self, x: SimplexRef) -> tuple[str, ...]:
        return tuple(self.vertex(x, i) for i in range(self.dim(x) + 1))

    def edge(self, x: SimplexRef, i: int, j: int) -> SimplexRef:
        return self.apply_monotone(x, (i, j))

    def ref(self, g: str) -> SimplexRef:
        if g not in self.dim_of:
            raise SimplicialError(f"unknown generator {g!r}")
        return SimplexRef(g)

    def degenerate_at(self, g: str, n: int) -> SimplexRef:
        """The totally degenerate n-simplex on the vertex g."""
        return SimplexRef(g, tuple(reversed(range(n))))

    def simplices(self, n: int) -> tuple[SimplexRef, ...]:
        """All n-simplices, degenerate ones included, in normal form."""
        hit = self._simplices_cache.get(n)
        if hit is not None:
            return hit
        out = []
        for e in range(min(n, self.top_dim) + 1):
            words = [tuple(sorted(c, reverse=True)) for c in combinations(range(n), n - e)]
            words.sort()
            for g in self.generators[e]:
                out.extend(SimplexRef(g, w) for w in words)
        res = tuple(out)
        self._simplices_cache[n] = res
        return res

    # -- validation --------------------------------------------------------

    def validate(self) -> None:
        for g, d in self.dim_of.items():
            for k, f in enumerate(self.faces[g]):
                if f.generator not in self.dim_of:
                    raise SimplicialError(f"face {k} of {g!r} names unknown {f.generator!r}")
                if self.dim(f) != d - 1:
                    raise SimplicialError(f"face {k} of {g!r} has wrong dimension")
        for g, d in self.dim_of.items():
            if d < 2:
                continue
            x = SimplexRef(g)
            for j in range(d + 1):
                for i in range(j):
                    a = self.face(self.face(x, j), i)
                    b = self.face(self.face(x, i), j - 1)
                    if a != b:
                        raise SimplicialError(
                            f"simplicial identity d{i}d{j} = d{j - 1}d{i} fails on {g!r}"
                        )

    # -- subobjects --------------------------------------------------------

    def closure(self, labels: Iterable[str]) -> set[str]:
        seen: set[str] = set()
        stack = list(labels)
        while stack:
            g = stack.pop()
            if g in seen:
                continue
            seen.add(g)
            stack.extend(f.generator for f in self.faces[g])
        return seen

    def subcomplex(self, labels: Iterable[str]) -> "FiniteSimplicialSet":
        keep = self.closure(labels)
        gens: dict[int, list[str]] = {}
        for g in keep:
            gens.setdefault(self.dim_of[g], []).append(g)
        top = max(gens, default=0)
        return FiniteSimplicialSet(
            gens, {g: self.faces[g] for g in keep}, top_dim=top, validate=False
        )

    def inclusion_of(self, sub: "FiniteSimplicialSet") -> "SimplicialMap":
        return SimplicialMap(sub, self, {g: SimplexRef(g) for g in sub.dim_of})

    # -- JSON --------------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "top_dim": self.top_dim,
            "generators": [list(self.generators[d]) for d in range(self.top_dim + 1)],
            "faces": {
                g: [f.to_json() for f in self.faces[g]]
                for g in sorted(self.dim_of)
                if self.dim_of[g] > 0
            },
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, separators=(",", ":"))

    @staticmethod
    def from_json(obj: Mapping) -> "FiniteSimplicialSet":
        try:
            gens = {d: [str(x) for x in labels] for d, labels in enumerate(obj["generators"])}
            faces = {
                str(g): [SimplexRef.from_json(f) for f in fs]
                for g, fs in obj.get("faces", {}).items()
            }
            top = int(obj.get("top_dim", max(len(gens) - 1, 0)))
        except (KeyError, TypeError, AttributeError) as exc:
            raise SimplicialError(f"malformed simplicial set JSON: {exc}") from exc
        return FiniteSimplicialSet(gens, faces, top_dim=top)

    @staticmethod
    def loads(text: str) -> "FiniteSimplicialSet":
        return FiniteSimplicialSet.from_json(json.loads(text))


EMPTY = FiniteSimplicialSet({}, {}, top_dim=0)


# ---------------------------------------------------------------------------
# maps


class SimplicialMap:
    """A map determined by the images of generators."""

    def __init__(
        self,
        source: FiniteSimplicialSet,
        target: FiniteSimplicialSet,
        images: Mapping[str, SimplexRef],
        validate: bool = True,
    ) -> None:
        self.source = source
        self.target = target
        self.images = dict(images)
        if validate:
            self.validate()

    def __call__(self, x: SimplexRef) -> SimplexRef:
        img = self.images[x.generator]
        if not x.degeneracies:
            return img
        n = self.source.dim(x)
        return self.target.apply_monotone(img, surjection_from_word(x.degeneracies, n))

    def validate(self) -> None:
        src, tgt = self.source, self.target
        missing = set(src.dim_of) - set(self.images)
        if missing:
            raise SimplicialError(f"map undefined on {sorted(missing)[:3]}")
        for g, d in src.dim_of.items():
            img = self.images[g]
            if tgt.dim(img) != d:
                raise SimplicialError(f"image of {g!r} has wrong dimension")
            for k in range(d + 1 if d else 0):
                if self(src.faces[g][k]) != tgt.face(img, k):
                    raise SimplicialError(f"map does not commute with d{k} on {g!r}")

    def key(self) -> tuple:
        return tuple(sorted(self.images.items()))

    def __eq__(self, other: object) -> bool:
        return isinstance(other, SimplicialMap) and self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def compose(self, after: "SimplicialMap") -> "SimplicialMap":
        """``after`` applied after ``self``."""
        return SimplicialMap(
            self.source, after.target, {g: after(im) for g, im in self.images.items()}
        )

    def is_injective(self) -> bool:
        imgs = list(self.images.values())
        return all(not im.degeneracies for im in imgs) and len(set(imgs)) == len(imgs)

    def is_isomorphism(self) -> bool:
        return self.is_injective() and len(self.images) == self.target.num_generators()

    def to_json(self) -> dict:
        return {g: im.to_json() for g, im in sorted(self.images.items())}


def identity_map(X: FiniteSimplicialSet) -> SimplicialMap:
    return SimplicialMap(X, X, {g: SimplexRef(g) for g in X.dim_of}, validate=False)


def _face_index(Y: FiniteSimplicialSet, d: int) -> dict[tuple, list[SimplexRef]]:
    idx: dict[tuple, list[SimplexRef]] = {}
    for y in Y.simplices(d):
        key = tuple(Y.face(y, k) for k in range(d + 1)) if d else ()
        idx.setdefault(key, []).append(y)
    return idx


def iter_maps(
    X: FiniteSimplicialSet,
    Y: FiniteSimplicialSet,
    fixed: Mapping[str, SimplexRef] | None = None,
    allowed: Callable[[str, SimplexRef], bool] | None = None,
) -> Iterator[SimplicialMap]:
    """Enumerate simplicial maps X -> Y extending ``fixed``.

    Generators are assigned by increasing dimension, ties broken by label.
    ``allowed(g, y)`` can veto a candidate image (used for decorations).
    """
    fixed = dict(fixed or {})
    order = [g for d in range(X.top_dim + 1) for g in X.generators[d]]
    indices: dict[int, dict[tuple, list[SimplexRef]]] = {}
    assign: dict[str, SimplexRef] = {}

    def image(x: SimplexRef) -> SimplexRef:
        img = assign[x.generator]
        if not x.degeneracies:
            return img
        return Y.apply_monotone(img, surjection_from_word(x.degeneracies, X.dim(x)))

    def candidates(g: str) -> list[SimplexRef]:
        d = X.dim_of[g]
        key = tuple(image(f) for f in X.faces[g])
        if g in fixed:
            y = fixed[g]
            ok = Y.dim(y) == d and (d == 0 or tuple(Y.face(y, k) for k in range(d + 1)) == key)
            return [y] if ok else []
        if d not in indices:
            indices[d] = _face_index(Y, d)
        return indices[d].get(key, [])

    def rec(pos: int) -> Iterator[SimplicialMap]:
        if pos == len(order):
            yield SimplicialMap(X, Y, dict(assign), validate=False)
            return
        g = order[pos]
        for y in candidates(g):
            if allowed is not None and not allowed(g, y):
                continue
            assign[g] = y
            yield from rec(pos + 1)
        assign.pop(g, None)

    yield from rec(0)


def sset_hom(X: FiniteSimplicialSet, Y: FiniteSimplicialSet) -> list[SimplicialMap]:
    """All simplicial maps X -> Y."""
    return list(iter_maps(X, Y))


# ---------------------------------------------------------------------------
# generic construction from a simplex model


def build_from_nondegenerate(
    nondeg: Mapping[int, Sequence[Hashable]],
    face: Callable[[Hashable, int], tuple[Hashable, tuple[int, ...]]],
    label: Callable[[Hashable], str],
    top_dim: int | None = None,
    meta: Mapping | None = None,
) -> tuple[FiniteSimplicialSet, dict[Hashable, str]]:
    """Assemble a complex from nondegenerate keys and a normalized face function.

    ``face(key, k)`` returns ``(key', word)``: the k-th face is s_word(key').
    """
    names: dict[Hashable, str] = {}
    gens: dict[int, list[str]] = {}
    for d in sorted(nondeg):
        for key in nondeg[d]:
            lab = label(key)
            names[key] = lab
            gens.setdefault(d, []).append(lab)
    if len(set(names.values())) != len(names):
        raise SimplicialError("label function is not injective")
    faces: dict[str, list[SimplexRef]] = {}
    for d in sorted(nondeg):
        if d == 0:
            continue
        for key in nondeg[d]:
            fs = []
            for k in range(d + 1):
                fk, w = face(key, k)
                fs.append(SimplexRef(names[fk], tuple(w)))
            faces[names[key]] = fs
    if top_dim is None:
        top_dim = max((d for d in nondeg if nondeg[d]), default=0)
    return FiniteSimplicialSet(gens, faces, top_dim=top_dim, meta=meta, validate=False), names


def build_from_levels(
    levels: Sequence[Sequence[Hashable]],
    face: Callable[[Hashable, int], Hashable],
    degen: Callable[[Hashable, int], Hashable],
    label: Callable[[Hashable], str],
    meta: Mapping | None = None,
) -> tuple[FiniteSimplicialSet, dict[Hashable, SimplexRef]]:
    """Assemble a complex from all simplices of each level, degenerate ones included.

    Returns the complex and the normal form of every listed simplex.
    """
    nf: dict[Hashable, tuple[Hashable, tuple[int, ...]]] = {}
    nondeg: dict[int, list[Hashable]] = {}
    for n, level in enumerate(levels):
        for e in level:
            found = None
            for i in range(n):
                low = face(e, i)
                if degen(low, i) == e:
                    found = (i, low)
                    break
            if found is None:
                nf[e] = (e, ())
                nondeg.setdefault(n, []).append(e)
            else:
                i, low = found
                g, w = nf[low]
                nf[e] = (g, normalize_word((i, *w), n - 1 - len(w)))
    for n in range(len(levels)):
        nondeg.setdefault(n, [])

    def face_nf(e: Hashable, k: int) -> tuple[Hashable, tuple[int, ...]]:
        return nf[face(e, k)]

    X, names = build_from_nondegenerate(
        nondeg, face_nf, label, top_dim=len(levels) - 1, meta=meta
    )
    refs = {e: SimplexRef(names[g], w) for e, (g, w) in nf.items()}
    return X, refs


def relabel(X: FiniteSimplicialSet, rename: Mapping[str, str]) -> FiniteSimplicialSet:
    def r(x: SimplexRef) -> SimplexRef:
        return SimplexRef(rename.get(x.generator, x.generator), x.degeneracies)

    gens = {d: [rename.get(g, g) for g in ls] for d, ls in X.generators.items()}
    faces = {rename.get(g, g): [r(f) for f in fs] for g, fs in X.faces.items()}
    return FiniteSimplicialSet(gens, faces, top_dim=X.top_dim, meta=X.meta)


# ---------------------------------------------------------------------------
# standard complexes


def _subset_label(s: Sequence[int]) -> str:
    return "".join(str(v) for v in s) if max(s, default=0) < 10 else ".".join(map(str, s))


def _faces_complex(n: int, subsets: Iterable[tuple[int, ...]]) -> FiniteSimplicialSet:
    subsets = sorted(set(subsets), key=lambda s: (len(s), s))
    nondeg: dict[int, list[tuple[int, ...]]] = {}
    for s in subsets:
        nondeg.setdefault(len(s) - 1, []).append(s)

    def face(s: tuple[int, ...], k: int):
        return s[:k] + s[k + 1 :], ()

    X, _ = build_from_nondegenerate(nondeg, face, _subset_label, meta={"vertices": n + 1})
    return X


def _all_faces(verts: Sequence[int]) -> list[tuple[int, ...]]:
    return [c for r in range(1, len(verts) + 1) for c in combinations(verts, r)]


def simplex(n: int) -> FiniteSimplicialSet:
    if n < 0:
        raise SimplicialError("simplex dimension must be nonnegative")
    return _faces_complex(n, _all_faces(range(n + 1)))


def boundary(n: int) -> FiniteSimplicialSet:
    if n < 1:
        raise SimplicialError("boundary needs n >= 1")
    return _faces_complex(n, [s for s in _all_faces(range(n + 1)) if len(s) <= n])


def horn(n: int, i: int) -> FiniteSimplicialSet:
    if n < 1 or not 0 <= i <= n:
        raise SimplicialError(f"horn index {i} out of range for n = {n}")
    faces = [s for s in _all_faces(range(n + 1)) if len(s) <= n]
    full = tuple(range(n + 1))
    missing = full[:i] + full[i + 1 :]
    return _faces_complex(n, [s for s in faces if s != missing])


def spanned(n: int, facets: Iterable[Sequence[int]]) -> FiniteSimplicialSet:
    """The simplicial subset of Delta^n generated by the given vertex sets."""
    out: set[tuple[int, ...]] = set()
    for f in facets:
        out.update(_all_faces(sorted(f)))
    return _faces_complex(n, out)


def simplex_ref(X: FiniteSimplicialSet, verts: Sequence[int]) -> SimplexRef:
    """The simplex of a standard complex with the given (possibly repeated) vertices."""
    verts = list(verts)
    distinct = sorted(set(verts))
    g = _subset_label(distinct)
    theta = [distinct.index(v) for v in verts]
    return X.apply_monotone(SimplexRef(g), theta)


def collapsed_K() -> FiniteSimplicialSet:
    """Delta^3 with the edges 02 and 13 collapsed to points."""
    d3 = simplex(3)
    edges = coproduct(simplex(1), simplex(1))
    points = coproduct(simplex(0), simplex(0))
    inc = SimplicialMap(
        edges.obj,
        d3,
        {
            edges.left.images["0"].generator: SimplexRef("0"),
            edges.left.images["1"].generator: SimplexRef("2"),
            edges.left.images["01"].generator: SimplexRef("02"),
            edges.right.images["0"].generator: SimplexRef("1"),
            edges.right.images["1"].generator: SimplexRef("3"),
            edges.right.images["01"].generator: SimplexRef("13"),
        },
    )
    col = SimplicialMap(
        edges.obj,
        points.obj,
        {
            edges.left.images["0"].generator: points.left.images["0"],
            edges.left.images["1"].generator: points.left.images["0"],
            edges.left.images["01"].generator: SimplexRef(points.left.images["0"].generator, (0,)),
            edges.right.images["0"].generator: points.right.images["0"],
            edges.right.images["1"].generator: points.right.images["0"],
            edges.right.images["01"].generator: SimplexRef(points.right.images["0"].generator, (0,)),
        },
    )
    po = pushout(inc, col)
    # name the result by the surviving Delta^3 labels
    rename = {}
    for g in d3.dim_of:
        im = po.left(SimplexRef(g))
        if not im.degeneracies:
            rename.setdefault(im.generator, g)
    K = relabel(po.obj, rename)
    K.meta["name"] = "collapsed_K"
    return K


def standard(kind: str, n: int | None = None, i: int | None = None) -> FiniteSimplicialSet:
    if kind == "simplex":
        return simplex(int(n))
    if kind == "boundary":
        return boundary(int(n))
    if kind == "horn":
        return horn(int(n), int(i))
    if kind == "collapsed_K":
        return collapsed_K()
    raise SimplicialError(f"unknown standard complex {kind!r}")


# ---------------------------------------------------------------------------
# products


def ref_label(x: SimplexRef) -> str:
    return str(x)


def _pair_normal(
    X: FiniteSimplicialSet, Y: FiniteSimplicialSet, x: SimplexRef, y: SimplexRef
) -> tuple[tuple[SimplexRef, SimplexRef], tuple[int, ...]]:
    common = sorted(set(x.degeneracies) & set(y.degeneracies), reverse=True)
    if not common:
        return (x, y), ()
    n = X.dim(x)
    sig = surjection_from_word(common, n)
    section = []
    for v in range(sig[-1] + 1):
        section.append(sig.index(v))
    return (X.apply_monotone(x, section), Y.apply_monotone(y, section)), tuple(common)


@dataclass
class Product:
    obj: FiniteSimplicialSet
    left: SimplicialMap
    right: SimplicialMap
    pair: Callable[[SimplexRef, SimplexRef], SimplexRef]
    components: dict[str, tuple[SimplexRef, SimplexRef]] = field(default_factory=dict)


def product(X: FiniteSimplicialSet, Y: FiniteSimplicialSet) -> Product:
    """The product with its projections and a pairing function."""
    top = X.top_dim + Y.top_dim
    nondeg: dict[int, list[tuple[SimplexRef, SimplexRef]]] = {}
    for n in range(top + 1):
        for x in X.simplices(n):
            sx = set(x.degeneracies)
            for y in Y.simplices(n):
                if not sx & set(y.degeneracies):
                    nondeg.setdefault(n, []).append((x, y))

    def face(key, k):
        x, y = key
        return _pair_normal(X, Y, X.face(x, k), Y.face(y, k))

    def label(key) -> str:
        return f"({key[0]},{key[1]})"

    P, names = build_from_nondegenerate(nondeg, face, label, top_dim=top)
    comps = {names[k]: k for k in names}
    left = SimplicialMap(P, X, {lab: k[0] for lab, k in comps.items()}, validate=False)
    right = SimplicialMap(P, Y, {lab: k[1] for lab, k in comps.items()}, validate=False)

    def pair(x: SimplexRef, y: SimplexRef) -> SimplexRef:
        if X.dim(x) != Y.dim(y):
            raise SimplicialError("pairing simplices of different dimensions")
        (a, b), w = _pair_normal(X, Y, x, y)
        return SimplexRef(names[(a, b)], w)

    return Product(P, left, right, pair, comps)


# ---------------------------------------------------------------------------
# pushouts and coproducts


class _UnionFind:
    def __init__(self) -> None:
        self.parent: dict = {}

    def find(self, a):
        self.parent.setdefault(a, a)
        root = a
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[a] != root:
            self.parent[a], a = root, self.parent[a]
        return root

    def union(self, a, b) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            if rb < ra:
                ra, rb = rb, ra
            self.parent[rb] = ra


@dataclass
class Pushout:
    obj: FiniteSimplicialSet
    left: SimplicialMap
    right: SimplicialMap


def pushout(f: SimplicialMap, g: SimplicialMap) -> Pushout:
    """Levelwise quotient of X + Y by f(a) ~ g(a), renormalized."""
    if f.source is not g.source and f.source != g.source:
        raise SimplicialError("pushout legs must share a source")
    A, X, Y = f.source, f.target, g.target
    top = max(X.top_dim, Y.top_dim)
    uf = _UnionFind()
    levels_raw: list[list[tuple[int, SimplexRef]]] = []
    for n in range(top + 1):
        level = [(0, x) for x in X.simplices(n)] + [(1, y) for y in Y.simplices(n)]
        for e in level:
            uf.find(e)
        for a in A.simplices(n):
            uf.union((0, f(a)), (1, g(a)))
        levels_raw.append(level)

    def cls(e):
        return uf.find(e)

    levels = [sorted({cls(e) for e in level}) for level in levels_raw]
    sources = (X, Y)

    def face(c, k):
        tag, x = c
        return cls((tag, sources[tag].face(x, k)))

    def degen(c, k):
        tag, x = c
        return cls((tag, sources[tag].degeneracy(x, k)))

    # labels: smallest member label, prefixed only when two classes collide
    members: dict = {}
    for level in levels_raw:
        for e in level:
            if not e[1].degeneracies:
                members.setdefault(cls(e), []).append(e)
    base_label = {c: min(str(x) for _, x in ms) for c, ms in members.items()}
    counts: dict[str, int] = {}
    for lab in base_label.values():
        counts[lab] = counts.get(lab, 0) + 1

    def label(c) -> str:
        lab = base_label[c]
        if counts[lab] == 1:
            return lab
        tag, x = min(ms for ms in members[c] if str(ms[1]) == lab)
        return f"{'XY'[tag]}.{lab}"

    P, refs = build_from_levels(levels, face, degen, label)
    left = SimplicialMap(X, P, {x: refs[cls((0, SimplexRef(x)))] for x in X.dim_of}, validate=False)
    right = SimplicialMap(Y, P, {y: refs[cls((1, SimplexRef(y)))] for y in Y.dim_of}, validate=False)
    return Pushout(P, left, right)


def coproduct(X: FiniteSimplicialSet, Y: FiniteSimplicialSet) -> Pushout:
    return pushout(
        SimplicialMap(EMPTY, X, {}, validate=False), SimplicialMap(EMPTY, Y, {}, validate=False)
    )


def trimmed_f_vector(X: FiniteSimplicialSet) -> tuple[int, ...]:
    fv = list(X.f_vector())
    while len(fv) > 1 and fv[-1] == 0:
        fv.pop()
    return tuple(fv)


def is_isomorphic(X: FiniteSimplicialSet, Y: FiniteSimplicialSet) -> bool:
    if trimmed_f_vector(X) != trimmed_f_vector(Y):
        return False
    for m in iter_maps(X, Y, allowed=lambda g, y: not y.degeneracies):
        if m.is_isomorphism():
            return True
    return False


# ---------------------------------------------------------------------------
# joins


@dataclass
class Join:
    obj: FiniteSimplicialSet
    left: SimplicialMap
    right: SimplicialMap
    join: Callable[[SimplexRef | None, SimplexRef | None], SimplexRef]


def join(A: FiniteSimplicialSet, B: FiniteSimplicialSet) -> Join:
    """The join A * B; simplices of A come first."""
    clash = bool(set(A.dim_of) & set(B.dim_of))
    la = (lambda g: f"L.{g}") if clash else (lambda g: g)
    lb = (lambda g: f"R.{g}") if clash else (lambda g: g)
    nondeg: dict[int, list[tuple]] = {}
    for g, d in A.dim_of.items():
        nondeg.setdefault(d, []).append(("A", g))
    for g, d in B.dim_of.items():
        nondeg.setdefault(d, []).append(("B", g))
    for a, p in A.dim_of.items():
        for b, q in B.dim_of.items():
            nondeg.setdefault(p + q + 1, []).append(("J", a, b))

    def glue(a: SimplexRef | None, b: SimplexRef | None) -> tuple[tuple, tuple[int, ...]]:
        if a is None:
            return ("B", b.generator), b.degeneracies
        if b is None:
            return ("A", a.generator), a.degeneracies
        p = A.dim(a)
        word = tuple(i + p + 1 for i in b.degeneracies) + a.degeneracies
        return ("J", a.generator, b.generator), word

    def face(key, k):
        if key[0] == "A":
            f = A.faces[key[1]][k]
            return ("A", f.generator), f.degeneracies
        if key[0] == "B":
            f = B.faces[key[1]][k]
            return ("B", f.generator), f.degeneracies
        _, a, b = key
        p, q = A.dim_of[a], B.dim_of[b]
        if k <= p:
            return glue(A.faces[a][k] if p else None, SimplexRef(b))
        return glue(SimplexRef(a), B.faces[b][k - p - 1] if q else None)

    def label(key) -> str:
        if key[0] == "A":
            return la(key[1])
        if key[0] == "B":
            return lb(key[1])
        return f"{la(key[1])}*{lb(key[2])}"

    for d in range(A.top_dim + B.top_dim + 2):
        nondeg.setdefault(d, [])
    J, names = build_from_nondegenerate(nondeg, face, label)
    left = SimplicialMap(A, J, {g: SimplexRef(names[("A", g)]) for g in A.dim_of}, validate=False)
    right = SimplicialMap(B, J, {g: SimplexRef(names[("B", g)]) for g in B.dim_of}, validate=False)

    def joined(a: SimplexRef | None, b: SimplexRef | None) -> SimplexRef:
        key, word = glue(a, b)
        return SimplexRef(names[key], normalize_word(word, J.dim_of[names[key]]))

    return Join(J, left, right, joined)


def cone_left(K: FiniteSimplicialSet, apex: str = "c") -> Join:
    """K^< = Delta^0 * K with the cone point named ``apex``."""
    pt = FiniteSimplicialSet({0: [apex]}, {})
    return join(pt, K)


# ---------------------------------------------------------------------------
# finite categories and nerves


class FinCategory:
    """Objects, named morphisms with endpoints, identities and a composition table.

    ``compose[(f, g)]`` is the composite "first f, then g".
    """

    def __init__(
        self,
        objects: Iterable[str],
        morphisms: Mapping[str, tuple[str, str]],
        identities: Mapping[str, str],
        compose: Mapping[tuple[str, str], str],
        validate: bool = True,
    ) -> None:
        self.objects = tuple(sorted(objects))
        self.morphisms = {m: (s, t) for m, (s, t) in sorted(morphisms.items())}
        self.identities = dict(sorted(identities.items()))
        self.compose = dict(compose)
        self.identity_set = set(self.identities.values())
        if validate:
            self.validate()

    def src(self, f: str) -> str:
        return self.morphisms[f][0]

    def tgt(self, f: str) -> str:
        return self.morphisms[f][1]

    def hom(self, x: str, y: str) -> list[str]:
        return [m for m, (s, t) in self.morphisms.items() if s == x and t == y]

    def comp(self, f: str, g: str) -> str:
        return self.compose[(f, g)]

    def is_identity(self, f: str) -> bool:
        return f in self.identity_set

    def validate(self) -> None:
        names = set(self.objects)
        if names & set(self.morphisms):
            raise SimplicialError("object and morphism names must be disjoint")
        for x in self.objects:
            i = self.identities.get(x)
            if i is None or self.morphisms.get(i) != (x, x):
                raise SimplicialError(f"bad identity at {x!r}")
        for m, (s, t) in self.morphisms.items():
            if s not in names or t not in names:
                raise SimplicialError(f"morphism {m!r} has unknown endpoints")
        for f, (a, b) in self.morphisms.items():
            if self.compose.get((self.identities[a], f)) != f:
                raise SimplicialError(f"left unit fails at {f!r}")
            if self.compose.get((f, self.identities[b])) != f:
                raise SimplicialError(f"right unit fails at {f!r}")
            for g in self.hom_from(b):
                h = self.compose.get((f, g))
                if h is None or self.morphisms.get(h) != (a, self.tgt(g)):
                    raise SimplicialError(f"composite of {f!r}, {g!r} missing or misplaced")
        for f, (a, b) in self.morphisms.items():
            for g in self.hom_from(b):
                fg = self.compose[(f, g)]
                for h in self.hom_from(self.tgt(g)):
                    if self.compose[(fg, h)] != self.compose[(f, self.compose[(g, h)])]:
                        raise SimplicialError(f"associativity fails on {f!r},{g!r},{h!r}")

    def hom_from(self, x: str) -> list[str]:
        return [m for m, (s, _) in self.morphisms.items() if s == x]

    def is_isomorphism(self, f: str) -> bool:
        a, b = self.morphisms[f]
        return any(
            self.compose[(f, g)] == self.identities[a] and self.compose[(g, f)] == self.identities[b]
            for g in self.hom(b, a)
        )

    def opposite(self) -> "FinCategory":
        return FinCategory(
            self.objects,
            {m: (t, s) for m, (s, t) in self.morphisms.items()},
            self.identities,
            {(g, f): h for (f, g), h in self.compose.items()},
            validate=False,
        )

    def to_json(self) -> dict:
        return {
            "objects": list(self.objects),
            "morphisms": {m: list(st) for m, st in self.morphisms.items()},
            "identities": dict(self.identities),
            "compose": sorted([f, g, h] for (f, g), h in self.compose.items()),
        }

    @staticmethod
    def from_json(obj: Mapping) -> "FinCategory":
        try:
            return FinCategory(
                [str(o) for o in obj["objects"]],
                {str(m): (str(st[0]), str(st[1])) for m, st in obj["morphisms"].items()},
                {str(k): str(v) for k, v in obj["identities"].items()},
                {(str(f), str(g)): str(h) for f, g, h in obj["compose"]},
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise SimplicialError(f"malformed category JSON: {exc}") from exc

    @staticmethod
    def from_poset(elements: Iterable, leq: Callable[[object, object], bool], name=str) -> "FinCategory":
        els = list(elements)
        objs = [name(e) for e in els]
        morph = {}
        ident = {}
        for a, ea in zip(objs, els):
            for b, eb in zip(objs, els):
                if leq(ea, eb):
                    m = f"{a}<={b}" if a != b else f"id[{a}]"
                    morph[m] = (a, b)
                    if a == b:
                        ident[a] = m
        comp = {}
        by_pair = {st: m for m, st in morph.items()}
        for f, (a, b) in morph.items():
            for g, (b2, c) in morph.items():
                if b == b2:
                    comp[(f, g)] = by_pair[(a, c)]
        return FinCategory(objs, morph, ident, comp, validate=False)


def nerve(C: FinCategory, dim_bound: int) -> FiniteSimplicialSet:
    """Nerve truncated at ``dim_bound``: nondegenerate chains avoid identities."""
    if dim_bound < 0:
        raise SimplicialError("dim_bound must be nonnegative")
    nonid = [m for m in C.morphisms if not C.is_identity(m)]
    by_src: dict[str, list[str]] = {}
    for m in nonid:
        by_src.setdefault(C.src(m), []).append(m)
    nondeg: dict[int, list[tuple]] = {0: [(o,) for o in C.objects]}
    frontier: list[tuple[str, ...]] = [(m,) for m in nonid]
    for k in range(1, dim_bound + 1):
        nondeg[k] = list(frontier)
        if k == dim_bound:
            break
        frontier = [ch + (m,) for ch in frontier for m in by_src.get(C.tgt(ch[-1]), [])]

    def normal(objs: list[str], morphs: list[str]):
        word = tuple(i for i in reversed(range(len(morphs))) if C.is_identity(morphs[i]))
        kept = tuple(m for m in morphs if not C.is_identity(m))
        return (kept if kept else (objs[0],)), word

    def face(key, k):
        if len(key) == 1 and key[0] in C.objects:
            raise SimplicialError("vertices have no faces")
        chain = list(key)
        n = len(chain)
        objs = [C.src(chain[0])] + [C.tgt(m) for m in chain]
        if n == 1:
            return ((objs[1],) if k == 0 else (objs[0],)), ()
        if k == 0:
            return normal(objs[1:], chain[1:])
        if k == n:
            return normal(objs[:-1], chain[:-1])
        merged = chain[: k - 1] + [C.comp(chain[k - 1], chain[k])] + chain[k + 1 :]
        return normal(objs[:k] + objs[k + 1 :], merged)

    def label(key) -> str:
        return key[0] if len(key) == 1 and key[0] in C.objects else ",".join(key)

    for k in range(1, dim_bound + 1):
        nondeg.setdefault(k, [])
    X, _ = build_from_nondegenerate(
        nondeg, face, label, top_dim=dim_bound, meta={"truncation": dim_bound}
    )
    return X


def order_complex(
    elements: Sequence[Hashable],
    less: Callable[[Hashable, Hashable], bool],
    name: Callable[[Hashable], str] = str,
    dim_bound: int | None = None,
) -> tuple[FiniteSimplicialSet, dict[tuple, str]]:
    """Nerve of a finite poset: nondegenerate simplices are strict chains.

    Returns the complex and the label of every strict chain (as a tuple).
    """
    els = list(elements)
    ups = {e: [f for f in els if less(e, f)] for e in els}
    nondeg: dict[int, list[tuple]] = {0: [(e,) for e in els]}
    frontier = nondeg[0]
    d = 0
    while frontier and (dim_bound is None or d < dim_bound):
        d += 1
        frontier = [ch + (f,) for ch in frontier for f in ups[ch[-1]]]
        if frontier:
            nondeg[d] = frontier

    def face(ch, k):
        return ch[:k] + ch[k + 1 :], ()

    def label(ch) -> str:
        return name(ch[0]) if len(ch) == 1 else "<".join(name(e) for e in ch)

    return build_from_nondegenerate(nondeg, face, label)


def poset_category(n: int) -> FinCategory:
    """The ordinal [n] as a category."""
    return FinCategory.from_poset(range(n + 1), lambda a, b: a <= b)


def walking_isomorphism() -> FinCategory:
    return FinCategory(
        ["a", "b"],
        {"1a": ("a", "a"), "1b": ("b", "b"), "f": ("a", "b"), "g": ("b", "a")},
        {"a": "1a", "b": "1b"},
        {
            ("1a", "1a"): "1a", ("1b", "1b"): "1b",
            ("1a", "f"): "f", ("f", "1b"): "f", ("1b", "g"): "g", ("g", "1a"): "g",
            ("f", "g"): "1a", ("g", "f"): "1b",
        },
    )


def group_category(order: int) -> FinCategory:
    """The cyclic group Z/order as a one-object category."""
    ms = {f"g{k}": ("*", "*") for k in range(order)}
    comp = {(f"g{a}", f"g{b}"): f"g{(a + b) % order}" for a in range(order) for b in range(order)}
    return FinCategory(["*"], ms, {"*": "g0"}, comp)


def product_category(C: FinCategory, D: FinCategory) -> FinCategory:
    objs = [f"({a},{b})" for a in C.objects for b in D.objects]
    morph = {}
    for f, (a, b) in C.morphisms.items():
        for g, (c, d) in D.morphisms.items():
            morph[f"({f},{g})"] = (f"({a},{c})", f"({b},{d})")
    ident = {f"({a},{b})": f"({C.identities[a]},{D.identities[b]})" for a in C.objects for b in D.objects}
    comp = {}
    for (f1, f2), h in C.compose.items():
        for (g1, g2), k in D.compose.items():
            comp[(f"({f1},{g1})", f"({f2},{g2})")] = f"({h},{k})"
    return FinCategory(objs, morph, ident, comp, validate=False)


def all_simplices_by_vertices(X: FiniteSimplicialSet, n: int) -> dict[tuple[str, ...], list[SimplexRef]]:
    out: dict[tuple[str, ...], list[SimplexRef]] = {}
    for x in X.simplices(n):
        out.setdefault(X.vertices_of(x), []).append(x)
    return out


__all__ = [
    "SimplicialError", "SimplexRef", "FiniteSimplicialSet", "SimplicialMap", "FinCategory",
    "Product", "Pushout", "standard", "simplex", "boundary", "horn", "spanned", "collapsed_K",
    "simplex_ref", "product", "pushout", "coproduct", "nerve", "sset_hom", "iter_maps",
    "identity_map", "is_isomorphic", "build_from_nondegenerate", "build_from_levels", "relabel",
    "monotone_maps", "coface", "codegeneracy", "surjection_from_word", "word_from_surjection",
    "normalize_word", "poset_category", "walking_isomorphism", "group_category",
    "product_category", "EMPTY", "Join", "join", "cone_left",
    "order_complex", "trimmed_f_vector",
]
