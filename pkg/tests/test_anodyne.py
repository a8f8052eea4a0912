import pytest

from scx import anodyne
from scx.anodyne import (
    FiltrationStep,
    carpal_family,
    chains_of,
    extensions,
    hom_via_slice,
    is_flat_over_triangle,
    is_pattern_fibered,
    is_weak_bicategory,
    pattern_generator,
    preperc_family,
    scaled_generator,
    scaled_generators,
    scaled_slice,
    swww_family,
    verify_filtration,
)
from scx.coherent import MarkedSimpCategory, scaled_nerve
from scx.decorations import (
    CategoricalPattern,
    Cone,
    DecoratedMap,
    MarkedSSet,
    ScaledSSet,
    flat,
    preserves,
    pushout_decorated,
    sharp,
    sharp_pattern,
)
from scx.sset_core import (
    FiniteSimplicialSet,
    SimplexRef,
    SimplicialError,
    SimplicialMap,
    boundary,
    collapsed_K,
    cone_left,
    coproduct,
    horn,
    identity_map,
    join,
    nerve,
    poset_category,
    simplex,
    simplex_ref,
    sset_hom,
    trimmed_f_vector,
)
from scx.suites import bicategory_examples, flatness_examples, parallel_arrows


def vmap(X, Y, v):
    return SimplicialMap(X, Y, {g: simplex_ref(Y, [v[int(c)] for c in g]) for g in X.dim_of})


# -- scaled generators --------------------------------------------------------


def test_generator_A21():
    f = scaled_generator("A", 2, 1)
    assert tuple(trimmed_f_vector(f.source.base)) == (3, 2)
    assert not f.source.thin
    assert f.target.thin == {"012"}


def test_generator_B_adds_two_triangles():
    f = scaled_generator("B")
    assert f.target.thin - f.source.thin == {"014", "034"}
    lit = scaled_generator("B", variant="literal")
    # 134 is already thin in the source, so the literal list adds only one new triangle
    assert lit.target.thin - lit.source.thin == {"034"}
    assert f.source.thin == {"024", "123", "013", "134", "012"}


def test_generator_C3_collapse():
    f = scaled_generator("C", 3)
    assert tuple(trimmed_f_vector(f.source.base)) == (3, 5, 3)
    assert tuple(trimmed_f_vector(f.target.base)) == (3, 5, 4, 1)
    assert len(f.target.thin) == 1


@pytest.mark.parametrize("args", [("A", 2, 0), ("A", 2, 2), ("C", 2), ("Z", 1)])
def test_generator_parameter_ranges(args):
    with pytest.raises(SimplicialError):
        scaled_generator(*args)


@pytest.mark.parametrize("f", scaled_generators(5), ids=anodyne.generator_name)
def test_generators_are_decorated_monomorphisms(f):
    assert f.is_monomorphism
    assert preserves(f.underlying, f.source, f.target)


@pytest.mark.parametrize("i,verts,expected", [
    (1, {0: 0, 1: 1, 2: 2, 3: 2, 4: 3}, "013"),
    (2, {0: 0, 1: 1, 2: 1, 3: 2, 4: 3}, "023"),
])
def test_B_pushouts_give_the_missing_face(i, verts, expected):
    # the generator must push out along p_i to (all triangles but one) inside (all triangles)
    D3, D4 = simplex(3), simplex(4)
    B = scaled_generator("B")
    p = vmap(D4, D3, verts)
    image = {p(SimplexRef(t)).generator for t in B.source.thin if not p(SimplexRef(t)).degeneracies}
    assert image == set(D3.generators[2]) - {expected}
    g = DecoratedMap(B.source, ScaledSSet(D3, image), p)
    po = pushout_decorated(B, g).obj
    assert tuple(trimmed_f_vector(po.base)) == (4, 6, 4, 1)
    assert len(po.thin) == 4


def test_literal_B_variant_misses_the_first_pushout():
    D3, D4 = simplex(3), simplex(4)
    B = scaled_generator("B", variant="literal")
    p = vmap(D4, D3, {0: 0, 1: 1, 2: 2, 3: 2, 4: 3})
    image = {p(SimplexRef(t)).generator for t in B.source.thin if not p(SimplexRef(t)).degeneracies}
    po = pushout_decorated(B, DecoratedMap(B.source, ScaledSSet(D3, image), p)).obj
    assert len(po.thin) == 3


# -- pattern generators -------------------------------------------------------


def test_pattern_generator_examples():
    pat = sharp_pattern(simplex(2))
    a0 = pattern_generator("A0", pat, simplex=SimplexRef("012"))
    assert a0.map.source.marked == {"01", "12"}
    assert a0.map.target.marked == {"01", "02", "12"}
    b0 = pattern_generator("B0", pat, edge=SimplexRef("01"))
    assert tuple(trimmed_f_vector(b0.map.source.base)) == (1,)
    assert b0.map.target.marked == {"01"}
    c1 = pattern_generator("C1", pat, simplex=SimplexRef("012"), i=1)
    assert not c1.map.target.marked and c1.map.source.base == horn(2, 1)


def test_pattern_generator_membership_errors():
    bare = CategoricalPattern(simplex(2), frozenset(), frozenset())
    with pytest.raises(SimplicialError):
        pattern_generator("A0", bare, simplex=SimplexRef("012"))
    with pytest.raises(SimplicialError):
        pattern_generator("B0", bare, edge=SimplexRef("01"))
    with pytest.raises(SimplicialError):
        pattern_generator("C0", bare, simplex=SimplexRef("012"))


def _all_pattern_generators(S):
    pat = sharp_pattern(S)
    out = []
    for n in range(S.top_dim + 1):
        for x in S.generators[n]:
            x = SimplexRef(x)
            if n == 1:
                out.append(pattern_generator("B0", pat, edge=x))
            if n == 2:
                out.append(pattern_generator("A0", pat, simplex=x))
            if n >= 2:
                out.append(pattern_generator("C0", pat, simplex=x))
                out += [pattern_generator("C1", pat, simplex=x, i=i) for i in range(1, n)]
    K = collapsed_K()
    out.append(pattern_generator("A1", pat, map=SimplicialMap(
        K, S, {g: S.apply_monotone(SimplexRef(S.generators[0][0]), (0,) * (d + 1)) if d else
               SimplexRef(S.generators[0][0]) for g, d in K.dim_of.items()})))
    return out


@pytest.mark.parametrize("n", range(2, 6))
def test_pattern_generators_are_monomorphisms(n):
    for g in _all_pattern_generators(simplex(n)):
        assert g.map.is_monomorphism
        assert preserves(g.map.underlying, g.map.source, g.map.target)
        g.over.validate()


def test_pattern_generator_C2_over_a_constant_cone():
    S, K = simplex(1), simplex(0)
    CL = cone_left(K).obj
    diag = SimplicialMap(CL, S, {"c": SimplexRef("1"), "0": SimplexRef("1"), "c*0": SimplexRef("1", (0,))})
    pat = CategoricalPattern(S, frozenset({"01"}), frozenset(), [Cone(K, diag)])
    J = join(simplex(1), K)
    gen = pattern_generator("C2", pat, alpha=0, n=1, map=SimplicialMap(J.obj, S, _join_images(J, S)))
    assert gen.map.is_monomorphism
    assert gen.map.source.base != gen.map.target.base
    assert gen.map.source.marked == gen.map.target.marked


def _join_images(J, S):
    """Send the cone point 0 of Delta^1 * Delta^0 to 0 and everything else to 1."""
    X = J.obj
    zero = J.left(SimplexRef("0")).generator
    out = {}
    for g, d in X.dim_of.items():
        verts = X.vertices_of(SimplexRef(g))
        out[g] = simplex_ref(S, [0 if v == zero else 1 for v in verts])
    return out


# -- extensions ---------------------------------------------------------------


def test_extension_examples():
    C1 = DecoratedMap(flat(horn(2, 1), "marked"), flat(simplex(2), "marked"),
                      SimplicialMap(horn(2, 1), simplex(2), {g: SimplexRef(g) for g in horn(2, 1).dim_of}))
    N = flat(nerve(poset_category(2), 3), "marked")
    horns = sset_hom(horn(2, 1), N.base)
    assert len(horns) == 10
    assert all(len(extensions(C1, u, N)) == 1 for u in horns)
    bd = flat(boundary(2), "marked")
    u = SimplicialMap(horn(2, 1), boundary(2), {g: SimplexRef(g) for g in horn(2, 1).dim_of})
    assert extensions(C1, u, bd) == []
    A = scaled_generator("A", 2, 1)
    Z = flat(simplex(2))
    u = SimplicialMap(A.source.base, simplex(2), {g: SimplexRef(g) for g in A.source.base.dim_of})
    assert extensions(A, u, Z) == []
    assert len(extensions(A, u, sharp(simplex(2)))) == 1


def test_extension_rejects_undecorated_input():
    A = scaled_generator("A", 3, 1)
    Z = flat(simplex(3))
    u = SimplicialMap(A.source.base, simplex(3), {g: SimplexRef(g) for g in A.source.base.dim_of})
    with pytest.raises(SimplicialError):
        extensions(A, u, Z)


@pytest.mark.parametrize("f", [scaled_generator("A", 2, 1), scaled_generator("A", 3, 2), scaled_generator("C", 3)],
                         ids=anodyne.generator_name)
@pytest.mark.parametrize("Z", [ScaledSSet(simplex(2), ["012"]), ScaledSSet(boundary(3), ["012", "013"]),
                               sharp(simplex(3)), ScaledSSet(collapsed_K(), [])], ids=["D2", "bD3", "D3", "K"])
def test_extension_search_is_complete(f, Z):
    for u in anodyne.decorated_maps(f.source, Z):
        found = {v.key() for v in extensions(f, u, Z)}
        brute = {
            v.key() for v in sset_hom(f.target.base, Z.base)
            if preserves(v, f.target, Z)
            and all(v(f.underlying.images[g]) == u.images[g] for g in f.source.base.dim_of)
        }
        assert found == brute


# -- weak bicategories --------------------------------------------------------


def test_weak_bicategory_examples():
    assert is_weak_bicategory(sharp(simplex(0)), 4).semi_decided
    v = is_weak_bicategory(flat(simplex(2)), 3)
    assert not v and v.witness["generator"] == "A(2,1)"
    N = scaled_nerve(MarkedSimpCategory.from_category(parallel_arrows()), 3)
    assert is_weak_bicategory(N, 3).semi_decided


@pytest.mark.parametrize("name", sorted(bicategory_examples()))
def test_weak_bicategory_suite_examples(name):
    Z, expect = bicategory_examples()[name]
    bound = len(trimmed_f_vector(Z.base)) + 1
    assert bool(is_weak_bicategory(Z, max(bound, 2)).semi_decided) == expect


def test_weak_bicategory_bound_checked():
    with pytest.raises(SimplicialError):
        is_weak_bicategory(sharp(simplex(0)), 1)


# -- filtrations --------------------------------------------------------------


@pytest.mark.parametrize("n", range(1, 5))
def test_preperc_family(n):
    cert = preperc_family(n)
    assert cert.ok and cert.final_equals_ambient
    assert len(cert.steps) == n + 1


def test_preperc_n2_last_step():
    cert = preperc_family(2)
    last = cert.steps[-1]
    assert last["horn"] == [3, 3]
    assert last["decorations_ok"]


@pytest.mark.parametrize("n,i", [(n, i) for n in range(2, 5) for i in range(1, n)])
def test_swww_family(n, i):
    assert swww_family(n, i).ok


@pytest.mark.parametrize("n", range(3))
def test_carpal_family(n):
    assert carpal_family(n).ok


POINTS = [(0,), (1,), (2,)]


def test_filtration_with_the_wrong_horn_fails():
    amb = chains_of(POINTS, lambda a, b: a <= b)
    top, long_edge = tuple(POINTS), (POINTS[0], POINTS[2])
    initial = {c for c in amb if c not in (top, long_edge)}
    good = verify_filtration(amb, initial, [FiltrationStep(top, 1)])
    assert good.ok
    bad = verify_filtration(amb, initial, [FiltrationStep(top, 0)])
    assert not bad.ok and bad.mismatch["missing"]


def test_filtration_that_misses_a_simplex_fails():
    amb = chains_of(POINTS, lambda a, b: a <= b)
    cert = verify_filtration(amb, {(POINTS[0],), (POINTS[1],)}, [FiltrationStep(tuple(POINTS[:2]), 0)])
    assert not cert.final_equals_ambient and not cert.ok


# -- slices -------------------------------------------------------------------


def test_slice_of_an_edge():
    sl = scaled_slice(sharp(simplex(1)), "0")
    assert tuple(trimmed_f_vector(sl.marked.base)) == (2, 1)


def test_slice_of_parallel_arrows():
    N = scaled_nerve(MarkedSimpCategory.from_category(parallel_arrows()), 3)
    fiber = hom_via_slice(N, "a", "b")
    assert tuple(trimmed_f_vector(fiber.base)) == (2,)
    assert not fiber.cells


def test_slice_fiber_empty_without_arrows():
    N = scaled_nerve(MarkedSimpCategory.from_category(parallel_arrows()), 3)
    assert not hom_via_slice(N, "b", "a").base.dim_of


def test_slice_hom_in_a_simplex_is_a_point():
    # every square from 0 to 2 in a 2-simplex has degenerate triangles only
    H = hom_via_slice(sharp(simplex(2)), "0", "2")
    assert tuple(trimmed_f_vector(H.base)) == (1,)


def test_slice_rejects_non_vertex():
    with pytest.raises(SimplicialError):
        scaled_slice(sharp(simplex(1)), "01")


# -- fibered objects ----------------------------------------------------------


def _two_fibers(marked):
    X = coproduct(simplex(1), simplex(1)).obj
    p = SimplicialMap(X, simplex(1), {g: SimplexRef(g.split(".")[-1]) for g in X.dim_of})
    return MarkedSSet(X, marked), p


def test_identity_is_fibered():
    S = simplex(2)
    pat = sharp_pattern(S)
    assert is_pattern_fibered(MarkedSSet(S, S.generators[1]), identity_map(S), pat).semi_decided
    v = is_pattern_fibered(MarkedSSet(S, []), identity_map(S), pat)
    assert not v and v.witness["condition"] == 3


def test_two_fiber_family():
    pat = sharp_pattern(simplex(1))
    Xb, p = _two_fibers(["X.01", "Y.01"])
    assert is_pattern_fibered(Xb, p, pat).semi_decided
    Xb, p = _two_fibers(["X.01"])
    v = is_pattern_fibered(Xb, p, pat)
    assert not v and v.witness["condition"] == 3


def test_marked_edge_over_non_M_edge_rejected():
    pat = CategoricalPattern(simplex(1), frozenset(), frozenset())
    Xb, p = _two_fibers(["X.01"])
    with pytest.raises(SimplicialError):
        is_pattern_fibered(Xb, p, pat)


# -- flatness -----------------------------------------------------------------


@pytest.mark.parametrize("name", sorted(flatness_examples()))
def test_flatness_examples(name):
    M, p, edges, expect = flatness_examples()[name]
    for f in edges:
        assert is_flat_over_triangle(M, p, f).contractible == expect


def test_flatness_identity_is_a_point():
    D2 = simplex(2)
    cert = is_flat_over_triangle(D2, identity_map(D2), SimplexRef("02"))
    assert cert.betti[0] == 1 and cert.acyclic


def test_flatness_needs_an_edge_over_02():
    D2 = simplex(2)
    with pytest.raises(SimplicialError):
        is_flat_over_triangle(D2, identity_map(D2), SimplexRef("01"))


def test_empty_double_slice():
    X = FiniteSimplicialSet({0: ["0", "1", "2"], 1: ["02"]}, {"02": [SimplexRef("2"), SimplexRef("0")]})
    p = vmap(X, simplex(2), {0: 0, 1: 1, 2: 2})
    assert not is_flat_over_triangle(X, p, SimplexRef("02")).contractible
