import pytest
from hypothesis import given
from hypothesis import strategies as st

from scx.decorations import (
    CategoricalPattern,
    Cone,
    DecoratedMap,
    MarkedSSet,
    ScaledSSet,
    decorate,
    degeneracy_closed,
    flat,
    inclusion,
    load_decorated,
    product_decorated,
    pushout_decorated,
    sharp,
    sharp_pattern,
)
from scx.sset_core import (
    SimplexRef,
    SimplicialError,
    SimplicialMap,
    boundary,
    cone_left,
    horn,
    identity_map,
    is_isomorphic,
    simplex,
)

bases = st.sampled_from([simplex(1), simplex(2), simplex(3), boundary(2), horn(3, 1)])
kinds = st.sampled_from(["marked", "scaled"])


def test_decorate_examples():
    assert len(decorate(simplex(2), "flat", "scaled").cells) == 0
    assert len(decorate(simplex(2), "sharp", "scaled").cells) == 1
    assert len(decorate(simplex(1), "sharp", "marked").cells) == 1


def test_decorations_must_have_the_right_degree():
    with pytest.raises(SimplicialError):
        MarkedSSet(simplex(2), ["012"])
    with pytest.raises(SimplicialError):
        ScaledSSet(simplex(2), ["01"])


@given(bases, kinds)
def test_degenerate_cells_always_decorated(X, kind):
    for D in (flat(X, kind), sharp(X, kind)):
        assert degeneracy_closed(D)
        assert degeneracy_closed(D.with_cells(D.cells))


def test_product_marking_rule():
    P = product_decorated(sharp(simplex(1), "marked"), flat(simplex(1), "marked"))
    assert P.obj.base.f_vector() == (4, 5, 2)
    assert len(P.obj.cells) == 2
    for g in P.obj.cells:
        assert P.right.underlying(SimplexRef(g)).degeneracies


@given(bases, kinds)
def test_sharp_products_are_sharp(X, kind):
    P = product_decorated(sharp(X, kind), sharp(simplex(1), kind))
    assert P.obj == sharp(P.obj.base, kind)


@given(bases, kinds)
def test_product_with_point_is_unit(X, kind):
    P = product_decorated(flat(X, kind), sharp(simplex(0), kind))
    assert is_isomorphic(P.obj.base, X)
    assert len(P.obj.cells) == 0


def test_product_associativity_of_decorations():
    A = MarkedSSet(simplex(1), ["01"])
    B = flat(simplex(1), "marked")
    C = MarkedSSet(simplex(1), ["01"])
    left = product_decorated(product_decorated(A, B).obj, C).obj
    right = product_decorated(A, product_decorated(B, C).obj).obj
    assert left.base.f_vector() == right.base.f_vector()
    assert len(left.cells) == len(right.cells)


def _a0_pushout(kind):
    H, D = horn(2, 1), simplex(2)
    f = inclusion(flat(H, kind), sharp(H, kind))
    g = inclusion(flat(H, kind), flat(D, kind))
    return pushout_decorated(f, g).obj


def test_pushout_examples():
    scaled = _a0_pushout("scaled")
    assert len(scaled.cells) == 0
    marked = _a0_pushout("marked")
    assert sorted(marked.cells) == ["01", "12"]
    X = flat(simplex(2), "scaled")
    idm = DecoratedMap(X, X, identity_map(simplex(2)))
    assert pushout_decorated(idm, idm).obj.cells == X.cells
    up = inclusion(flat(simplex(2), "scaled"), sharp(simplex(2), "scaled"))
    same = DecoratedMap(X, X, identity_map(simplex(2)))
    assert len(pushout_decorated(same, up).obj.cells) == 1


def test_maps_must_preserve_decorations():
    with pytest.raises(SimplicialError):
        inclusion(sharp(simplex(2)), flat(simplex(2)))


def test_json_round_trip():
    X = ScaledSSet(simplex(3), ["012", "123"])
    assert load_decorated(X.to_json()) == X
    M = MarkedSSet(boundary(2), ["01"])
    assert load_decorated(M.to_json()) == M


def _cone_onto(S, apex, vertex, edge):
    CL = cone_left(simplex(0)).obj
    return Cone(simplex(0), SimplicialMap(CL, S, {"c": apex, "0": vertex, "c*0": edge}))


def test_pattern_membership_and_cones():
    S = simplex(2)
    pat = sharp_pattern(S)
    assert pat.in_M(SimplexRef("02")) and pat.in_T(SimplexRef("012"))
    assert pat.in_M(SimplexRef("1", (0,)))
    const = _cone_onto(S, SimplexRef("0"), SimplexRef("0"), SimplexRef("0", (0,)))
    assert const.is_constant()
    CategoricalPattern(S, pat.M_S, pat.T, [const])
    along = _cone_onto(S, SimplexRef("0"), SimplexRef("1"), SimplexRef("01"))
    assert not along.is_constant()
    CategoricalPattern(S, pat.M_S, pat.T, [along])
    with pytest.raises(SimplicialError):
        CategoricalPattern(S, frozenset(), frozenset(), [along])
