from functools import reduce

import pytest
from hypothesis import given
from hypothesis import strategies as st

from scx.coherent import (
    MarkedSimpCategory,
    compose_union,
    hom_complex,
    mapping_poset,
    marked_closure,
    scaled_nerve,
)
from scx.decorations import MarkedSSet, ScaledSSet, flat, sharp
from scx.sset_core import (
    FinCategory,
    FiniteSimplicialSet,
    SimplexRef,
    SimplicialError,
    boundary,
    horn,
    is_isomorphic,
    nerve,
    poset_category,
    product,
    simplex,
    trimmed_f_vector,
)


def cube(k: int) -> FiniteSimplicialSet:
    if k == 0:
        return simplex(0)
    return reduce(lambda a, b: product(a, b).obj, [simplex(1)] * k)


def two_parallel_edges() -> FiniteSimplicialSet:
    a, b = SimplexRef("a"), SimplexRef("b")
    return FiniteSimplicialSet({0: ["a", "b"], 1: ["f", "g"]}, {"f": [b, a], "g": [b, a]})


def test_mapping_poset_examples():
    P = mapping_poset(3, 0, 3)
    assert len(P.elements) == 4
    assert P.nerve().f_vector() == (4, 5, 2)
    assert mapping_poset(4, 2, 2).elements == (frozenset({2}),)
    assert mapping_poset(4, 2, 2).nerve().f_vector() == (1,)
    assert is_isomorphic(mapping_poset(2, 0, 2).nerve(), simplex(1))


def test_mapping_poset_window_checked():
    with pytest.raises(SimplicialError):
        mapping_poset(2, 2, 1)
    with pytest.raises(SimplicialError):
        mapping_poset(2, 0, 3)


@pytest.mark.parametrize("n,i,j", [(n, i, j) for n in range(5) for i in range(n + 1) for j in range(i, n + 1)])
def test_mapping_poset_is_a_cube(n, i, j):
    P = mapping_poset(n, i, j)
    k = max(j - i - 1, 0)
    assert len(P.elements) == 2 ** k
    assert P.nerve().f_vector() == cube(k).f_vector()


def test_compose_union_examples():
    assert compose_union({0, 1}, {1, 2}) == {0, 1, 2}
    assert compose_union({0, 2}, {2, 3}) == {0, 2, 3}
    assert compose_union({0, 2}, {2}) == {0, 2}
    with pytest.raises(SimplicialError):
        compose_union({0, 1}, {2, 3})


def _subsets(i, j):
    return mapping_poset(5, i, j).elements


@pytest.mark.parametrize("i,j,k,l", [(i, j, k, l) for i in range(6) for j in range(i, 6)
                                     for k in range(j, 6) for l in range(k, 6)])
def test_compose_union_associative_and_unital(i, j, k, l):
    for S in _subsets(i, j):
        assert compose_union({i}, S) == S == compose_union(S, {j})
        for T in _subsets(j, k):
            for U in _subsets(k, l):
                assert compose_union(compose_union(S, T), U) == compose_union(S, compose_union(T, U))


@given(st.integers(0, 5).flatmap(lambda n: st.tuples(st.just(n), st.integers(0, n))).flatmap(
    lambda t: st.tuples(st.just(t[0]), st.just(t[1]), st.integers(t[1], t[0]))))
def test_compose_union_monotone(nij):
    n, i, j = nij
    for S in _subsets(i, j):
        for S2 in _subsets(i, j):
            for T in _subsets(j, n):
                if S <= S2:
                    assert compose_union(S, T) <= compose_union(S2, T)


def test_hom_complex_examples():
    assert hom_complex(simplex(3), "0", "3", 2).f_vector() == (4, 5, 2)
    assert tuple(trimmed_f_vector(hom_complex(boundary(2), "0", "2", 2))) == (2,)
    assert tuple(trimmed_f_vector(hom_complex(two_parallel_edges(), "a", "b", 2))) == (2,)


def test_hom_complex_rejects_non_vertices():
    with pytest.raises(SimplicialError):
        hom_complex(simplex(2), "0", "01", 2)


@pytest.mark.parametrize("n,i,j", [(n, i, j) for n in range(6) for i in range(n + 1) for j in range(i, n + 1)])
def test_hom_complex_of_simplex_matches_cube(n, i, j):
    k = max(j - i - 1, 0)
    H = hom_complex(simplex(n), str(i), str(j), k)
    assert H.f_vector() == cube(k).f_vector()


def test_hom_complex_of_simplex_matches_poset_nerve():
    H = hom_complex(simplex(4), "0", "4", 3)
    assert is_isomorphic(H, mapping_poset(4, 0, 4).nerve())


def test_hom_complex_of_horn_loses_a_cube_edge():
    # the face 023 is missing, so the cube keeps 4 vertices but only 3 of its edges
    H = hom_complex(horn(3, 1), "0", "3", 2)
    assert tuple(trimmed_f_vector(H)) == (4, 3)


def _edges(M: MarkedSSet):
    return M.base.generators.get(1, ()) if M.base.top_dim >= 1 else ()


def test_marked_closure_examples():
    M = marked_closure(sharp(simplex(2)), "0", "2")
    assert tuple(trimmed_f_vector(M.base)) == (2, 1)
    assert M.cells == frozenset(_edges(M))
    assert not marked_closure(flat(simplex(2)), "0", "2").cells


def test_marked_closure_leaves_one_cube_edge_unmarked():
    S = simplex(3)
    Sb = ScaledSSet(S, [t for t in S.generators[2] if t != "013"])
    M = marked_closure(Sb, "0", "3")
    cube_edges = [e for e in _edges(M) if not e.startswith("0123")]
    assert len(cube_edges) == 4
    assert len(M.cells & set(cube_edges)) == 3
    assert not any(e.startswith("013[") for e in M.cells)


@pytest.mark.parametrize("thin", [[], ["012"], ["012", "123"], ["013", "023"], ["012", "013", "023", "123"]])
def test_marked_closure_is_idempotent(thin):
    Sb = ScaledSSet(simplex(3), thin)
    M = marked_closure(Sb, "0", "3")
    again = marked_closure(Sb, "0", "3")
    assert M == again
    assert all(M.is_marked(e) for e in M.base.simplices(1) if e.degeneracies)


def test_more_thin_triangles_mark_more():
    few = marked_closure(ScaledSSet(simplex(3), ["012"]), "0", "3")
    many = marked_closure(ScaledSSet(simplex(3), ["012", "123"]), "0", "3")
    assert few.cells <= many.cells


def test_scaled_nerve_examples():
    pt = MarkedSimpCategory.from_category(poset_category(0))
    N = scaled_nerve(pt, 3)
    assert tuple(trimmed_f_vector(N.base)) == (1,)
    assert N == sharp(N.base)
    two = FinCategory(
        ["a", "b"], {"1a": ("a", "a"), "1b": ("b", "b"), "f": ("a", "b"), "g": ("a", "b")},
        {"a": "1a", "b": "1b"},
        {("1a", "1a"): "1a", ("1b", "1b"): "1b", ("1a", "f"): "f", ("1a", "g"): "g",
         ("f", "1b"): "f", ("g", "1b"): "g"},
    )
    N = scaled_nerve(MarkedSimpCategory.from_category(two), 2)
    assert tuple(trimmed_f_vector(N.base)) == (2, 2)
    assert not N.cells


@pytest.mark.parametrize("n", range(4))
def test_scaled_nerve_of_discrete_homs_is_sharp_nerve(n):
    C = poset_category(n)
    N = scaled_nerve(MarkedSimpCategory.from_category(C), n + 1)
    assert is_isomorphic(N.base, nerve(C, n + 1))
    assert N == sharp(N.base)
