import random
from itertools import product as iproduct

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from scx.segal import (
    PreSegalSet,
    SegalError,
    adjunction_check,
    detect_invertibles_via_K,
    discrete,
    free_category,
    free_category_full,
    free_simplex,
    from_category,
    functors,
    homotopy_category_presegal,
    invertible_core,
    invertible_edges,
    is_category_object,
    is_groupoid_object,
    monoid,
    nerve_round_trip,
    presegal_maps,
    random_category,
    segal_condition,
    to_category,
    unpre,
)
from scx.sset_core import (
    SimplicialError,
    boundary,
    group_category,
    is_isomorphic,
    nerve,
    poset_category,
    product_category,
    simplex,
    walking_isomorphism,
)
from scx.suites import parallel_arrows

CATEGORIES = {
    "[0]": poset_category(0), "[1]": poset_category(1), "[2]": poset_category(2),
    "iso": walking_isomorphism(), "Z2": group_category(2), "par": parallel_arrows(),
}


def free_paths(n: int, A: int, i: int, j: int) -> int:
    """Morphisms i -> j in the free category on the graph 0 -> 1 -> ... -> n with A parallel edges per step."""
    return A ** (j - i) if i <= j else 0


# -- category objects ---------------------------------------------------------


@pytest.mark.parametrize("name", sorted(CATEGORIES))
def test_nerves_are_category_objects(name):
    X = nerve(CATEGORIES[name], 4)
    assert is_category_object(X, 3)
    assert nerve_round_trip(X, 3)


def test_boundary_is_not_a_category_object():
    v = is_category_object(boundary(2), 3)
    assert not v
    assert v.witness["n"] == 2


def test_interval_is_a_category():
    assert is_category_object(simplex(1), 3)
    C = to_category(simplex(1))
    assert len(C.objects) == 2 and len(C.morphisms) == 3
    assert is_isomorphic(nerve(C, 3), simplex(1))


def test_to_category_rejects_non_segal():
    with pytest.raises(SegalError):
        to_category(boundary(2))


# -- invertibles --------------------------------------------------------------


def test_invertible_core_examples():
    W = nerve(walking_isomorphism(), 3)
    assert is_isomorphic(invertible_core(W), W)
    core = invertible_core(simplex(1))
    assert core.f_vector()[0] == 2
    assert not core.generators.get(1, ())
    Z = nerve(group_category(2), 3)
    assert is_isomorphic(invertible_core(Z), Z)


def test_detect_invertibles_examples():
    W = nerve(walking_isomorphism(), 3)
    found = detect_invertibles_via_K(W)
    assert len({e for e in found if not e.degeneracies}) == 2
    assert all(e.degeneracies for e in detect_invertibles_via_K(simplex(1)))
    sq = nerve(product_category(poset_category(1), poset_category(1)), 3)
    assert all(e.degeneracies for e in detect_invertibles_via_K(sq))


@pytest.mark.parametrize("seed", range(12))
def test_core_is_a_groupoid_and_K_detection_agrees(seed):
    C = random_category(random.Random(seed), max_objects=4, max_morphisms=10)
    X = nerve(C, 3)
    assert is_groupoid_object(invertible_core(X), 3)
    assert detect_invertibles_via_K(X) == invertible_edges(X)


# -- preSegal data ------------------------------------------------------------


def test_singleton_condition_enforced():
    with pytest.raises(SimplicialError):
        PreSegalSet(["a"], lambda seq: ("p", "q"), lambda seq, th, x: x, 2)


def test_free_category_examples():
    h = free_category(free_simplex(1, "abc"), "0", "1", 3)
    assert len(h) == 3 and h.stabilized
    assert len(free_category(free_simplex(2, "ab"), "0", "2", 3)) == 4
    assert len(free_category(discrete(["x", "y"]), "x", "x", 2)) == 1
    assert len(free_category(discrete(["x", "y"]), "x", "y", 2)) == 0


@pytest.mark.parametrize("n,a", [(n, a) for n in range(4) for a in range(1, 4)])
def test_free_category_counts(n, a):
    P = free_simplex(n, "abc"[:a])
    for i, j in iproduct(range(n + 1), repeat=2):
        h = free_category(P, str(i), str(j), max(j - i, 1))
        assert len(h) == free_paths(n, a, i, j)
        assert h.stabilized


def test_free_category_bound_checked():
    with pytest.raises(SimplicialError):
        free_category(free_simplex(1, "a"), "0", "1", 0)
    with pytest.raises(SimplicialError):
        free_category(free_simplex(1, "a"), "0", "7", 2)


@pytest.mark.parametrize("P,C,expected", [
    (free_simplex(1, "a"), poset_category(1), 3),
    (discrete(["x", "y"]), poset_category(1), 4),
    (free_simplex(2, "ab"), poset_category(2), None),
])
def test_adjunction_examples(P, C, expected):
    v = adjunction_check(P, C, len(P.S))
    assert v.semi_decided
    assert v.checked["functors"] == v.checked["presegal_maps"]
    if expected is not None:
        assert v.checked["functors"] == expected


@pytest.mark.parametrize("name", sorted(CATEGORIES))
@pytest.mark.parametrize("n,a", [(0, 1), (1, 1), (1, 2)])
def test_adjunction_for_small_free_data(n, a, name):
    assert adjunction_check(free_simplex(n, "ab"[:a]), CATEGORIES[name], n + 1).semi_decided


@pytest.mark.parametrize("src,tgt", [("[1]", "iso"), ("par", "[1]"), ("Z2", "Z2"), ("[2]", "par")])
def test_embedding_is_fully_faithful(src, tgt):
    D, C = CATEGORIES[src], CATEGORIES[tgt]
    n_functors = sum(1 for _ in functors(D, C))
    n_maps = sum(1 for _ in presegal_maps(from_category(D), C))
    assert n_functors == n_maps


def test_free_category_of_a_category_is_itself():
    C = walking_isomorphism()
    F = free_category_full(from_category(C), 3)
    assert F.stabilized
    assert len(F.category.morphisms) == len(C.morphisms)


# -- UnPre and homotopy categories ---------------------------------------------


def test_unpre_examples():
    X = unpre(free_simplex(1, "abc"), 2)
    assert X.f_vector()[:2] == (2, 3)
    assert len(X.simplices(1)) == 3 + 2
    Y = unpre(discrete(["x", "y", "z"]), 2)
    assert Y.f_vector()[0] == 3 and not Y.generators.get(1, ())


@pytest.mark.parametrize("P", [free_simplex(1, "ab"), free_simplex(2, "a"), from_category(parallel_arrows(), 2)])
def test_unpre_level_sizes(P):
    X = unpre(P, 2)
    for n in range(3):
        assert len(X.simplices(n)) == sum(len(P.values(seq)) for seq in P.sequences(n))


def test_homotopy_category_examples():
    C = parallel_arrows()
    H = homotopy_category_presegal(from_category(C))
    assert len(H.morphisms) == len(C.morphisms)
    assert len(H.hom("a", "b")) == 2
    F = homotopy_category_presegal(free_simplex(1, "abc"))
    assert len(F.hom("0", "1")) == 3
    M = monoid(["e", "t"], {("e", "e"): "e", ("e", "t"): "t", ("t", "e"): "t", ("t", "t"): "e"}, "e")
    H = homotopy_category_presegal(M)
    assert len(H.objects) == 1 and len(H.morphisms) == 2
    t = next(m for m in H.morphisms if not H.is_identity(m))
    assert H.is_identity(H.comp(t, t))


def test_non_segal_datum_is_rejected():
    P = free_simplex(2, "ab")
    # Fr^2 has X([0,1,2]) = A but X([0,1]) x X([1,2]) = A x A
    assert not segal_condition(P)
    with pytest.raises(SegalError):
        homotopy_category_presegal(P)


@settings(max_examples=15)
@given(st.integers(0, 10_000))
def test_random_nerves_round_trip(seed):
    C = random_category(random.Random(seed))
    X = nerve(C, 3)
    assert nerve_round_trip(X, 3)
    assert is_category_object(X, 3)


def test_json_round_trip():
    P = free_simplex(2, "ab")
    Q = PreSegalSet.from_json(P.to_json())
    assert Q.S == P.S
    assert all(Q.values(s) == P.values(s) for s in P.sequences(2))
