"""Verification suites shared by ``scx verify`` and the acceptance tests.

Each suite returns a :class:`SuiteReport`.  Checks are sorted by name and
timings are left out of the JSON unless asked for, so reports are
byte-identical across runs.
"""

from __future__ import annotations

import json
import random
import time
from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable

from . import anodyne, segal
from .coherent import MarkedSimpCategory, compose_union, hom_complex, mapping_poset, scaled_nerve
from .decorations import MarkedSSet, ScaledSSet
from .homology import colk_certificate, homology
from .sset_core import (
    FinCategory,
    FiniteSimplicialSet,
    SimplexRef,
    SimplicialMap,
    boundary,
    group_category,
    nerve,
    poset_category,
    product,
    simplex,
    simplex_ref,
    spanned,
    trimmed_f_vector,
    walking_isomorphism,
)
from .subdivision import beta_fiber_certificate, sd0, sd_plus0

PASS, FAIL, SEMI = "pass", "fail", "semi-decided"


@dataclass
class Check:
    name: str
    status: str
    witness: dict | None = None
    info: dict = field(default_factory=dict)
    runtime: float = 0.0

    def to_json(self, timings: bool = False) -> dict:
        out = {"name": self.name, "status": self.status, "info": self.info, "witness": self.witness}
        if timings:
            out["runtime_s"] = round(self.runtime, 3)
        return out


@dataclass
class SuiteReport:
    suite: str
    checks: list[Check]

    @property
    def ok(self) -> bool:
        return all(c.status != FAIL for c in self.checks)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if c.status == FAIL]

    def to_json(self, timings: bool = False) -> dict:
        return {
            "suite": self.suite,
            "ok": self.ok,
            "counts": {s: sum(c.status == s for c in self.checks) for s in (PASS, SEMI, FAIL)},
            "checks": [c.to_json(timings) for c in sorted(self.checks, key=lambda c: c.name)],
        }

    def to_text(self, timings: bool = False) -> str:
        lines = [f"suite {self.suite}: {'ok' if self.ok else 'FAILED'}"]
        for c in sorted(self.checks, key=lambda c: c.name):
            t = f" ({c.runtime:.2f}s)" if timings else ""
            lines.append(f"  [{c.status}] {c.name}{t}")
            if c.status == FAIL:
                lines.append("      witness: " + json.dumps(c.witness, sort_keys=True))
        return "\n".join(lines)


class _Runner:
    def __init__(self, suite: str):
        self.suite = suite
        self.checks: list[Check] = []

    def run(self, name: str, fn: Callable[[], tuple[str, dict | None, dict]]) -> None:
        t = time.perf_counter()
        try:
            status, witness, info = fn()
        except Exception as exc:  # a crash is a failed check with the error as witness
            status, witness, info = FAIL, {"error": f"{type(exc).__name__}: {exc}"}, {}
        if status == FAIL and witness is None:
            witness = {"detail": "check failed"}
        self.checks.append(Check(name, status, witness, info, time.perf_counter() - t))

    def report(self) -> SuiteReport:
        return SuiteReport(self.suite, self.checks)


def _vertex_map(X: FiniteSimplicialSet, Y: FiniteSimplicialSet, v: dict[int, int]) -> SimplicialMap:
    """Map between standard (digit-labelled) complexes given on vertices."""
    return SimplicialMap(X, Y, {g: simplex_ref(Y, [v[int(c)] for c in g]) for g in X.dim_of})


def parallel_arrows() -> FinCategory:
    """Two objects a, b and two parallel arrows f, g: a -> b."""
    return FinCategory(
        ["a", "b"],
        {"ida": ("a", "a"), "idb": ("b", "b"), "f": ("a", "b"), "g": ("a", "b")},
        {"a": "ida", "b": "idb"},
        {
            ("ida", "ida"): "ida", ("idb", "idb"): "idb", ("ida", "f"): "f",
            ("ida", "g"): "g", ("f", "idb"): "f", ("g", "idb"): "g",
        },
    )


# ---------------------------------------------------------------------------
# 1. coherent-nerve cubes


def _cube_f_vector(k: int) -> tuple[int, ...]:
    if k <= 0:
        return (1,)
    I = simplex(1)
    X = I
    for _ in range(k - 1):
        X = product(X, I).obj
    return trimmed_f_vector(X)


def coherent_cubes(n_max: int = 5) -> SuiteReport:
    r = _Runner("coherent-cubes")
    for n in range(n_max + 1):
        S = simplex(n)
        for i in range(n + 1):
            for j in range(i, n + 1):
                def check(S=S, i=i, j=j):
                    k = max(j - i - 1, 0)
                    got = trimmed_f_vector(hom_complex(S, str(i), str(j), k))
                    want = _cube_f_vector(j - i - 1)
                    info = {"f_vector": list(got)}
                    if got != want:
                        return FAIL, {"got": list(got), "expected": list(want)}, info
                    return PASS, None, info

                r.run(f"hom D{n} ({i},{j})", check)

    def assoc(n=min(n_max, 4)):
        count = 0
        for i, j, k, l in combinations(range(n + 1), 4):
            P1, P2, P3 = (mapping_poset(n, a, b).elements for a, b in ((i, j), (j, k), (k, l)))
            P = set(mapping_poset(n, i, l).elements)
            for A in P1:
                for B in P2:
                    AB = compose_union(A, B)
                    for C in P3:
                        left, right = compose_union(AB, C), compose_union(A, compose_union(B, C))
                        count += 1
                        if left != right or left not in P:
                            return FAIL, {"triple": [sorted(A), sorted(B), sorted(C)]}, {}
        return PASS, None, {"triples": count}

    r.run("composition associativity", assoc)
    return r.report()


# ---------------------------------------------------------------------------
# 2. subdivision spheres


def _sphere_betti(d: int, bound: int) -> tuple[int, ...]:
    return tuple(1 if k in (0, d) else 0 for k in range(bound + 1))


def _sd_marking_oracle(thin: bool) -> set[tuple[tuple[int, ...], tuple[int, ...]]]:
    """Marked edges (simplex, face) of sd(Delta^2) computed directly from the convex rule."""
    out = set()
    for r in range(1, 4):
        for A in combinations(range(3), r):
            for s in range(1, r):
                for B in combinations(A, s):
                    pos = [A.index(v) for v in B]
                    if pos == list(range(pos[0], pos[-1] + 1)):
                        out.add((A, B))
                    elif thin and A == (0, 1, 2) and B == (0, 2):
                        out.add((A, B))
    return out


def subdivision_spheres() -> SuiteReport:
    r = _Runner("subdivision-spheres")
    for n in (2, 3, 4):
        def check(n=n):
            cert = homology(sd0(boundary(n)).base, n - 1)
            want = _sphere_betti(n - 1, n - 1)
            info = {"betti": list(cert.betti)}
            if cert.betti != want or any(cert.torsion):
                return FAIL, {"betti": list(cert.betti), "expected": list(want)}, info
            return PASS, None, info

        r.run(f"sd0 boundary D{n}", check)
    for style, thin in (("flat", False), ("sharp", True)):
        def check(thin=thin):
            Xb = ScaledSSet(simplex(2), ["012"] if thin else [])
            sd = sd_plus0(Xb)
            got = set()
            for e, (src, _, image) in sd.edge_data.items():
                if sd.marking.is_marked(SimplexRef(e)):
                    A = tuple(int(c) for c in src)
                    got.add((A, tuple(A[k] for k in image)))
            want = _sd_marking_oracle(thin)
            if got != want:
                return FAIL, {"extra": sorted(map(str, got - want)), "missing": sorted(map(str, want - got))}, {}
            return PASS, None, {"marked_edges": len(got), "edges": len(sd.edge_data)}

        r.run(f"sd+0 marking D2 {style}", check)
    return r.report()


# ---------------------------------------------------------------------------
# 3. beta fibers


def jt_fibers(n_max: int = 2) -> SuiteReport:
    r = _Runner("jt-fibers")
    spaces = {"D0": simplex(0), "D1": simplex(1), "D2": simplex(2), "bD2": boundary(2)}
    for name, X in spaces.items():
        for n in range(n_max + 1):
            for sigma in X.simplices(n):
                def check(X=X, n=n, sigma=sigma):
                    cert = beta_fiber_certificate(X, n, sigma)
                    info = {"grade": cert.grade, "witness": cert.witness}
                    if cert.witness is None or not cert.witness.startswith("initial") or not cert.acyclic:
                        return FAIL, {"certificate": cert.to_json()}, info
                    return PASS, None, info

                r.run(f"{name} n={n} {sigma}", check)
    return r.report()


# ---------------------------------------------------------------------------
# 4. colk


COLK_CASES = ((1, 1), (2, 1), (1, 2), (2, 2))


def colk(cases=COLK_CASES) -> SuiteReport:
    r = _Runner("colk")
    for m, n in cases:
        def check(m=m, n=n):
            cert = colk_certificate(m, n)
            info = {"grade": cert.grade, "betti": list(cert.betti), "notes": cert.notes}
            if not cert.contractible:
                return FAIL, {"certificate": cert.to_json()}, info
            return PASS, None, info

        r.run(f"C'({m},{n})", check)
    return r.report()


# ---------------------------------------------------------------------------
# 5. filtrations


def filtrations() -> SuiteReport:
    r = _Runner("filtrations")
    cases = [("preperc", {"n": n}) for n in range(1, 5)]
    cases += [("swww", {"n": n, "i": i}) for n in range(2, 4) for i in range(1, n)]
    cases += [("carpal", {"n": n}) for n in range(3)]
    for fam, params in cases:
        def check(fam=fam, params=params):
            cert = anodyne.FAMILIES[fam](**params)
            info = {"steps": len(cert.steps)}
            if not cert.ok:
                return FAIL, cert.mismatch, info
            return PASS, None, info

        r.run(fam + " " + " ".join(f"{k}={v}" for k, v in params.items()), check)
    return r.report()


# ---------------------------------------------------------------------------
# 6. slice model versus enriched homs


def csi(dim_bound: int = 3) -> SuiteReport:
    r = _Runner("csi")

    def two_arrows():
        C = MarkedSimpCategory.from_category(parallel_arrows())
        Z = scaled_nerve(C, dim_bound)
        H = anodyne.hom_via_slice(Z, "a", "b", dim_bound)
        cert = homology(H.base, 2)
        enriched = homology(C.hom("a", "b").base, 2)
        info = {"betti": list(cert.betti), "enriched_betti": list(enriched.betti)}
        if cert.betti != (2, 0, 0) or any(cert.torsion) or cert.betti != enriched.betti:
            return FAIL, info, info
        return PASS, None, info

    r.run("two parallel arrows Hom(a,b)", two_arrows)
    for n in range(1, 4):
        def sharp(n=n):
            X = simplex(n)
            Zb = ScaledSSet(X, X.generators.get(2, ()))
            H = anodyne.hom_via_slice(Zb, "0", str(n), dim_bound)
            cert = homology(H.base, 2)
            info = {"betti": list(cert.betti), "f_vector": list(H.base.f_vector())}
            if not cert.acyclic:
                return FAIL, info, info
            return PASS, None, info

        r.run(f"sharp D{n} Hom(0,{n})", sharp)
    return r.report()


# ---------------------------------------------------------------------------
# 7. Segal round trips


def segal_roundtrip(seed: int = 0, count: int = 20) -> SuiteReport:
    r = _Runner("segal-roundtrip")
    rng = random.Random(seed)
    for k in range(count):
        C = segal.random_category(rng)

        def check(C=C):
            X = nerve(C, 3)
            v = segal.nerve_round_trip(X)
            info = {"objects": len(C.objects), "morphisms": len(C.morphisms)}
            if not v:
                return FAIL, v.witness, info
            inv = segal.invertible_edges(X)
            det = segal.detect_invertibles_via_K(X)
            if inv != det:
                return FAIL, {"core_only": sorted(map(str, inv - det)), "K_only": sorted(map(str, det - inv))}, info
            core = segal.invertible_core(X)
            if not segal.is_groupoid_object(core):
                return FAIL, {"detail": "core is not a groupoid object"}, info
            info["invertible_edges"] = len(inv)
            return PASS, None, info

        r.run(f"random category {k:02d}", check)
    return r.report()


# ---------------------------------------------------------------------------
# 8. free categories and the adjunction


ALPHABET = ("a", "b", "c")


def adjunction_targets() -> dict[str, FinCategory]:
    return {
        "[0]": poset_category(0), "[1]": poset_category(1), "[2]": poset_category(2),
        "iso": walking_isomorphism(), "Z2": group_category(2), "par": parallel_arrows(),
    }


def free_category_suite(n_max: int = 3, a_max: int = 3, adj_n: int = 2, adj_a: int = 2) -> SuiteReport:
    r = _Runner("free-category")
    for n in range(n_max + 1):
        for k in range(1, a_max + 1):
            A = ALPHABET[:k]

            def counts(n=n, A=A):
                P = segal.free_simplex(n, A)
                got = {}
                for i in range(n + 1):
                    for j in range(n + 1):
                        h = segal.free_category(P, str(i), str(j), max(abs(j - i), 1))
                        want = len(A) ** (j - i) if j >= i else 0
                        got[f"{i}{j}"] = len(h)
                        if len(h) != want or not h.stabilized:
                            return FAIL, {"pair": [i, j], "count": len(h), "expected": want,
                                          "stabilized": h.stabilized}, {}
                return PASS, None, {"counts": got}

            r.run(f"counts Fr^{n}(|A|={k})", counts)
    for n in range(adj_n + 1):
        for k in range(1, adj_a + 1):
            A = ALPHABET[:k]
            for cname, C in adjunction_targets().items():
                def adj(n=n, A=A, C=C):
                    P = segal.free_simplex(n, A)
                    v = segal.adjunction_check(P, C, max(n + 1, 1))
                    if not v:
                        return FAIL, v.witness, {}
                    return SEMI, None, dict(v.checked)

                r.run(f"adjunction Fr^{n}(|A|={k}) -> {cname}", adj)
    return r.report()


# ---------------------------------------------------------------------------
# 9. weak bicategories


def bicategory_examples() -> dict[str, tuple[ScaledSSet, bool]]:
    """Name -> (scaled set, expected to pass), with nerves built two levels past their dimension."""
    out: dict[str, tuple[ScaledSSet, bool]] = {
        "D2 flat": (ScaledSSet(simplex(2), []), False),
        "D0": (ScaledSSet(simplex(0), []), True),
    }
    for name, C, d in (("nerve par", parallel_arrows(), 1), ("nerve [1]", poset_category(1), 1),
                       ("nerve [2]", poset_category(2), 2)):
        out[name] = (scaled_nerve(MarkedSimpCategory.from_category(C), d + 2), True)
    return out


def _true_dim(X: FiniteSimplicialSet) -> int:
    return len(trimmed_f_vector(X)) - 1


def weak_bicategory() -> SuiteReport:
    r = _Runner("weak-bicategory")
    for name, (Z, expect) in bicategory_examples().items():
        def check(Z=Z, expect=expect):
            bound = max(_true_dim(Z.base) + 2, 2)
            v = anodyne.is_weak_bicategory(Z, bound)
            info = {"verdict": v.status, "bound": bound, **v.checked}
            if expect:
                return (SEMI, None, info) if v.semi_decided else (FAIL, v.witness, info)
            if v or v.witness.get("generator") != "A(2,1)":
                return FAIL, {"verdict": v.status, "witness": v.witness}, info
            info["witness_generator"] = v.witness["generator"]
            return PASS, None, info

        r.run(name, check)
    return r.report()


# ---------------------------------------------------------------------------
# 10. flatness


def flatness_examples() -> dict[str, tuple[FiniteSimplicialSet, SimplicialMap, list[SimplexRef], bool]]:
    """Name -> (M, p: M -> Delta^2, edges over 02, expected flat)."""
    D2 = simplex(2)
    out = {}
    out["identity D2"] = (D2, _vertex_map(D2, D2, {0: 0, 1: 1, 2: 2}), [SimplexRef("02")], True)
    M = simplex(3)
    out["D3 via 0112"] = (M, _vertex_map(M, D2, {0: 0, 1: 1, 2: 1, 3: 2}), [SimplexRef("03")], True)
    P = product(simplex(2), simplex(1))
    over = [SimplexRef(g) for g in P.obj.generators[1] if P.left(SimplexRef(g)) == SimplexRef("02")]
    out["prism D2xD1"] = (P.obj, P.left, over, True)
    X = spanned(2, [(0, 2), (1,)])
    out["D02 + point"] = (X, _vertex_map(X, D2, {0: 0, 1: 1, 2: 2}), [SimplexRef("02")], False)
    X = spanned(3, [(0, 1, 3), (0, 2, 3)])
    out["two triangles on 02"] = (X, _vertex_map(X, D2, {0: 0, 1: 1, 2: 1, 3: 2}), [SimplexRef("03")], False)
    return out


def has_cocartesian_lifts(M: FiniteSimplicialSet, p: SimplicialMap, bound: int = 3) -> bool:
    """Inner fibration with a coCartesian edge from each vertex over 0 to the fiber over 1."""
    for n in range(2, bound + 1):
        for i in range(1, n):
            if anodyne.horn_lifting_failure(M, p, n, i) is not None:
                return False
    for v in M.generators[0]:
        if p(SimplexRef(v)) != SimplexRef("0"):
            continue
        lifts = [e for e in M.simplices(1) if M.vertex(e, 0) == v and p(e) == SimplexRef("01")]
        if not any(anodyne.is_cocartesian(M, p, e, bound) is None for e in lifts):
            return False
    return True


def flatness() -> SuiteReport:
    r = _Runner("flatness")
    for name, (M, p, edges, expect) in flatness_examples().items():
        def check(M=M, p=p, edges=edges, expect=expect):
            certs = {str(f): anodyne.is_flat_over_triangle(M, p, f) for f in edges}
            info = {k: c.grade for k, c in sorted(certs.items())}
            flat = all(c.contractible for c in certs.values())
            if expect:
                info["hypothesis"] = has_cocartesian_lifts(M, p)
                if not flat or not info["hypothesis"]:
                    return FAIL, {k: c.to_json() for k, c in sorted(certs.items())}, info
            elif flat:
                return FAIL, {"detail": "counterexample certified flat"}, info
            return PASS, None, info

        r.run(name, check)
    return r.report()


SUITES: dict[str, Callable[..., SuiteReport]] = {
    "coherent-cubes": coherent_cubes,
    "subdivision-spheres": subdivision_spheres,
    "jt-fibers": jt_fibers,
    "colk": colk,
    "filtrations": filtrations,
    "csi": csi,
    "segal-roundtrip": segal_roundtrip,
    "free-category": free_category_suite,
    "weak-bicategory": weak_bicategory,
    "flatness": flatness,
}


def run_suite(name: str, seed: int = 0) -> SuiteReport:
    if name not in SUITES:
        raise KeyError(name)
    if name == "segal-roundtrip":
        return segal_roundtrip(seed)
    return SUITES[name]()
