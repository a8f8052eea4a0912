"""``scx``: build objects, run checks and print certificates.

Exit codes: 0 success, 1 a check failed, 2 unreadable or malformed input,
3 a precondition was violated.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Any, Sequence

from . import anodyne, segal
from .coherent import MarkedSimpCategory, hom_data, marked_closure, scaled_nerve
from .decorations import ScaledSSet, decorate, load_decorated
from .homology import homology
from .sset_core import (
    FinCategory,
    FiniteSimplicialSet,
    SimplicialError,
    boundary,
    collapsed_K,
    horn,
    nerve,
    poset_category,
    simplex,
)
from .subdivision import beta_fiber_certificate, sd0, sd_plus0
from .suites import SUITES, run_suite

EXIT_OK, EXIT_CHECK, EXIT_INPUT, EXIT_PRE = 0, 1, 2, 3


class InputError(Exception):
    """Unreadable or malformed input (exit 2)."""


class CheckFailed(Exception):
    """Raised with the payload to print when a check fails (exit 1)."""

    def __init__(self, payload: dict):
        super().__init__("check failed")
        self.payload = payload


# ---------------------------------------------------------------------------
# input helpers


def _read_json(path: str) -> Any:
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc


def _load(path: str, loader):
    obj = _read_json(path)
    try:
        return loader(obj)
    except SimplicialError as exc:
        raise InputError(str(exc)) from exc


def _load_sset(path: str) -> FiniteSimplicialSet:
    return _load(path, FiniteSimplicialSet.from_json)


def _load_scaled(path: str) -> ScaledSSet:
    X = _load(path, load_decorated)
    if isinstance(X, FiniteSimplicialSet):
        return ScaledSSet(X, ())
    if not isinstance(X, ScaledSSet):
        raise SimplicialError("expected a scaled simplicial set (a 'thin' list)")
    return X


def _load_category(path: str) -> FinCategory:
    return _load(path, FinCategory.from_json)


def _vertex(X: FiniteSimplicialSet, v: str) -> str:
    if X.dim_of.get(v) != 0:
        raise SimplicialError(f"{v!r} is not a vertex")
    return v


# ---------------------------------------------------------------------------
# subcommands


def cmd_build(args) -> dict:
    kind = args.kind
    if kind == "simplex":
        X = simplex(_need(args.n, "--n"))
    elif kind == "boundary":
        X = boundary(_need(args.n, "--n"))
    elif kind == "horn":
        X = horn(_need(args.n, "--n"), _need(args.i, "--i"))
    elif kind == "collapsed-K":
        X = collapsed_K()
    elif kind == "poset-nerve":
        X = nerve(poset_category(_need(args.n, "--n")), args.bound)
    elif kind == "nerve":
        X = nerve(_load_category(_need(args.input, "--input")), args.bound)
    elif kind == "scaled-nerve":
        C = MarkedSimpCategory.from_category(_load_category(_need(args.input, "--input")))
        return scaled_nerve(C, args.bound).to_json()
    else:  # argparse restricts the choices
        raise SimplicialError(f"unknown kind {kind!r}")
    if args.decorate:
        return decorate(X, args.decorate, args.as_).to_json()
    return X.to_json()


def _need(value, flag: str):
    if value is None:
        raise SimplicialError(f"{flag} is required here")
    return value


def cmd_hom(args) -> dict:
    if args.scaled:
        Sb = _load_scaled(args.input)
        M = marked_closure(Sb, _vertex(Sb.base, args.from_), _vertex(Sb.base, args.to), args.bound)
        out = M.to_json()
        out["f_vector"] = list(M.base.f_vector())
        return out
    S = _load(args.input, lambda obj: load_decorated(obj).base if "thin" in obj or "marked" in obj
              else FiniteSimplicialSet.from_json(obj))
    H = hom_data(S, _vertex(S, args.from_), _vertex(S, args.to), args.bound)
    out = H.complex.to_json()
    out["f_vector"] = list(H.complex.f_vector())
    return out


def cmd_slice(args) -> dict:
    Cb = _load_scaled(args.input)
    x = _vertex(Cb.base, args.from_)
    if args.to is not None:
        H = anodyne.hom_via_slice(Cb, x, _vertex(Cb.base, args.to), args.bound)
        out = H.to_json()
        out["f_vector"] = list(H.base.f_vector())
        out["homology"] = homology(H.base, args.bound).to_json()
        return out
    sl = anodyne.scaled_slice(Cb, x, args.bound)
    out = sl.marked.to_json()
    out["f_vector"] = list(sl.marked.base.f_vector())
    out["projection"] = {g: str(im) for g, im in sorted(sl.projection.images.items())}
    return out


def cmd_subdivide(args) -> dict:
    if args.scaled is not None:
        Xb = _load_scaled(args.input)
        extra = [t for t in args.scaled.split(",") if t]
        return sd_plus0(Xb.with_cells(sorted(Xb.cells | set(extra)))).to_json()
    X = _load(args.input, lambda obj: load_decorated(obj) if "thin" in obj or "marked" in obj
              else FiniteSimplicialSet.from_json(obj))
    return sd0(X if isinstance(X, FiniteSimplicialSet) else X.base).to_json()


def cmd_jt_check(args) -> dict:
    X = _load_sset(args.input)
    certs = {}
    for sigma in X.simplices(args.n):
        certs[str(sigma)] = beta_fiber_certificate(X, args.n, sigma, bound=args.bound).to_json()
    bad = [k for k, c in certs.items() if c["grade"] == "none"]
    out = {"n": args.n, "fibers": certs, "ok": not bad}
    if bad:
        raise CheckFailed({**out, "witness": {"simplex": bad[0]}})
    return out


def cmd_check_bicat(args) -> dict:
    Z = _load_scaled(args.input)
    v = anodyne.is_weak_bicategory(Z, args.bound)
    if not v:
        raise CheckFailed(v.to_json())
    return v.to_json()


def cmd_certify_filtration(args) -> dict:
    fam = anodyne.FAMILIES[args.family]
    if args.family == "swww":
        cert = fam(args.n, _need(args.i, "--i"))
    else:
        cert = fam(args.n)
    if not cert.ok:
        raise CheckFailed(cert.to_json())
    return cert.to_json()


def cmd_segal(args) -> dict:
    obj = _read_json(args.input)
    if isinstance(obj, dict) and "kind" in obj:
        try:
            P = segal.PreSegalSet.from_json(obj)
        except SimplicialError as exc:
            raise InputError(str(exc)) from exc
        v = segal.segal_condition(P, args.bound)
        out = {"presegal": obj, "segal_condition": v.to_json()}
        if not v:
            raise CheckFailed(out)
        return out
    try:
        X = FiniteSimplicialSet.from_json(obj)
    except SimplicialError as exc:
        raise InputError(str(exc)) from exc
    v = segal.is_category_object(X, args.bound)
    out: dict = {"category_object": v.to_json()}
    if not v:
        raise CheckFailed(out)
    out["round_trip"] = segal.nerve_round_trip(X, args.bound).to_json()
    inv = sorted(map(str, segal.invertible_edges(X)))
    det = sorted(map(str, segal.detect_invertibles_via_K(X)))
    out["invertible_edges"] = inv
    out["detected_via_K"] = det
    out["groupoid"] = segal.is_groupoid_object(X, args.bound).to_json()
    if inv != det or out["round_trip"]["status"] == "NO":
        raise CheckFailed(out)
    return out


def cmd_free_cat(args) -> dict:
    if args.input is not None:
        P = _load(args.input, segal.PreSegalSet.from_json)
    else:
        P = segal.free_simplex(_need(args.free, "--free or --input"), list(args.alphabet))
    L = args.bound
    if args.from_ is not None or args.to is not None:
        if args.from_ not in P.S or args.to not in P.S:
            raise SimplicialError("--from and --to must both be objects")
        pairs = [(args.from_, args.to)]
    else:
        pairs = [(x, y) for x in P.S for y in P.S]
    homs = {}
    for x, y in pairs:
        homs[f"{x}->{y}"] = segal.free_category(P, x, y, L).to_json()
    out: dict = {"bound": L, "homs": homs}
    if args.adjoint is not None:
        C = _load_category(args.adjoint)
        out["adjunction"] = segal.adjunction_check(P, C, L).to_json()
        if out["adjunction"]["status"] == "NO":
            raise CheckFailed(out)
    if not all(h["stabilized"] for h in homs.values()):
        raise CheckFailed({**out, "witness": {"unstabilized": [k for k, h in homs.items() if not h["stabilized"]]}})
    return out


def cmd_homology(args) -> dict:
    X = _load_sset(args.input)
    cert = homology(X, args.bound)
    out = cert.to_json()
    out["f_vector"] = list(X.f_vector())
    # a homology sphere: Z in degrees 0 and d only, no torsion
    spikes = [d for d, b in enumerate(cert.betti) if b]
    if not any(cert.torsion) and len(spikes) == 2 and spikes[0] == 0 and cert.betti[spikes[1]] == 1 \
            and cert.betti[0] == 1:
        out["sphere_dimension"] = spikes[1]
    return out


def cmd_verify(args) -> tuple[dict, str, bool]:
    names = sorted(SUITES) if args.suite == "all" else [args.suite]
    reports = [run_suite(n, seed=args.seed) for n in names]
    data = {"suites": [r.to_json(args.timings) for r in reports], "ok": all(r.ok for r in reports)}
    text = "\n".join(r.to_text(args.timings) for r in reports)
    return data, text, data["ok"]


# ---------------------------------------------------------------------------
# parser and output


def _to_text(obj: Any, indent: int = 0) -> str:
    pad = "  " * indent
    if isinstance(obj, dict):
        lines = []
        for k in sorted(obj):
            v = obj[k]
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}{k}:")
                lines.append(_to_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {json.dumps(v, sort_keys=True)}")
        return "\n".join(lines)
    if isinstance(obj, list):
        if all(not isinstance(v, (dict, list)) for v in obj):
            return pad + json.dumps(obj)
        return "\n".join(_to_text(v, indent) if isinstance(v, dict) else pad + json.dumps(v, sort_keys=True)
                         for v in obj)
    return pad + json.dumps(obj)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="seed for randomized checks")
    common.add_argument("--out", help="write the report here instead of stdout")
    common.add_argument("--format", choices=("json", "text"), default="json")

    p = argparse.ArgumentParser(prog="scx", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def add(name: str, fn, help: str, bound: int | None = 2):
        sp = sub.add_parser(name, parents=[common], help=help)
        if bound is not None:
            sp.add_argument("--bound", type=int, default=bound)
        sp.set_defaults(func=fn)
        return sp

    b = add("build", cmd_build, "construct a standard object as JSON", bound=3)
    b.add_argument("--kind", required=True,
                   choices=("simplex", "boundary", "horn", "collapsed-K", "poset-nerve", "nerve", "scaled-nerve"))
    b.add_argument("--n", type=int)
    b.add_argument("--i", type=int)
    b.add_argument("--input", help="category JSON for nerve kinds")
    b.add_argument("--decorate", choices=("flat", "sharp"))
    b.add_argument("--as", dest="as_", choices=("scaled", "marked"), default="scaled")

    h = add("hom", cmd_hom, "mapping complex of the coherent nerve")
    h.add_argument("--input", "--base", dest="input", required=True)
    h.add_argument("--scaled", action="store_true", help="mark edges witnessed by thin triangles")
    h.add_argument("--from", dest="from_", required=True)
    h.add_argument("--to", required=True)

    s = add("slice", cmd_slice, "scaled slice under a vertex, or its fiber")
    s.add_argument("--input", required=True)
    s.add_argument("--from", dest="from_", required=True)
    s.add_argument("--to")

    d = add("subdivide", cmd_subdivide, "nondegenerate subdivision sd0 or sd+0", bound=None)
    d.add_argument("--input", required=True)
    d.add_argument("--scaled", nargs="?", const="", metavar="T",
                   help="sd+0 of the scaled input, optionally adding comma-separated thin triangles")

    j = add("jt-check", cmd_jt_check, "certify every beta fiber in one degree")
    j.add_argument("--input", required=True)
    j.add_argument("--n", type=int, required=True)

    c = add("check-bicat", cmd_check_bicat, "extension property against the scaled generators", bound=3)
    c.add_argument("--input", required=True)

    f = add("certify-filtration", cmd_certify_filtration, "verify a prism filtration", bound=None)
    f.add_argument("--family", required=True, choices=sorted(anodyne.FAMILIES))
    f.add_argument("--n", type=int, required=True)
    f.add_argument("--i", type=int)

    g = add("segal", cmd_segal, "category-object checks, or the Segal condition for preSegal JSON", bound=3)
    g.add_argument("--input", required=True)

    fc = add("free-cat", cmd_free_cat, "homs of the free category on preSegal data", bound=2)
    fc.add_argument("--input")
    fc.add_argument("--free", type=int, help="use Fr^n(A) with this n")
    fc.add_argument("--alphabet", default="ab")
    fc.add_argument("--from", dest="from_")
    fc.add_argument("--to")
    fc.add_argument("--adjoint", help="category JSON for the adjunction check")

    hh = add("homology", cmd_homology, "integral homology certificate", bound=3)
    hh.add_argument("--input", required=True)

    v = add("verify", cmd_verify, "run a verification suite", bound=None)
    v.add_argument("suite", choices=sorted(SUITES) + ["all"])
    v.add_argument("--timings", action="store_true", help="include runtimes (not byte-stable)")
    return p


def _emit(args, data: Any, text: str | None) -> None:
    if args.format == "json":
        body = json.dumps(data, sort_keys=True, indent=2)
    else:
        body = text if text is not None else _to_text(data)
    if args.out:
        Path(args.out).write_text(body + "\n")
    else:
        sys.stdout.write(body + "\n")


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        result = args.func(args)
    except CheckFailed as exc:
        _emit(args, exc.payload, None)
        return EXIT_CHECK
    except InputError as exc:
        print(f"scx: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (SimplicialError, KeyError) as exc:
        print(f"scx: precondition violated: {exc}", file=sys.stderr)
        return EXIT_PRE
    if isinstance(result, tuple):
        data, text, ok = result
        _emit(args, data, text)
        return EXIT_OK if ok else EXIT_CHECK
    _emit(args, result, None)
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
