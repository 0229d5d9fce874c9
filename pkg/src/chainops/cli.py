"""Batch command-line front-end.

Parses input descriptions (simplicial sets, chain complexes, DGA
presentations, or built-in space names), runs the requested computation
or verifier sweep, and emits a deterministic machine-readable report.

Exit codes: 0 all checks pass, 1 a check failed, 2 parse error,
3 resource-cap violation.
"""

import argparse
import json
import random
import sys

from .bar_hopf import (AugmentedDGA, check_connected, h0_hopf,
                       indecomposables, one_generator_dga, reduced_bar,
                       square_generator_dga, trivial_dga)
from .complexes import ChainComplex, HOMOLOGICAL, COHOMOLOGICAL, homology, \
    verify_differential
from .cubical import dnc, dnc_inclusion, dnc_projection, nc
from .dold_kan import denormalize, normalize
from .freemod import FreeModule, FreeModuleMap
from .homology_classes import HomologySpace
from .operads import check_einfinity, check_operad_axioms, surjection_operad
from .powerops import (BigradedClass, CochainSystem, build_w, cup_i_oracle,
                       bockstein, equivariant_lift_j, power_op,
                       steenrod_square, verify_adem, verify_cartan)
from .randomgen import random_chain_complex
from .rings import QQ, RingSpec, ZZ, Zmod
from .simplicial import (FiniteSimplicialSet, Simplex, chains,
                         circle_space, classifying_space, cochains,
                         sphere_space, torus_space)


class ParseError(Exception):
    """Malformed input file; carries a location string."""


class CapError(Exception):
    """A requested computation exceeds a resource cap."""


# ---------------------------------------------------------------------------
# input parsing
# ---------------------------------------------------------------------------

def parse_ring(text: str) -> RingSpec:
    text = text.strip()
    if text == "Z":
        return ZZ
    if text == "Q":
        return QQ
    if text.startswith("Z/"):
        try:
            return Zmod(int(text[2:]))
        except ValueError as e:
            raise ParseError(f"bad ring {text!r}: {e}")
    raise ParseError(f"unknown ring {text!r} (want Z, Q, or Z/<m>)")


def _content_lines(path):
    try:
        with open(path) as fh:
            raw = fh.readlines()
    except OSError as e:
        raise ParseError(str(e))
    out = []
    for lineno, line in enumerate(raw, 1):
        line = line.split("#", 1)[0].strip()
        if line:
            out.append((lineno, line))
    return out


def parse_simplicial_file(path) -> FiniteSimplicialSet:
    """Lines `simplex <dim> <id> : faces <spec>...` where a face spec is
    either a plain id or `<word>.<id>` with word like s0s2."""
    simplices = {}
    dims = {}
    face_specs = []
    for lineno, line in _content_lines(path):
        parts = line.split()
        if parts[0] != "simplex" or ":" not in parts:
            raise ParseError(f"{path}:{lineno}: expected "
                             "'simplex <dim> <id> : faces ...'")
        try:
            dim = int(parts[1])
        except ValueError:
            raise ParseError(f"{path}:{lineno}: bad dimension {parts[1]!r}")
        sid = parts[2]
        if sid in dims:
            raise ParseError(f"{path}:{lineno}: duplicate simplex {sid!r}")
        colon = parts.index(":")
        tail = parts[colon + 1:]
        if tail and tail[0] == "faces":
            tail = tail[1:]
        if dim > 0 and len(tail) != dim + 1:
            raise ParseError(f"{path}:{lineno}: simplex {sid!r} needs "
                             f"{dim + 1} faces, got {len(tail)}")
        dims[sid] = dim
        simplices.setdefault(dim, []).append(sid)
        face_specs.append((lineno, dim, sid, tail))
    faces = {}
    for lineno, dim, sid, tail in face_specs:
        for i, spec in enumerate(tail):
            if "." in spec:
                word_text, base = spec.split(".", 1)
                word = []
                for piece in word_text.split("s"):
                    if piece:
                        word.append(int(piece))
                word = tuple(word)
            else:
                word, base = (), spec
            if base not in dims:
                raise ParseError(f"{path}:{lineno}: face {spec!r} of "
                                 f"{sid!r} references unknown id {base!r}")
            if dims[base] + len(word) != dim - 1:
                raise ParseError(f"{path}:{lineno}: face {spec!r} of "
                                 f"{sid!r} has the wrong dimension")
            faces[(dim, sid, i)] = Simplex(word, base, dims[base])
    X = FiniteSimplicialSet(path, simplices, faces,
                            max(simplices, default=0))
    bad = X.check_simplicial_identities()
    if bad:
        raise ParseError(f"{path}: simplicial identities fail at {bad[0]!r}")
    return X


def parse_complex_file(path) -> ChainComplex:
    """`ring <R>`, `direction <dir>`, `module <n> <labels>...`,
    `d <n> <target> <source> <coeff>` blocks."""
    ring = None
    direction = HOMOLOGICAL
    modules = {}
    entries = {}
    for lineno, line in _content_lines(path):
        parts = line.split()
        key = parts[0]
        if key == "ring":
            ring = parse_ring(parts[1])
        elif key == "direction":
            if parts[1] not in (HOMOLOGICAL, COHOMOLOGICAL):
                raise ParseError(f"{path}:{lineno}: bad direction")
            direction = parts[1]
        elif key == "module":
            n = int(parts[1])
            modules.setdefault(n, []).extend(parts[2:])
        elif key == "d":
            if len(parts) != 5:
                raise ParseError(f"{path}:{lineno}: expected "
                                 "'d <n> <target> <source> <coeff>'")
            n = int(parts[1])
            entries.setdefault(n, {})[(parts[2], parts[3])] = int(parts[4])
        else:
            raise ParseError(f"{path}:{lineno}: unknown keyword {key!r}")
    if ring is None:
        raise ParseError(f"{path}: missing 'ring' line")
    mods = {n: FreeModule(ring, labs) for n, labs in modules.items()}
    step = -1 if direction == HOMOLOGICAL else 1
    diffs = {}
    for n, ent in entries.items():
        src = mods.get(n, FreeModule(ring, ()))
        tgt = mods.get(n + step, FreeModule(ring, ()))
        try:
            diffs[n] = FreeModuleMap(src, tgt, ent)
        except KeyError as e:
            raise ParseError(f"{path}: differential at degree {n}: {e}")
    C = ChainComplex(ring, mods, diffs, direction=direction)
    bad = verify_differential(C)
    if bad:
        raise ParseError(f"{path}: d squared is nonzero at degree {bad[0]}")
    return C


def parse_dga_file(path) -> AugmentedDGA:
    """`dga`, `generator <label> <degree> <weight>`, `unit <label>`,
    `d <label> : <label> <coeff>...`, `mul <a> <b> : <label> <coeff>...`"""
    basis = {}
    unit = None
    diff = {}
    mult = {}

    def vector(parts, lineno):
        if len(parts) % 2:
            raise ParseError(f"{path}:{lineno}: expected label/coeff pairs")
        out = {}
        for lab, c in zip(parts[::2], parts[1::2]):
            if lab not in basis:
                raise ParseError(f"{path}:{lineno}: unknown label {lab!r}")
            out[lab] = QQ.normalize(int(c))
        return out

    for lineno, line in _content_lines(path):
        parts = line.split()
        key = parts[0]
        if key == "dga":
            continue
        if key == "generator":
            basis[parts[1]] = (int(parts[2]), int(parts[3]))
        elif key == "unit":
            unit = parts[1]
        elif key == "d":
            diff[parts[1]] = vector(parts[3:], lineno)
        elif key == "mul":
            mult[(parts[1], parts[2])] = vector(parts[4:], lineno)
        else:
            raise ParseError(f"{path}:{lineno}: unknown keyword {key!r}")
    if unit is None or unit not in basis:
        raise ParseError(f"{path}: missing or undeclared unit")
    A = AugmentedDGA(path, basis, unit, diff=diff, mult=mult)
    report = A.verify()
    if not report["passed"]:
        w = report["failures"][0]
        raise ParseError(f"{path}: {w['check']} fails on {w['witness']!r}")
    return A


def parse_inputs(path):
    """Dispatch on the first keyword of the file."""
    lines = _content_lines(path)
    if not lines:
        raise ParseError(f"{path}: empty input")
    head = lines[0][1].split()[0]
    if head == "simplex":
        return parse_simplicial_file(path)
    if head in ("ring", "direction", "module"):
        return parse_complex_file(path)
    if head in ("dga", "generator"):
        return parse_dga_file(path)
    raise ParseError(f"{path}: unrecognized leading keyword {head!r}")


def builtin_space(name: str, dim: int) -> FiniteSimplicialSet:
    if name == "circle":
        return circle_space()
    if name == "torus":
        return torus_space()
    if name.startswith("sphere"):
        return sphere_space(int(name[len("sphere"):]))
    if name in ("bz2", "bz3", "bz5"):
        return classifying_space(int(name[2:]), dim)
    raise ParseError(f"unknown space {name!r}")


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def _w(x):
    """Canonical JSON-safe rendering of a witness."""
    return repr(x)


def _space_from_args(args):
    if getattr(args, "input", None):
        X = parse_inputs(args.input)
        if not isinstance(X, FiniteSimplicialSet):
            raise ParseError(f"{args.input}: expected a simplicial set")
        return X
    return builtin_space(args.space, args.dim)


def cmd_homology(args):
    ring = parse_ring(args.ring)
    if getattr(args, "input", None):
        obj = parse_inputs(args.input)
        C = chains(obj, ring) if isinstance(obj, FiniteSimplicialSet) else obj
    else:
        C = chains(builtin_space(args.space, args.dim), ring)
    results = []
    for n in sorted(C.modules):
        results.append({"degree": n, "group": str(homology(C, n))})
    return {"results": results, "failures": []}


def cmd_dold_kan_roundtrip(args):
    rng = random.Random(args.seed)
    rings = [ZZ, Zmod(3)] if args.ring == "default" \
        else [parse_ring(args.ring)]
    failures = []
    checked = 0
    for ring in rings:
        for trial in range(args.count):
            L = random_chain_complex(ring, args.length, args.max_rank, rng)
            top = max(L.modules, default=0)
            checked += 1
            N = normalize(denormalize(L, top + 1))
            if N.modules != L.modules or N.differentials != L.differentials:
                failures.append({"check": "simplicial-roundtrip",
                                 "witness": _w((str(ring), trial))})
            K = dnc(L, top + 1)
            comp = dnc_projection(L, K).compose(dnc_inclusion(L, K))
            for n in comp.source.modules:
                if comp.component(n) != \
                        FreeModuleMap.identity(comp.source.module(n)):
                    failures.append({"check": "cubical-roundtrip",
                                     "witness": _w((str(ring), trial, n))})
            if verify_differential(nc(K)):
                failures.append({"check": "cubical-differential",
                                 "witness": _w((str(ring), trial))})
    return {"results": [{"checked": checked}], "failures": failures}


def cmd_operad_check(args):
    ring = parse_ring(args.ring)
    O = surjection_operad(args.arity_cap, ring, args.degree_cap)
    report = check_operad_axioms(O, args.arity_cap, args.degree_cap)
    return {"results": [{"checked": report.get("checked", 0)}],
            "failures": [{"check": f["check"], "witness": _w(f["witness"])}
                         for f in report["failures"]]}


def cmd_einfinity_check(args):
    ring = parse_ring(args.ring)
    O = surjection_operad(args.arity_cap, ring, args.degree_cap)
    report = check_einfinity(O, args.arity_cap, args.degree_cap)
    return {"results": [{"checked": report.get("checked", 0)}],
            "failures": [{"check": f["check"], "witness": _w(f["witness"])}
                         for f in report["failures"]]}


def cmd_steenrod(args):
    if args.p != 2:
        raise ParseError("the operation-table command runs at p = 2")
    ring = Zmod(2)
    X = _space_from_args(args)
    alg = CochainSystem(X, ring)
    maxdim = max(X.dims())
    W = build_w(2, 2 * maxdim + 4)
    lift = equivariant_lift_j(W, None, 2 * maxdim)
    spaces = {n: HomologySpace(alg.complex, n) for n in X.dims()}
    results = []
    failures = []
    for q in sorted(spaces):
        if q == 0 or q > args.degree_cap:
            continue
        for label, rep in spaces[q].all_classes():
            if not rep:
                continue
            x = BigradedClass(q, 0, rep)
            for i in range(0, q + 1):
                out = steenrod_square(x, i, alg, W, lift)
                if out.degree not in spaces:
                    continue
                got = spaces[out.degree].class_vector(out.rep)
                oracle = cup_i_oracle(X, ring, q - i, rep, q)
                want = spaces[out.degree].class_vector(oracle)
                results.append({"degree": q, "class": _w(label), "i": i,
                                "value": _w(got)})
                if got != want:
                    failures.append({"check": "cup-i-oracle",
                                     "witness": _w((q, label, i))})
    return {"results": results, "failures": failures}


def cmd_cartan_check(args):
    ring = Zmod(args.p)
    X = _space_from_args(args)
    alg = CochainSystem(X, ring)
    report = verify_cartan(alg, args.degree_cap, args.p, smax=args.smax)
    return {"results": [{"checked": report["checked"]}],
            "failures": [{"check": f["check"], "witness": _w(f["witness"])}
                         for f in report["failures"]]}


def cmd_adem_check(args):
    ring = Zmod(args.p)
    X = _space_from_args(args)
    alg = CochainSystem(X, ring)
    report = verify_adem(alg, args.p, args.amax, args.degree_cap)
    return {"results": [{"checked": report["checked"]}],
            "failures": [{"check": f["check"], "witness": _w(f["witness"])}
                         for f in report["failures"]]}


def cmd_w_resolution(args):
    W = build_w(args.p, args.cap)
    failures = []
    Q = W.quotient_complex()
    for n in range(args.cap):
        if HomologySpace(Q, n).rank != 1:
            failures.append({"check": "quotient-homology", "witness": _w(n)})
        beta = W.quotient_bockstein(n)
        if n % 2 == 0 and n > 0:
            if beta != {("e", n - 1): 1}:
                failures.append({"check": "bockstein", "witness": _w(n)})
        elif beta:
            failures.append({"check": "bockstein", "witness": _w(n)})
    return {"results": [{"p": args.p, "cap": args.cap}],
            "failures": failures}


def _dga_from_args(args):
    if getattr(args, "input", None):
        return parse_inputs(args.input)
    fixtures = {"trivial": trivial_dga,
                "one-generator": one_generator_dga,
                "square-generator": square_generator_dga}
    if args.fixture not in fixtures:
        raise ParseError(f"unknown fixture {args.fixture!r}")
    return fixtures[args.fixture]()


def cmd_bar(args):
    A = _dga_from_args(args)
    if not isinstance(A, AugmentedDGA):
        raise ParseError("bar command needs a DGA input")
    failures = []
    conn = check_connected(A)
    failures.extend({"check": f["check"], "witness": _w(f["witness"])}
                    for f in conn["failures"])
    B = reduced_bar(A, args.length_cap, -1, args.degree_cap)
    rep = B.verify()
    for w in rep["square_failures"]:
        failures.append({"check": "bar-d-squared", "witness": _w(w)})
    for w in rep["incomplete"]:
        failures.append({"check": "bar-window", "witness": _w(w)})
    rank = HomologySpace(B.complex, 0).rank
    return {"results": [{"h0_rank": rank}], "failures": failures}


def cmd_hopf_check(args):
    A = _dga_from_args(args)
    if not isinstance(A, AugmentedDGA):
        raise ParseError("hopf-check needs a DGA input")
    B = reduced_bar(A, args.length_cap, -1, args.degree_cap)
    H = h0_hopf(B)
    failures = [{"check": f["check"], "witness": _w(f["witness"])}
                for f in H.verify()["failures"]]
    L = indecomposables(H)
    failures.extend({"check": f["check"], "witness": _w(f["witness"])}
                    for f in L.verify_co_jacobi()["failures"])
    return {"results": [{"h0_rank": H.h0.rank,
                         "indecomposables": len(L.basis)}],
            "failures": failures}


# ---------------------------------------------------------------------------
# plumbing
# ---------------------------------------------------------------------------

def build_parser():
    parser = argparse.ArgumentParser(
        prog="chainops",
        description="exact-arithmetic chain-level computations and checks")
    parser.add_argument("--out", default=None,
                        help="write the report here instead of stdout")
    parser.add_argument("--format", choices=("json", "tsv"), default="json")
    sub = parser.add_subparsers(dest="command", required=True)

    def space_opts(p, dim=6):
        p.add_argument("--space", default="circle")
        p.add_argument("--input", default=None)
        p.add_argument("--dim", type=int, default=dim)

    p = sub.add_parser("homology")
    space_opts(p)
    p.add_argument("--ring", default="Z")
    p.set_defaults(fn=cmd_homology)

    p = sub.add_parser("dold-kan-roundtrip")
    p.add_argument("--count", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--length", type=int, default=5)
    p.add_argument("--max-rank", type=int, default=3)
    p.add_argument("--ring", default="default")
    p.set_defaults(fn=cmd_dold_kan_roundtrip)

    for name, fn in (("operad-check", cmd_operad_check),
                     ("einfinity-check", cmd_einfinity_check)):
        p = sub.add_parser(name)
        p.add_argument("--arity-cap", type=int, default=3)
        p.add_argument("--degree-cap", type=int, default=4)
        p.add_argument("--ring", default="Z/2")
        p.set_defaults(fn=fn)

    p = sub.add_parser("steenrod")
    space_opts(p)
    p.add_argument("--p", type=int, default=2)
    p.add_argument("--degree-cap", type=int, default=6)
    p.set_defaults(fn=cmd_steenrod)

    p = sub.add_parser("cartan-check")
    space_opts(p, dim=4)
    p.add_argument("--p", type=int, default=3)
    p.add_argument("--smax", type=int, default=2)
    p.add_argument("--degree-cap", type=int, default=2)
    p.set_defaults(fn=cmd_cartan_check)

    p = sub.add_parser("adem-check")
    space_opts(p, dim=8)
    p.add_argument("--p", type=int, default=3)
    p.add_argument("--amax", type=int, default=3)
    p.add_argument("--degree-cap", type=int, default=4)
    p.set_defaults(fn=cmd_adem_check)

    p = sub.add_parser("w-resolution")
    p.add_argument("--p", type=int, default=2)
    p.add_argument("--cap", type=int, default=20)
    p.set_defaults(fn=cmd_w_resolution)

    for name, fn in (("bar", cmd_bar), ("hopf-check", cmd_hopf_check)):
        p = sub.add_parser(name)
        p.add_argument("--fixture", default="one-generator")
        p.add_argument("--input", default=None)
        p.add_argument("--length-cap", type=int, default=4)
        p.add_argument("--degree-cap", type=int, default=4)
        p.set_defaults(fn=fn)

    return parser


def render(report, fmt):
    if fmt == "json":
        return json.dumps(report, sort_keys=True, indent=2) + "\n"
    lines = []
    for item in report["results"]:
        for k in sorted(item):
            lines.append(f"result\t{k}\t{item[k]}")
    for item in report["failures"]:
        lines.append(f"failure\t{item['check']}\t{item['witness']}")
    lines.append(f"passed\t{str(report['passed']).lower()}")
    return "\n".join(lines) + "\n"


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    params = {k: v for k, v in sorted(vars(args).items())
              if k not in ("fn", "out", "format") and v is not None}
    try:
        body = args.fn(args)
    except ParseError as e:
        print(f"chainops: {e}", file=sys.stderr)
        return 2
    except CapError as e:
        print(f"chainops: {e}", file=sys.stderr)
        return 3
    except ValueError as e:
        if "cap" in str(e):
            print(f"chainops: {e}", file=sys.stderr)
            return 3
        raise
    report = {"schema": 1, "command": args.command, "parameters": params,
              "passed": not body["failures"],
              "results": body["results"], "failures": body["failures"]}
    text = render(report, args.format)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0 if report["passed"] else 1


if __name__ == "__main__":
    sys.exit(main())
