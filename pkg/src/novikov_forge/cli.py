"""Command line front end: JSON documents in, JSON reports out.

Exit codes: 0 when the requested check passes or the construction
succeeds, 1 when a verdict comes back negative (a failed validation, a
violated inequality, a non-unit), 2 for input problems (malformed JSON,
missing files, bad flags).  Reports are deterministic: same input, same
bytes.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from pathlib import Path

from . import intpoly, jsonio
from .chain_complex import betti_numbers, collapse
from .cut_system import cascade_collapse
from .dirichlet import (
    MinimalPolynomialCandidate,
    is_algebraic_integer,
    is_dirichlet_unit,
)
from .errors import InputError, NovikovForgeError
from .group_ring import CohomologyClass
from .invariants import (
    NovikovNumbers,
    bundle_homology_dims,
    check_novikov_inequalities,
    generic_betti_and_jumps,
    is_xi_generic,
    mapping_torus,
    novikov_numbers,
)
from .ring_tower import (
    FieldBundleDescriptor,
    GroupRing,
    NovikovDescriptor,
    RationalFieldDescriptor,
    RationalFnRDescriptor,
    RationalFunctionRing,
    RBundleDescriptor,
    ScalarBundleDescriptor,
    ScalarDescriptor,
)


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text()
    except OSError as e:
        raise InputError(f"cannot read {path}: {e}")


def _write_text(path: str, text: str):
    if path == "-":
        sys.stdout.write(text)
        return
    try:
        Path(path).write_text(text)
    except OSError as e:
        raise InputError(f"cannot write {path}: {e}")


def _load(path: str, parser, kind: str):
    doc = jsonio.load_document(_read_text(path))
    if doc.get("kind") != kind:
        raise InputError(
            f"{path}: expected a {kind!r} document, got {doc.get('kind')!r}"
        )
    return parser(doc)


def _parse_fraction_flag(text: str, flag: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise InputError(f"{flag} wants an exact rational like 3/2, got {text!r}")


def _parse_class_flag(text: str) -> CohomologyClass:
    parts = [p.strip() for p in text.split(",")]
    return CohomologyClass.of(
        *[_parse_fraction_flag(p, "--class") for p in parts]
    )


def _parse_int_list(text: str, flag: str) -> list:
    out = []
    for p in text.split(","):
        p = p.strip()
        try:
            out.append(int(p))
        except ValueError:
            raise InputError(f"{flag} wants comma-separated integers, got {p!r}")
    return out


def _class_for_complex(cx, args) -> CohomologyClass:
    if getattr(args, "xi", None):
        xi = _parse_class_flag(args.xi)
        if xi.rank != cx.ring.rank:
            raise InputError(
                f"--class has rank {xi.rank}, complex has rank {cx.ring.rank}"
            )
        return xi
    if cx.ring.rank == 1:
        return CohomologyClass.of(1)
    raise InputError("--class is required for complexes of rank above one")


def _maybe_bundle(args):
    if getattr(args, "bundle", None):
        return _load(args.bundle, jsonio.bundle_from_doc, "bundle")
    return None


def _descriptor_from_flags(args, xi: CohomologyClass):
    bundle = _maybe_bundle(args)
    ring = args.ring
    if ring == "novikov":
        if args.cutoff is None:
            raise InputError("--ring novikov requires --cutoff")
        if bundle is not None:
            raise InputError("truncated series do not support bundles")
        return NovikovDescriptor(xi, _parse_fraction_flag(args.cutoff, "--cutoff"))
    if ring == "R":
        if bundle is not None:
            return RBundleDescriptor(bundle, xi)
        return RationalFnRDescriptor(xi)
    if ring == "scalar":
        if args.a is None:
            raise InputError("--ring scalar requires --a")
        a = _parse_fraction_flag(args.a, "--a")
        if bundle is not None:
            return ScalarBundleDescriptor(a, bundle, xi)
        return ScalarDescriptor(a, xi)
    if ring == "ratfield":
        if bundle is not None:
            return FieldBundleDescriptor(bundle, args.char)
        return RationalFieldDescriptor.standard(xi.rank, args.char)
    raise InputError(f"unknown ring {ring!r}")


# ---------------------------------------------------------------------------
# subcommand handlers: return (report dict, exit code)
# ---------------------------------------------------------------------------


def _cmd_validate(args):
    cx = _load(args.input, jsonio.complex_from_doc, "complex")
    report = cx.validate()
    doc = {
        "schema": jsonio.SCHEMA,
        "kind": "validation_report",
        "ok": report.ok,
        "failures": list(report.failures),
    }
    return doc, 0 if report.ok else 1


def _cmd_collapse(args):
    cx = _load(args.input, jsonio.complex_from_doc, "complex")
    part = _load(args.partition, jsonio.partition_from_doc, "partition")
    result = collapse(cx, part)
    doc = {
        "schema": jsonio.SCHEMA,
        "kind": "collapse_result",
        "simple": result.simple,
        "complex": jsonio.complex_to_doc(result.complex),
        "to_collapsed": [jsonio.matrix_to_json(m) for m in result.to_collapsed],
        "from_collapsed": [jsonio.matrix_to_json(m) for m in result.from_collapsed],
        "homotopy": [jsonio.matrix_to_json(m) for m in result.homotopy],
    }
    return doc, 0


def _cmd_build_cut_system(args):
    cs = _load(args.input, jsonio.cut_system_from_doc, "cut_system")
    report = cs.validate()
    if not report.ok:
        doc = {
            "schema": jsonio.SCHEMA,
            "kind": "validation_report",
            "ok": False,
            "failures": list(report.failures),
        }
        return doc, 1
    cx = cs.build_complex()
    return jsonio.complex_to_doc(cx), 0


def _cmd_cascade(args):
    cs = _load(args.input, jsonio.cut_system_from_doc, "cut_system")
    descriptor = _descriptor_from_flags(args, cs.xi)
    result = cascade_collapse(cs, descriptor)
    final = result.final
    counts = [final.dim(i) for i in range(final.top_degree + 1)]
    doc = {
        "schema": jsonio.SCHEMA,
        "kind": "cascade_report",
        "counts": counts,
        "steps": len(result.simple_flags),
        "simple_flags": list(result.simple_flags[:-1]),
        "final": jsonio.complex_to_doc(final),
    }
    return doc, 0


def _numbers_for(cx, args) -> NovikovNumbers:
    if isinstance(cx.ring, GroupRing) and cx.ring.rank > 1:
        xi = _class_for_complex(cx, args)
        if not xi.is_integral:
            raise InputError(
                "torsion numbers need an integral class; non-integral "
                "classes are out of range here"
            )
        cx = cx.base_change(RationalFnRDescriptor(xi))
    return novikov_numbers(cx)


def _cmd_novikov_numbers(args):
    cx = _load(args.input, jsonio.complex_from_doc, "complex")
    if not isinstance(cx.ring, (GroupRing, RationalFunctionRing)):
        raise InputError(
            "novikov-numbers wants a complex over a group ring or over R"
        )
    nums = _numbers_for(cx, args)
    doc = {
        "schema": jsonio.SCHEMA,
        "kind": "invariants_report",
        "b": list(nums.b),
        "q": list(nums.q),
    }
    return doc, 0


def _cmd_inequalities(args):
    doc_in = jsonio.load_document(_read_text(args.input))
    if doc_in.get("kind") != "invariants_report":
        raise InputError(
            f"expected an 'invariants_report' document, got {doc_in.get('kind')!r}"
        )
    b = doc_in.get("b")
    q = doc_in.get("q")
    if not isinstance(b, list) or not isinstance(q, list):
        raise InputError("report must carry integer arrays 'b' and 'q'")
    counts = _parse_int_list(args.counts, "--counts")
    nums = NovikovNumbers(tuple(b), tuple(q), ())
    report = check_novikov_inequalities(counts, nums, args.dim_e)
    rows = [
        {
            "degree": row.degree,
            "count": str(row.count),
            "required": str(row.required),
            "slack": str(row.slack),
            "verdict": "pass" if row.ok else "fail",
        }
        for row in report.rows
    ]
    doc = {
        "schema": jsonio.SCHEMA,
        "kind": "inequality_report",
        "ok": report.ok,
        "rows": rows,
        "euler_counts": str(report.euler_counts),
        "euler_homology": str(report.euler_homology),
        "euler_consistent": report.euler_matches,
    }
    return doc, 0 if report.ok else 1


def _cmd_bundle_homology(args):
    cx = _load(args.input, jsonio.complex_from_doc, "complex")
    if not isinstance(cx.ring, GroupRing):
        raise InputError("bundle-homology wants a complex over a group ring")
    xi = _class_for_complex(cx, args)
    a = _parse_fraction_flag(args.a, "--a")
    bundle = _maybe_bundle(args)
    if bundle is None:
        dims = betti_numbers(cx.base_change(ScalarDescriptor(a, xi)))
    else:
        dims = bundle_homology_dims(cx, a, bundle, xi)
    doc = {
        "schema": jsonio.SCHEMA,
        "kind": "homology_dims",
        "a": str(a),
        "dims": list(dims),
    }
    return doc, 0


def _cmd_jump_points(args):
    cx = _load(args.input, jsonio.complex_from_doc, "complex")
    if not isinstance(cx.ring, GroupRing):
        raise InputError("jump-points wants a complex over a group ring")
    xi = _class_for_complex(cx, args)
    bundle = _maybe_bundle(args)
    profile = generic_betti_and_jumps(cx, xi, bundle)
    doc = {
        "schema": jsonio.SCHEMA,
        "kind": "jump_report",
        "betti": list(profile.betti),
        "polynomials": [list(reversed(p)) for p in profile.jump_polynomials],
        "pretty": [intpoly.poly_str(p) for p in profile.jump_polynomials],
        "points": [[str(a) for a in pts] for pts in profile.jump_points],
    }
    return doc, 0


def _cmd_mapping_torus(args):
    basis, diffs, autos = _load(args.input, jsonio.chain_map_from_doc, "chain_map")
    torus = mapping_torus(basis, diffs, autos)
    return jsonio.complex_to_doc(torus), 0


def _cmd_dirichlet_check(args):
    if (args.poly is None) == (args.value is None):
        raise InputError("pass exactly one of --poly or --value")
    if args.poly is not None:
        coeffs = _parse_int_list(args.poly, "--poly")
        x = MinimalPolynomialCandidate.from_descending(coeffs, args.irreducible)
    else:
        x = _parse_fraction_flag(args.value, "--value")
        if x == 0:
            raise InputError("--value must be nonzero")
    unit = is_dirichlet_unit(x)
    doc = {
        "schema": jsonio.SCHEMA,
        "kind": "dirichlet_report",
        "algebraic_integer": is_algebraic_integer(x),
        "dirichlet_unit": unit,
    }
    return doc, 0 if unit else 1


def _cmd_xi_generic(args):
    cx = _load(args.input, jsonio.complex_from_doc, "complex")
    if not isinstance(cx.ring, GroupRing):
        raise InputError("xi-generic wants a complex over a group ring")
    bundle = _maybe_bundle(args)
    verdict = is_xi_generic(cx, bundle, args.char)
    doc = {
        "schema": jsonio.SCHEMA,
        "kind": "genericity_report",
        "xi_generic": verdict,
    }
    return doc, 0 if verdict else 1


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="novikov-forge",
        description="Exact chain complex localization and its invariants.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, handler, help_text, with_input=True):
        p = sub.add_parser(name, help=help_text)
        if with_input:
            p.add_argument("input", help="input document path, or - for stdin")
        p.add_argument(
            "--output", default="-", help="report path, or - for stdout (default)"
        )
        p.set_defaults(handler=handler)
        return p

    add("validate", _cmd_validate, "check that a complex squares to zero")

    p = add("collapse", _cmd_collapse, "collapse paired generators with witnesses")
    p.add_argument("--partition", required=True, help="partition document path")

    add(
        "build-cut-system",
        _cmd_build_cut_system,
        "validate cut data and emit its chain complex",
    )

    p = add("cascade", _cmd_cascade, "build, localize, and collapse a cut system")
    p.add_argument(
        "--ring",
        required=True,
        choices=["novikov", "R", "scalar", "ratfield"],
        help="localization target",
    )
    p.add_argument("--cutoff", help="weight cutoff for --ring novikov, e.g. -10")
    p.add_argument("--a", help="evaluation point for --ring scalar, e.g. 1/3")
    p.add_argument("--char", type=int, default=0, help="field characteristic")
    p.add_argument("--bundle", help="bundle document to twist by")

    p = add(
        "novikov-numbers",
        _cmd_novikov_numbers,
        "free ranks and torsion counts per degree",
    )
    p.add_argument("--class", dest="xi", help="weights, e.g. 1 or 1,2")

    p = add(
        "inequalities",
        _cmd_inequalities,
        "check counts against an invariants report",
    )
    p.add_argument("--counts", required=True, help="counts by degree, e.g. 1,1")
    p.add_argument("--dim-e", type=int, default=1, help="bundle dimension divisor")

    p = add("bundle-homology", _cmd_bundle_homology, "dims after evaluating at a")
    p.add_argument("--a", required=True, help="nonzero rational evaluation point")
    p.add_argument("--bundle", help="bundle document to twist by")
    p.add_argument("--class", dest="xi", help="weights, e.g. 1 or 1,2")

    p = add("jump-points", _cmd_jump_points, "generic betti numbers and jump loci")
    p.add_argument("--bundle", help="bundle document to twist by")
    p.add_argument("--class", dest="xi", help="weights, e.g. 1 or 1,2")

    add(
        "mapping-torus",
        _cmd_mapping_torus,
        "complex of the torus of a chain automorphism",
    )

    p = add(
        "dirichlet-check",
        _cmd_dirichlet_check,
        "integrality and unit verdicts for a number or polynomial",
        with_input=False,
    )
    p.add_argument("--poly", help="integer coefficients, highest degree first")
    p.add_argument("--value", help="nonzero rational")
    p.add_argument(
        "--irreducible",
        action="store_true",
        help="vouch for irreducibility above degree four",
    )

    p = add("xi-generic", _cmd_xi_generic, "compare twisted and evaluated dims")
    p.add_argument("--bundle", help="bundle document to twist by")
    p.add_argument("--char", type=int, default=0, help="field characteristic")

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        doc, code = args.handler(args)
        _write_text(args.output, jsonio.dump_document(doc))
    except InputError as e:
        print(f"input error: {e}", file=sys.stderr)
        return 2
    except NovikovForgeError as e:
        print(f"{type(e).__name__}: {e}", file=sys.stderr)
        return 1
    return code


if __name__ == "__main__":
    sys.exit(main())
