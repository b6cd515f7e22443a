"""JSON codecs for the document types the command line moves around.

Every document carries ``"schema": "novikov-forge/1"`` at top level and a
``"kind"`` naming its type.  Numbers that are not integers travel as exact
strings ("3/2"), never floats.  Parsing failures raise InputError with a
path into the offending document; emission is deterministic (sorted keys,
sorted term lists) so identical inputs give byte-identical outputs.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .chain_complex import BasedChainComplex, BlockPartition
from .cut_system import CutSystem, InternalCell, StrataCell
from .errors import InputError
from .group_ring import CohomologyClass, GroupRingElement
from .matrix_engine import RingMatrix
from .ring_tower import (
    FunctionField,
    GroupRing,
    MonodromyRep,
    NovikovElement,
    NovikovRing,
    PrimeField,
    RatFunc,
    RationalField,
    RationalFnR,
    RationalFunctionRing,
    Ring,
)

SCHEMA = "novikov-forge/1"


def _fmt(path) -> str:
    return "/" + "/".join(str(p) for p in path) if path else "document root"


def _fail(path, msg):
    raise InputError(f"at {_fmt(path)}: {msg}")


def _get(doc, key, path):
    if not isinstance(doc, dict):
        _fail(path, f"expected an object, got {type(doc).__name__}")
    if key not in doc:
        _fail(path, f"missing key {key!r}")
    return doc[key]


def _as_list(val, path):
    if not isinstance(val, list):
        _fail(path, f"expected an array, got {type(val).__name__}")
    return val


def _as_int(val, path) -> int:
    if isinstance(val, bool) or not isinstance(val, int):
        _fail(path, f"expected an integer, got {val!r}")
    return val


def _as_str(val, path) -> str:
    if not isinstance(val, str):
        _fail(path, f"expected a string, got {type(val).__name__}")
    return val


def _frac_str(x: Fraction) -> str:
    return str(Fraction(x))


def _parse_frac(val, path) -> Fraction:
    if isinstance(val, bool):
        _fail(path, f"expected an exact number, got {val!r}")
    if isinstance(val, int):
        return Fraction(val)
    if isinstance(val, str):
        try:
            return Fraction(val)
        except (ValueError, ZeroDivisionError):
            _fail(path, f"cannot read {val!r} as an exact rational")
    _fail(path, f"expected an exact rational (int or 'p/q'), got {val!r}")


# ---------------------------------------------------------------------------
# classes and rings
# ---------------------------------------------------------------------------


def class_to_json(xi: CohomologyClass) -> list:
    return [_frac_str(w) for w in xi.weights]


def class_from_json(val, path=()) -> CohomologyClass:
    weights = [_parse_frac(w, (*path, k)) for k, w in enumerate(_as_list(val, path))]
    if not weights:
        _fail(path, "a class needs at least one weight")
    return CohomologyClass.of(*weights)


def ring_to_json(ring: Ring) -> dict:
    if isinstance(ring, GroupRing):
        return {"kind": "group_ring", "rank": ring.rank}
    if isinstance(ring, RationalFunctionRing):
        return {"kind": "rational_fn_R"}
    if isinstance(ring, RationalField):
        return {"kind": "rational_field"}
    if isinstance(ring, PrimeField):
        return {"kind": "prime_field", "char": ring.p}
    if isinstance(ring, FunctionField):
        return {"kind": "function_field", "rank": ring.rank, "char": ring.char}
    if isinstance(ring, NovikovRing):
        return {
            "kind": "novikov",
            "class": class_to_json(ring.xi),
            "cutoff": _frac_str(ring.cutoff),
        }
    raise InputError(f"no JSON form for ring {ring}")


def ring_from_json(doc, path=()) -> Ring:
    kind = _as_str(_get(doc, "kind", path), (*path, "kind"))
    if kind == "group_ring":
        rank = _as_int(_get(doc, "rank", path), (*path, "rank"))
        if rank < 1:
            _fail((*path, "rank"), "rank must be at least 1")
        return GroupRing(rank)
    if kind == "rational_fn_R":
        return RationalFunctionRing()
    if kind == "rational_field":
        return RationalField()
    if kind == "prime_field":
        p = _as_int(_get(doc, "char", path), (*path, "char"))
        return PrimeField(p)
    if kind == "function_field":
        rank = _as_int(_get(doc, "rank", path), (*path, "rank"))
        char = _as_int(doc.get("char", 0), (*path, "char"))
        return FunctionField(rank, char)
    if kind == "novikov":
        xi = class_from_json(_get(doc, "class", path), (*path, "class"))
        cutoff = _parse_frac(_get(doc, "cutoff", path), (*path, "cutoff"))
        return NovikovRing(xi, cutoff)
    _fail((*path, "kind"), f"unknown ring kind {kind!r}")


# ---------------------------------------------------------------------------
# elements
# ---------------------------------------------------------------------------


def _terms_to_json(terms: dict) -> list:
    return [[list(e), c] for e, c in sorted(terms.items())]


def _terms_from_json(val, rank, path) -> dict:
    out = {}
    for k, item in enumerate(_as_list(val, path)):
        ipath = (*path, k)
        pair = _as_list(item, ipath)
        if len(pair) != 2:
            _fail(ipath, "term must be [exponents, coefficient]")
        exps = [_as_int(e, (*ipath, 0, j)) for j, e in enumerate(_as_list(pair[0], (*ipath, 0)))]
        if len(exps) != rank:
            _fail((*ipath, 0), f"exponent tuple must have length {rank}")
        coeff = _as_int(pair[1], (*ipath, 1))
        key = tuple(exps)
        if key in out:
            _fail(ipath, f"exponent {exps} repeated")
        if coeff:
            out[key] = coeff
    return out


def _poly_terms_to_json(terms: dict, char: int) -> list:
    if char:
        return [[list(e), int(c)] for e, c in sorted(terms.items())]
    return [[list(e), _frac_str(c)] for e, c in sorted(terms.items())]


def _poly_terms_from_json(val, rank, char, path) -> dict:
    out = {}
    for k, item in enumerate(_as_list(val, path)):
        ipath = (*path, k)
        pair = _as_list(item, ipath)
        if len(pair) != 2:
            _fail(ipath, "term must be [exponents, coefficient]")
        exps = [_as_int(e, (*ipath, 0, j)) for j, e in enumerate(_as_list(pair[0], (*ipath, 0)))]
        if len(exps) != rank:
            _fail((*ipath, 0), f"exponent tuple must have length {rank}")
        if any(e < 0 for e in exps):
            _fail((*ipath, 0), "polynomial exponents must be nonnegative")
        if char:
            coeff = _as_int(pair[1], (*ipath, 1)) % char
        else:
            coeff = _parse_frac(pair[1], (*ipath, 1))
        key = tuple(exps)
        if key in out:
            _fail(ipath, f"exponent {exps} repeated")
        if coeff:
            out[key] = coeff
    return out


def element_to_json(ring: Ring, x):
    if isinstance(ring, GroupRing):
        return _terms_to_json(x.terms)
    if isinstance(ring, RationalFunctionRing):
        return {"num": _terms_to_json(x.num.terms), "den": list(x.den)}
    if isinstance(ring, RationalField):
        return _frac_str(x)
    if isinstance(ring, PrimeField):
        return int(x) % ring.p
    if isinstance(ring, FunctionField):
        return {
            "num": _poly_terms_to_json(x.num, ring.char),
            "den": _poly_terms_to_json(x.den, ring.char),
        }
    if isinstance(ring, NovikovRing):
        return _terms_to_json(x.terms)
    raise InputError(f"no JSON form for elements of {ring}")


def element_from_json(ring: Ring, val, path=()):
    if isinstance(ring, GroupRing):
        return GroupRingElement(ring.rank, _terms_from_json(val, ring.rank, path))
    if isinstance(ring, RationalFunctionRing):
        num = _terms_from_json(_get(val, "num", path), 1, (*path, "num"))
        den = [
            _as_int(c, (*path, "den", j))
            for j, c in enumerate(_as_list(_get(val, "den", path), (*path, "den")))
        ]
        try:
            return RationalFnR(GroupRingElement(1, num), tuple(den))
        except Exception as e:
            _fail(path, str(e))
    if isinstance(ring, RationalField):
        return _parse_frac(val, path)
    if isinstance(ring, PrimeField):
        return _as_int(val, path) % ring.p
    if isinstance(ring, FunctionField):
        num = _poly_terms_from_json(_get(val, "num", path), ring.rank, ring.char, (*path, "num"))
        den = _poly_terms_from_json(_get(val, "den", path), ring.rank, ring.char, (*path, "den"))
        if not den:
            _fail((*path, "den"), "denominator must be nonzero")
        try:
            return ring.make(num, den)
        except Exception as e:
            _fail(path, str(e))
    if isinstance(ring, NovikovRing):
        return NovikovElement(ring.xi, ring.cutoff, _terms_from_json(val, ring.xi.rank, path))
    raise InputError(f"cannot parse elements of {ring}")


# ---------------------------------------------------------------------------
# matrices and complexes
# ---------------------------------------------------------------------------


def matrix_to_json(mat: RingMatrix) -> dict:
    return {
        "rows": mat.rows,
        "cols": mat.cols,
        "entries": [
            [element_to_json(mat.ring, v) for v in row] for row in mat.entries
        ],
    }


def matrix_from_json(ring: Ring, doc, path=()) -> RingMatrix:
    rows = _as_int(_get(doc, "rows", path), (*path, "rows"))
    cols = _as_int(_get(doc, "cols", path), (*path, "cols"))
    raw = _as_list(_get(doc, "entries", path), (*path, "entries"))
    if len(raw) != rows:
        _fail((*path, "entries"), f"expected {rows} rows, got {len(raw)}")
    entries = []
    for i, row in enumerate(raw):
        row = _as_list(row, (*path, "entries", i))
        if len(row) != cols:
            _fail((*path, "entries", i), f"expected {cols} entries, got {len(row)}")
        entries.append(
            tuple(
                element_from_json(ring, v, (*path, "entries", i, j))
                for j, v in enumerate(row)
            )
        )
    return RingMatrix(ring, (rows, cols), tuple(entries))


def complex_to_doc(cx: BasedChainComplex) -> dict:
    return {
        "schema": SCHEMA,
        "kind": "complex",
        "ring": ring_to_json(cx.ring),
        "basis": [list(deg) for deg in cx.basis],
        "differentials": [matrix_to_json(d) for d in cx.differentials],
    }


def complex_from_doc(doc, path=()) -> BasedChainComplex:
    _check_kind(doc, "complex", path)
    ring = ring_from_json(_get(doc, "ring", path), (*path, "ring"))
    basis_raw = _as_list(_get(doc, "basis", path), (*path, "basis"))
    basis = []
    for i, deg in enumerate(basis_raw):
        labels = [
            _as_str(l, (*path, "basis", i, j))
            for j, l in enumerate(_as_list(deg, (*path, "basis", i)))
        ]
        basis.append(tuple(labels))
    diffs_raw = _as_list(_get(doc, "differentials", path), (*path, "differentials"))
    if len(diffs_raw) != max(len(basis) - 1, 0):
        _fail(
            (*path, "differentials"),
            f"expected {max(len(basis) - 1, 0)} differentials for "
            f"{len(basis)} degrees, got {len(diffs_raw)}",
        )
    diffs = []
    for i, d in enumerate(diffs_raw):
        mat = matrix_from_json(ring, d, (*path, "differentials", i))
        if mat.shape != (len(basis[i]), len(basis[i + 1])):
            _fail(
                (*path, "differentials", i),
                f"shape {mat.shape} does not match basis sizes "
                f"({len(basis[i])}, {len(basis[i + 1])})",
            )
        diffs.append(mat)
    try:
        return BasedChainComplex(ring, tuple(basis), tuple(diffs))
    except Exception as e:
        _fail(path, str(e))


# ---------------------------------------------------------------------------
# cut systems
# ---------------------------------------------------------------------------


def _boundary_to_json(boundary) -> list:
    return [[lab, _terms_to_json(c.terms)] for lab, c in boundary]


def _boundary_from_json(val, rank, path):
    out = []
    for k, item in enumerate(_as_list(val, path)):
        ipath = (*path, k)
        pair = _as_list(item, ipath)
        if len(pair) != 2:
            _fail(ipath, "boundary term must be [label, element]")
        lab = _as_str(pair[0], (*ipath, 0))
        elt = GroupRingElement(rank, _terms_from_json(pair[1], rank, (*ipath, 1)))
        out.append((lab, elt))
    return tuple(out)


def cut_system_to_doc(cs: CutSystem) -> dict:
    rank = cs.cuts
    return {
        "schema": SCHEMA,
        "kind": "cut_system",
        "class": class_to_json(cs.xi),
        "internal_cells": [
            {
                "label": c.label,
                "dim": c.dim,
                "boundary": _boundary_to_json(c.boundary),
            }
            for c in cs.internal
        ],
        "strata_cells": [
            {
                "label": c.label,
                "dim": c.dim,
                "cuts": list(c.alpha),
                "boundary": _boundary_to_json(c.boundary),
            }
            for c in cs.strata
        ],
        "incidences": [
            {
                "cut": cut,
                "source": src,
                "target": dst,
                "value": _terms_to_json(value.terms),
            }
            for (cut, src, dst), value in sorted(cs.incidences.items())
        ],
    }


def cut_system_from_doc(doc, path=()) -> CutSystem:
    _check_kind(doc, "cut_system", path)
    xi = class_from_json(_get(doc, "class", path), (*path, "class"))
    rank = xi.rank
    internal = []
    for k, c in enumerate(_as_list(_get(doc, "internal_cells", path), (*path, "internal_cells"))):
        ipath = (*path, "internal_cells", k)
        internal.append(
            InternalCell(
                _as_str(_get(c, "label", ipath), (*ipath, "label")),
                _as_int(_get(c, "dim", ipath), (*ipath, "dim")),
                _boundary_from_json(c.get("boundary", []), rank, (*ipath, "boundary")),
            )
        )
    strata = []
    for k, c in enumerate(_as_list(_get(doc, "strata_cells", path), (*path, "strata_cells"))):
        ipath = (*path, "strata_cells", k)
        cuts = [
            _as_int(i, (*ipath, "cuts", j))
            for j, i in enumerate(_as_list(_get(c, "cuts", ipath), (*ipath, "cuts")))
        ]
        strata.append(
            StrataCell(
                _as_str(_get(c, "label", ipath), (*ipath, "label")),
                _as_int(_get(c, "dim", ipath), (*ipath, "dim")),
                tuple(cuts),
                _boundary_from_json(c.get("boundary", []), rank, (*ipath, "boundary")),
            )
        )
    incidences = []
    for k, inc in enumerate(_as_list(doc.get("incidences", []), (*path, "incidences"))):
        ipath = (*path, "incidences", k)
        incidences.append(
            (
                _as_int(_get(inc, "cut", ipath), (*ipath, "cut")),
                _as_str(_get(inc, "source", ipath), (*ipath, "source")),
                _as_str(_get(inc, "target", ipath), (*ipath, "target")),
                GroupRingElement(
                    rank,
                    _terms_from_json(_get(inc, "value", ipath), rank, (*ipath, "value")),
                ),
            )
        )
    try:
        return CutSystem(xi, internal, strata, incidences)
    except Exception as e:
        _fail(path, str(e))


# ---------------------------------------------------------------------------
# partitions, bundles, chain maps
# ---------------------------------------------------------------------------


def partition_to_doc(part: BlockPartition) -> dict:
    return {
        "schema": SCHEMA,
        "kind": "partition",
        "upper": [list(deg) for deg in part.upper],
        "lower": [list(deg) for deg in part.lower],
        "kept": [list(deg) for deg in part.kept],
    }


def partition_from_doc(doc, path=()) -> BlockPartition:
    _check_kind(doc, "partition", path)
    groups = {}
    for name in ("upper", "lower", "kept"):
        raw = _as_list(_get(doc, name, path), (*path, name))
        groups[name] = tuple(
            tuple(
                _as_str(l, (*path, name, i, j))
                for j, l in enumerate(_as_list(deg, (*path, name, i)))
            )
            for i, deg in enumerate(raw)
        )
    try:
        return BlockPartition(groups["upper"], groups["lower"], groups["kept"])
    except Exception as e:
        _fail(path, str(e))


def bundle_to_doc(rep: MonodromyRep) -> dict:
    return {
        "schema": SCHEMA,
        "kind": "bundle",
        "dimension": rep.dimension,
        "matrices": [
            [[_frac_str(v) for v in row] for row in M] for M in rep.matrices
        ],
    }


def bundle_from_doc(doc, path=()) -> MonodromyRep:
    _check_kind(doc, "bundle", path)
    dim = _as_int(_get(doc, "dimension", path), (*path, "dimension"))
    mats = []
    for k, M in enumerate(_as_list(_get(doc, "matrices", path), (*path, "matrices"))):
        mpath = (*path, "matrices", k)
        rows = []
        for i, row in enumerate(_as_list(M, mpath)):
            rows.append(
                tuple(
                    _parse_frac(v, (*mpath, i, j))
                    for j, v in enumerate(_as_list(row, (*mpath, i)))
                )
            )
        mats.append(tuple(rows))
    try:
        return MonodromyRep(dim, tuple(mats))
    except Exception as e:
        _fail(path, str(e))


def chain_map_from_doc(doc, path=()):
    """Basis, integer differentials, and the self-map, for the torus builder."""
    _check_kind(doc, "chain_map", path)
    basis_raw = _as_list(_get(doc, "basis", path), (*path, "basis"))
    basis = [
        tuple(
            _as_str(l, (*path, "basis", i, j))
            for j, l in enumerate(_as_list(deg, (*path, "basis", i)))
        )
        for i, deg in enumerate(basis_raw)
    ]

    def int_grid(val, gpath):
        return [
            [_as_int(v, (*gpath, i, j)) for j, v in enumerate(_as_list(row, (*gpath, i)))]
            for i, row in enumerate(_as_list(val, gpath))
        ]

    diffs = [
        int_grid(d, (*path, "differentials", k))
        for k, d in enumerate(
            _as_list(_get(doc, "differentials", path), (*path, "differentials"))
        )
    ]
    autos = [
        int_grid(h, (*path, "automorphism", k))
        for k, h in enumerate(
            _as_list(_get(doc, "automorphism", path), (*path, "automorphism"))
        )
    ]
    return basis, diffs, autos


# ---------------------------------------------------------------------------
# document plumbing
# ---------------------------------------------------------------------------


def _check_kind(doc, expected, path):
    kind = _as_str(_get(doc, "kind", path), (*path, "kind"))
    if kind != expected:
        _fail((*path, "kind"), f"expected a {expected!r} document, got {kind!r}")


def load_document(text: str) -> dict:
    """Parse and check the envelope: valid JSON, object, right schema."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(f"malformed JSON at line {e.lineno} column {e.colno}: {e.msg}")
    if not isinstance(doc, dict):
        raise InputError("top level must be a JSON object")
    schema = doc.get("schema")
    if schema != SCHEMA:
        raise InputError(f"schema must be {SCHEMA!r}, got {schema!r}")
    if "kind" not in doc:
        raise InputError("document lacks a 'kind'")
    return doc


def dump_document(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"
