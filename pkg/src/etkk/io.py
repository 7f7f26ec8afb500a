"""JSON documents: parsing and printing.

Integers are printed as decimal strings and rationals as "num/den"; the
parsers accept those forms as well as plain JSON numbers.
"""
from __future__ import annotations

import json
from dataclasses import fields, is_dataclass
from fractions import Fraction
from pathlib import Path

from .blocks import FINITE_DIM, INTERVAL, Block, validate_block
from .charts import DistributionWitness, PLPath, SpectralChart, chart_validate
from .errors import MalformedDocument
from .kkcalc import Diagram, diagram_validate
from .lifting import FinDimDecomposition
from .spectra import Spectrum, TestFunction, type1, type2


def parse_int(v) -> int:
    if isinstance(v, bool):
        raise MalformedDocument(f"expected an integer, got {v!r}")
    if isinstance(v, int):
        return v
    if isinstance(v, str):
        try:
            return int(v.strip())
        except ValueError:
            pass
    raise MalformedDocument(f"expected an integer, got {v!r}")


def parse_rational(v) -> Fraction:
    if isinstance(v, bool):
        raise MalformedDocument(f"expected a rational, got {v!r}")
    try:
        if isinstance(v, (int, Fraction)):
            return Fraction(v)
        if isinstance(v, float):
            return Fraction(repr(v))
        if isinstance(v, str):
            return Fraction(v.strip())
    except (ValueError, ZeroDivisionError):
        pass
    raise MalformedDocument(f"expected a rational, got {v!r}")


def _ints(values, what: str) -> tuple:
    if not isinstance(values, (list, tuple)):
        raise MalformedDocument(f"{what} must be a list")
    return tuple(parse_int(v) for v in values)


def _matrix(rows, what: str) -> tuple:
    if not isinstance(rows, (list, tuple)):
        raise MalformedDocument(f"{what} must be a list of rows")
    return tuple(_ints(r, what) for r in rows)


def _get(doc, key: str, what: str):
    if not isinstance(doc, dict):
        raise MalformedDocument(f"{what} document must be an object")
    if key not in doc:
        raise MalformedDocument(f"{what} document lacks '{key}'")
    return doc[key]


# ---- readers ---------------------------------------------------------------

def block_from_doc(doc) -> Block:
    if not isinstance(doc, dict):
        raise MalformedDocument("block document must be an object")
    kind = doc.get("kind", INTERVAL)
    raw = {"kind": kind, "k": _ints(_get(doc, "k", "block"), "k")}
    if kind == INTERVAL:
        raw["n"] = parse_int(_get(doc, "n", "block"))
        raw["alpha"] = _ints(_get(doc, "alpha", "block"), "alpha")
        raw["beta"] = _ints(_get(doc, "beta", "block"), "beta")
    return validate_block(raw)


def diagram_from_doc(doc, source: Block = None, target: Block = None) -> Diagram:
    A = block_from_doc(doc["source"]) if isinstance(doc, dict) and "source" in doc else source
    B = block_from_doc(doc["target"]) if isinstance(doc, dict) and "target" in doc else target
    if A is None or B is None:
        raise MalformedDocument("diagram document needs 'source' and 'target'")
    l0 = _matrix(_get(doc, "lambda0", "diagram"), "lambda0")
    l1 = parse_int(doc.get("lambda1", 0))
    return diagram_validate(A, B, l0, l1)


def spectrum_from_doc(doc, block: Block = None) -> Spectrum:
    A = block_from_doc(doc["block"]) if isinstance(doc, dict) and "block" in doc else block
    if A is None:
        raise MalformedDocument("spectrum document needs 'block'")
    base = _ints(_get(doc, "base", "spectrum"), "base")
    interior = doc.get("interior", [])
    if not isinstance(interior, (list, tuple)):
        raise MalformedDocument("interior must be a list")
    return Spectrum(A, base, tuple(sorted(parse_rational(y) for y in interior)))


def test_function_from_doc(doc, block: Block) -> TestFunction:
    kind = _get(doc, "kind", "test function")
    eta = parse_rational(_get(doc, "eta", "test function"))
    if kind == "type1":
        return type1(block, eta, parse_int(doc["j"]), parse_int(doc["r"]), parse_int(doc["s"]))
    if kind == "type2":
        X = []
        for part in _get(doc, "X", "test function"):
            if isinstance(part, (list, tuple)) and len(part) == 2:
                X.append((parse_rational(part[0]), parse_rational(part[1])))
            else:
                y = parse_rational(part)
                X.append((y, y))
        return type2(eta, X)
    raise MalformedDocument(f"unknown test function kind {kind!r}")


def path_from_doc(doc) -> PLPath:
    if not isinstance(doc, (list, tuple)):
        raise MalformedDocument("a path is a list of [x, y] pairs")
    pts = []
    for pair in doc:
        if not isinstance(pair, (list, tuple)) or len(pair) != 2:
            raise MalformedDocument("a path is a list of [x, y] pairs")
        pts.append((parse_rational(pair[0]), parse_rational(pair[1])))
    return PLPath(tuple(pts))


def chart_from_doc(doc, validate: bool = True) -> SpectralChart:
    A = block_from_doc(_get(doc, "source", "chart"))
    B = block_from_doc(_get(doc, "target", "chart"))
    fibers = tuple(spectrum_from_doc(s, A) for s in _get(doc, "base_fibers", "chart"))
    t = _ints(doc.get("t", [0] * A.p), "t")
    paths = tuple(path_from_doc(p) for p in doc.get("paths", []))
    c = SpectralChart(A, B, fibers, t, paths)
    return chart_validate(c) if validate else c


def witness_from_doc(doc) -> DistributionWitness:
    intervals = tuple(_ints(pair, "interval") for pair in _get(doc, "intervals", "witness"))
    return DistributionWitness(
        parse_rational(_get(doc, "eta", "witness")),
        parse_int(_get(doc, "K", "witness")),
        parse_int(_get(doc, "L", "witness")),
        intervals,
        doc.get("method", "search"),
    )


def decomposition_from_doc(doc) -> tuple:
    """(FinDimDecomposition, gamma) from a composed-existence document."""
    A = block_from_doc(_get(doc, "source", "decomposition"))
    B = block_from_doc(_get(doc, "target", "decomposition"))
    gvecs = tuple(_ints(g, "g-vector") for g in doc.get("g_vectors", []))
    psi_r = diagram_from_doc(_get(doc, "psi_r", "decomposition"), A, B)
    psi_f1 = diagram_from_doc(doc["psi_F1"], A, B) if doc.get("psi_F1") is not None else None
    gamma = diagram_from_doc(_get(doc, "gamma", "decomposition"), B, None)
    return FinDimDecomposition(A, B, gvecs, psi_r, psi_f1), gamma


def load_json(path) -> object:
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise MalformedDocument(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise MalformedDocument(f"{path} is not valid JSON: {exc.msg}") from exc


# ---- writers -----------------------------------------------------------------

def block_to_doc(A: Block) -> dict:
    if A.kind == FINITE_DIM:
        return {"kind": FINITE_DIM, "k": encode(A.k)}
    return {"kind": INTERVAL, "k": encode(A.k), "n": encode(A.n), "alpha": encode(A.alpha), "beta": encode(A.beta)}


def diagram_to_doc(d: Diagram) -> dict:
    return {
        "source": block_to_doc(d.source),
        "target": block_to_doc(d.target),
        "lambda0": encode(d.lambda0),
        "lambda1": encode(d.lambda1),
    }


def spectrum_to_doc(S: Spectrum, with_block: bool = True) -> dict:
    doc = {"base": encode(S.base), "interior": encode(S.interior)}
    if with_block:
        doc["block"] = block_to_doc(S.block)
    return doc


def chart_to_doc(c: SpectralChart) -> dict:
    return {
        "source": block_to_doc(c.source),
        "target": block_to_doc(c.target),
        "base_fibers": [spectrum_to_doc(S, with_block=False) for S in c.base_fibers],
        "t": encode(c.t),
        "paths": [encode(p.breakpoints) for p in c.paths],
    }


def encode(x):
    """Plain JSON value for any artifact object."""
    if x is None or isinstance(x, (bool, str)):
        return x
    if isinstance(x, int):
        return str(x)
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    if isinstance(x, Block):
        return block_to_doc(x)
    if isinstance(x, Diagram):
        return diagram_to_doc(x)
    if isinstance(x, Spectrum):
        return spectrum_to_doc(x)
    if isinstance(x, SpectralChart):
        return chart_to_doc(x)
    if isinstance(x, PLPath):
        return encode(x.breakpoints)
    if isinstance(x, dict):
        return {str(k): encode(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, set, frozenset)):
        items = sorted(x) if isinstance(x, (set, frozenset)) else x
        return [encode(v) for v in items]
    if is_dataclass(x):
        out = {f.name: encode(getattr(x, f.name)) for f in fields(x)}
        for extra in ("margin", "holds"):
            if hasattr(type(x), extra):
                out[extra] = encode(getattr(x, extra))
        return out
    if hasattr(x, "__str__"):
        return str(x)
    raise TypeError(f"cannot encode {type(x).__name__}")


def dumps(payload) -> str:
    return json.dumps(encode(payload), sort_keys=True, indent=2, ensure_ascii=False)
