"""JSON and CSV documents for series and polynomials.

Rationals are always written as "p/q" strings so no binary float ever
enters an exact output.
"""

from __future__ import annotations

import csv
import io
import json
from fractions import Fraction
from typing import Any

from .numberfield import QuadElem
from .qexp import QExp
from .series import HilbertSeries, NuIndex

SCHEMA_VERSION = 1


def rat_str(x: object) -> str:
    f = Fraction(x)
    return f"{f.numerator}/{f.denominator}"


def parse_rat(s: object) -> Fraction:
    if isinstance(s, bool) or not isinstance(s, (str, int)):
        raise ValueError(f"expected a rational string, got {s!r}")
    return Fraction(s)


def _weight_out(r: object) -> Any:
    f = Fraction(r)
    return f.numerator if f.denominator == 1 else rat_str(f)


def series_to_doc(f: HilbertSeries) -> dict:
    return {
        "schema": SCHEMA_VERSION,
        "kind": "hilbert",
        "weight": [_weight_out(r) for r in f.weight],
        "trace_bound": f.bound,
        "denom": f.denom,
        "terms": [
            {"a": k.a, "b": k.b, "coeff": [rat_str(v.x), rat_str(v.y)]}
            for k, v in f.items()
        ],
    }


def doc_to_series(doc: dict) -> HilbertSeries:
    if not isinstance(doc, dict) or doc.get("kind", "hilbert") != "hilbert":
        raise ValueError("not a Hilbert series document")
    if doc.get("schema") != SCHEMA_VERSION:
        raise ValueError(f"unsupported schema {doc.get('schema')!r}")
    weight = doc["weight"]
    if not isinstance(weight, list) or len(weight) != 2:
        raise ValueError("weight must be a pair")
    bound, denom = doc["trace_bound"], doc.get("denom", 1)
    if not isinstance(bound, int) or not isinstance(denom, int):
        raise ValueError("trace_bound and denom must be integers")
    coeffs: dict[NuIndex, QuadElem] = {}
    for t in doc["terms"]:
        a, b = t["a"], t["b"]
        if not isinstance(a, int) or not isinstance(b, int):
            raise ValueError("indices must be integers")
        if b > bound * denom:
            raise ValueError(f"term {(a, b)} exceeds the trace bound")
        x, y = t["coeff"]
        key = NuIndex(a, b)
        if key in coeffs:
            raise ValueError(f"duplicate term {(a, b)}")
        coeffs[key] = QuadElem(parse_rat(x), parse_rat(y))
    return HilbertSeries([parse_rat(r) for r in weight], bound, coeffs, denom=denom)


def qexp_to_doc(f: QExp) -> dict:
    return {
        "schema": SCHEMA_VERSION,
        "kind": "elliptic",
        "weight": f.weight,
        "bound": f.bound,
        "coeffs": [rat_str(c) for c in f.coeffs],
    }


def doc_to_qexp(doc: dict) -> QExp:
    if not isinstance(doc, dict) or doc.get("kind") != "elliptic":
        raise ValueError("not an elliptic document")
    if doc.get("schema") != SCHEMA_VERSION:
        raise ValueError(f"unsupported schema {doc.get('schema')!r}")
    coeffs = [parse_rat(c) for c in doc["coeffs"]]
    if len(coeffs) != doc["bound"] + 1:
        raise ValueError("coefficient count does not match the bound")
    return QExp(int(doc["weight"]), tuple(coeffs))


def parse_document(text: str) -> HilbertSeries | QExp:
    doc = json.loads(text)
    if isinstance(doc, dict) and doc.get("kind") == "elliptic":
        return doc_to_qexp(doc)
    return doc_to_series(doc)


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=2) + "\n"


def series_to_csv(f: HilbertSeries) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["a", "b", "x_num", "x_den", "y_num", "y_den"])
    for k, v in f.items():
        w.writerow([k.a, k.b, v.x.numerator, v.x.denominator, v.y.numerator, v.y.denominator])
    return buf.getvalue()


def csv_to_series(text: str, weight, bound: int, denom: int = 1) -> HilbertSeries:
    rows = list(csv.DictReader(io.StringIO(text)))
    coeffs = {
        NuIndex(int(r["a"]), int(r["b"])): QuadElem(
            Fraction(int(r["x_num"]), int(r["x_den"])), Fraction(int(r["y_num"]), int(r["y_den"]))
        )
        for r in rows
    }
    return HilbertSeries(weight, bound, coeffs, denom=denom)


def qexp_to_csv(f: QExp) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n", "num", "den"])
    for n, c in enumerate(f.coeffs):
        w.writerow([n, c.numerator, c.denominator])
    return buf.getvalue()


def poly_to_doc(basis: str, generators, weight: int, terms) -> dict:
    return {
        "schema": SCHEMA_VERSION,
        "kind": "polynomial",
        "basis": basis,
        "generators": list(generators),
        "weight": weight,
        "terms": [
            {"exponents": list(exps), "coeff": [rat_str(QuadElem.coerce(c).x), rat_str(QuadElem.coerce(c).y)]}
            for exps, c in terms
        ],
    }
