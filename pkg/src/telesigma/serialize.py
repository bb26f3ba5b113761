"""Canonical JSON for polynomials and series.

Rationals are written as decimal strings ``"p"`` or ``"p/q"`` so that no
precision is lost; terms are sorted by exponent vector; objects are dumped
with sorted keys so that parse-then-dump reproduces the same bytes.
"""
from __future__ import annotations

import json
from fractions import Fraction

from .polynomial import GradedPolynomial
from .series import BiSeries, TruncatedSeries


def fraction_str(c) -> str:
    c = Fraction(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def parse_fraction(text) -> Fraction:
    if isinstance(text, bool) or not isinstance(text, (str, int)):
        raise ValueError(f"expected a rational string like '3/4', got {text!r}")
    return Fraction(text)


def poly_to_json(p: GradedPolynomial) -> list:
    names = p.ring.names
    out = []
    for exp, c in sorted(p.terms().items()):
        mono = {names[i]: e for i, e in enumerate(exp) if e}
        out.append({"monomial": mono, "coeff": fraction_str(c)})
    return out


def poly_from_json(data: list, ring) -> GradedPolynomial:
    return ring.from_named_terms((t["monomial"], parse_fraction(t["coeff"])) for t in data)


def series_to_json(s: TruncatedSeries) -> dict:
    return {
        "valuation": s.valuation,
        "truncation": s.truncation,
        "coefficients": [poly_to_json(c) for c in s.coeffs],
    }


def series_from_json(data: dict, ring) -> TruncatedSeries:
    coeffs = [poly_from_json(c, ring) for c in data["coefficients"]]
    return TruncatedSeries(ring, data["valuation"], coeffs, data["truncation"])


def biseries_to_json(b: BiSeries) -> dict:
    return {
        "z1_truncation": b.z1_truncation,
        "rows": {str(i): series_to_json(b.row(i)) for i in b.row_indices()},
    }


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False)
