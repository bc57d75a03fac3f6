"""JSON encodings for values, domains, tables, retractions and extension runs.

Everything emitted here is canonical: equal values give byte-identical text.

* rationals: ``"p/q"`` in lowest terms with ``q > 0``, or ``"p"``
* lex vectors: arrays of rationals, most significant coordinate first
* Hahn series: ``[[exponent, "p/q"], ...]`` by strictly descending exponent;
  exponents are labels for a Hahn group and encoded group elements for a field
* ordered sets: arrays of string labels in ascending order
"""
from __future__ import annotations

import json
import re
from fractions import Fraction
from numbers import Rational

from .errors import GultraError
from .group import LexVector, ValueDomain, domain_of
from .hahn import HahnSeries
from .order import FiniteOrderedSet
from .retract import Retraction
from .space import METRIC, ULTRAMETRIC, MetricTable, PointSpace


class ParseError(GultraError):
    """Malformed input: bad JSON, a bad rational, or a value outside its domain."""


_RATIONAL = re.compile(r"^\s*(-?\d+)(?:\s*/\s*(\d+))?\s*$")


def encode_rational(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def decode_rational(s) -> Fraction:
    if isinstance(s, bool):
        raise ParseError(f"not a rational: {s!r}")
    if isinstance(s, int):
        return Fraction(s)
    if not isinstance(s, str):
        raise ParseError(f"rationals are strings, got {s!r}")
    m = _RATIONAL.match(s)
    if not m:
        raise ParseError(f"malformed rational {s!r}")
    num, den = int(m.group(1)), int(m.group(2) or 1)
    if den == 0:
        raise ParseError(f"zero denominator in {s!r}")
    return Fraction(num, den)


# -- ordered sets and domains ---------------------------------------------------


def encode_ordered_set(L: FiniteOrderedSet) -> list:
    bad = [e for e in L.elements if not isinstance(e, str)]
    if bad:
        raise GultraError(f"only string labels serialize, got {bad[0]!r}")
    return list(L.elements)


def decode_ordered_set(obj) -> FiniteOrderedSet:
    if not isinstance(obj, list) or not all(isinstance(e, str) for e in obj):
        raise ParseError("an ordered set is an array of strings")
    try:
        return FiniteOrderedSet(tuple(obj))
    except GultraError as exc:
        raise ParseError(str(exc)) from None


def encode_domain(dom: ValueDomain) -> dict:
    if dom.kind == "rational":
        return {"kind": "rational"}
    if dom.kind == "lex":
        return {"kind": "lex", "rank": dom.rank, "base": dom.base}
    if isinstance(dom.index, ValueDomain):
        return {"kind": "hahn", "index": encode_domain(dom.index)}
    return {"kind": "hahn", "index": encode_ordered_set(dom.index)}


def decode_domain(obj) -> ValueDomain:
    if obj is None:
        return ValueDomain.rational()
    if not isinstance(obj, dict) or "kind" not in obj:
        raise ParseError(f"bad domain {obj!r}")
    kind = obj["kind"]
    try:
        if kind == "rational":
            return ValueDomain.rational()
        if kind == "lex":
            return ValueDomain.lex(int(obj["rank"]), obj.get("base", "integer"))
        if kind == "hahn":
            index = obj["index"]
            inner = decode_domain(index) if isinstance(index, dict) else decode_ordered_set(index)
            return ValueDomain.hahn(inner)
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"bad domain {obj!r}: {exc}") from None
    except ParseError:
        raise
    except GultraError as exc:
        raise ParseError(str(exc)) from None
    raise ParseError(f"unknown domain kind {kind!r}")


# -- values ---------------------------------------------------------------------


def encode_value(x):
    if isinstance(x, HahnSeries):
        if isinstance(x.index, ValueDomain):
            return [[encode_value(e), encode_rational(c)] for e, c in x.terms]
        return [[e, encode_rational(c)] for e, c in x.terms]
    if isinstance(x, LexVector):
        return [encode_rational(c) for c in x.coords]
    if isinstance(x, Rational):
        return encode_rational(x)
    raise GultraError(f"no encoding for {x!r}")


def decode_value(obj, dom: ValueDomain):
    if dom.kind == "rational":
        return decode_rational(obj)
    if not isinstance(obj, list):
        raise ParseError(f"expected an array for a {dom.describe()} value, got {obj!r}")
    if dom.kind == "lex":
        if len(obj) != dom.rank:
            raise ParseError(f"lex value {obj!r} does not have rank {dom.rank}")
        x = LexVector(decode_rational(c) for c in obj)
        if not dom.contains(x):
            raise ParseError(f"{obj!r} is not in {dom.describe()}")
        return x
    terms = []
    for pair in obj:
        if not isinstance(pair, list) or len(pair) != 2:
            raise ParseError(f"series terms are [exponent, coefficient] pairs, got {pair!r}")
        e, c = pair
        if isinstance(dom.index, ValueDomain):
            e = decode_value(e, dom.index)
        elif e not in dom.index:
            raise ParseError(f"exponent {e!r} is not in the index set")
        terms.append((e, decode_rational(c)))
    exps = [e for e, _ in terms]
    if len(set(exps)) != len(exps):
        raise ParseError("repeated exponent in series")
    return HahnSeries(dom.index, terms)


# -- tables ---------------------------------------------------------------------


def encode_table(t: MetricTable) -> list:
    return [[encode_value(v) for v in row] for row in t.values]


def encode_space_file(t: MetricTable, domain: ValueDomain | None = None) -> dict:
    dom = domain or _domain_of_table(t)
    return {
        "points": list(t.space.points),
        "subset": list(t.space.subset),
        "domain": encode_domain(dom),
        "flavor": t.flavor,
        "table": encode_table(t),
    }


def _domain_of_table(t: MetricTable) -> ValueDomain:
    if isinstance(t.domain, ValueDomain):
        return t.domain
    return domain_of(t.zero)


def decode_table(rows, space: PointSpace, dom: ValueDomain, flavor: str, check: bool = False) -> MetricTable:
    n = len(space)
    if not isinstance(rows, list) or len(rows) != n or any(not isinstance(r, list) or len(r) != n for r in rows):
        raise ParseError(f"table must be a fully populated {n} x {n} array")
    values = [[decode_value(v, dom) for v in row] for row in rows]
    return MetricTable(space, values, dom.zero(), flavor, dom, check=check)


def decode_space(obj) -> PointSpace:
    points = obj.get("points")
    if not isinstance(points, list) or not all(isinstance(p, str) for p in points):
        raise ParseError("points must be an array of strings")
    try:
        return PointSpace(tuple(points), tuple(obj.get("subset", ())))
    except GultraError as exc:
        raise ParseError(str(exc)) from None


def decode_space_file(obj, check: bool = False) -> MetricTable:
    """A space file as a table; ``check=False`` leaves axiom checking to the caller."""
    if not isinstance(obj, dict):
        raise ParseError("a space file is a JSON object")
    flavor = obj.get("flavor", METRIC)
    if flavor not in (METRIC, ULTRAMETRIC):
        raise ParseError(f"unknown flavor {flavor!r}")
    dom = decode_domain(obj.get("domain"))
    if "table" not in obj:
        raise ParseError("space file has no table")
    return decode_table(obj["table"], decode_space(obj), dom, flavor, check=check)


# -- retractions and extension runs ---------------------------------------------


def encode_retraction(r: Retraction) -> dict:
    out = {"map": {p: r.mapping[p] for p in r.space.points}}
    if r.tau is not None:
        out["tau"] = encode_value(r.tau)
    cert = r.certificate
    if cert:
        out["certificate"] = {
            "holds": cert["holds"],
            "factor": encode_value(cert["factor"]),
            "worst_ratio": None if cert.get("worst_ratio") is None else encode_rational(cert["worst_ratio"]),
            "worst_pair": None if cert.get("worst_pair") is None else list(cert["worst_pair"]),
        }
    return out


def decode_retraction(obj, space: PointSpace) -> Retraction:
    mapping = obj.get("map") if isinstance(obj, dict) else None
    if not isinstance(mapping, dict):
        raise ParseError("an explicit retraction is {\"map\": {point: point}}")
    tau = decode_rational(obj["tau"]) if "tau" in obj else None
    return Retraction(space, dict(mapping), tau)


def encode_chain(chain) -> list:
    return [encode_value(v) for v in chain.values]


def encode_report(rep) -> dict:
    return {
        "points": list(rep.h.space.points),
        "subset": list(rep.h.space.subset),
        "domain": encode_domain(_domain_of_table(rep.d)),
        "flavor": rep.d.flavor,
        "chain": encode_chain(rep.chain),
        "retraction": encode_retraction(rep.r),
        "d_on_A": encode_table(rep.d),
        "h": encode_table(rep.h),
        "k": encode_table(rep.k),
        "u": encode_table(rep.u),
        "theta": encode_table(rep.theta),
        "output": encode_table(rep.output),
        "certificates": dict(rep.certificates),
    }


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def loads(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from None
