"""Closed formulas (negation-free, weak atoms only), sign conditions and JSON I/O."""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Sequence, Tuple, Union

from .arith import MPoly

RELS = ("le", "ge", "eq")


class FormulaError(ValueError):
    pass


def poly_id(p: MPoly) -> str:
    """Content hash of a polynomial, stable across runs."""
    blob = json.dumps([p.nvars, p.to_literal()], separators=(",", ":"))
    return "p" + hashlib.sha1(blob.encode()).hexdigest()[:12]


@dataclass(frozen=True)
class Atom:
    poly: MPoly
    rel: str

    def __post_init__(self):
        if self.rel not in RELS:
            raise FormulaError("not a closed formula")


@dataclass(frozen=True)
class And:
    children: Tuple["Formula", ...]


@dataclass(frozen=True)
class Or:
    children: Tuple["Formula", ...]


Formula = Union[Atom, And, Or]
ClosedFormula = Formula
TRUE = And(())
FALSE = Or(())


def conj(*fs: Formula) -> Formula:
    out: List[Formula] = []
    for f in fs:
        parts = f.children if isinstance(f, And) else (f,)
        for g in parts:
            if g not in out:
                out.append(g)
    if any(g == FALSE for g in out):
        return FALSE
    return out[0] if len(out) == 1 else And(tuple(out))


def disj(*fs: Formula) -> Formula:
    out: List[Formula] = []
    for f in fs:
        parts = f.children if isinstance(f, Or) else (f,)
        for g in parts:
            if g not in out:
                out.append(g)
    if any(g == TRUE for g in out):
        return TRUE
    return out[0] if len(out) == 1 else Or(tuple(out))


def weak_atom(p: MPoly, sign: int) -> Atom:
    return Atom(p, {0: "eq", 1: "ge", -1: "le"}[sign])


# ---------------------------------------------------------------------------
# sign conditions


@dataclass(frozen=True)
class SignCond:
    """Assignment of a sign to each polynomial of a family."""

    items: Tuple[Tuple[MPoly, int], ...]

    @classmethod
    def of(cls, pairs: Iterable[Tuple[MPoly, int]] | Mapping[MPoly, int]) -> "SignCond":
        if isinstance(pairs, Mapping):
            pairs = pairs.items()
        return cls(tuple(sorted(pairs, key=lambda t: poly_id(t[0]))))

    def as_dict(self) -> Dict[MPoly, int]:
        return dict(self.items)

    def signs(self) -> Tuple[int, ...]:
        return tuple(s for _, s in self.items)


def weak_sign_formula(sigma: SignCond | Mapping[MPoly, int]) -> Formula:
    """Weakening: zero stays, positive becomes ``>= 0``, negative ``<= 0``."""
    if not isinstance(sigma, SignCond):
        sigma = SignCond.of(sigma)
    return conj(*(weak_atom(p, s) for p, s in sigma.items))


def strict_holds(sigma: SignCond, point) -> bool:
    from .realroots import sign_at_point
    return all(sign_at_point(p, point) == s for p, s in sigma.items)


# ---------------------------------------------------------------------------
# evaluation


def _sign(x: Fraction) -> int:
    return (x > 0) - (x < 0)


def _rel_ok(rel: str, s: int) -> bool:
    return s == 0 if rel == "eq" else (s <= 0 if rel == "le" else s >= 0)


def eval_with(f: Formula, sign_of) -> bool:
    """Evaluate with a callback giving the sign of a polynomial."""
    if isinstance(f, Atom):
        return _rel_ok(f.rel, sign_of(f.poly))
    if isinstance(f, And):
        return all(eval_with(g, sign_of) for g in f.children)
    return any(eval_with(g, sign_of) for g in f.children)


def eval_at(f: Formula, x: Sequence) -> bool:
    """Exact membership of a rational point."""
    pt = [Fraction(v) for v in x]
    cache: Dict[MPoly, int] = {}

    def sign_of(p: MPoly) -> int:
        if p.nvars != len(pt):
            raise FormulaError("dimension mismatch")
        if p not in cache:
            cache[p] = _sign(p.eval(pt))
        return cache[p]

    return eval_with(f, sign_of)


def eval_at_point(f: Formula, point) -> bool:
    """Exact membership of a point with real algebraic coordinates."""
    from .realroots import sign_at_point
    cache: Dict[MPoly, int] = {}

    def sign_of(p: MPoly) -> int:
        if p not in cache:
            cache[p] = sign_at_point(p, point)
        return cache[p]

    return eval_with(f, sign_of)


def polys_of(f: Formula) -> List[MPoly]:
    out: Dict[MPoly, None] = {}

    def walk(g):
        if isinstance(g, Atom):
            out.setdefault(g.poly)
        else:
            for h in g.children:
                walk(h)

    walk(f)
    return list(out)


def formula_size(f: Formula) -> int:
    if isinstance(f, Atom):
        return 1
    return 1 + sum(formula_size(g) for g in f.children)


# ---------------------------------------------------------------------------
# JSON


def parse_formula(document) -> Tuple[List[str], Dict[str, MPoly], Formula]:
    """Parse a JSON document (string or decoded object) into variables, table and formula."""
    if isinstance(document, (str, bytes)):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise FormulaError(f"invalid JSON: {exc}") from exc
    if not isinstance(document, dict):
        raise FormulaError("document must be an object")
    for key in ("vars", "polys", "formula"):
        if key not in document:
            raise FormulaError(f"missing key {key!r}")
    names = document["vars"]
    if not isinstance(names, list) or not names or not all(isinstance(n, str) for n in names):
        raise FormulaError("vars must be a nonempty list of names")
    if len(set(names)) != len(names):
        raise FormulaError("duplicate variable names")
    k = len(names)
    table: Dict[str, MPoly] = {}
    polys = document["polys"]
    if not isinstance(polys, dict):
        raise FormulaError("polys must be an object")
    for pid, lit in polys.items():
        if not isinstance(lit, list):
            raise FormulaError(f"polynomial {pid!r} must be a list of terms")
        for term in lit:
            if not (isinstance(term, list) and len(term) == 2):
                raise FormulaError(f"malformed term in {pid!r}")
            e = term[0]
            if not isinstance(e, list) or len(e) != k or any(
                    isinstance(x, bool) or not isinstance(x, int) or x < 0 for x in e):
                raise FormulaError(f"malformed exponent vector {e!r} in {pid!r}")
        try:
            table[pid] = MPoly.from_literal(k, lit)
        except (ValueError, ZeroDivisionError) as exc:
            raise FormulaError(f"bad coefficient in {pid!r}: {exc}") from exc

    def node(obj) -> Formula:
        if not isinstance(obj, dict) or len(obj) != 1:
            raise FormulaError("malformed formula node")
        (tag, body), = obj.items()
        if tag == "atom":
            if not isinstance(body, dict) or "poly" not in body or "rel" not in body:
                raise FormulaError("malformed atom")
            if body["rel"] not in RELS:
                raise FormulaError("not a closed formula")
            pid = body["poly"]
            if pid not in table:
                raise FormulaError(f"unknown polynomial {pid!r}")
            return Atom(table[pid], body["rel"])
        if tag in ("and", "or"):
            if not isinstance(body, list):
                raise FormulaError(f"{tag} expects a list")
            kids = tuple(node(c) for c in body)
            return And(kids) if tag == "and" else Or(kids)
        if tag == "not":
            raise FormulaError("not a closed formula")
        raise FormulaError(f"unknown formula node {tag!r}")

    return list(names), table, node(document["formula"])


def formula_to_json(f: Formula, names: Sequence[str] | None = None) -> dict:
    """Serialize with content-hashed polynomial ids."""
    table: Dict[str, list] = {}
    nvars = None

    def node(g) -> dict:
        nonlocal nvars
        if isinstance(g, Atom):
            pid = poly_id(g.poly)
            table[pid] = g.poly.to_literal()
            nvars = g.poly.nvars
            return {"atom": {"poly": pid, "rel": g.rel}}
        tag = "and" if isinstance(g, And) else "or"
        return {tag: [node(h) for h in g.children]}

    body = node(f)
    if names is None:
        names = [f"x{i + 1}" for i in range(nvars or 0)]
    return {"vars": list(names), "polys": dict(sorted(table.items())), "formula": body}


def formula_to_str(f: Formula, names: Sequence[str] | None = None) -> str:
    if isinstance(f, Atom):
        op = {"le": "<=", "ge": ">=", "eq": "="}[f.rel]
        return f"{f.poly.to_str(names)} {op} 0"
    if not f.children:
        return "true" if isinstance(f, And) else "false"
    glue = " and " if isinstance(f, And) else " or "
    return "(" + glue.join(formula_to_str(g, names) for g in f.children) + ")"


# ---------------------------------------------------------------------------
# realizable sign conditions


def realizable_signs_2d(family: Iterable[MPoly]) -> List[SignCond]:
    """All sign conditions on a bivariate family that are realized in the plane."""
    from .cad import plane_cells
    fam = list(dict.fromkeys(family))
    for p in fam:
        if p.nvars != 2:
            raise FormulaError("realizable_signs_2d expects bivariate polynomials")
    from .realroots import sign_at_point
    seen: Dict[Tuple[int, ...], SignCond] = {}
    for cell in plane_cells(fam):
        sc = tuple(sign_at_point(p, cell.sample) for p in fam)
        if sc not in seen:
            seen[sc] = SignCond.of(zip(fam, sc))
    return [seen[k] for k in sorted(seen)]
