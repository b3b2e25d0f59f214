"""Projection families and cylindrical cells over a fixed real algebraic point.

Polynomials keep the ambient variable count.  A *context* point fixes the
first ``len(point)`` coordinates; rational coordinates are substituted
directly, algebraic ones stay symbolic and coefficients that vanish at the
point are trimmed before any elimination step.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import ceil, floor
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from sympy.polys.domains import QQ
from sympy.polys.orderings import lex
from sympy.polys.rings import ring

from .arith import MPoly, resultant
from .realroots import AlgNum, ZeroSpecialization, _is_zero, _reduce, roots_over, sort_numbers


class DegenerateContext(NotImplementedError):
    """An elimination step vanished identically at an algebraic context point."""


# ---------------------------------------------------------------------------
# specialization


def _alg_part(point: Sequence[AlgNum]) -> Dict[int, AlgNum]:
    return {v: a for v, a in enumerate(point) if a.poly is not None}


def specialize(f: MPoly, point: Sequence[AlgNum]) -> MPoly:
    """Substitute rational context coordinates and drop terms vanishing at the point.

    The result is reduced modulo the minimal polynomials of the algebraic
    coordinates, so two polynomials agreeing at the point tend to coincide.
    """
    c = len(point)
    for v in f.variables():
        if v < c and point[v].poly is None:
            f = f.subs(v, point[v].value)
    alg = {v: a for v, a in _alg_part(point).items() if f.degree(v) > 0}
    if not alg:
        return f
    f = _reduce(f, alg)
    groups: Dict[tuple, dict] = {}
    for e, coef in f.terms.items():
        free = tuple(0 if v in alg else k for v, k in enumerate(e))
        groups.setdefault(free, {})[e] = coef
    kept = {}
    for free, terms in groups.items():
        g = MPoly(f.nvars, terms, _clean=True)
        shift = MPoly(f.nvars, {tuple(k - fk for k, fk in zip(e, free)): cf for e, cf in terms.items()},
                      _clean=True)
        if not _is_zero(shift, alg):
            kept.update(g.terms)
    return MPoly(f.nvars, kept, _clean=True)


def normalize(f: MPoly) -> MPoly:
    return f.integer_primitive()


def _add(out: Dict[MPoly, None], f: MPoly, point: Sequence[AlgNum], what: str, strict: bool) -> None:
    g = specialize(f, point)
    if g.is_zero():
        if strict and not f.is_zero():
            raise DegenerateContext(f"{what} vanishes identically at the context point")
        return
    if g.is_constant():
        return
    out.setdefault(normalize(g))


# ---------------------------------------------------------------------------
# projection


_factor_cache: Dict[MPoly, List[MPoly]] = {}


def irreducible_factors(p: MPoly) -> List[MPoly]:
    """Distinct nonconstant irreducible factors over Q, each integer-primitive."""
    if p.is_constant():
        return []
    hit = _factor_cache.get(p)
    if hit is not None:
        return hit
    n = p.nvars
    R, *_ = ring(",".join(f"x{i}" for i in range(n)), QQ, lex)
    elem = R.from_dict({e: QQ(c.numerator, c.denominator) for e, c in p.terms.items()})
    _, facs = elem.factor_list()
    out = []
    for f, _ in facs:
        q = MPoly(n, {tuple(e): Fraction(int(c.numerator), int(c.denominator)) for e, c in f.terms()})
        if not q.is_constant():
            out.append(normalize(q))
    out = sorted(set(out), key=lambda f: (f.degree(), f.to_str()))
    _factor_cache[p] = out
    return out


def coprime_basis(polys: Iterable[MPoly], var: int) -> Tuple[List[MPoly], List[MPoly]]:
    """Distinct irreducible factors of positive degree in ``X_var`` (pairwise coprime, squarefree).

    Returns ``(basis, lower)`` where ``lower`` collects the factors free of ``X_var``.
    """
    lower: Dict[MPoly, None] = {}
    basis: Dict[MPoly, None] = {}
    for p in polys:
        for f in irreducible_factors(p):
            if f.degree(var) > 0:
                basis.setdefault(f)
            else:
                lower.setdefault(f)
    ordered = sorted(basis, key=lambda f: (f.degree(var), f.degree(), f.to_str()))
    return ordered, list(lower)


def projection(polys: Iterable[MPoly], var: int, point: Sequence[AlgNum] = (),
               thom: bool = False) -> List[MPoly]:
    """Polynomials free of ``X_var`` whose sign-invariance makes the family delineable.

    Leading coefficients (and lower ones until a constant is met),
    discriminants and pairwise resultants of a coprime squarefree basis.
    With ``thom`` the resultants with higher derivatives are added as well,
    so derivative signs at each root stay constant over a cell.
    """
    spec = [specialize(p, point) for p in polys]
    basis, lower = coprime_basis([p for p in spec if p], var)
    out: Dict[MPoly, None] = {}
    for f in lower:
        _add(out, f, point, "content", False)
    for f in basis:
        for c in reversed(f.coeffs(var)):
            if c.is_constant() and c:
                break
            _add(out, c, point, "coefficient", False)
        d = f.degree(var)
        if d >= 2:
            _add(out, resultant(f, f.deriv(var), var), point, "discriminant", True)
        if thom:
            for h in range(2, d):
                _add(out, resultant(f, f.deriv(var, h), var), point, "derivative resultant", False)
    for a in range(len(basis)):
        for b in range(a + 1, len(basis)):
            _add(out, resultant(basis[a], basis[b], var), point, "resultant", True)
    return list(out)


def eliminate_down_to(polys: Iterable[MPoly], level: int, top: int, point: Sequence[AlgNum] = (),
                      thom_last: bool = False) -> Dict[int, List[MPoly]]:
    """Project ``X_top, ..., X_{level+1}`` away; returns the family at each variable.

    ``families[v]`` holds the polynomials whose main variable is at most ``v``
    (after specializing the point), for ``v`` from ``top`` down to ``level``.
    """
    fam = [normalize(specialize(p, point)) for p in polys]
    fam = [p for p in dict.fromkeys(fam) if not p.is_constant()]
    families = {top: fam}
    cur = fam
    for v in range(top, level, -1):
        keep = [p for p in cur if p.degree(v) <= 0]
        proj = projection([p for p in cur if p.degree(v) > 0], v, point, thom=thom_last and v == top)
        cur = list(dict.fromkeys(keep + proj))
        families[v - 1] = cur
    return families


# ---------------------------------------------------------------------------
# roots and cells


def family_roots(polys: Iterable[MPoly], point: Sequence[AlgNum], var: Optional[int] = None) -> List[AlgNum]:
    """Sorted distinct real roots in ``X_var`` of all family members over the point."""
    if var is None:
        var = len(point)
    out: List[AlgNum] = []
    for p in polys:
        if p.degree(var) <= 0:
            continue
        try:
            out.extend(roots_over(p, point, var))
        except ZeroSpecialization:
            continue
    return sort_numbers(out)


def simplest_between(lo: Fraction, hi: Fraction) -> Fraction:
    """The rational with the smallest denominator strictly inside (lo, hi)."""
    if lo >= hi:
        raise ValueError("empty interval")
    fl = floor(lo)
    if fl + 1 < hi:
        if lo < 0 < hi:
            return Fraction(0)
        return Fraction(fl + 1) if lo >= 0 else Fraction(ceil(hi) - 1)
    if lo == fl:
        return fl + Fraction(1, floor(1 / (hi - fl)) + 1)
    return fl + 1 / simplest_between(1 / (hi - fl), 1 / (lo - fl))


def separate(a: AlgNum, b: AlgNum) -> Tuple[Fraction, Fraction]:
    """Refine until ``a`` and ``b`` (with a < b) have disjoint intervals; return the gap."""
    while True:
        _, ahi = a.interval()
        blo, _ = b.interval()
        if ahi < blo:
            return ahi, blo
        w = max(a.width(), b.width()) / 2
        if w == 0:
            raise ValueError("numbers are not strictly ordered")
        a.refine(w)
        b.refine(w)


def sample_between(a: Optional[AlgNum], b: Optional[AlgNum]) -> Fraction:
    """A simple rational strictly between two numbers (either side may be infinite)."""
    if a is None and b is None:
        return Fraction(0)
    if a is None:
        return Fraction(floor(b.interval()[0]) - 1)
    if b is None:
        lo, hi = a.interval()
        return Fraction(floor(hi) + 1)
    lo, hi = separate(a, b)
    if a.poly is None:
        lo = a.value
    if b.poly is None:
        hi = b.value
    return simplest_between(lo, hi)


@dataclass(frozen=True)
class LineCell:
    """A cell of a decomposition of a line: a root (dim 0) or an open interval (dim 1)."""

    index: int
    dim: int
    sample: AlgNum
    left: Optional[AlgNum] = None
    right: Optional[AlgNum] = None


def line_cells(values: Sequence[AlgNum]) -> List[LineCell]:
    """Cells of R cut at sorted distinct values: sector, point, sector, ..., sector."""
    cells = []
    prev: Optional[AlgNum] = None
    for i, v in enumerate(list(values) + [None]):
        s = sample_between(prev, v)
        cells.append(LineCell(2 * i, 1, AlgNum.rational(s), prev, v))
        if v is not None:
            cells.append(LineCell(2 * i + 1, 0, v, v, v))
        prev = v
    return cells


@dataclass(frozen=True)
class PlaneCell:
    index: Tuple[int, int]
    dims: Tuple[int, int]
    sample: Tuple[AlgNum, ...]

    @property
    def dim(self) -> int:
        return sum(self.dims)


def plane_cells(family: Sequence[MPoly], point: Sequence[AlgNum] = ()) -> List[PlaneCell]:
    """Cylindrical cells of the plane of the two coordinates after the context point."""
    c = len(point)
    fams = eliminate_down_to(family, c, c + 1, point)
    base = family_roots(fams[c], point, c)
    cells: List[PlaneCell] = []
    for lc in line_cells(base):
        pt = tuple(point) + (lc.sample,)
        ys = family_roots(fams[c + 1], pt, c + 1)
        for yc in line_cells(ys):
            cells.append(PlaneCell((lc.index, yc.index), (lc.dim, yc.dim), pt + (yc.sample,)))
    return cells
