"""Closed formulas for the closures of curve segments.

A curve over ``(a, b)`` is projected to each plane ``(X_{i+1}, X_j)``.  The
projection is a union of cells of a plane decomposition adapted to a family
closed under derivatives; the closure of the projection is then the
disjunction of the weakened sign conditions of those cells.  The curve's
closure is the intersection of the preimages of the planar closures,
above the context point.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .arith import MPoly, der_sequence, resultant
from .cad import PlaneCell, irreducible_factors, line_cells, plane_cells, projection, specialize
from .formulas import (FALSE, TRUE, Atom, Formula, SignCond, conj, disj, eval_at_point, polys_of,
                       weak_sign_formula)
from .realroots import AlgNum, TriThomEncoding, sign_at_point, weak_thom_formula
from .reps import CurveSegRep, curve_limit, curve_point


class ClosureError(RuntimeError):
    pass


# ---------------------------------------------------------------------------
# plane decompositions


@dataclass
class PlaneDecomposition:
    family: List[MPoly]
    context: Tuple[AlgNum, ...]
    cells: List[PlaneCell]
    signs: List[Tuple[int, ...]]

    def condition(self, idx: int) -> SignCond:
        return SignCond.of(zip(self.family, self.signs[idx]))

    def weak(self, idx: int) -> Formula:
        return weak_sign_formula(self.condition(idx))


def _derivative_closure(polys: Sequence[MPoly], var: int) -> List[MPoly]:
    out: Dict[MPoly, None] = {}
    for p in polys:
        for d in der_sequence(p, var):
            if not d.is_constant():
                out.setdefault(d.integer_primitive())
    return list(out)


def stratifying_family(polys: Sequence[MPoly], context: Sequence[AlgNum] = (),
                       full: bool = False) -> List[MPoly]:
    """Family adapted to the plane after the context: closed under the second-variable
    derivative, its projection closed under the first-variable derivative."""
    c = len(context)
    x, y = c, c + 1
    spec = [specialize(p, context) for p in polys]
    spec = [p for p in spec if not p.is_constant()]
    ys = [p for p in spec if p.degree(y) > 0]
    xs = [p for p in spec if p.degree(y) <= 0]
    fy = _derivative_closure(ys, y)
    if full:
        fy = _derivative_closure(fy, x)
        fy = _derivative_closure(fy, y)
    proj = projection([p for p in fy if p.degree(y) > 0], y, context)
    xonly = proj + xs + [p for p in fy if p.degree(y) <= 0]
    fx = _derivative_closure([p for p in xonly if p.degree(x) > 0], x)
    fam = list(dict.fromkeys([p for p in fy if p.degree(y) > 0] + fx))
    return [p for p in fam if not p.is_constant()]


def plane_decomposition(family: Sequence[MPoly], context: Sequence[AlgNum] = ()) -> PlaneDecomposition:
    fam = list(family)
    cells = plane_cells(fam, context)
    signs = [tuple(sign_at_point(p, cell.sample) for p in fam) for cell in cells]
    return PlaneDecomposition(fam, tuple(context), cells, signs)


# ---------------------------------------------------------------------------
# quantifier-free descriptions and closures


Strict = Tuple[Tuple[MPoly, int], ...]


def closure_2d(qf: Sequence[Sequence[Tuple[MPoly, int]]], context: Sequence[AlgNum] = ()) -> Formula:
    """Closure of a union of strict sign conditions (a disjunction of conjunctions)
    on plane polynomials; the set must have dimension at most one."""
    polys = list(dict.fromkeys(p for conj_ in qf for p, _ in conj_))
    dec = plane_decomposition(stratifying_family(polys, context), context)

    def inside(idx):
        pt = dec.cells[idx].sample
        return any(all(sign_at_point(p, pt) == s for p, s in conj_) for conj_ in qf)

    chosen = [j for j in range(len(dec.cells)) if inside(j)]
    return disj(*[dec.weak(j) for j in chosen]) if chosen else FALSE


@dataclass
class PlaneCurve:
    """Projection of a curve to the plane of its parameter and one further coordinate."""

    curve: CurveSegRep
    coord: int
    poly: MPoly            # in the plane ring: context vars, then (x, y)
    bounds: List[MPoly]    # plane-ring polynomials fixing the interval ends
    to_ambient: List[int]  # plane variable -> ambient variable

    def y_at(self, x: AlgNum) -> AlgNum:
        return curve_point(self.curve, x)[self.coord]


def _ambient_map(c: int, coord: int) -> List[int]:
    return list(range(c)) + [c, coord]


def _to_plane(p: MPoly, c: int, coord: int) -> MPoly:
    """Re-embed an ambient polynomial that only uses context vars, X_{c+1} and X_coord."""
    mapping = []
    for v in range(p.nvars):
        if v <= c:
            mapping.append(v)
        elif v == coord:
            mapping.append(c + 1)
        else:
            if p.degree(v) > 0:
                raise ValueError("polynomial uses a coordinate outside the plane")
            mapping.append(0)
    return p.change_nvars(c + 2, mapping)


def _end_poly(a: AlgNum, n: int, var: int) -> MPoly:
    if a.poly is None:
        return (MPoly.var(n, var) - a.value).integer_primitive()
    return MPoly.univariate(a.poly, n, var)


def project_curve(g: CurveSegRep, coord: int) -> PlaneCurve:
    """Defining data of the projection of ``g`` to the plane ``(X_{i+1}, X_coord)``."""
    c = g.var
    if coord <= c or coord >= g.k:
        raise ValueError("coordinate must follow the curve parameter")
    depth = coord - c - 1
    lv = g.levels[depth]
    p = lv.poly
    # eliminate the intermediate coordinates
    for back in range(depth - 1, -1, -1):
        p = resultant(g.levels[back].poly, p, g.levels[back].var)
    sample = curve_point(g, g.sample_x())
    cands = [f for f in irreducible_factors(p) if f.degree(coord) > 0
             and sign_at_point(f, sample) == 0]
    if not cands:
        raise ClosureError("no factor of the eliminant vanishes on the curve")
    poly = _to_plane(min(cands, key=lambda f: (f.degree(), f.to_str())), c, coord)
    n = c + 2
    bounds = [_end_poly(g.left, n, c), _end_poly(g.right, n, c)]
    return PlaneCurve(g, coord, poly, bounds, _ambient_map(c, coord))


def project_curve_2d(g: CurveSegRep, coord: int) -> List[Strict]:
    """Quantifier-free description of the projection: strict sign conditions of its cells."""
    pc = project_curve(g, coord)
    dec, on, _ = _plane_cells_of(pc, full=False)
    return [tuple(dec.condition(j).items) for j in on]


def _plane_cells_of(pc: PlaneCurve, full: bool):
    g = pc.curve
    ctx = g.context.point
    fam = stratifying_family([pc.poly] + pc.bounds, ctx, full=full)
    dec = plane_decomposition(fam, ctx)
    c = len(ctx)
    on: List[int] = []
    ends: List[int] = []
    left = (g.left, curve_limit(g, "left")[pc.coord])
    right = (g.right, curve_limit(g, "right")[pc.coord])
    ycache: Dict[tuple, AlgNum] = {}
    for j, cell in enumerate(dec.cells):
        x, y = cell.sample[c], cell.sample[c + 1]
        if (x.key, y.key) in ((left[0].key, left[1].key), (right[0].key, right[1].key)):
            ends.append(j)
            continue
        if cell.dims[1] != 0 or not (g.left < x < g.right):
            continue
        yy = ycache.get(x.key)
        if yy is None:
            yy = ycache[x.key] = pc.y_at(x)
        if yy == y:
            on.append(j)
    return dec, on, ends


def _plane_closure(pc: PlaneCurve) -> Formula:
    for full in (False, True):
        dec, on, ends = _plane_cells_of(pc, full)
        if not on:
            raise ClosureError("curve meets no cell of its plane decomposition")
        psi = disj(*[dec.weak(j) for j in on])
        want = set(on) | set(ends)
        ok = True
        missing = []
        for j, cell in enumerate(dec.cells):
            got = eval_at_point(psi, cell.sample)
            if got and j not in want:
                ok = False
                break
            if not got and j in want:
                missing.append(j)
        if ok:
            if missing:
                # a limit point escaped the weakened conditions; add it explicitly
                psi = disj(psi, *[_point_formula(dec.cells[j].sample, len(dec.context))
                                  for j in missing])
            return psi
    raise ClosureError("weakened sign conditions overshoot the closure")


def _point_formula(sample: Sequence[AlgNum], c: int) -> Formula:
    T = TriThomEncoding.from_point(sample, len(sample))
    f = weak_thom_formula(T)
    # drop the context part; callers conjoin the context formula separately
    keep = [a for a in (f.children if hasattr(f, "children") else (f,))
            if any(a.poly.degree(v) > 0 for v in range(c, len(sample)))]
    return conj(*keep) if keep else TRUE


def _lift(f: Formula, mapping: List[int], k: int) -> Formula:
    if isinstance(f, Atom):
        return Atom(f.poly.change_nvars(k, mapping), f.rel)
    kids = tuple(_lift(h, mapping, k) for h in f.children)
    return type(f)(kids)


def _line_closure(g: CurveSegRep) -> Formula:
    k = g.k
    c = g.var
    a, b = g.left, g.right
    x = MPoly.var(k, c)
    if a.poly is None and b.poly is None:
        return conj(Atom((x - a.value).integer_primitive(), "ge"),
                    Atom((x - b.value).integer_primitive(), "le"))
    ctx = g.context.point
    fam = _derivative_closure([_end_poly(a, k, c), _end_poly(b, k, c)], c)
    fam = [specialize(p, ctx) for p in fam]
    fam = [p for p in dict.fromkeys(fam) if not p.is_constant()]
    from .cad import family_roots
    pieces = []
    for cell in line_cells(family_roots(fam, ctx, c)):
        v = cell.sample
        if a <= v <= b:
            pt = ctx + (v,)
            pieces.append(weak_sign_formula(SignCond.of((p, sign_at_point(p, pt)) for p in fam)))
    return disj(*pieces)


def curve_to_closed(context: TriThomEncoding, g: CurveSegRep) -> Tuple[List[MPoly], Formula]:
    """Polynomials and closed formula whose realization is the closure of the curve."""
    k = g.k
    parts = [weak_thom_formula(context)]
    if g.is_interval():
        parts.append(_line_closure(g))
    else:
        c = g.var
        for coord in range(c + 1, k):
            pc = project_curve(g, coord)
            psi = _plane_closure(pc)
            parts.append(_lift(psi, pc.to_ambient, k))
    psi = conj(*parts)
    return polys_of(psi), psi
