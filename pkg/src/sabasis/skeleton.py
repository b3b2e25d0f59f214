"""One-dimensional subsets carrying H0 and H1 of a bounded closed semi-algebraic set.

Pipeline for ``k <= 3``:

* :func:`big_enough_radius` bounds the critical values of the squared norm
  and turns them into a radius through the ring ``D[eps]`` and the Cauchy
  lower bound.
* :func:`morse_partition` collects the distinguished values of the next
  coordinate above a context point.
* :func:`curve_segments` builds, over every open slab, the curves meeting
  every fiber component (sections over sections of a cylindrical
  decomposition that lie in the set).
* :func:`one_dim_subset` recurses into the fibers over the distinguished
  values and glues everything into a :class:`SkeletonNet`.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil
from typing import Dict, List, Optional, Sequence, Tuple

from .arith import EpsScalar, MPoly, Ordering, cauchy_lower_bound, der_sequence, eps_compare
from .cad import coprime_basis, eliminate_down_to, family_roots, sample_between, specialize
from .formulas import Atom, Formula, conj, eval_at_point, polys_of
from .realroots import (AlgNum, ThomEncoding, TriThomEncoding, ZeroSpecialization, encode_root,
                        roots_over, sign_at_point)
from .reps import RUR, CurveSegRep, Level, curve_limit

log = logging.getLogger(__name__)

Point = Tuple[AlgNum, ...]


def _key(pt: Sequence[AlgNum]) -> tuple:
    return tuple(a.key for a in pt)


# ---------------------------------------------------------------------------
# radius


@dataclass(frozen=True)
class Radius:
    a: Fraction
    b: Fraction
    empty: bool = False
    values: Tuple[AlgNum, ...] = ()

    @property
    def r(self) -> Fraction:
        return self.a / self.b


def _rational_upper(a: AlgNum) -> Fraction:
    lo, hi = a.refine(Fraction(1, 1024))
    return max(abs(lo), abs(hi))


def big_enough_radius(context: TriThomEncoding, P: Sequence[MPoly], phi: Formula) -> Radius:
    """Radius beyond which intersecting the fiber with a ball keeps its homology.

    The squared norm ``Y`` of the fiber coordinates is adjoined as the next
    coordinate and its distinguished values are computed.  The infinitely
    large ball of radius ``1/eps`` contributes the polynomials
    ``y eps^2 - 1``; the smallest Cauchy lower bound among them is ``b/a``.
    """
    k = context.nvars
    i = context.size
    n = k + 1
    # layout: context vars, then Y, then the fiber vars
    mapping = [v if v < i else v + 1 for v in range(k)]
    lifted = [p.change_nvars(n, mapping) for p in P]
    Y = MPoly.var(n, i)
    norm = sum((MPoly.var(n, v) ** 2 for v in range(i + 1, n)), MPoly(n))
    P1 = Y - norm
    fams = eliminate_down_to(lifted + [P1], i, n - 1, context.point)
    values = [y for y in family_roots(fams[i], context.point, i) if y.sign() >= 0]
    if not values:
        return Radius(Fraction(1), Fraction(1), True, ())
    eps_polys = []
    for y in values:
        ybar = _rational_upper(y)
        q = EpsScalar([-1, 0, ybar])
        # 1/eps^2 exceeds every distinguished value
        assert eps_compare(q, EpsScalar([0])) is Ordering.LT
        eps_polys.append(q.as_poly())
    c = min(cauchy_lower_bound(q) for q in eps_polys)
    return Radius(Fraction(c.denominator), Fraction(c.numerator), False, tuple(values))


def ball_poly(k: int, radius: Radius) -> MPoly:
    """``b^2 * sum X_j^2 - a^2``."""
    s = sum((MPoly.var(k, v) ** 2 for v in range(k)), MPoly(k))
    return s * (radius.b ** 2) - radius.a ** 2


# ---------------------------------------------------------------------------
# problem data


class Problem:
    """Polynomials and closed formula of the (bounded) input, with shared caches."""

    def __init__(self, P: Sequence[MPoly], phi: Formula, k: int):
        self.k = k
        self.phi = phi
        self.P = list(dict.fromkeys([p for p in list(P) + polys_of(phi) if not p.is_constant()]))
        self._fams: Dict[tuple, Dict[int, List[MPoly]]] = {}
        self._member: Dict[tuple, bool] = {}

    def families(self, point: Sequence[AlgNum]) -> Dict[int, List[MPoly]]:
        key = _key(point)
        fams = self._fams.get(key)
        if fams is None:
            i = len(point)
            fams = eliminate_down_to(self.P, i, self.k - 1, point, thom_last=(self.k - i == 2))
            self._fams[key] = fams
        return fams

    def member(self, pt: Sequence[AlgNum]) -> bool:
        key = _key(pt)
        hit = self._member.get(key)
        if hit is None:
            hit = self._member[key] = eval_at_point(self.phi, pt)
        return hit


def with_ball(P: Sequence[MPoly], phi: Formula, k: int, radius: Radius) -> Tuple[List[MPoly], Formula]:
    b = ball_poly(k, radius)
    return list(P) + [b], conj(phi, Atom(b, "le"))


# ---------------------------------------------------------------------------
# Morse partition


@dataclass
class MorsePartition:
    context: TriThomEncoding
    taus: List[ThomEncoding]

    @property
    def values(self) -> List[AlgNum]:
        return [t.root for t in self.taus]


def _values_poly(value: AlgNum, k: int, var: int) -> MPoly:
    if value.poly is None:
        return MPoly.var(k, var) - value.value
    return MPoly.univariate(value.poly, k, var)


def morse_partition(context: TriThomEncoding, r: Optional[Fraction], P, phi: Formula,
                    extra: Sequence[AlgNum] = (), problem: Optional[Problem] = None) -> MorsePartition:
    """Distinguished values of ``X_{i+1}`` above ``ass(context)``, sorted.

    ``extra`` values (coordinates of points that must be reached) are merged in.
    """
    if problem is None:
        problem = Problem(P, phi, context.nvars)
    i = context.size
    fams = problem.families(context.point)
    vals = family_roots(fams[i], context.point, i) + list(extra)
    from .realroots import sort_numbers
    vals = sort_numbers(vals)
    if r is not None:
        lo, hi = AlgNum.rational(-r), AlgNum.rational(r)
        vals = [v for v in vals if lo <= v <= hi]
    taus = []
    for v in vals:
        f = None
        for p in fams[i]:
            if p.degree(i) > 0:
                try:
                    if sign_at_point(p, context.point + (v,)) == 0:
                        f = p
                        break
                except ZeroSpecialization:
                    continue
        if f is None:
            f = _values_poly(v, context.nvars, i)
        taus.append(encode_root(f, context, v))
    return MorsePartition(context, taus)


# ---------------------------------------------------------------------------
# network


@dataclass
class SlabGroup:
    context: Point
    index: int
    left: AlgNum
    right: AlgNum
    edges: List[int] = field(default_factory=list)
    vertices: List[int] = field(default_factory=list)


@dataclass
class SkeletonNet:
    k: int
    points: List[Point] = field(default_factory=list)
    edges: List[CurveSegRep] = field(default_factory=list)
    left: List[int] = field(default_factory=list)
    right: List[int] = field(default_factory=list)
    groups: List[SlabGroup] = field(default_factory=list)
    _index: Dict[tuple, int] = field(default_factory=dict, repr=False)

    def add_vertex(self, pt: Sequence[AlgNum]) -> int:
        pt = tuple(pt)
        key = _key(pt)
        idx = self._index.get(key)
        if idx is None:
            idx = self._index[key] = len(self.points)
            self.points.append(pt)
        return idx

    def find_vertex(self, pt: Sequence[AlgNum]) -> Optional[int]:
        return self._index.get(_key(pt))

    def add_edge(self, curve: CurveSegRep, left: int, right: int) -> int:
        self.edges.append(curve)
        self.left.append(left)
        self.right.append(right)
        return len(self.edges) - 1

    @property
    def vertices(self) -> List[RUR]:
        return [RUR.from_point(p) for p in self.points]

    def vertex_rur(self, idx: int) -> RUR:
        return RUR.from_point(self.points[idx])

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "vertices": [[a.to_dict() for a in p] for p in self.points],
            "edges": [{"curve": c.to_dict(), "left": l, "right": r}
                      for c, l, r in zip(self.edges, self.left, self.right)],
        }


# ---------------------------------------------------------------------------
# curve segments


@dataclass
class Slab:
    index: int
    left: AlgNum
    right: AlgNum
    curves: List[CurveSegRep]
    ends: List[Tuple[Point, Point]]


def _level(poly: MPoly, var: int, pt: Point, root: AlgNum) -> Level:
    roots = roots_over(poly, pt, var)
    b = next(j for j, r in enumerate(roots) if r == root)
    full = pt + (root,)
    rho = tuple(sign_at_point(D, full) for D in der_sequence(poly, var))
    return Level(poly, var, b, rho)


def _fiber_roots(basis: Sequence[MPoly], pt: Point, var: int) -> List[Tuple[AlgNum, MPoly]]:
    found: Dict[tuple, Tuple[AlgNum, MPoly]] = {}
    for f in basis:
        try:
            for r in roots_over(f, pt, var):
                found.setdefault(r.key, (r, f))
        except ZeroSpecialization:
            continue
    from .realroots import sort_numbers
    order = sort_numbers([r for r, _ in found.values()])
    return [found[r.key] for r in order]


def curve_segments(context: TriThomEncoding, P, phi: Formula, M: Sequence[Point] = (),
                   r: Optional[Fraction] = None, problem: Optional[Problem] = None):
    """Morse partition and, for every open slab, curves inside the set meeting each fiber component."""
    if problem is None:
        problem = Problem(P, phi, context.nvars)
    k = context.nvars
    i = context.size
    if k - i < 2:
        raise ValueError("curve segments need at least two free coordinates")
    extra = [m[i] for m in M]
    part = morse_partition(context, r, P, phi, extra, problem)
    fams = problem.families(context.point)
    ctx = context.point
    bases = {}
    for v in range(i + 1, k):
        fam_v = [specialize(p, ctx) for p in fams[v]]
        bases[v], _ = coprime_basis([p for p in fam_v if p.degree(v) > 0], v)
    slabs: List[Slab] = []
    vals = part.values
    for j in range(len(vals) - 1):
        a, b = vals[j], vals[j + 1]
        s = AlgNum.rational(sample_between(a, b))
        curves: List[CurveSegRep] = []
        pts: List[Point] = [ctx + (s,)]
        levels_of: List[Tuple[Level, ...]] = [()]
        for v in range(i + 1, k):
            nxt_pts, nxt_lv = [], []
            for pt, lvs in zip(pts, levels_of):
                for root, f in _fiber_roots(bases[v], pt, v):
                    nxt_pts.append(pt + (root,))
                    nxt_lv.append(lvs + (_level(f, v, pt, root),))
            pts, levels_of = nxt_pts, nxt_lv
        ends = []
        for pt, lvs in zip(pts, levels_of):
            if not problem.member(pt):
                continue
            c = CurveSegRep(context, a, b, lvs)
            curves.append(c)
            ends.append((curve_limit(c, "left"), curve_limit(c, "right")))
        slabs.append(Slab(j, a, b, curves, ends))
    return part, slabs


# ---------------------------------------------------------------------------
# one-dimensional subset


def one_dim_subset(context: TriThomEncoding, P, phi: Formula, M: Sequence[Point] = (),
                   r: Optional[Fraction] = None, net: Optional[SkeletonNet] = None,
                   problem: Optional[Problem] = None) -> SkeletonNet:
    """Graph of curves and points inside the set whose union carries its H0 and H1."""
    k = context.nvars
    if net is None:
        net = SkeletonNet(k)
    if problem is None:
        problem = Problem(P, phi, k)
    i = context.size
    ctx = context.point
    for m in M:
        net.add_vertex(m)
    if k - i == 1:
        fam = problem.families(ctx)[k - 1]
        vals = family_roots(fam, ctx, i)
        from .realroots import sort_numbers
        vals = sort_numbers(vals + [m[i] for m in M])
        inside = {}
        for v in vals:
            pt = ctx + (v,)
            if problem.member(pt):
                inside[v.key] = net.add_vertex(pt)
        for a, b in zip(vals, vals[1:]):
            mid = ctx + (AlgNum.rational(sample_between(a, b)),)
            if problem.member(mid):
                if a.key not in inside or b.key not in inside:
                    raise AssertionError("segment inside a closed set with an end outside it")
                c = CurveSegRep(context, a, b, ())
                e = net.add_edge(c, inside[a.key], inside[b.key])
                net.groups.append(SlabGroup(ctx, len(net.groups), a, b, [e],
                                            [inside[a.key], inside[b.key]]))
        return net
    part, slabs = curve_segments(context, P, phi, M, r, problem)
    over: Dict[tuple, List[Point]] = {}
    for m in M:
        over.setdefault(m[i].key, []).append(m)
    for slab in slabs:
        grp = SlabGroup(ctx, len(net.groups), slab.left, slab.right)
        for c, (lp, rp) in zip(slab.curves, slab.ends):
            li, ri = net.add_vertex(lp), net.add_vertex(rp)
            grp.edges.append(net.add_edge(c, li, ri))
            grp.vertices.extend([li, ri])
            over.setdefault(lp[i].key, []).append(lp)
            over.setdefault(rp[i].key, []).append(rp)
        net.groups.append(grp)
    for tau in part.taus:
        sub = context.extend(tau)
        Mt = list({_key(p): p for p in over.get(tau.root.key, [])}.values())
        one_dim_subset(sub, P, phi, Mt, r, net, problem)
    return net


def skeleton(P: Sequence[MPoly], phi: Formula, k: int, radius: Optional[Radius] = None) -> Tuple[SkeletonNet, Radius, Problem]:
    """Top-level entry: bound the set by a big ball and build the network."""
    ctx = TriThomEncoding.empty(k)
    if radius is None:
        radius = big_enough_radius(ctx, P, phi)
    P2, phi2 = with_ball(P, phi, k, radius)
    problem = Problem(P2, phi2, k)
    net = one_dim_subset(ctx, P2, phi2, (), radius.r, None, problem)
    return net, radius, problem
