"""Points given by univariate representations and curves parametrized by a coordinate.

A :class:`CurveSegRep` is stored in triangular branch form: over an open
interval of ``X_{i+1}`` each further coordinate ``X_{i+2}, ...`` is the
``b``-th real root of a polynomial in the previous coordinates.  With one
dependent coordinate this is the classical form with ``T = X_{i+2}``,
``g0 = 1`` and ``g = T`` (see :meth:`CurveSegRep.as_parametrization`).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .arith import MPoly, der_sequence
from .cad import simplest_between
from .realroots import (AlgNum, TriThomEncoding, ZeroSpecialization, roots_over, sign_at_point)

Box = List[Tuple[Fraction, Fraction]]


class RepresentationError(ValueError):
    pass


class UnboundedBranch(RepresentationError):
    pass


# ---------------------------------------------------------------------------
# real univariate representations


@dataclass(frozen=True)
class RUR:
    """Point ``(ass(context), g_{i+1}(t)/g0(t), ..., g_k(t)/g0(t))`` with ``f(t) = 0``.

    Polynomials live in ``i + 1`` variables, the last one being ``T``.
    """

    context: TriThomEncoding
    f: MPoly
    g0: MPoly
    gs: Tuple[MPoly, ...]
    sigma: Tuple[int, ...]
    root: AlgNum = field(compare=False)

    @property
    def k(self) -> int:
        return self.context.size + len(self.gs)

    @classmethod
    def from_point(cls, point: Sequence[AlgNum]) -> "RUR":
        """Identity representation: context fixes all but the last coordinate, ``T`` is the last."""
        point = tuple(point)
        i = len(point) - 1
        ctx = TriThomEncoding.from_point(point[:i], i)
        last = point[-1]
        n = i + 1
        if last.poly is None:
            f = MPoly.var(n, i) - last.value
        else:
            f = MPoly.univariate(last.poly, n, i)
        t = MPoly.var(n, i)
        sigma = tuple(sign_at_point(D, point) for D in der_sequence(f, i))
        return cls(ctx, f, MPoly.const(n, 1), (t,), sigma, last)

    @classmethod
    def make(cls, context: TriThomEncoding, f: MPoly, g0: MPoly, gs: Sequence[MPoly], root_index: int) -> "RUR":
        """Build from the ``root_index``-th real root of ``f(ass(context), T)``."""
        i = context.size
        roots = roots_over(f, context.point, i)
        root = roots[root_index]
        pt = context.point + (root,)
        sigma = tuple(sign_at_point(D, pt) for D in der_sequence(f, i))
        if sign_at_point(g0, pt) == 0:
            raise RepresentationError("g0 vanishes at the root")
        return cls(context, f, g0, tuple(gs), sigma, root)

    def is_identity(self) -> bool:
        n = self.context.size + 1
        return self.g0 == MPoly.const(n, 1) and self.gs == (MPoly.var(n, n - 1),)

    def degrees(self) -> Tuple[int, int]:
        i = self.context.size
        d1 = self.f.degree(i)
        d2 = max([self.g0.degree()] + [g.degree() for g in self.gs])
        return d1, d2

    def point(self) -> Tuple[AlgNum, ...]:
        """Exact coordinates of the associated point."""
        if self.is_identity():
            return self.context.point + (self.root,)
        return self.context.point + tuple(_quotient_coordinate(self, g) for g in self.gs)

    def box(self, width: Fraction) -> Box:
        return rur_point(self, width)

    def to_dict(self) -> dict:
        return {"point": [a.to_dict() for a in self.point()],
                "f": self.f.to_literal(), "g0": self.g0.to_literal(),
                "g": [g.to_literal() for g in self.gs], "sigma": list(self.sigma)}


def _quotient_coordinate(u: RUR, g: MPoly) -> AlgNum:
    i = u.context.size
    n = i + 2
    # X g0(t) - g(t) = 0 in variables (context, T, X)
    g0 = u.g0.change_nvars(n)
    gg = g.change_nvars(n)
    P = MPoly.var(n, i + 1) * g0 - gg
    roots = roots_over(P, u.context.point + (u.root,), i + 1)
    if len(roots) != 1:
        raise RepresentationError("g0 vanishes at the root")
    return roots[0]


def rur_point(u: RUR, width: Fraction) -> Box:
    """Rational box of the given width around the associated point."""
    if width <= 0:
        raise ValueError("width must be positive")
    if sign_at_point(u.g0, u.context.point + (u.root,)) == 0:
        raise RepresentationError("g0 vanishes at the root")
    return [a.refine(width) for a in u.point()]


# ---------------------------------------------------------------------------
# curve segments


@dataclass(frozen=True)
class Level:
    """Coordinate ``X_var`` is the ``branch``-th real root of ``poly`` over the earlier ones."""

    poly: MPoly
    var: int
    branch: int
    rho: Tuple[int, ...] = ()


@dataclass(frozen=True)
class CurveSegRep:
    """Branch over the open interval ``(left, right)`` of ``X_{i+1}`` above ``ass(context)``."""

    context: TriThomEncoding
    left: AlgNum
    right: AlgNum
    levels: Tuple[Level, ...] = ()

    @property
    def k(self) -> int:
        return self.context.nvars

    @property
    def var(self) -> int:
        return self.context.size

    def is_interval(self) -> bool:
        return not self.levels

    def sample_x(self) -> Fraction:
        from .cad import sample_between
        return sample_between(self.left, self.right)

    def contains_x(self, x: Fraction) -> bool:
        a = AlgNum.rational(x)
        return self.left < a < self.right

    def as_parametrization(self) -> Tuple[MPoly, MPoly, Tuple[MPoly, ...]]:
        """``(f, g0, g)`` in variables ``(X_1..X_{i+1}, T)`` for at most one dependent coordinate."""
        i = self.var
        n = i + 2
        t = MPoly.var(n, i + 1)
        if not self.levels:
            return t, MPoly.const(n, 1), ()
        if len(self.levels) > 1:
            raise RepresentationError("several dependent coordinates have no single-T form here")
        lv = self.levels[0]
        mapping = list(range(self.k))
        f = lv.poly.change_nvars(n, [v if v <= i else i + 1 for v in mapping])
        return f, MPoly.const(n, 1), (t,)

    def to_dict(self) -> dict:
        return {"context": [a.to_dict() for a in self.context.point],
                "var": self.var, "left": self.left.to_dict(), "right": self.right.to_dict(),
                "levels": [{"poly": lv.poly.to_literal(), "var": lv.var, "branch": lv.branch,
                            "rho": list(lv.rho)} for lv in self.levels]}


def curve_point(g: CurveSegRep, x) -> Tuple[AlgNum, ...]:
    """Exact point ``h(x)`` for ``x`` inside the interval."""
    xa = x if isinstance(x, AlgNum) else AlgNum.rational(Fraction(x))
    if not (g.left < xa < g.right):
        raise RepresentationError("parameter outside the curve interval")
    pt = g.context.point + (xa,)
    for lv in g.levels:
        roots = roots_over(lv.poly, pt, lv.var)
        if lv.branch >= len(roots):
            raise RepresentationError("branch index exceeds the number of real roots")
        pt = pt + (roots[lv.branch],)
    return pt


def curve_eval(g: CurveSegRep, x, width: Fraction) -> Box:
    """Rational box of the given width around ``h(x)``; the parameter coordinate is exact."""
    return [a.refine(width) for a in curve_point(g, x)]


def _nearest(cands: Sequence[AlgNum], y: AlgNum, width: Fraction) -> Tuple[int, Fraction, Fraction]:
    """Index of the candidate nearest to ``y``; also the distance bound and the smallest gap."""
    ylo, yhi = y.refine(width)
    best, bestd = -1, None
    for j, c in enumerate(cands):
        clo, chi = c.refine(width)
        d = max(clo - yhi, ylo - chi, Fraction(0))
        dd = max(chi - ylo, yhi - clo)
        if bestd is None or dd < bestd[1]:
            best, bestd = j, (d, dd)
    gaps = []
    for a, b in zip(cands, cands[1:]):
        alo, ahi = a.refine(width)
        blo, bhi = b.refine(width)
        gaps.append(blo - ahi)
    gap = min(gaps) if gaps else Fraction(10 ** 9)
    return best, bestd[1], gap


def curve_limit(g: CurveSegRep, side: str, max_rounds: int = 12) -> Tuple[AlgNum, ...]:
    """Exact limit of ``h(x)`` as ``x`` tends to the left or right end of the interval.

    The limit coordinate at each level is a root of the level polynomial over
    the already-known limit coordinates; the right root is the one that the
    branch approaches as ``x`` moves to the end (stable over two successive
    shrinking offsets, each much closer than the gap between candidates).
    """
    end = g.left if side == "left" else g.right
    other = g.right if side == "left" else g.left
    base = g.context.point + (end,)
    if not g.levels:
        return base
    span_lo, span_hi = (end, other) if side == "left" else (other, end)
    from .cad import separate
    lo_gap, hi_gap = separate(span_lo, span_hi)
    half = (hi_gap - lo_gap) / 4
    if half <= 0:
        half = Fraction(1, 2 ** 20)
    limit = base
    for depth, lv in enumerate(g.levels):
        try:
            cands = roots_over(lv.poly, limit, lv.var)
        except ZeroSpecialization as exc:
            raise RepresentationError("curve polynomial vanishes identically on the limit fiber") from exc
        if not cands:
            raise UnboundedBranch("no real root over the end point; the branch is unbounded")
        if len(cands) == 1:
            limit = limit + (cands[0],)
            continue
        prev = None
        chosen = None
        delta = half
        for _ in range(max_rounds):
            delta /= 8
            x = _approach(end, delta, side)
            pt = curve_point(g, x)
            y = pt[lv.var]
            j, dist, gap = _nearest(cands, y, delta * delta)
            if gap > 0 and dist < gap / 4 and j == prev:
                chosen = j
                break
            prev = j
        if chosen is None:
            if prev is None:
                raise RepresentationError("could not determine the limit branch")
            chosen = prev
        limit = limit + (cands[chosen],)
    return limit


def _approach(end: AlgNum, delta: Fraction, side: str) -> Fraction:
    """A rational at distance at most ``delta`` from ``end`` on the interior side."""
    lo, hi = end.refine(delta / 4)
    if side == "left":
        return simplest_between(hi, hi + delta / 2)
    return simplest_between(lo - delta / 2, lo)


def curve_endpoints(g: CurveSegRep) -> Tuple[RUR, RUR]:
    """Left and right limits of the curve as identity-form representations."""
    return RUR.from_point(curve_limit(g, "left")), RUR.from_point(curve_limit(g, "right"))


def interval_curve(point: Sequence[AlgNum], nvars: int, a: AlgNum, b: AlgNum) -> CurveSegRep:
    """Open segment along ``X_{i+1}`` from ``a`` to ``b`` above a point of R^i."""
    ctx = TriThomEncoding.from_point(point, nvars)
    return CurveSegRep(ctx, a, b, ())


def curve_box_points(g: CurveSegRep, n: int, width: Fraction) -> List[Box]:
    """Boxes around ``n`` evenly spread interior sample points."""
    from .cad import separate
    lo, hi = separate(g.left, g.right)
    if g.left.poly is None:
        lo = g.left.value
    if g.right.poly is None:
        hi = g.right.value
    out = []
    for j in range(1, n + 1):
        x = lo + (hi - lo) * Fraction(j, n + 1)
        out.append(curve_eval(g, x, width))
    return out
