"""Real algebraic numbers, exact sign determination and Thom encodings.

Every coordinate of a point is an :class:`AlgNum`: either a rational or a
pair (irreducible integer polynomial over Q, index of the real root).  The
isolating intervals of all roots of a given minimal polynomial live in a
shared registry and only ever shrink, so answers never depend on how far a
number happens to have been refined.

Signs of polynomials at points are decided by interval evaluation; when
intervals cannot separate the value from zero, an exact test runs a
Euclidean gcd over the number field generated by the other coordinates.
"""
from __future__ import annotations

import threading
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from . import upoly
from .arith import MPoly, NotDivisible, Ordering, der_sequence, divexact, prem, resultant

IntPoly = Tuple[int, ...]


class ZeroSpecialization(ValueError):
    """A polynomial vanishes identically after specializing the context."""


# ---------------------------------------------------------------------------
# algebraic numbers

_lock = threading.RLock()
_registry: Dict[IntPoly, List[list]] = {}


def _register(poly: IntPoly) -> List[list]:
    with _lock:
        slots = _registry.get(poly)
        if slots is None:
            slots = []
            for lo, hi in upoly.isolate(poly):
                slots.append([lo, hi, upoly.sign_at(poly, lo)])
            _registry[poly] = slots
        return slots


class AlgNum:
    """A real algebraic number, canonically keyed."""

    __slots__ = ("poly", "index", "value")

    def __init__(self, poly: Optional[IntPoly], index: int = 0, value: Optional[Fraction] = None):
        self.poly = poly
        self.index = index
        self.value = value

    @classmethod
    def rational(cls, v) -> "AlgNum":
        return cls(None, 0, Fraction(v))

    @classmethod
    def root_of(cls, poly: IntPoly, index: int) -> "AlgNum":
        """The ``index``-th real root of the irreducible polynomial ``poly``."""
        if len(poly) == 2:
            return cls.rational(Fraction(-poly[0], poly[1]))
        _register(poly)
        return cls(poly, index)

    def is_rational(self) -> bool:
        return self.poly is None

    @property
    def key(self):
        return ("q", self.value) if self.poly is None else ("a", self.poly, self.index)

    def __eq__(self, other):
        if isinstance(other, AlgNum):
            return self.key == other.key
        if isinstance(other, (int, Fraction)):
            return self.poly is None and self.value == other
        return NotImplemented

    def __hash__(self):
        return hash(self.key)

    def interval(self) -> Tuple[Fraction, Fraction]:
        if self.poly is None:
            return self.value, self.value
        slot = _registry[self.poly][self.index]
        return slot[0], slot[1]

    def refine(self, width: Fraction) -> Tuple[Fraction, Fraction]:
        """Shrink the isolating interval to at most ``width``."""
        if self.poly is None:
            return self.value, self.value
        with _lock:
            slot = _registry[self.poly][self.index]
            while slot[1] - slot[0] > width:
                slot[0], slot[1], s = upoly.bisect_once(self.poly, slot[0], slot[1], slot[2])
                if s:
                    slot[2] = s
            return slot[0], slot[1]

    def width(self) -> Fraction:
        lo, hi = self.interval()
        return hi - lo

    def compare(self, other: "AlgNum") -> Ordering:
        if self.key == other.key:
            return Ordering.EQ
        if self.poly is None and other.poly is None:
            return Ordering((self.value > other.value) - (self.value < other.value))
        # an irrational lies strictly inside its interval, so touching ends already separate
        while True:
            a_lo, a_hi = self.interval()
            b_lo, b_hi = other.interval()
            if a_hi <= b_lo:
                return Ordering.LT
            if b_hi <= a_lo:
                return Ordering.GT
            w = max(a_hi - a_lo, b_hi - b_lo) / 2
            self.refine(w)
            other.refine(w)

    def __lt__(self, other):
        return self.compare(other) is Ordering.LT

    def __le__(self, other):
        return self.compare(other) is not Ordering.GT

    def __gt__(self, other):
        return self.compare(other) is Ordering.GT

    def __ge__(self, other):
        return self.compare(other) is not Ordering.LT

    def sign(self) -> int:
        return int(self.compare(AlgNum.rational(0)))

    def approx(self, width: Fraction = Fraction(1, 2 ** 53)) -> float:
        lo, hi = self.refine(width)
        return float((lo + hi) / 2)

    def midpoint(self, width: Fraction) -> Fraction:
        lo, hi = self.refine(width)
        return (lo + hi) / 2

    def decimal(self, digits: int = 12) -> str:
        return f"{self.approx(Fraction(1, 10 ** (digits + 2))):.{digits}g}"

    def __repr__(self):
        if self.poly is None:
            return f"AlgNum({self.value})"
        return f"AlgNum(root {self.index} of {list(self.poly)} ~ {self.decimal(8)})"

    def canonical_interval(self, width: Fraction = Fraction(1, 2 ** 40)) -> Tuple[Fraction, Fraction]:
        """Interval obtained by bisecting the fresh isolation, independent of earlier refinements."""
        if self.poly is None:
            return self.value, self.value
        lo, hi = upoly.isolate(self.poly)[self.index]
        s = upoly.sign_at(self.poly, lo)
        while hi - lo > width:
            lo, hi, t = upoly.bisect_once(self.poly, lo, hi, s)
            if t:
                s = t
        return lo, hi

    def to_dict(self) -> dict:
        if self.poly is None:
            return {"rational": str(self.value)}
        lo, hi = self.canonical_interval()
        return {"poly": [str(c) for c in self.poly], "index": self.index,
                "interval": [str(lo), str(hi)], "approx": f"{float((lo + hi) / 2):.12g}"}


def real_roots(coeffs: Sequence) -> List[AlgNum]:
    """Sorted distinct real roots of a univariate polynomial (ascending coefficients)."""
    c = upoly.trim(coeffs)
    if not c:
        raise ZeroSpecialization("zero polynomial has no isolated roots")
    out: List[AlgNum] = []
    for f in upoly.factor_squarefree(c):
        n = len(_register(f))
        out.extend(AlgNum.root_of(f, i) for i in range(n))
    return sort_numbers(out)


def sort_numbers(nums: Sequence[AlgNum]) -> List[AlgNum]:
    import functools
    uniq = list({n.key: n for n in nums}.values())
    return sorted(uniq, key=functools.cmp_to_key(lambda a, b: int(a.compare(b))))


def univariate_coeffs(p: MPoly, var: int) -> List[Fraction]:
    others = [v for v in p.variables() if v != var]
    if others:
        raise ValueError("polynomial is not univariate in the given variable")
    return [c.constant_value() for c in p.coeffs(var)]


# ---------------------------------------------------------------------------
# interval evaluation


def _ipow(lo: Fraction, hi: Fraction, k: int) -> Tuple[Fraction, Fraction]:
    if k == 0:
        return Fraction(1), Fraction(1)
    a, b = lo ** k, hi ** k
    if k % 2 == 0 and lo < 0 < hi:
        return Fraction(0), max(a, b)
    return (a, b) if a <= b else (b, a)


def interval_eval(p: MPoly, box: Sequence[Tuple[Fraction, Fraction]]) -> Tuple[Fraction, Fraction]:
    """Enclosure of ``p`` over a rational box (one interval per variable)."""
    cache: Dict[Tuple[int, int], Tuple[Fraction, Fraction]] = {}
    tlo = thi = Fraction(0)
    for e, c in p.terms.items():
        lo = hi = Fraction(c)
        for v, k in enumerate(e):
            if not k:
                continue
            key = (v, k)
            pw = cache.get(key)
            if pw is None:
                pw = cache[key] = _ipow(box[v][0], box[v][1], k)
            cands = (lo * pw[0], lo * pw[1], hi * pw[0], hi * pw[1])
            lo, hi = min(cands), max(cands)
        tlo += lo
        thi += hi
    return tlo, thi


def point_box(point: Sequence[AlgNum], width: Optional[Fraction] = None) -> List[Tuple[Fraction, Fraction]]:
    if width is not None:
        return [a.refine(width) for a in point]
    return [a.interval() for a in point]


# ---------------------------------------------------------------------------
# exact sign determination

_zero_cache: Dict[tuple, bool] = {}
_SEPARATION_WIDTHS = [Fraction(1, 2 ** k) for k in (4, 10, 20, 32)]


def _split(Q: MPoly, point: Sequence[AlgNum]) -> Tuple[MPoly, Dict[int, AlgNum]]:
    used = Q.variables()
    if used and used[-1] >= len(point):
        raise ValueError(f"polynomial uses X{used[-1] + 1} beyond the given point")
    alg: Dict[int, AlgNum] = {}
    for v in used:
        a = point[v]
        if a.poly is None:
            Q = Q.subs(v, a.value)
        else:
            alg[v] = a
    return Q, {v: a for v, a in alg.items() if Q.degree(v) > 0}


def _box_sign(Q: MPoly, alg: Dict[int, AlgNum], width: Optional[Fraction]) -> Optional[int]:
    box = [(Fraction(0), Fraction(0))] * Q.nvars
    for v, a in alg.items():
        box[v] = a.refine(width) if width is not None else a.interval()
    lo, hi = interval_eval(Q, box)
    if lo > 0:
        return 1
    if hi < 0:
        return -1
    return None


def sign_at_point(Q: MPoly, point: Sequence[AlgNum]) -> int:
    """Exact sign of ``Q`` at a point given by its first ``len(point)`` coordinates."""
    Q, alg = _split(Q, point)
    return _sign(Q, alg)


def _sign(Q: MPoly, alg: Dict[int, AlgNum]) -> int:
    if Q.is_constant():
        c = Q.constant_value()
        return (c > 0) - (c < 0)
    s = _box_sign(Q, alg, None)
    if s is not None:
        return s
    for w in _SEPARATION_WIDTHS:
        s = _box_sign(Q, alg, w)
        if s is not None:
            return s
    if _is_zero(Q, alg):
        return 0
    w = _SEPARATION_WIDTHS[-1]
    while True:
        w /= 2 ** 16
        s = _box_sign(Q, alg, w)
        if s is not None:
            return s


def is_zero_at(Q: MPoly, point: Sequence[AlgNum]) -> bool:
    return sign_at_point(Q, point) == 0


def _minpoly(a: AlgNum, var: int, nvars: int) -> MPoly:
    return MPoly.univariate(a.poly, nvars, var)


def _reduce(P: MPoly, alg: Dict[int, AlgNum]) -> MPoly:
    """Reduce the degree in each algebraic variable below its minimal polynomial's."""
    for v, a in alg.items():
        d = len(a.poly) - 1
        if P.degree(v) < d:
            continue
        m = _minpoly(a, v, P.nvars) * Fraction(1, a.poly[-1])
        x = MPoly.var(P.nvars, v)
        while P.degree(v) >= d:
            top = P.degree(v)
            P = P - P.lc(v) * m * (x ** (top - d))
    return P


def _trim_lc(B: MPoly, v: int, alg: Dict[int, AlgNum]) -> MPoly:
    # drop leading coefficients in X_v that vanish at the point
    while B and B.degree(v) > 0:
        lc = B.lc(v)
        if not _is_zero(lc, {u: a for u, a in alg.items() if lc.degree(u) > 0}):
            return B
        B = B - lc * MPoly.var(B.nvars, v, B.degree(v))
    return B


def _is_zero(Q: MPoly, alg: Dict[int, AlgNum]) -> bool:
    if Q.is_zero():
        return True
    alg = {u: a for u, a in alg.items() if Q.degree(u) > 0}
    if not alg:
        return Q.is_zero()
    key = (Q, tuple(sorted((u, a.key) for u, a in alg.items())))
    hit = _zero_cache.get(key)
    if hit is not None:
        return hit
    if _box_sign(Q, alg, None) is not None:
        _zero_cache[key] = False
        return False
    v = max(alg)
    av = alg[v]
    others = {u: a for u, a in alg.items() if u != v}
    A = _minpoly(av, v, Q.nvars)
    B = _reduce(Q, alg)
    # Euclid over the field generated by the other coordinates
    while True:
        B = _reduce(_trim_lc(B, v, others), others)
        if B.is_zero():
            G = A
            break
        if B.degree(v) <= 0:
            result = _is_zero(B, others)
            _zero_cache[key] = result
            return result
        R = prem(A, B, v)
        A, B = B, _reduce(R, others)
        if B:
            B = B.integer_primitive()
    lo, hi = av.interval()
    s_lo = _sign(G.subs(v, lo), others)
    s_hi = _sign(G.subs(v, hi), others)
    result = s_lo * s_hi < 0
    _zero_cache[key] = result
    return result


# ---------------------------------------------------------------------------
# roots over an algebraic point


def _strip_factor(N: MPoly, m: MPoly) -> MPoly:
    while True:
        try:
            N = divexact(N, m)
        except NotDivisible:
            return N


def roots_over(P: MPoly, point: Sequence[AlgNum], var: Optional[int] = None) -> List[AlgNum]:
    """Sorted distinct real roots of ``P(point, X_var)``; ``var`` defaults to ``len(point)``."""
    if var is None:
        var = len(point)
    Q = P
    for v in P.variables():
        if v != var and v < len(point) and point[v].poly is None:
            Q = Q.subs(v, point[v].value)
        elif v != var and v >= len(point):
            raise ValueError(f"polynomial uses X{v + 1} beyond the given point")
    alg = {v: point[v] for v in Q.variables() if v != var}
    Q = _trim_lc(Q, var, alg)
    if Q.is_zero() or (Q.degree(var) <= 0 and _is_zero(Q, alg)):
        raise ZeroSpecialization("polynomial vanishes identically over the point")
    if Q.degree(var) <= 0:
        return []
    N = _reduce(Q, alg)
    for v in sorted(alg, reverse=True):
        m = _minpoly(alg[v], v, N.nvars)
        N = _strip_factor(N, m)
        N = resultant(m, N, v) if N.degree(v) > 0 else N
        if N.is_zero():
            raise ZeroSpecialization("norm vanished identically")
    out = []
    for b in real_roots(univariate_coeffs(N, var)):
        if b.poly is None:
            s = _sign(Q.subs(var, b.value), alg)
        else:
            s = _sign(Q, {**alg, var: b})
        if s == 0:
            out.append(b)
    return out


# ---------------------------------------------------------------------------
# Thom encodings


@dataclass(frozen=True)
class ThomEncoding:
    """A real root of ``poly`` in ``X_var`` over a context, fixed by derivative signs."""

    poly: MPoly
    var: int
    signs: Tuple[int, ...]
    root: AlgNum = field(compare=False)

    def derivatives(self) -> List[MPoly]:
        return der_sequence(self.poly, self.var)

    def witness(self, width: Optional[Fraction] = None) -> Tuple[Fraction, Fraction]:
        return self.root.refine(width) if width is not None else self.root.interval()

    def witness_str(self) -> Tuple[str, str]:
        lo, hi = self.witness()
        return (str(lo), str(hi))


@dataclass(frozen=True)
class TriThomEncoding:
    """A point of R^i given coordinate by coordinate by Thom encodings."""

    nvars: int
    polys: Tuple[MPoly, ...] = ()
    signs: Tuple[Tuple[int, ...], ...] = ()
    point: Tuple[AlgNum, ...] = field(default=(), compare=False)

    @property
    def size(self) -> int:
        return len(self.polys)

    @classmethod
    def empty(cls, nvars: int) -> "TriThomEncoding":
        return cls(nvars)

    def extend(self, tau: ThomEncoding) -> "TriThomEncoding":
        if tau.var != self.size:
            raise ValueError("encoding does not fix the next coordinate")
        return TriThomEncoding(self.nvars, self.polys + (tau.poly,), self.signs + (tau.signs,),
                               self.point + (tau.root,))

    @classmethod
    def from_point(cls, point: Sequence[AlgNum], nvars: int) -> "TriThomEncoding":
        """Encode a point using each coordinate's own defining polynomial."""
        T = cls.empty(nvars)
        for v, a in enumerate(point):
            if a.poly is None:
                f = MPoly.var(nvars, v) - a.value
            else:
                f = MPoly.univariate(a.poly, nvars, v)
            T = T.extend(encode_root(f, T, a))
        return T

    def degree(self) -> int:
        return max((f.degree(j) for j, f in enumerate(self.polys)), default=0)

    def box(self, width: Optional[Fraction] = None):
        return point_box(self.point, width)


def encode_root(P: MPoly, context: TriThomEncoding, root: AlgNum) -> ThomEncoding:
    var = context.size
    pt = context.point + (root,)
    signs = tuple(sign_at_point(D, pt) for D in der_sequence(P, var))
    if signs[0] != 0:
        raise ValueError("the given number is not a root of the polynomial")
    return ThomEncoding(P, var, signs, root)


def isolate_with_thom(P: MPoly, context: TriThomEncoding) -> List[ThomEncoding]:
    """Thom encodings of the distinct real roots of ``P(ass(context), X_{i+1})``, sorted."""
    var = context.size
    roots = roots_over(P, context.point, var)
    return [encode_root(P, context, r) for r in roots]


def thom_compare(t1: ThomEncoding, t2: ThomEncoding, context: TriThomEncoding | None = None) -> Ordering:
    return t1.root.compare(t2.root)


def sign_at(Q: MPoly, tau: ThomEncoding, context: TriThomEncoding) -> int:
    """Sign of ``Q`` at ``(ass(context), ass(tau))``."""
    return sign_at_point(Q, context.point + (tau.root,))


def weak_thom_formula(T: TriThomEncoding):
    """Closed formula whose realization in R^i is exactly the associated point."""
    from .formulas import Atom, And, weak_atom
    atoms: List[Atom] = []
    for j, (f, sv) in enumerate(zip(T.polys, T.signs)):
        for D, s in zip(der_sequence(f, j), sv):
            if D.is_constant():
                continue
            atoms.append(weak_atom(D, s))
    return And(tuple(atoms))
