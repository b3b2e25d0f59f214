"""Dense univariate integer polynomials: Descartes isolation, refinement, factoring.

Coefficient lists are ascending (``c[i]`` multiplies ``x**i``).
"""
from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import gcd, lcm
from typing import List, Sequence, Tuple

from sympy.polys.domains import ZZ
from sympy.polys.factortools import dup_factor_list

IntPoly = Tuple[int, ...]


def trim(c: Sequence) -> list:
    c = list(c)
    while c and not c[-1]:
        c.pop()
    return c


def to_int_primitive(coeffs: Sequence) -> IntPoly:
    """Clear denominators, remove the integer content, make the leading coefficient positive."""
    c = [Fraction(x) for x in trim(coeffs)]
    if not c:
        return ()
    den = reduce(lcm, (x.denominator for x in c), 1)
    ints = [int(x * den) for x in c]
    g = reduce(gcd, (abs(x) for x in ints), 0)
    s = 1 if ints[-1] > 0 else -1
    return tuple(s * x // g for x in ints)


def degree(c: Sequence) -> int:
    return len(trim(c)) - 1


def evaluate(c: Sequence, x: Fraction) -> Fraction:
    acc = Fraction(0)
    for a in reversed(c):
        acc = acc * x + a
    return acc


def sign_at(c: Sequence[int], x: Fraction) -> int:
    """Exact sign of an integer polynomial at a rational point."""
    p, q = x.numerator, x.denominator
    n = len(c) - 1
    acc = 0
    qp = 1
    # sum c_i p^i q^(n-i), built from the top
    for a in reversed(c):
        acc = acc * p + a * qp
        qp *= q
    return (acc > 0) - (acc < 0)


def interval_eval(c: Sequence, lo: Fraction, hi: Fraction) -> Tuple[Fraction, Fraction]:
    """Natural interval extension of Horner's scheme."""
    a = b = Fraction(0)
    for k in reversed(c):
        cands = (a * lo, a * hi, b * lo, b * hi)
        a, b = min(cands) + k, max(cands) + k
    return a, b


def derivative(c: Sequence) -> list:
    return [i * c[i] for i in range(1, len(c))]


def divmod_q(a: Sequence, b: Sequence) -> Tuple[list, list]:
    a = [Fraction(x) for x in trim(a)]
    b = [Fraction(x) for x in trim(b)]
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    lb = b[-1]
    while len(a) >= len(b) and a:
        f = a[-1] / lb
        d = len(a) - len(b)
        q[d] = f
        for i, bc in enumerate(b):
            a[i + d] -= f * bc
        a = trim(a)
    return q, a


def gcd_q(a: Sequence, b: Sequence) -> IntPoly:
    a, b = trim(a), trim(b)
    while b:
        _, r = divmod_q(a, b)
        a, b = b, to_int_primitive(r)
    return to_int_primitive(a)


def squarefree(c: Sequence) -> IntPoly:
    c = to_int_primitive(c)
    if len(c) <= 2:
        return c
    g = gcd_q(c, derivative(c))
    if len(g) <= 1:
        return c
    q, r = divmod_q(c, g)
    assert not r
    return to_int_primitive(q)


def factor_squarefree(c: Sequence) -> List[IntPoly]:
    """Distinct irreducible factors over Q of positive degree."""
    c = to_int_primitive(c)
    if len(c) <= 1:
        return []
    _, facs = dup_factor_list([ZZ(x) for x in reversed(c)], ZZ)
    out = []
    for f, _ in facs:
        p = to_int_primitive([int(x) for x in reversed(f)])
        if len(p) > 1:
            out.append(p)
    return sorted(set(out))


def cauchy_upper_bound(c: Sequence[int]) -> int:
    """Power of two strictly exceeding the modulus of every root."""
    lead = abs(c[-1])
    m = max((Fraction(abs(x), lead) for x in c[:-1]), default=Fraction(0))
    bound = 1 + m
    b = 1
    while b <= bound:
        b *= 2
    return b


def _taylor_shift1(c: List[int]) -> List[int]:
    c = list(c)
    n = len(c)
    for i in range(n - 1):
        for j in range(n - 2, i - 1, -1):
            c[j] += c[j + 1]
    return c


def _variations(c: Sequence[int]) -> int:
    v, last = 0, 0
    for x in c:
        if x:
            if last and (x > 0) != (last > 0):
                v += 1
            last = x
    return v


def _count01(q: List[int]) -> int:
    """Descartes bound for roots of ``q`` in (0, 1)."""
    return _variations(_taylor_shift1(list(reversed(q))))


def _isolate01(q: List[int], a: Fraction, b: Fraction, out: list) -> None:
    # roots of q in (0,1) correspond to roots a + (b-a) t of the original
    v = _count01(q)
    if v == 0:
        return
    if v == 1:
        out.append((a, b))
        return
    n = len(q) - 1
    mid = (a + b) / 2
    # left half: q_l(t) = 2^n q(t/2)
    ql = [x << (n - i) for i, x in enumerate(q)]
    if sum(ql) == 0:
        out.append((mid, mid))
    _isolate01(ql, a, mid, out)
    qr = _taylor_shift1(ql)
    if qr[0] == 0:  # root exactly at the midpoint, deflate
        qr = qr[1:]
    _isolate01(qr, mid, b, out)


def isolate(c: Sequence) -> List[Tuple[Fraction, Fraction]]:
    """Isolating intervals for the distinct real roots, sorted.

    Each item is ``(lo, hi)`` with either ``lo == hi`` (an exact rational
    root) or ``lo < hi`` with exactly one root strictly inside and nonzero
    values at both ends.
    """
    p = list(squarefree(c))
    if len(p) <= 1:
        return []
    full = p
    out: List[Tuple[Fraction, Fraction]] = []
    if p[0] == 0:
        out.append((Fraction(0), Fraction(0)))
        p = p[1:]
        if len(p) <= 1:
            return out
    B = cauchy_upper_bound(p)
    pos = [x * B ** i for i, x in enumerate(p)]
    neg = [x * (-B) ** i for i, x in enumerate(p)]
    got: list = []
    _isolate01(pos, Fraction(0), Fraction(B), got)
    out.extend(got)
    got = []
    _isolate01(neg, Fraction(0), Fraction(B), got)
    out.extend((-hi, -lo) for lo, hi in got)
    out = [_clear_endpoints(full, lo, hi) if lo != hi else (lo, hi) for lo, hi in out]
    out.sort(key=lambda t: (t[0], t[1]))
    return out


def _compose_affine(c: Sequence, a: Fraction, h: Fraction) -> List[Fraction]:
    """Coefficients of ``c(a + h t)``."""
    out: List[Fraction] = []
    for k in reversed(c):
        # out = out * (a + h t) + k
        new = [Fraction(0)] * (len(out) + 1)
        for i, x in enumerate(out):
            new[i] += x * a
            new[i + 1] += x * h
        new[0] += k
        out = new
    return trim(out)


def _odd_count(c: Sequence, a: Fraction, b: Fraction) -> bool:
    """Parity of the number of roots in (a, b) (Descartes' rule of signs)."""
    q = to_int_primitive(_compose_affine(c, a, b - a))
    return _count01(list(q)) % 2 == 1


def _clear_endpoints(c: Sequence[int], lo: Fraction, hi: Fraction) -> Tuple[Fraction, Fraction]:
    # the interval holds exactly one root strictly inside; push rational roots off its ends
    while sign_at(c, lo) == 0 or sign_at(c, hi) == 0:
        mid = (lo + hi) / 2
        if sign_at(c, mid) == 0:
            return mid, mid
        if _odd_count(c, lo, mid):
            hi = mid
        else:
            lo = mid
    return lo, hi


def bisect_once(c: Sequence[int], lo: Fraction, hi: Fraction, slo: int) -> Tuple[Fraction, Fraction, int]:
    """Halve an isolating interval; ``slo`` is the sign at ``lo``."""
    mid = (lo + hi) / 2
    s = sign_at(c, mid)
    if s == 0:
        return mid, mid, 0
    if s == slo:
        return mid, hi, s
    return lo, mid, slo
