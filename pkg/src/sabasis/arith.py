"""Exact rational scalars, sparse multivariate polynomials and the ring D[eps].

Rationals are :class:`fractions.Fraction`.  A :class:`MPoly` carries a fixed
number of variables; substitution keeps the variable count and simply
removes the substituted variable from every exponent vector.
"""
from __future__ import annotations

import math
from fractions import Fraction
from enum import IntEnum
from functools import reduce
from typing import Dict, Iterable, List, Sequence, Tuple, Union

Rat = Fraction
Exp = Tuple[int, ...]
Scalar = Union[int, Fraction]


class VariableCountError(ValueError):
    pass


class Ordering(IntEnum):
    LT = -1
    EQ = 0
    GT = 1


def as_rat(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x.strip())
    return Fraction(x)


class MPoly:
    """Sparse polynomial with rational coefficients in ``nvars`` variables."""

    __slots__ = ("nvars", "terms", "_hash")

    def __init__(self, nvars: int, terms: Dict[Exp, Fraction] | None = None, *, _clean=False):
        self.nvars = nvars
        if terms is None:
            terms = {}
        if not _clean:
            cleaned = {}
            for e, c in terms.items():
                c = as_rat(c)
                if c:
                    e = tuple(e)
                    if len(e) != nvars:
                        raise VariableCountError(f"exponent {e} has wrong length for {nvars} variables")
                    cleaned[e] = c
            terms = cleaned
        self.terms = terms
        self._hash = None

    # -- constructors -----------------------------------------------------
    @classmethod
    def const(cls, nvars: int, c: Scalar) -> "MPoly":
        c = as_rat(c)
        return cls(nvars, {(0,) * nvars: c} if c else {}, _clean=True)

    @classmethod
    def var(cls, nvars: int, i: int, power: int = 1) -> "MPoly":
        e = [0] * nvars
        e[i] = power
        return cls(nvars, {tuple(e): Fraction(1)}, _clean=True)

    @classmethod
    def from_coeffs(cls, coeffs: Sequence["MPoly"], var: int, nvars: int | None = None) -> "MPoly":
        """Inverse of :meth:`coeffs`: sum of ``coeffs[d] * X_var**d``."""
        if nvars is None:
            nvars = coeffs[0].nvars if coeffs else 0
        terms: Dict[Exp, Fraction] = {}
        for d, c in enumerate(coeffs):
            for e, v in c.terms.items():
                e2 = list(e)
                e2[var] += d
                terms[tuple(e2)] = v
        return cls(nvars, terms, _clean=True)

    @classmethod
    def univariate(cls, coeffs: Sequence[Scalar], nvars: int = 1, var: int = 0) -> "MPoly":
        """Build from ascending coefficients in ``X_var``."""
        terms = {}
        for d, c in enumerate(coeffs):
            c = as_rat(c)
            if c:
                e = [0] * nvars
                e[var] = d
                terms[tuple(e)] = c
        return cls(nvars, terms, _clean=True)

    # -- basic protocol ---------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, MPoly):
            return self.nvars == other.nvars and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self.is_constant() and self.constant_value() == other
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self.terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        return f"MPoly({self.nvars}, {self.to_str()})"

    def to_str(self, names: Sequence[str] | None = None) -> str:
        if not self.terms:
            return "0"
        if names is None:
            names = [f"X{i + 1}" for i in range(self.nvars)]
        parts = []
        for e in sorted(self.terms, reverse=True):
            c = self.terms[e]
            mon = "*".join(f"{n}^{k}" if k > 1 else n for n, k in zip(names, e) if k)
            if not mon:
                parts.append(str(c))
            elif c == 1:
                parts.append(mon)
            elif c == -1:
                parts.append("-" + mon)
            else:
                parts.append(f"{c}*{mon}")
        return " + ".join(parts).replace("+ -", "- ")

    # -- arithmetic -------------------------------------------------------
    def _check(self, other: "MPoly"):
        if self.nvars != other.nvars:
            raise VariableCountError(f"variable count mismatch: {self.nvars} vs {other.nvars}")

    def _coerce(self, other) -> "MPoly":
        if isinstance(other, MPoly):
            self._check(other)
            return other
        return MPoly.const(self.nvars, other)

    def __add__(self, other):
        other = self._coerce(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            v = terms.get(e, 0) + c
            if v:
                terms[e] = v
            else:
                terms.pop(e, None)
        return MPoly(self.nvars, terms, _clean=True)

    __radd__ = __add__

    def __neg__(self):
        return MPoly(self.nvars, {e: -c for e, c in self.terms.items()}, _clean=True)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, MPoly):
            c = as_rat(other)
            if not c:
                return MPoly(self.nvars)
            return MPoly(self.nvars, {e: v * c for e, v in self.terms.items()}, _clean=True)
        self._check(other)
        if not self.terms or not other.terms:
            return MPoly(self.nvars)
        terms: Dict[Exp, Fraction] = {}
        get = terms.get
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                terms[e] = get(e, 0) + c1 * c2
        return MPoly(self.nvars, {e: c for e, c in terms.items() if c}, _clean=True)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        result = MPoly.const(self.nvars, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    # -- queries ----------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and not any(next(iter(self.terms))))

    def constant_value(self) -> Fraction:
        return self.terms.get((0,) * self.nvars, Fraction(0))

    def degree(self, var: int | None = None) -> int:
        """Degree in ``X_var`` (total degree if ``var`` is None); -1 for zero."""
        if not self.terms:
            return -1
        if var is None:
            return max(sum(e) for e in self.terms)
        return max(e[var] for e in self.terms)

    def variables(self) -> List[int]:
        used = set()
        for e in self.terms:
            used.update(i for i, k in enumerate(e) if k)
        return sorted(used)

    def main_var(self) -> int:
        vs = self.variables()
        return vs[-1] if vs else -1

    def coeffs(self, var: int) -> List["MPoly"]:
        """Ascending coefficients with respect to ``X_var`` (free of ``X_var``)."""
        d = self.degree(var)
        if d < 0:
            return []
        buckets: List[Dict[Exp, Fraction]] = [{} for _ in range(d + 1)]
        for e, c in self.terms.items():
            k = e[var]
            e2 = e[:var] + (0,) + e[var + 1:]
            buckets[k][e2] = c
        return [MPoly(self.nvars, b, _clean=True) for b in buckets]

    def lc(self, var: int) -> "MPoly":
        cs = self.coeffs(var)
        return cs[-1] if cs else MPoly(self.nvars)

    def leading_term(self) -> Tuple[Exp, Fraction]:
        e = max(self.terms)
        return e, self.terms[e]

    # -- calculus and substitution ---------------------------------------
    def deriv(self, var: int, times: int = 1) -> "MPoly":
        p = self
        for _ in range(times):
            terms = {}
            for e, c in p.terms.items():
                k = e[var]
                if k:
                    e2 = e[:var] + (k - 1,) + e[var + 1:]
                    terms[e2] = c * k
            p = MPoly(self.nvars, terms, _clean=True)
        return p

    def subs(self, var: int, value) -> "MPoly":
        """Substitute ``X_var := value`` (a rational or an MPoly)."""
        if isinstance(value, MPoly):
            self._check(value)
            cs = self.coeffs(var)
            result = MPoly(self.nvars)
            for c in reversed(cs):
                result = result * value + c
            return result
        value = as_rat(value)
        terms: Dict[Exp, Fraction] = {}
        powers: Dict[int, Fraction] = {}
        for e, c in self.terms.items():
            k = e[var]
            if k not in powers:
                powers[k] = value ** k
            v = c * powers[k]
            if v:
                e2 = e[:var] + (0,) + e[var + 1:]
                terms[e2] = terms.get(e2, 0) + v
        return MPoly(self.nvars, {e: c for e, c in terms.items() if c}, _clean=True)

    def subs_many(self, values: Dict[int, Scalar]) -> "MPoly":
        p = self
        for var, v in values.items():
            p = p.subs(var, v)
        return p

    def eval(self, point: Sequence[Scalar]) -> Fraction:
        if len(point) != self.nvars:
            raise VariableCountError("dimension mismatch in eval")
        pt = [as_rat(x) for x in point]
        total = Fraction(0)
        for e, c in self.terms.items():
            t = c
            for x, k in zip(pt, e):
                if k:
                    t *= x ** k
            total += t
        return total

    def change_nvars(self, nvars: int, mapping: Sequence[int] | None = None) -> "MPoly":
        """Re-embed into ``nvars`` variables; old variable i goes to ``mapping[i]``."""
        if mapping is None:
            mapping = list(range(self.nvars))
        terms = {}
        for e, c in self.terms.items():
            e2 = [0] * nvars
            for i, k in enumerate(e):
                if k:
                    e2[mapping[i]] += k
            terms[tuple(e2)] = c
        return MPoly(nvars, terms, _clean=True)

    # -- normalisation ----------------------------------------------------
    def monic(self) -> "MPoly":
        """Scale so the lexicographically leading coefficient is 1."""
        if not self.terms:
            return self
        _, c = self.leading_term()
        return self * (1 / c)

    def integer_primitive(self) -> "MPoly":
        """Positive rational multiple with coprime integer coefficients and positive lead."""
        if not self.terms:
            return self
        from math import gcd, lcm
        den = reduce(lcm, (c.denominator for c in self.terms.values()), 1)
        nums = [int(c * den) for c in self.terms.values()]
        g = reduce(gcd, (abs(n) for n in nums), 0)
        _, lead = self.leading_term()
        s = den if lead > 0 else -den
        return self * Fraction(s, g)

    def to_literal(self) -> list:
        return [[list(e), str(c)] for e, c in sorted(self.terms.items())]

    @classmethod
    def from_literal(cls, nvars: int, lit: Iterable) -> "MPoly":
        terms: Dict[Exp, Fraction] = {}
        for item in lit:
            e, c = item
            if not isinstance(e, (list, tuple)) or len(e) != nvars:
                raise ValueError(f"malformed exponent vector {e!r}")
            if any((not isinstance(k, int)) or k < 0 for k in e):
                raise ValueError(f"malformed exponent vector {e!r}")
            e = tuple(e)
            terms[e] = terms.get(e, 0) + as_rat(c)
        return cls(nvars, terms)


# ---------------------------------------------------------------------------
# division, gcd, resultants


class NotDivisible(ArithmeticError):
    pass


def divexact(a: MPoly, b: MPoly) -> MPoly:
    """Exact quotient ``a / b``; raises :class:`NotDivisible` otherwise."""
    if b.is_zero():
        raise ZeroDivisionError("division by zero polynomial")
    if b.is_constant():
        return a * (1 / b.constant_value())
    rem = dict(a.terms)
    q: Dict[Exp, Fraction] = {}
    be, bc = b.leading_term()
    bterms = list(b.terms.items())
    while rem:
        e = max(rem)
        c = rem[e]
        d = tuple(x - y for x, y in zip(e, be))
        if any(k < 0 for k in d):
            raise NotDivisible("not an exact division")
        f = c / bc
        q[d] = f
        for e2, c2 in bterms:
            t = tuple(x + y for x, y in zip(e2, d))
            v = rem.get(t, 0) - f * c2
            if v:
                rem[t] = v
            else:
                rem.pop(t, None)
    return MPoly(a.nvars, q, _clean=True)


def prem(a: MPoly, b: MPoly, var: int) -> MPoly:
    """Pseudo-remainder of ``a`` by ``b`` in ``X_var``."""
    db = b.degree(var)
    if db < 0:
        raise ZeroDivisionError("pseudo-division by zero")
    lb = b.lc(var)
    r = a
    da = r.degree(var)
    x = MPoly.var(a.nvars, var)
    e = max(da - db + 1, 0)
    while r and r.degree(var) >= db:
        dr = r.degree(var)
        lr = r.lc(var)
        r = r * lb - lr * b * (x ** (dr - db))
        e -= 1
    if e > 0:
        r = r * (lb ** e)
    return r


def content(p: MPoly, var: int) -> MPoly:
    cs = [c for c in p.coeffs(var) if c]
    if not cs:
        return MPoly(p.nvars)
    return reduce(gcd, cs)


def primitive(p: MPoly, var: int) -> MPoly:
    if p.is_zero():
        return p
    c = content(p, var)
    return divexact(p, c)


def gcd(a: MPoly, b: MPoly) -> MPoly:
    """Greatest common divisor over Q, normalised to lex-leading coefficient 1."""
    a._check(b)
    if a.is_zero():
        return b.monic()
    if b.is_zero():
        return a.monic()
    if a.is_constant() or b.is_constant():
        return MPoly.const(a.nvars, 1)
    va, vb = a.main_var(), b.main_var()
    v = max(va, vb)
    if a.degree(v) <= 0:
        return gcd(a, content(b, v))
    if b.degree(v) <= 0:
        return gcd(content(a, v), b)
    ca, cb = content(a, v), content(b, v)
    c = gcd(ca, cb)
    p, q = divexact(a, ca), divexact(b, cb)
    if p.degree(v) < q.degree(v):
        p, q = q, p
    while q and q.degree(v) > 0:
        r = prem(p, q, v)
        p = q
        q = primitive(r, v).integer_primitive() if r else r
    if q:  # remainder became a nonzero constant in v: coprime in v
        g = MPoly.const(a.nvars, 1)
    else:
        g = primitive(p, v)
    return (c * g).monic()


def squarefree_part(p: MPoly, var: int) -> MPoly:
    """Squarefree part with respect to ``X_var`` (content kept as is)."""
    if p.degree(var) <= 0:
        return p
    g = gcd(p, p.deriv(var))
    if g.degree(var) <= 0:
        return p
    return divexact(p, g)


def _bareiss_det(m: list, zero, one, div):
    """Fraction-free determinant over any exact ring given ``div`` for exact division."""
    n = len(m)
    if n == 0:
        return one
    m = [row[:] for row in m]
    sign = 1
    prev = one
    for k in range(n - 1):
        if not m[k][k]:
            for r in range(k + 1, n):
                if m[r][k]:
                    m[k], m[r] = m[r], m[k]
                    sign = -sign
                    break
            else:
                return zero
        piv = m[k][k]
        for i in range(k + 1, n):
            mik = m[i][k]
            for j in range(k + 1, n):
                num = piv * m[i][j] - mik * m[k][j]
                m[i][j] = div(num, prev) if num else num
            m[i][k] = zero
        prev = piv
    det = m[n - 1][n - 1]
    return det if sign > 0 else -det


_rings: Dict[int, object] = {}


def _int_ring(nvars: int):
    R = _rings.get(nvars)
    if R is None:
        from sympy.polys.domains import ZZ
        from sympy.polys.orderings import lex
        from sympy.polys.rings import ring
        R = _rings[nvars] = ring(",".join(f"x{i}" for i in range(nvars)), ZZ, lex)[0]
    return R


def _scale_to_integers(p: "MPoly") -> Tuple["MPoly", int]:
    den = 1
    for c in p.terms.values():
        den = den * c.denominator // math.gcd(den, c.denominator)
    return p * den, den


def sylvester_matrix(p: MPoly, q: MPoly, var: int) -> List[List[MPoly]]:
    """Sylvester matrix with rows of ``p`` on top, coefficients in ascending order."""
    pc, qc = p.coeffs(var), q.coeffs(var)
    m, n = len(pc) - 1, len(qc) - 1
    size = m + n
    zero = MPoly(p.nvars)
    rows = []
    for i in range(n):
        row = [zero] * size
        for d, c in enumerate(pc):
            row[i + d] = c
        rows.append(row)
    for i in range(m):
        row = [zero] * size
        for d, c in enumerate(qc):
            row[i + d] = c
        rows.append(row)
    return rows


def resultant(p: MPoly, q: MPoly, var: int) -> MPoly:
    """Sylvester resultant with respect to ``X_var`` (fraction-free Bareiss)."""
    p._check(q)
    if p.is_zero() or q.is_zero():
        return MPoly(p.nvars)
    dp, dq = p.degree(var), q.degree(var)
    if dp <= 0 and dq <= 0:
        raise ValueError("resultant: both polynomials are constant in the variable")
    if dp == 0:
        return p ** dq
    if dq == 0:
        return q ** dp
    # Bareiss on integer polynomials; the rational scaling is undone at the end
    pi, dp_den = _scale_to_integers(p)
    qi, dq_den = _scale_to_integers(q)
    n = p.nvars
    R = _int_ring(n)

    def conv(c: MPoly):
        return R.from_dict({e: int(v) for e, v in c.terms.items()}) if c.terms else R.zero

    rows = [[conv(c) for c in row] for row in sylvester_matrix(pi, qi, var)]
    det = _bareiss_det(rows, R.zero, R.one, lambda a, b: a.exquo(b))
    out = MPoly(n, {tuple(e): Fraction(int(v)) for e, v in det.terms()})
    return out * Fraction(1, dp_den ** dq * dq_den ** dp)


def discriminant(p: MPoly, var: int) -> MPoly:
    """``Res(p, dp/dX_var)`` up to the leading coefficient (not divided out)."""
    return resultant(p, p.deriv(var), var)


def der_sequence(p: MPoly, var: int) -> List[MPoly]:
    """``(P, P', ..., P^(deg))`` with respect to ``X_var``."""
    d = max(p.degree(var), 0)
    out = [p]
    for _ in range(d):
        out.append(out[-1].deriv(var))
    return out


def cauchy_lower_bound(p: MPoly) -> Fraction:
    """``((p+1) * sum a_i^2 / a_q^2)^-1`` for univariate ``p``.

    ``p`` is the top and ``q`` the lowest nonzero coefficient index.  Every
    nonzero real root has absolute value strictly larger than the result.
    """
    if p.is_zero():
        raise ValueError("cauchy_lower_bound of the zero polynomial")
    vs = p.variables()
    if len(vs) > 1:
        raise ValueError("cauchy_lower_bound expects a univariate polynomial")
    var = vs[0] if vs else 0
    cs = [c.constant_value() for c in p.coeffs(var)]
    top = len(cs) - 1
    low = next(i for i, c in enumerate(cs) if c)
    aq2 = cs[low] ** 2
    s = sum(c * c for c in cs) / aq2
    return 1 / ((top + 1) * s)


# ---------------------------------------------------------------------------
# D[eps]


class EpsScalar:
    """Element ``sum a_i eps^i`` of D[eps] with eps positive infinitesimal."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Scalar] = ()):
        cs = [as_rat(c) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        self.coeffs = tuple(cs)

    def sign(self) -> int:
        for c in self.coeffs:
            if c:
                return 1 if c > 0 else -1
        return 0

    def __add__(self, other):
        other = other if isinstance(other, EpsScalar) else EpsScalar([other])
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (Fraction(0),) * (n - len(self.coeffs))
        b = other.coeffs + (Fraction(0),) * (n - len(other.coeffs))
        return EpsScalar(x + y for x, y in zip(a, b))

    __radd__ = __add__

    def __neg__(self):
        return EpsScalar(-c for c in self.coeffs)

    def __sub__(self, other):
        other = other if isinstance(other, EpsScalar) else EpsScalar([other])
        return self + (-other)

    def __mul__(self, other):
        other = other if isinstance(other, EpsScalar) else EpsScalar([other])
        if not self.coeffs or not other.coeffs:
            return EpsScalar()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return EpsScalar(out)

    __rmul__ = __mul__

    def __eq__(self, other):
        other = other if isinstance(other, EpsScalar) else EpsScalar([other])
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"EpsScalar({[str(c) for c in self.coeffs]})"

    def as_poly(self) -> MPoly:
        """The element viewed as a univariate polynomial in eps."""
        return MPoly.univariate(self.coeffs)


def eps_compare(a: EpsScalar, b: EpsScalar) -> Ordering:
    """Order of D[eps]: positive iff the lowest nonzero coefficient is positive."""
    return Ordering((a - b).sign())
