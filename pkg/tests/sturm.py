"""Independent Sturm-sequence root counting used as a test oracle."""
from fractions import Fraction


def _trim(c):
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return c


def _rem(a, b):
    a = [Fraction(x) for x in a]
    while len(a) >= len(b) and a:
        f = a[-1] / b[-1]
        shift = len(a) - len(b)
        for i, x in enumerate(b):
            a[i + shift] -= f * x
        a = _trim(a)
    return a


def _deriv(c):
    return [i * c[i] for i in range(1, len(c))]


def sturm_chain(c):
    c = _trim(c)
    chain = [c, _deriv(c)]
    while chain[-1]:
        r = _rem(chain[-2], chain[-1])
        chain.append([-x for x in r])
    return [p for p in chain if p]


def _value(c, x):
    acc = Fraction(0)
    for a in reversed(c):
        acc = acc * x + a
    return acc


def _variations(vals):
    signs = [v for v in vals if v != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if (a > 0) != (b > 0))


def count_roots(c, lo, hi):
    """Distinct real roots in the half-open interval (lo, hi]."""
    chain = sturm_chain(c)
    return _variations([_value(p, lo) for p in chain]) - _variations([_value(p, hi) for p in chain])


def bound(c):
    c = _trim(c)
    return 1 + sum(abs(Fraction(a)) for a in c[:-1]) / abs(Fraction(c[-1]))
