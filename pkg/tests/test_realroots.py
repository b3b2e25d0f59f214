from fractions import Fraction

from hypothesis import given, settings, strategies as st

from sabasis.arith import MPoly, Ordering, cauchy_lower_bound
from sabasis.formulas import eval_at
from sabasis.realroots import (AlgNum, TriThomEncoding, isolate_with_thom, real_roots, roots_over, sign_at,
                               sign_at_point, thom_compare, weak_thom_formula)

from sturm import bound, count_roots

X = MPoly.var(1, 0)
EMPTY = TriThomEncoding.empty(1)


def test_isolate_examples():
    taus = isolate_with_thom(X ** 2 - 2, EMPTY)
    assert len(taus) == 2
    assert taus[1].signs[1] == 1 and taus[0].signs[1] == -1
    (double,) = isolate_with_thom((X - 1) ** 2, EMPTY)
    assert double.signs[1] == 0
    three = isolate_with_thom(X ** 3 - 2 * X, EMPTY)
    assert [t.root.sign() for t in three] == [-1, 0, 1]
    assert three[2].root.approx() == 2 ** 0.5


def test_thom_compare_and_sign():
    (_, r2) = isolate_with_thom(X ** 2 - 2, EMPTY)
    (_, r3) = isolate_with_thom(X ** 2 - 3, EMPTY)
    assert thom_compare(r2, r3) is Ordering.LT
    alt = isolate_with_thom(X ** 3 - 2 * X, EMPTY)[2]
    assert thom_compare(r2, alt) is Ordering.EQ
    assert thom_compare(r3, r3) is Ordering.EQ
    assert sign_at(X, r2, EMPTY) == 1
    assert sign_at(X ** 2 - 2, r2, EMPTY) == 0
    assert sign_at(X ** 3 - 3, r2, EMPTY) == -1


def test_weak_thom_formula_singles_out_the_root():
    (_, r2) = isolate_with_thom(X ** 2 - 2, EMPTY)
    f = weak_thom_formula(EMPTY.extend(r2))
    assert len(f.children) == 2
    assert not eval_at(f, [Fraction(-1)]) and not eval_at(f, [Fraction(3, 2)])
    assert weak_thom_formula(TriThomEncoding.empty(2)).children == ()
    pt = (AlgNum.rational(1), AlgNum.rational(-1))
    g = weak_thom_formula(TriThomEncoding.from_point(pt, 2))
    assert all(a.rel == "eq" for a in g.children) and len(g.children) == 2
    assert eval_at(g, [Fraction(1), Fraction(-1)])


def test_roots_over_algebraic_context():
    x, y = MPoly.var(2, 0), MPoly.var(2, 1)
    s2 = real_roots([-2, 0, 1])[1]
    ys = roots_over(y ** 2 - x, (s2,), 1)
    assert len(ys) == 2 and abs(ys[1].approx() - 2 ** 0.25) < 1e-12
    assert sign_at_point(y ** 4 - 2, (s2, ys[1])) == 0
    assert sign_at_point(x * y - 1, (s2, ys[1])) == 1


def test_equality_is_canonical():
    a = real_roots([-2, 0, 1])[1]
    b = real_roots([0, -2, 0, 1])[2]
    assert a == b and hash(a) == hash(b)


coeffs = st.lists(st.integers(-10, 10), min_size=2, max_size=9).filter(lambda c: c[-1] != 0)


@settings(max_examples=200, deadline=None)
@given(coeffs)
def test_isolation_matches_sturm(c):
    roots = real_roots(c)
    B = bound(c)
    assert len(roots) == count_roots(c, -B, B)
    for a, b in zip(roots, roots[1:]):
        assert a < b
    for r in roots:
        lo, hi = r.refine(Fraction(1, 2 ** 20))
        if lo == hi:
            assert sum(Fraction(a) * lo ** i for i, a in enumerate(c)) == 0
        else:
            assert count_roots(c, lo, hi) == 1
    lb = cauchy_lower_bound(MPoly.univariate([Fraction(a) for a in c], 1, 0))
    for r in roots:
        if r.sign() != 0:
            assert r > AlgNum.rational(lb) or r < AlgNum.rational(-lb)
