from fractions import Fraction

import pytest

from sabasis.arith import MPoly
from sabasis.realroots import AlgNum, TriThomEncoding
from sabasis.reps import (RUR, CurveSegRep, Level, RepresentationError, curve_endpoints, curve_eval, curve_limit,
                          curve_point, interval_curve, rur_point)

X, Y = MPoly.var(2, 0), MPoly.var(2, 1)
ONE, MINUS = AlgNum.rational(1), AlgNum.rational(-1)


def _branch(b):
    return CurveSegRep(TriThomEncoding.empty(2), MINUS, ONE, (Level(X ** 2 + Y ** 2 - 1, 1, b),))


def test_rur_identity_and_scaled():
    t = MPoly.var(1, 0)
    ctx = TriThomEncoding.empty(1)
    u = RUR.make(ctx, t ** 2 - 2, MPoly.const(1, 1), (t,), 1)
    (lo, hi), = rur_point(u, Fraction(1, 1000))
    assert lo ** 2 <= 2 <= hi ** 2
    v = RUR.make(ctx, t ** 2 - 2, MPoly.const(1, 2), (t,), 1)
    (lo, hi), = rur_point(v, Fraction(1, 1000))
    assert lo ** 2 <= Fraction(1, 2) <= hi ** 2 and hi - lo <= Fraction(1, 1000)
    (lo2, hi2), = rur_point(v, Fraction(1, 10 ** 6))
    assert lo <= lo2 and hi2 <= hi
    with pytest.raises(ValueError):
        rur_point(v, Fraction(0))


def test_curve_eval_on_circle():
    upper = _branch(1)
    x, y = curve_point(upper, Fraction(0))
    assert y == ONE
    box = curve_eval(upper, Fraction(1, 2), Fraction(1, 10 ** 6))
    assert box[0] == (Fraction(1, 2), Fraction(1, 2))
    lo, hi = box[1]
    assert lo ** 2 <= Fraction(3, 4) <= hi ** 2 and hi - lo <= Fraction(1, 10 ** 6)
    with pytest.raises(RepresentationError):
        curve_point(upper, Fraction(2))


def test_endpoints_of_circle_branches():
    for b in (0, 1):
        left, right = curve_endpoints(_branch(b))
        assert left.point() == (MINUS, AlgNum.rational(0))
        assert right.point() == (ONE, AlgNum.rational(0))


def test_interval_curve():
    g = interval_curve((AlgNum.rational(2),), 2, AlgNum.rational(0), AlgNum.rational(3))
    assert g.is_interval()
    assert curve_point(g, Fraction(1)) == (AlgNum.rational(2), AlgNum.rational(1))
    assert curve_limit(g, "right") == (AlgNum.rational(2), AlgNum.rational(3))


def test_cusp_limit():
    g = CurveSegRep(TriThomEncoding.empty(2), AlgNum.rational(0), ONE, (Level(Y ** 2 - X ** 3, 1, 1),))
    assert curve_limit(g, "left") == (AlgNum.rational(0), AlgNum.rational(0))
    assert curve_limit(g, "right") == (ONE, ONE)
