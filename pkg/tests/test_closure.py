from fractions import Fraction

from sabasis.arith import MPoly
from sabasis.closure import closure_2d, curve_to_closed, project_curve_2d
from sabasis.formulas import Atom, eval_at, eval_at_point, formula_size, polys_of
from sabasis.realroots import AlgNum, TriThomEncoding, real_roots, sign_at_point
from sabasis.reps import CurveSegRep, Level, curve_limit, curve_point, interval_curve

X, Y = MPoly.var(2, 0), MPoly.var(2, 1)
Q = Fraction


def _holds(f, *pt):
    return eval_at(f, [Q(c) for c in pt])


def test_closure_of_open_segment():
    f = closure_2d([[(X, 1), (X - 1, -1), (Y, 0)]])
    assert _holds(f, 0, 0) and _holds(f, 1, 0) and _holds(f, Q(1, 2), 0)
    assert not _holds(f, 2, 0) and not _holds(f, Q(1, 2), Q(1, 10)) and not _holds(f, -Q(1, 100), 0)


def test_closure_of_point_is_itself():
    f = closure_2d([[(X, 0), (Y, 0)]])
    assert _holds(f, 0, 0)
    assert not _holds(f, Q(1, 1000), 0)


def test_closure_of_open_upper_branch():
    circle = X ** 2 + Y ** 2 - 1
    f = closure_2d([[(circle, 0), (Y, 1)]])
    assert _holds(f, 1, 0) and _holds(f, -1, 0) and _holds(f, Q(3, 5), Q(4, 5))
    assert not _holds(f, Q(3, 5), -Q(4, 5)) and not _holds(f, 0, 0)


def _upper():
    return CurveSegRep(TriThomEncoding.empty(2), AlgNum.rational(-1), AlgNum.rational(1),
                       (Level(X ** 2 + Y ** 2 - 1, 1, 1),))


def test_project_upper_branch():
    cells = project_curve_2d(_upper(), 1)
    pt = (AlgNum.rational(Q(3, 5)), AlgNum.rational(Q(4, 5)))
    assert any(all(sign_at_point(p, pt) == s for p, s in c) for c in cells)
    low = (AlgNum.rational(Q(3, 5)), AlgNum.rational(-Q(4, 5)))
    assert not any(all(sign_at_point(p, low) == s for p, s in c) for c in cells)


def test_upper_branch_closed_formula():
    g = _upper()
    _, psi = curve_to_closed(g.context, g)
    assert _holds(psi, -1, 0) and _holds(psi, 1, 0) and _holds(psi, 0, 1)
    assert not _holds(psi, 0, -1) and not _holds(psi, 0, Q(101, 100))
    assert not any(a.rel not in ("le", "ge", "eq") for a in _atoms(psi))


def _atoms(f):
    if isinstance(f, Atom):
        return [f]
    return [a for c in f.children for a in _atoms(c)]


def test_interval_curve_in_space():
    neg, s2 = real_roots([-2, 0, 1])
    ctx_pt = (AlgNum.rational(1), s2)
    g = interval_curve(ctx_pt, 3, AlgNum.rational(0), AlgNum.rational(2))
    _, psi = curve_to_closed(g.context, g)
    assert eval_at_point(psi, ctx_pt + (AlgNum.rational(0),))
    assert eval_at_point(psi, ctx_pt + (AlgNum.rational(2),))
    assert not eval_at_point(psi, ctx_pt + (AlgNum.rational(Q(21, 10)),))
    assert not eval_at_point(psi, (AlgNum.rational(1), neg, AlgNum.rational(1)))


def test_half_parabola_in_space():
    X3, Y3, Z3 = (MPoly.var(3, i) for i in range(3))
    g = CurveSegRep(TriThomEncoding.empty(3), AlgNum.rational(0), AlgNum.rational(1),
                    (Level(Y3, 1, 0), Level(Z3 ** 2 - X3, 2, 1)))
    _, psi = curve_to_closed(g.context, g)
    for x in (Q(1, 4), Q(1, 9)):
        assert eval_at_point(psi, curve_point(g, x))
    assert eval_at_point(psi, curve_limit(g, "left")) and eval_at_point(psi, curve_limit(g, "right"))
    assert not eval_at(psi, [Q(1, 4), 0, -Q(1, 2)])
    assert not eval_at(psi, [Q(1, 4), Q(1, 100), Q(1, 2)])
    assert formula_size(psi) > 0 and polys_of(psi)
