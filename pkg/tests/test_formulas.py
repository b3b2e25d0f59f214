import json
from fractions import Fraction

import pytest

from sabasis.arith import MPoly
from sabasis.cad import plane_cells, projection, simplest_between
from sabasis.formulas import (TRUE, And, Atom, FormulaError, Or, SignCond, eval_at, eval_at_point,
                              formula_to_json, parse_formula, realizable_signs_2d, weak_sign_formula)
from sabasis.realroots import real_roots

X, Y = MPoly.var(2, 0), MPoly.var(2, 1)
CIRCLE = X ** 2 + Y ** 2 - 1


def _doc(formula, polys):
    return json.dumps({"vars": ["x", "y"], "polys": polys, "formula": formula})


C_LIT = [[[2, 0], "1"], [[0, 2], "1"], [[0, 0], "-1"]]


def test_parse_circle_and_annulus():
    names, table, f = parse_formula(_doc({"atom": {"poly": "c", "rel": "eq"}}, {"c": C_LIT}))
    assert names == ["x", "y"] and len(table) == 1
    assert f == Atom(CIRCLE, "eq")
    outer = [[[2, 0], "1"], [[0, 2], "1"], [[0, 0], "-4"]]
    _, _, g = parse_formula(_doc({"and": [{"atom": {"poly": "c", "rel": "ge"}},
                                          {"atom": {"poly": "d", "rel": "le"}}]}, {"c": C_LIT, "d": outer}))
    assert isinstance(g, And) and len(g.children) == 2
    assert eval_at(g, [Fraction(3, 2), Fraction(0)])


@pytest.mark.parametrize("formula,polys,message", [
    ({"atom": {"poly": "c", "rel": "<"}}, {"c": C_LIT}, "not a closed formula"),
    ({"not": {"atom": {"poly": "c", "rel": "eq"}}}, {"c": C_LIT}, "not a closed formula"),
    ({"atom": {"poly": "c", "rel": "eq"}}, {"c": [[[2], "1"]]}, "exponent vector"),
    ({"atom": {"poly": "z", "rel": "eq"}}, {"c": C_LIT}, "unknown polynomial"),
])
def test_parse_errors(formula, polys, message):
    with pytest.raises(FormulaError, match=message):
        parse_formula(_doc(formula, polys))


def test_json_roundtrip():
    f = Or((Atom(CIRCLE, "eq"), And((Atom(X, "ge"), Atom(Y - Fraction(1, 3), "le")))))
    names, _, g = parse_formula(json.dumps(formula_to_json(f, ["x", "y"])))
    assert g == f


def test_eval_at():
    f = Atom(CIRCLE, "eq")
    assert eval_at(f, [Fraction(1), Fraction(0)])
    assert not eval_at(f, [Fraction(0), Fraction(0)])
    s = real_roots([-1, 0, 2])[1]
    assert eval_at_point(f, (s, s))


def test_weak_sign_formula():
    P, Q = CIRCLE, X
    assert weak_sign_formula(SignCond.of([(P, 1)])) == Atom(P, "ge")
    w = weak_sign_formula(SignCond.of([(P, 0), (Q, -1)]))
    assert set(w.children) == {Atom(P, "eq"), Atom(Q, "le")}
    assert weak_sign_formula(SignCond.of([])) == TRUE


def test_realizable_signs():
    assert len(realizable_signs_2d([X])) == 3
    assert set(realizable_signs_2d([X ** 2 + Y ** 2 + 1])) == {SignCond.of([(X ** 2 + Y ** 2 + 1, 1)])}
    # inside/on/outside the circle against left/axis/right: all nine combinations occur
    assert len(realizable_signs_2d([CIRCLE, X])) == 9


def test_plane_cells_of_circle_and_vertical_axis():
    cells = plane_cells([CIRCLE, X])
    assert len(cells) == 23
    assert sum(1 for c in cells if c.dim == 0) == 4


def test_projection_of_circle():
    proj = projection([CIRCLE], 1)
    vals = sorted(r.approx() for p in proj for r in real_roots([c.constant_value() for c in p.coeffs(0)]))
    assert vals == [-1.0, 1.0]


def test_simplest_between():
    assert simplest_between(Fraction(1, 3), Fraction(1, 2)) == Fraction(2, 5)
    assert simplest_between(Fraction(-5, 2), Fraction(7, 2)) == 0
    assert simplest_between(Fraction(3), Fraction(4)) == Fraction(7, 2)
