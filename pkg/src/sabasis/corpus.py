"""Reference sets with known Betti numbers, as formula documents."""
from __future__ import annotations

from typing import Dict, Tuple

from .arith import MPoly
from .formulas import And, Atom, Formula, Or, formula_to_json


def _vars(k: int):
    return [MPoly.var(k, i) for i in range(k)]


def _circle_family(d: int) -> Formula:
    x, y = _vars(2)
    return Atom(x ** d + y ** d - 1, "eq")


def _build() -> Dict[str, Tuple[Formula, int, Tuple[int, int]]]:
    x, y = _vars(2)
    c = x ** 2 + y ** 2 - 1
    X, Y, Z = _vars(3)
    torus = (X ** 2 + Y ** 2 + Z ** 2 + 3) ** 2 - 16 * (X ** 2 + Y ** 2)
    return {
        "circle": (Atom(c, "eq"), 2, (1, 1)),
        "disk": (Atom(c, "le"), 2, (1, 0)),
        "annulus": (And((Atom(c, "ge"), Atom(x ** 2 + y ** 2 - 4, "le"))), 2, (1, 1)),
        "two_circles": (Or((Atom(c, "eq"), Atom((x - 3) ** 2 + y ** 2 - 1, "eq"))), 2, (2, 2)),
        "wedge": (Atom(c * ((x - 2) ** 2 + y ** 2 - 1), "eq"), 2, (1, 2)),
        "sphere": (Atom(X ** 2 + Y ** 2 + Z ** 2 - 1, "eq"), 3, (1, 0)),
        "torus": (Atom(torus, "eq"), 3, (1, 2)),
        "solid_torus": (Atom(torus, "le"), 3, (1, 1)),
    }


CORPUS = _build()

NAMES = {2: ["x", "y"], 3: ["x", "y", "z"]}


def document(name: str) -> dict:
    """Formula document of a corpus set (or ``circle_d4`` style circle-family members)."""
    if name.startswith("circle_d"):
        return formula_to_json(_circle_family(int(name[len("circle_d"):])), NAMES[2])
    phi, k, _ = CORPUS[name]
    return formula_to_json(phi, NAMES[k])


def expected_betti(name: str) -> Tuple[int, int]:
    return CORPUS[name][2]
