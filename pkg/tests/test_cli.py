import json

import pytest

from sabasis.cli import RunConfig, main, render_svg, run_basis, run_betti, run_skeleton
from sabasis.corpus import document
from sabasis.formulas import parse_formula


def _doc(name):
    return json.dumps(document(name))


@pytest.fixture(scope="module")
def circle_result():
    return run_basis(_doc("circle"))


def test_circle_basis(circle_result):
    r = circle_result
    assert r["betti"] == [1, 1] and len(r["cycles"]) == 1 and len(r["z0"]) == 1
    assert r["verification"]["h0_iso"] and r["verification"]["h1_epi"]
    assert [d["resolution"] for d in r["verification"]["resolutions"]] == [32, 64]
    for cyc in r["cycles"]:
        _, _, f = parse_formula(cyc["formula"])
        heads = [r["gamma"]["edges"][e]["left" if d > 0 else "right"] for e, d in zip(cyc["edges"], cyc["directions"])]
        tails = [r["gamma"]["edges"][e]["right" if d > 0 else "left"] for e, d in zip(cyc["edges"], cyc["directions"])]
        assert tails == heads[1:] + heads[:1]
    parse_formula(r["z1"])


def test_result_is_deterministic(circle_result):
    again = run_basis(_doc("circle"))
    assert json.dumps(again, sort_keys=True) == json.dumps(circle_result, sort_keys=True)


@pytest.mark.parametrize("name,betti", [("annulus", [1, 1]), ("wedge", [1, 2]), ("disk", [1, 0])])
def test_betti(name, betti):
    assert run_betti(_doc(name))["betti"] == betti


def test_skeleton_command():
    r = run_skeleton(_doc("circle"))
    assert len(r["network"]["vertices"]) == 2 and len(r["gamma"]["edges"]) == 2


def test_render(circle_result):
    svg = render_svg(circle_result)
    assert svg.count("<polyline") == 4 and svg == render_svg(circle_result)
    empty = render_svg({"gamma": {"edges": []}, "cycles": []})
    assert "<polyline" not in empty and empty.count("<line") == 2


def test_exit_codes(tmp_path, capsys):
    good = tmp_path / "c.json"
    good.write_text(_doc("circle"))
    out = tmp_path / "b.json"
    assert main(["betti", str(good), "--out", str(out)]) == 0
    assert json.loads(out.read_text())["betti"] == [1, 1]
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"vars": ["x", "y"], "polys": {"p": [[[1, 0], "1"]]},
                               "formula": {"atom": {"poly": "p", "rel": "<"}}}))
    assert main(["basis", str(bad)]) == 2
    assert main(["betti", str(good), "--resolution", "24"]) == 2
    one = tmp_path / "one.json"
    one.write_text(json.dumps({"vars": ["x"], "polys": {"p": [[[1], "1"]]}, "formula": {"atom": {"poly": "p", "rel": "eq"}}}))
    assert main(["betti", str(one)]) == 2
    assert main(["betti", str(good), "--resolution", "16", "--max-refine", "0"]) in (0, 3)


def test_instability_exit(monkeypatch, tmp_path):
    import sabasis.cli as cli
    flip = iter(range(100))

    class Flaky:
        def __init__(self, grid, marked):
            self.n = next(flip)

        def betti(self):
            return (1, self.n)

    monkeypatch.setattr(cli, "CubicalComplex", Flaky)
    good = tmp_path / "c.json"
    good.write_text(_doc("circle"))
    assert main(["betti", str(good), "--max-refine", "1"]) == 3


def test_render_command(tmp_path, circle_result):
    res = tmp_path / "r.json"
    res.write_text(json.dumps(circle_result))
    svg = tmp_path / "r.svg"
    assert main(["render", str(res), "--out", str(svg)]) == 0
    assert svg.read_text().startswith("<svg")
