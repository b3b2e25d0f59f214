import random

import numpy as np
import pytest

from sabasis.arith import MPoly
from sabasis.corpus import CORPUS
from sabasis.homology import (CubicalComplex, FormulaOracle, Graph, H1Model, SpanError, add_chains, chains_ok,
                              cubical_betti, cycle_basis, h0_basis, make_grid, mark, minimal_spanning_subset,
                              relative_pair_check, sample_curve, snap_cycle, snap_polyline, tighten_box)
from sabasis.realroots import AlgNum, TriThomEncoding
from sabasis.reps import CurveSegRep, Level
from sabasis.skeleton import SkeletonNet


def _box(name, r=8.0):
    phi, k, _ = CORPUS[name]
    oracle = FormulaOracle(phi, k)
    return oracle, tighten_box(oracle, [-r] * k, [r] * k)


def test_cycle_basis_examples():
    assert len(cycle_basis(Graph(2, [0, 1], [1, 0]))) == 1
    theta = Graph(2, [0, 0, 0], [1, 1, 1])
    cs = cycle_basis(theta)
    assert len(cs) == 2 and all(chains_ok(theta, c) for c in cs.cycles)
    assert len(cycle_basis(Graph(4, [0, 1, 1], [1, 2, 3]))) == 0
    loop = Graph(1, [0], [0])
    assert cycle_basis(loop).cycles == [[(0, 1)]]


def test_cycle_basis_on_random_multigraphs():
    rng = random.Random(7)
    for _ in range(100):
        n = rng.randint(1, 8)
        m = rng.randint(0, 12)
        g = Graph(n, [rng.randrange(n) for _ in range(m)], [rng.randrange(n) for _ in range(m)])
        cs = cycle_basis(g)
        assert len(cs) == g.n_edges - g.n_vertices + g.n_components()
        for c in cs.cycles:
            assert chains_ok(g, c)
            verts = [g.head[e] if d > 0 else g.tail[e] for e, d in c]
            assert len(set(verts)) == len(verts)


@pytest.mark.parametrize("name,expected", [("circle", (1, 1)), ("two_circles", (2, 2)), ("torus", (1, 2))])
def test_cubical_betti(name, expected):
    oracle, box = _box(name)
    b0, b1, gens = cubical_betti(oracle, box, 64, with_generators=name != "torus")
    assert (b0, b1) == expected
    if name != "torus":
        assert len(gens) == b1


def test_boundary_maps_compose_to_zero():
    for name in ("annulus", "sphere"):
        oracle, box = _box(name)
        grid = make_grid(*box, 16)
        cx = CubicalComplex(grid, mark(oracle, grid))
        d1, d2 = cx.boundary_matrices()
        assert (d1 @ d2).count_nonzero() == 0


def test_interval_oracle_is_conservative():
    phi, k, _ = CORPUS["circle"]
    oracle = FormulaOracle(phi, k)
    t = np.linspace(0, 2 * np.pi, 200)
    pts = np.stack([np.cos(t), np.sin(t)], axis=1)
    lo, hi = pts - 1e-3, pts + 1e-3
    assert (oracle(lo, hi) != 0).all()
    assert (oracle(np.array([[0.1, 0.1]]), np.array([[0.2, 0.2]])) == 0).all()


def test_fields_agree_on_the_annulus():
    oracle, box = _box("annulus")
    grid = make_grid(*box, 32)
    cx = CubicalComplex(grid, mark(oracle, grid))
    assert H1Model(cx, "gf2").b1 == H1Model(cx, "rational").b1 == cx.betti()[1] == 1


def test_snapping_and_selection_on_circle(nets):
    net, _, _ = nets("circle")
    oracle, box = _box("circle")
    grid = make_grid(*box, 64)
    cx = CubicalComplex(grid, mark(oracle, grid))
    model = H1Model(cx)
    polylines = [sample_curve(g, grid.h / 2) for g in net.edges]
    cs = cycle_basis(Graph.from_net(net))
    z = snap_cycle(cs.cycles[0], polylines, cx)
    assert model.image_rank([z]) == 1
    assert minimal_spanning_subset(cs, [z], model) == [0]
    assert snap_polyline(cx, [(0.0, 1.0), (0.0, 1.0)]) == {}


def _torus_classes(nets):
    net, _, _ = nets("torus")
    oracle, box = _box("torus")
    grid = make_grid(*box, 64)
    cx = CubicalComplex(grid, mark(oracle, grid))
    model = H1Model(cx)
    polylines = [sample_curve(g, grid.h / 2) for g in net.edges]
    cs = cycle_basis(Graph.from_net(net))
    return cx, model, cs, [snap_cycle(c, polylines, cx) for c in cs.cycles]


def test_torus_selection_with_a_dependent_candidate(nets):
    cx, model, cs, zs = _torus_classes(nets)
    J = minimal_spanning_subset(cs, zs, model)
    assert len(J) == 2
    a, b = (zs[j] for j in J)
    extra = add_chains([(a, 1), (b, 1)])
    three = type(cs)([cs.cycles[J[0]], cs.cycles[J[1]], cs.cycles[J[0]] + cs.cycles[J[1]]])
    assert len(minimal_spanning_subset(three, [a, b, extra], model)) == 2


def test_sphere_selects_nothing(nets):
    net, _, _ = nets("sphere")
    oracle, box = _box("sphere")
    grid = make_grid(*box, 32)
    cx = CubicalComplex(grid, mark(oracle, grid))
    model = H1Model(cx)
    polylines = [sample_curve(g, grid.h / 2) for g in net.edges]
    cs = cycle_basis(Graph.from_net(net))
    zs = [snap_cycle(c, polylines, cx) for c in cs.cycles]
    assert minimal_spanning_subset(cs, zs, model) == []


def test_span_error_when_classes_miss_homology():
    oracle, box = _box("annulus")
    grid = make_grid(*box, 32)
    cx = CubicalComplex(grid, mark(oracle, grid))
    with pytest.raises(SpanError):
        minimal_spanning_subset(type(cycle_basis(Graph(0, [], [])))([]), [], H1Model(cx))


def _outer_circle_net():
    X, Y, Z = (MPoly.var(3, i) for i in range(3))
    a, b, zero = AlgNum.rational(-3), AlgNum.rational(3), AlgNum.rational(0)
    net = SkeletonNet(3)
    u, v = net.add_vertex((a, zero, zero)), net.add_vertex((b, zero, zero))
    for br in (0, 1):
        g = CurveSegRep(TriThomEncoding.empty(3), a, b, (Level(X ** 2 + Y ** 2 - 9, 1, br), Level(Z, 2, 0)))
        net.add_edge(g, u, v)
    return net


def test_relative_pairs(nets):
    oracle, box = _box("torus")
    net, _, _ = nets("torus")
    full = relative_pair_check(oracle, net, box, 32)
    assert full.h0_iso and full.h1_epi
    outer = relative_pair_check(oracle, _outer_circle_net(), box, 32)
    assert outer.h0_iso and not outer.h1_epi and outer.image_rank == 1
    coracle, cbox = _box("circle")
    cnet, _, _ = nets("circle")
    rep = relative_pair_check(coracle, cnet, cbox, 64)
    assert rep.h0_iso and rep.h1_epi


def test_h0_basis(nets):
    assert len(h0_basis(nets("circle")[0])) == 1
    pts = [u.point() for u in h0_basis(nets("two_circles")[0])]
    assert len(pts) == 2 and pts[0][0] != pts[1][0]
    assert h0_basis(SkeletonNet(2)) == []
