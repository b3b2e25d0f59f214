from fractions import Fraction

from sabasis.arith import MPoly
from sabasis.corpus import CORPUS
from sabasis.formulas import Atom, Or, eval_at_point, polys_of
from sabasis.homology import Graph
from sabasis.realroots import AlgNum, TriThomEncoding
from sabasis.reps import curve_point
from sabasis.skeleton import big_enough_radius, curve_segments, morse_partition, skeleton

X, Y = MPoly.var(2, 0), MPoly.var(2, 1)
CIRCLE = X ** 2 + Y ** 2 - 1


def _radius(name):
    phi, k, _ = CORPUS[name]
    return big_enough_radius(TriThomEncoding.empty(k), polys_of(phi), phi)


def test_radius_exceeds_the_set():
    assert _radius("circle").r > 1
    assert _radius("annulus").r > 2
    assert _radius("torus").r > 3


def test_morse_values():
    phi = Atom(CIRCLE, "eq")
    vals = morse_partition(TriThomEncoding.empty(2), Fraction(6), [CIRCLE], phi).values
    assert AlgNum.rational(-1) in vals and AlgNum.rational(1) in vals
    point = Atom(X ** 2 + Y ** 2, "le")
    vals = morse_partition(TriThomEncoding.empty(2), None, [X ** 2 + Y ** 2], point).values
    assert vals == [AlgNum.rational(0)]


def test_torus_morse_values(nets):
    net, radius, problem = nets("torus")
    phi, _, _ = CORPUS["torus"]
    vals = morse_partition(TriThomEncoding.empty(3), radius.r, polys_of(phi), phi, problem=problem).values
    for v in (-3, -1, 1, 3):
        assert AlgNum.rational(v) in vals


def test_circle_segments():
    phi = Atom(CIRCLE, "eq")
    part, slabs = curve_segments(TriThomEncoding.empty(2), [CIRCLE], phi, r=Fraction(6))
    inside = [s for s in slabs if s.curves]
    assert len(inside) == 1 and len(inside[0].curves) == 2
    ends = {tuple(p) for e in inside[0].ends for p in e}
    assert ends == {(AlgNum.rational(-1), AlgNum.rational(0)), (AlgNum.rational(1), AlgNum.rational(0))}


def test_two_circle_segments():
    left = (X + 2) ** 2 + Y ** 2 - 1
    right = (X - 2) ** 2 + Y ** 2 - 1
    phi = Or((Atom(left, "eq"), Atom(right, "eq")))
    _, slabs = curve_segments(TriThomEncoding.empty(2), [left, right], phi, r=Fraction(10))
    assert [len(s.curves) for s in slabs if s.curves] == [2, 2]


def test_circle_network(nets):
    net, _, _ = nets("circle")
    assert len(net.points) == 2 and len(net.edges) == 2


def test_networks_lie_in_the_set(nets):
    for name in ("annulus", "wedge", "disk"):
        net, _, _ = nets(name)
        phi, _, _ = CORPUS[name]
        for p in net.points:
            assert eval_at_point(phi, p)
        for g in net.edges:
            assert eval_at_point(phi, curve_point(g, g.sample_x()))


def test_disk_network_reaches_every_fiber_segment(nets):
    net, _, _ = nets("disk")
    g = Graph.from_net(net)
    assert g.n_components() == 1 and len(net.edges) >= 2


def test_torus_network_cycle_rank(nets):
    net, _, _ = nets("torus")
    g = Graph.from_net(net)
    assert g.n_edges - g.n_vertices + g.n_components() >= 2


def test_empty_set():
    phi = Atom(X ** 2 + Y ** 2 + 1, "le")
    net, _, _ = skeleton(polys_of(phi), phi, 2)
    assert net.points == [] and net.edges == []
