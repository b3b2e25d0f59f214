"""Graphs, cycle bases, and a cubical homology oracle for checking skeletons.

The oracle marks every grid cube that interval evaluation cannot exclude
from the set and computes homology of the union of the closed marked cubes.
Cycles of the skeleton graph are snapped onto the grid and their classes
compared with the oracle's first homology.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy import ndimage

from .arith import MPoly
from .formulas import And, Atom, Formula, Or

OUT, MAYBE, IN = 0, 1, 2


class SpanError(RuntimeError):
    """Candidate cycles do not span the first homology of the oracle complex."""


class SnapError(RuntimeError):
    pass


# ---------------------------------------------------------------------------
# graphs


@dataclass
class Graph:
    """Multigraph with oriented edges ``head -> tail``; loops and parallel edges allowed."""

    n_vertices: int
    head: List[int]
    tail: List[int]

    @property
    def n_edges(self) -> int:
        return len(self.head)

    @classmethod
    def from_net(cls, net) -> "Graph":
        return cls(len(net.points), list(net.left), list(net.right))

    def components(self) -> List[int]:
        """Component label of every vertex."""
        parent = list(range(self.n_vertices))

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for h, t in zip(self.head, self.tail):
            ra, rb = find(h), find(t)
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
        roots: Dict[int, int] = {}
        return [roots.setdefault(find(v), len(roots)) for v in range(self.n_vertices)]

    def n_components(self) -> int:
        return len(set(self.components())) if self.n_vertices else 0


Step = Tuple[int, int]  # (edge index, +1 if traversed head -> tail else -1)


@dataclass
class CycleSet:
    cycles: List[List[Step]]

    def edges(self, h: int) -> List[int]:
        return [e for e, _ in self.cycles[h]]

    def __len__(self):
        return len(self.cycles)


def _ends(g: Graph, step: Step) -> Tuple[int, int]:
    e, d = step
    return (g.head[e], g.tail[e]) if d > 0 else (g.tail[e], g.head[e])


def chains_ok(g: Graph, cycle: Sequence[Step]) -> bool:
    """The end of each traversed edge is the start of the next one, cyclically."""
    q = len(cycle)
    return all(_ends(g, cycle[h])[1] == _ends(g, cycle[(h + 1) % q])[0] for h in range(q))


def cycle_basis(g: Graph) -> CycleSet:
    """Fundamental cycles of a breadth-first spanning forest (simple cycles)."""
    adj: List[List[Tuple[int, int]]] = [[] for _ in range(g.n_vertices)]
    for e, (h, t) in enumerate(zip(g.head, g.tail)):
        adj[h].append((e, t))
        if h != t:
            adj[t].append((e, h))
    parent: List[Optional[Tuple[int, int]]] = [None] * g.n_vertices
    depth = [-1] * g.n_vertices
    tree = set()
    for root in range(g.n_vertices):
        if depth[root] >= 0:
            continue
        depth[root] = 0
        dq = deque([root])
        while dq:
            u = dq.popleft()
            for e, w in adj[u]:
                if depth[w] < 0:
                    depth[w] = depth[u] + 1
                    parent[w] = (u, e)
                    tree.add(e)
                    dq.append(w)
    cycles = []
    for e in range(g.n_edges):
        if e in tree:
            continue
        u, v = g.head[e], g.tail[e]
        steps: List[Step] = [(e, 1)]
        # path v -> u through the tree
        up_v, up_u = [], []
        a, b = v, u
        while depth[a] > depth[b]:
            up_v.append(a)
            a = parent[a][0]
        while depth[b] > depth[a]:
            up_u.append(b)
            b = parent[b][0]
        while a != b:
            up_v.append(a)
            up_u.append(b)
            a, b = parent[a][0], parent[b][0]
        for w in up_v:
            pe = parent[w][1]
            steps.append((pe, 1 if g.head[pe] == w else -1))
        for w in reversed(up_u):
            pe = parent[w][1]
            steps.append((pe, 1 if g.tail[pe] == w else -1))
        cycles.append(steps)
    return CycleSet(cycles)


def h0_basis(net) -> list:
    """One vertex representation per connected component of the network graph."""
    g = Graph.from_net(net)
    comp = g.components()
    first: Dict[int, int] = {}
    for v, c in enumerate(comp):
        first.setdefault(c, v)
    return [net.vertex_rur(first[c]) for c in sorted(first)]


# ---------------------------------------------------------------------------
# interval oracle


class _PolyEval:
    """Vectorized interval enclosures of one polynomial over many boxes."""

    def __init__(self, p: MPoly):
        self.terms = [(float(c), e) for e, c in p.terms.items()]
        self.grads = [[(float(c), e) for e, c in p.deriv(v).terms.items()] for v in range(p.nvars)]
        self.k = p.nvars

    @staticmethod
    def _powers(lo, hi, maxdeg):
        pw = [(np.ones_like(lo), np.ones_like(lo))]
        for d in range(1, maxdeg + 1):
            a, b = lo ** d, hi ** d
            plo, phi = np.minimum(a, b), np.maximum(a, b)
            if d % 2 == 0:
                plo = np.where((lo < 0) & (hi > 0), 0.0, plo)
            pw.append((plo, phi))
        return pw

    @staticmethod
    def _natural(terms, pows, shape):
        tlo = np.zeros(shape)
        thi = np.zeros(shape)
        scale = np.zeros(shape)
        for c, e in terms:
            lo = np.full(shape, c)
            hi = np.full(shape, c)
            for v, d in enumerate(e):
                if d:
                    plo, phi = pows[v][d]
                    cands = (lo * plo, lo * phi, hi * plo, hi * phi)
                    lo, hi = np.minimum.reduce(cands), np.maximum.reduce(cands)
            tlo += lo
            thi += hi
            scale += np.maximum(np.abs(lo), np.abs(hi))
        return tlo, thi, scale

    def enclose(self, lo: np.ndarray, hi: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        shape = lo.shape[:-1]
        maxdeg = max([max(e) for _, e in self.terms] + [0])
        pows = [self._powers(lo[..., v], hi[..., v], maxdeg) for v in range(self.k)]
        nlo, nhi, scale = self._natural(self.terms, pows, shape)
        # mean value form around the center
        mid = (lo + hi) / 2
        rad = (hi - lo) / 2
        cp = [self._powers(mid[..., v], mid[..., v], maxdeg) for v in range(self.k)]
        clo, chi, cscale = self._natural(self.terms, cp, shape)
        mlo, mhi = clo.copy(), chi.copy()
        for v, gterms in enumerate(self.grads):
            if not gterms:
                continue
            glo, ghi, _ = self._natural(gterms, pows, shape)
            m = np.maximum(np.abs(glo), np.abs(ghi)) * rad[..., v]
            mlo -= m
            mhi += m
        pad = 1e-9 * (scale + cscale + 1e-300)
        lo_out = np.maximum(nlo, mlo) - pad
        hi_out = np.minimum(nhi, mhi) + pad
        return lo_out, hi_out


class FormulaOracle:
    """Three-valued membership of boxes in the realization of a closed formula."""

    def __init__(self, phi: Formula, k: int):
        self.phi = phi
        self.k = k
        self._evals: Dict[MPoly, _PolyEval] = {}

    def _ev(self, p: MPoly) -> _PolyEval:
        ev = self._evals.get(p)
        if ev is None:
            ev = self._evals[p] = _PolyEval(p)
        return ev

    def __call__(self, lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
        cache: Dict[MPoly, Tuple[np.ndarray, np.ndarray]] = {}

        def walk(f):
            if isinstance(f, Atom):
                if f.poly not in cache:
                    cache[f.poly] = self._ev(f.poly).enclose(lo, hi)
                a, b = cache[f.poly]
                if f.rel == "le":
                    return np.where(a > 0, OUT, np.where(b < 0, IN, MAYBE))
                if f.rel == "ge":
                    return np.where(b < 0, OUT, np.where(a > 0, IN, MAYBE))
                return np.where((a > 0) | (b < 0), OUT, MAYBE)
            kids = [walk(g) for g in f.children]
            if isinstance(f, And):
                return np.minimum.reduce(kids) if kids else np.full(lo.shape[:-1], IN)
            return np.maximum.reduce(kids) if kids else np.full(lo.shape[:-1], OUT)

        return walk(self.phi)


# ---------------------------------------------------------------------------
# grids


@dataclass
class Grid:
    lo: np.ndarray
    h: float
    shape: Tuple[int, ...]

    @property
    def k(self) -> int:
        return len(self.shape)

    def cube_boxes(self) -> Tuple[np.ndarray, np.ndarray]:
        idx = np.indices(self.shape).astype(float)
        idx = np.moveaxis(idx, 0, -1)
        lo = self.lo + idx * self.h
        return lo, lo + self.h

    def cube_of(self, p: Sequence[float]) -> Tuple[int, ...]:
        q = np.floor((np.asarray(p, dtype=float) - self.lo) / self.h).astype(int)
        return tuple(int(min(max(x, 0), n - 1)) for x, n in zip(q, self.shape))


def make_grid(box_lo: Sequence[float], box_hi: Sequence[float], resolution: int) -> Grid:
    """Cubic cells, ``resolution`` of them along the longest side."""
    lo = np.asarray(box_lo, dtype=float)
    hi = np.asarray(box_hi, dtype=float)
    h = float(np.max(hi - lo)) / resolution
    shape = tuple(max(1, int(np.ceil((b - a) / h - 1e-9))) for a, b in zip(lo, hi))
    return Grid(lo, h, shape)


def mark(oracle, grid: Grid) -> np.ndarray:
    lo, hi = grid.cube_boxes()
    return oracle(lo, hi) != OUT


def tighten_box(oracle, box_lo, box_hi, resolution: int = 32, rounds: int = 40):
    """Shrink a box to the marked region's extent (plus one cell) until it stabilizes."""
    lo = np.asarray(box_lo, dtype=float)
    hi = np.asarray(box_hi, dtype=float)
    for _ in range(rounds):
        grid = make_grid(lo, hi, resolution)
        m = mark(oracle, grid)
        if not m.any():
            return None
        idx = np.argwhere(m)
        a = idx.min(axis=0)
        b = idx.max(axis=0) + 1
        nlo = grid.lo + (a - 1) * grid.h
        nhi = grid.lo + (b + 1) * grid.h
        nlo = np.maximum(nlo, lo)
        nhi = np.minimum(nhi, hi)
        if np.allclose(nlo, lo, rtol=0, atol=grid.h * 1e-3) and np.allclose(nhi, hi, rtol=0, atol=grid.h * 1e-3):
            break
        lo, hi = nlo, nhi
    span = hi - lo
    pad = np.max(span) / resolution
    return lo - pad, hi + pad


# ---------------------------------------------------------------------------
# cubical complexes


def _present(marked: np.ndarray, free_axes: Tuple[int, ...]) -> np.ndarray:
    """Presence of cells spanning ``free_axes`` in the union of closed marked cubes.

    Cells are indexed by their lower corner; along a spanned axis the index
    ranges over cubes, along the other axes over grid planes.
    """
    k = marked.ndim
    pad = np.pad(marked, 1)
    shape = tuple(n if a in free_axes else n + 1 for a, n in enumerate(marked.shape))
    out = np.zeros(shape, dtype=bool)
    fixed = [a for a in range(k) if a not in free_axes]
    for shift in product((0, 1), repeat=len(fixed)):
        sl = []
        for a in range(k):
            if a in free_axes:
                sl.append(slice(1, marked.shape[a] + 1))
            else:
                s = shift[fixed.index(a)]
                sl.append(slice(s, s + marked.shape[a] + 1))
        out |= pad[tuple(sl)]
    return out


class CubicalComplex:
    """Union of closed marked cubes with cells up to dimension two indexed for chains."""

    def __init__(self, grid: Grid, marked: np.ndarray):
        self.grid = grid
        self.marked = marked
        k = grid.k
        self.k = k
        self.vertices = _present(marked, ())
        self.edges = {a: _present(marked, (a,)) for a in range(k)}
        self.faces = {(a, b): _present(marked, (a, b)) for a in range(k) for b in range(a + 1, k)}
        self.cubes3 = marked if k == 3 else None
        self._vid = -np.ones(self.vertices.shape, dtype=np.int64)
        vs = np.argwhere(self.vertices)
        self._vid[tuple(vs.T)] = np.arange(len(vs))
        self.vertex_list = [tuple(map(int, v)) for v in vs]
        self._eid: Dict[int, np.ndarray] = {}
        self.edge_list: List[Tuple[int, Tuple[int, ...]]] = []
        for a in range(k):
            ids = -np.ones(self.edges[a].shape, dtype=np.int64)
            es = np.argwhere(self.edges[a])
            ids[tuple(es.T)] = np.arange(len(self.edge_list), len(self.edge_list) + len(es))
            self._eid[a] = ids
            self.edge_list.extend((a, tuple(map(int, e))) for e in es)
        self.face_list: List[Tuple[Tuple[int, int], Tuple[int, ...]]] = []
        for ab, arr in self.faces.items():
            self.face_list.extend((ab, tuple(map(int, f))) for f in np.argwhere(arr))
        self._tree = None

    # -- counts and Betti numbers -------------------------------------------
    def counts(self) -> List[int]:
        c = [int(self.vertices.sum()), sum(int(e.sum()) for e in self.edges.values()),
             sum(int(f.sum()) for f in self.faces.values())]
        if self.k == 3:
            c.append(int(self.marked.sum()))
        return c

    def euler(self) -> int:
        return sum((-1) ** d * n for d, n in enumerate(self.counts()))

    def b0(self) -> int:
        _, n = ndimage.label(self.marked, structure=np.ones((3,) * self.k))
        return int(n)

    def holes(self) -> int:
        """Bounded components of the complement (face adjacency)."""
        comp = np.pad(~self.marked, 1, constant_values=True)
        _, n = ndimage.label(comp, structure=ndimage.generate_binary_structure(self.k, 1))
        return int(n) - 1

    def betti(self) -> Tuple[int, int]:
        b0 = self.b0()
        if self.k == 2:
            b1 = self.holes()
            assert b1 == b0 - self.euler(), "Euler characteristic mismatch"
            return b0, b1
        b2 = self.holes()
        return b0, b0 + b2 - self.euler()

    # -- chains ----------------------------------------------------------------
    def vid(self, v: Sequence[int]) -> int:
        return int(self._vid[tuple(v)])

    def eid(self, axis: int, corner: Sequence[int]) -> int:
        return int(self._eid[axis][tuple(corner)])

    def edge_ends(self, e: int) -> Tuple[int, int]:
        a, c = self.edge_list[e]
        d = list(c)
        d[a] += 1
        return self.vid(c), self.vid(d)

    def face_boundary(self, f: int) -> List[Tuple[int, int]]:
        (a, b), c = self.face_list[f]
        ca = list(c)
        ca[a] += 1
        cb = list(c)
        cb[b] += 1
        return [(self.eid(a, c), 1), (self.eid(b, ca), 1), (self.eid(a, cb), -1), (self.eid(b, c), -1)]

    def boundary_matrices(self):
        """Sparse integer matrices of the first two boundary maps."""
        from scipy.sparse import coo_matrix
        nv, ne, nf = len(self.vertex_list), len(self.edge_list), len(self.face_list)
        r, c, d = [], [], []
        for e in range(ne):
            u, v = self.edge_ends(e)
            r += [u, v]
            c += [e, e]
            d += [-1, 1]
        d1 = coo_matrix((d, (r, c)), shape=(nv, ne)).tocsr()
        r, c, d = [], [], []
        for f in range(nf):
            for e, s in self.face_boundary(f):
                r.append(e)
                c.append(f)
                d.append(s)
        d2 = coo_matrix((d, (r, c)), shape=(ne, nf)).tocsr()
        return d1, d2

    def spanning_forest(self):
        """Breadth-first spanning forest of the 1-skeleton: tree edge flags and non-tree index."""
        if self._tree is not None:
            return self._tree
        nv = len(self.vertex_list)
        adj: List[List[Tuple[int, int]]] = [[] for _ in range(nv)]
        for e in range(len(self.edge_list)):
            u, v = self.edge_ends(e)
            adj[u].append((e, v))
            adj[v].append((e, u))
        seen = [False] * nv
        in_tree = [False] * len(self.edge_list)
        comp = [-1] * nv
        ncomp = 0
        for r in range(nv):
            if seen[r]:
                continue
            seen[r] = True
            comp[r] = ncomp
            dq = deque([r])
            while dq:
                u = dq.popleft()
                for e, w in adj[u]:
                    if not seen[w]:
                        seen[w] = True
                        comp[w] = ncomp
                        in_tree[e] = True
                        dq.append(w)
            ncomp += 1
        nt = [e for e in range(len(self.edge_list)) if not in_tree[e]]
        nt_index = {e: j for j, e in enumerate(nt)}
        self._tree = (in_tree, nt, nt_index, comp, ncomp)
        return self._tree

    def vertex_component(self, v: int) -> int:
        return self.spanning_forest()[3][v]


# ---------------------------------------------------------------------------
# linear algebra over GF(2) and Q


class _GF2Basis:
    """Row-echelon basis of bit vectors keyed by their highest set bit."""

    def __init__(self):
        self.piv: Dict[int, int] = {}

    def reduce(self, x: int) -> int:
        piv = self.piv
        while x:
            top = x.bit_length() - 1
            row = piv.get(top)
            if row is None:
                return x
            x ^= row
        return 0

    def add(self, x: int) -> bool:
        x = self.reduce(x)
        if x:
            self.piv[x.bit_length() - 1] = x
            return True
        return False

    @property
    def rank(self) -> int:
        return len(self.piv)


class _QBasis:
    """Row-echelon basis of sparse rational vectors keyed by their largest index."""

    def __init__(self):
        self.piv: Dict[int, Dict[int, Fraction]] = {}

    def reduce(self, x: Dict[int, Fraction]) -> Dict[int, Fraction]:
        x = {i: Fraction(v) for i, v in x.items() if v}
        while x:
            top = max(x)
            row = self.piv.get(top)
            if row is None:
                return x
            f = x[top] / row[top]
            for i, v in row.items():
                nv = x.get(i, 0) - f * v
                if nv:
                    x[i] = nv
                else:
                    x.pop(i, None)
        return x

    def add(self, x) -> bool:
        x = self.reduce(x)
        if x:
            self.piv[max(x)] = x
            return True
        return False

    @property
    def rank(self) -> int:
        return len(self.piv)


class H1Model:
    """First homology of a cubical complex in coordinates of the non-tree edges."""

    def __init__(self, cx: CubicalComplex, field: str = "gf2", exclude: Optional[set] = None):
        if field not in ("gf2", "rational"):
            raise ValueError("field must be 'gf2' or 'rational'")
        self.cx = cx
        self.field = field
        in_tree, nt, nt_index, comp, ncomp = cx.spanning_forest()
        self.nt_index = nt_index
        self.basis = _GF2Basis() if field == "gf2" else _QBasis()
        for f in range(len(cx.face_list)):
            self.basis.add(self.vector(cx.face_boundary(f)))
        self.b1 = len(nt) - self.basis.rank

    def vector(self, chain) -> object:
        """Coordinates of a 1-chain (edge -> coefficient) on the non-tree edges."""
        items = chain.items() if isinstance(chain, dict) else chain
        if self.field == "gf2":
            x = 0
            for e, c in items:
                j = self.nt_index.get(e)
                if j is not None and c % 2:
                    x ^= 1 << j
            return x
        out: Dict[int, Fraction] = {}
        for e, c in items:
            j = self.nt_index.get(e)
            if j is not None and c:
                out[j] = out.get(j, 0) + Fraction(c)
        return {j: v for j, v in out.items() if v}

    def new_span(self):
        """A fresh copy of the boundary basis to extend with cycle classes."""
        b = _GF2Basis() if self.field == "gf2" else _QBasis()
        b.piv = dict(self.basis.piv)
        return b

    def image_rank(self, chains: Sequence[dict]) -> int:
        span = self.new_span()
        return sum(1 for z in chains if span.add(self.vector(z)))


def cubical_betti(member, box, resolution: int, field: str = "gf2", with_generators: bool = False):
    """Betti numbers of the outer cubical approximation; optionally H1 generators as edge chains."""
    lo, hi = box
    grid = make_grid(lo, hi, resolution)
    cx = CubicalComplex(grid, mark(member, grid))
    b0, b1 = cx.betti()
    gens = []
    if with_generators:
        model = H1Model(cx, field)
        if model.b1 != b1:
            raise AssertionError("chain-level and duality Betti numbers disagree")
        in_tree, nt, nt_index, _, _ = cx.spanning_forest()
        span = model.new_span()
        for e in nt:
            if span.add(model.vector([(e, 1)])):
                gens.append(_fundamental_cycle(cx, e))
    return b0, b1, gens


def _fundamental_cycle(cx: CubicalComplex, e: int) -> Dict[int, int]:
    in_tree = cx.spanning_forest()[0]
    nv = len(cx.vertex_list)
    adj: List[List[Tuple[int, int]]] = [[] for _ in range(nv)]
    for f, t in enumerate(in_tree):
        if t:
            u, v = cx.edge_ends(f)
            adj[u].append((f, v))
            adj[v].append((f, u))
    u, v = cx.edge_ends(e)
    prev = {v: None}
    dq = deque([v])
    while dq:
        a = dq.popleft()
        if a == u:
            break
        for f, b in adj[a]:
            if b not in prev:
                prev[b] = (a, f)
                dq.append(b)
    chain = {e: 1}
    a = u
    while prev[a] is not None:
        b, f = prev[a]
        s, _ = cx.edge_ends(f)
        # walking b -> a closes the loop u -> v -> ... -> u
        chain[f] = chain.get(f, 0) + (1 if s == b else -1)
        a = b
    return chain


# ---------------------------------------------------------------------------
# snapping


def _offset_paths(k: int) -> Dict[Tuple[int, ...], List[Tuple[int, ...]]]:
    """Vertex paths (offsets) from cube 0's lower corner to cube d's, inside the two cubes."""
    paths = {}
    for d in product((-1, 0, 1), repeat=k):
        verts = set()
        for base in ((0,) * k, d):
            for c in product((0, 1), repeat=k):
                verts.add(tuple(b + x for b, x in zip(base, c)))
        cubes = [(0,) * k, d]

        def nbrs(v):
            for a in range(k):
                for s in (-1, 1):
                    w = list(v)
                    w[a] += s
                    w = tuple(w)
                    if w in verts:
                        lo = min(v[a], w[a])
                        # the edge must belong to one of the two cubes
                        for cb in cubes:
                            if cb[a] == lo and all(cb[b] <= v[b] <= cb[b] + 1 for b in range(k) if b != a):
                                yield w
                                break

        start, goal = (0,) * k, tuple(d)
        prev = {start: None}
        dq = deque([start])
        while dq:
            v = dq.popleft()
            if v == goal:
                break
            for w in nbrs(v):
                if w not in prev:
                    prev[w] = v
                    dq.append(w)
        path = [goal]
        while prev[path[-1]] is not None:
            path.append(prev[path[-1]])
        paths[d] = list(reversed(path))
    return paths


_PATHS: Dict[int, dict] = {}


def snap_polyline(cx: CubicalComplex, pts: Sequence[Sequence[float]]) -> Dict[int, int]:
    """1-chain following a polyline whose consecutive points are less than a cell apart."""
    k = cx.k
    paths = _PATHS.setdefault(k, _offset_paths(k))
    chain: Dict[int, int] = {}
    cubes = [cx.grid.cube_of(p) for p in pts]
    for c0, c1 in zip(cubes, cubes[1:]):
        d = tuple(b - a for a, b in zip(c0, c1))
        if any(abs(x) > 1 for x in d):
            raise SnapError("consecutive samples are more than one cell apart")
        if not (cx.marked[c0] and cx.marked[c1]):
            raise SnapError("sample lies in an unmarked cell")
        path = paths[d]
        for a, b in zip(path, path[1:]):
            axis = next(i for i in range(k) if a[i] != b[i])
            lo = tuple(c0[i] + min(a[i], b[i]) if i == axis else c0[i] + a[i] for i in range(k))
            e = cx.eid(axis, lo)
            if e < 0:
                raise SnapError("path edge missing from the complex")
            s = 1 if b[axis] > a[axis] else -1
            nv = chain.get(e, 0) + s
            if nv:
                chain[e] = nv
            else:
                chain.pop(e)
    return chain


def chain_boundary(cx: CubicalComplex, chain: Dict[int, int]) -> Dict[int, int]:
    out: Dict[int, int] = {}
    for e, c in chain.items():
        u, v = cx.edge_ends(e)
        out[u] = out.get(u, 0) - c
        out[v] = out.get(v, 0) + c
    return {v: c for v, c in out.items() if c}


def add_chains(chains: Sequence[Tuple[Dict[int, int], int]]) -> Dict[int, int]:
    out: Dict[int, int] = {}
    for ch, s in chains:
        for e, c in ch.items():
            out[e] = out.get(e, 0) + s * c
    return {e: c for e, c in out.items() if c}


def snap_cycle(cycle: Sequence[Step], polylines: Sequence[Sequence[Sequence[float]]],
               cx: CubicalComplex) -> Dict[int, int]:
    """Cubical 1-cycle of a graph cycle, given a sampled polyline (head -> tail) per edge."""
    parts = []
    for e, d in cycle:
        ch = snap_polyline(cx, polylines[e])
        parts.append((ch, d))
    z = add_chains(parts)
    if chain_boundary(cx, z):
        raise SnapError("snapped chain is not a cycle")
    return z


def minimal_spanning_subset(cycles: CycleSet, classes: Sequence[dict], model: H1Model) -> List[int]:
    """Greedy Gauss-Jordan selection, shortest cycles first, of classes spanning H1."""
    order = sorted(range(len(classes)), key=lambda h: (len(cycles.cycles[h]), h))
    span = model.new_span()
    chosen = []
    for h in order:
        if span.add(model.vector(classes[h])):
            chosen.append(h)
    if len(chosen) != model.b1:
        raise SpanError(f"cycles span rank {len(chosen)} but the first Betti number is {model.b1}")
    return sorted(chosen)


# ---------------------------------------------------------------------------
# curve sampling


def sample_curve(g, step: float, max_depth: int = 40) -> List[Tuple[float, ...]]:
    """Float points from the left limit to the right limit, consecutive points at most ``step`` apart."""
    from .reps import curve_limit, curve_point
    from .cad import separate
    from .realroots import AlgNum

    def fl(pt):
        return tuple(a.approx(Fraction(1, 2 ** 40)) for a in pt)

    left = fl(curve_limit(g, "left"))
    right = fl(curve_limit(g, "right"))
    a, b = g.left, g.right

    def interior(x: Fraction):
        return fl(curve_point(g, AlgNum.rational(x)))

    def dist(p, q):
        return max(abs(x - y) for x, y in zip(p, q))

    lo, hi = separate(a, b)
    if a.poly is None:
        lo = a.value
    if b.poly is None:
        hi = b.value
    n0 = 4
    xs = [lo + (hi - lo) * Fraction(j, n0) for j in range(1, n0)]
    pts = [(x, interior(x)) for x in xs]

    def toward(end: AlgNum, x: Fraction, side: str) -> Fraction:
        # a rational strictly between the end and x, halving the gap
        w = abs(x - Fraction(end.interval()[0]))
        elo, ehi = end.refine(w / 16)
        ref = ehi if side == "left" else elo
        if end.poly is None:
            ref = end.value
        return (ref + x) / 2

    # refine toward the left end
    out: List[Tuple[float, ...]] = []
    seq = list(pts)
    depth = 0
    while dist(left, seq[0][1]) > step and depth < max_depth:
        x = toward(a, seq[0][0], "left")
        seq.insert(0, (x, interior(x)))
        depth += 1
    depth = 0
    while dist(right, seq[-1][1]) > step and depth < max_depth:
        x = toward(b, seq[-1][0], "right")
        seq.append((x, interior(x)))
        depth += 1
    # refine between interior samples
    i = 0
    refined = [seq[0]]
    stack = list(reversed(seq[1:]))
    budget = 100000
    while stack and budget:
        budget -= 1
        nxt = stack[-1]
        cur = refined[-1]
        if dist(cur[1], nxt[1]) > step and nxt[0] - cur[0] > Fraction(1, 2 ** 60):
            mid = (cur[0] + nxt[0]) / 2
            stack.append((mid, interior(mid)))
        else:
            refined.append(stack.pop())
    out = [left] + [p for _, p in refined] + [right]
    return out


# ---------------------------------------------------------------------------
# relative checks


@dataclass
class PairReport:
    h0_iso: bool
    h1_epi: bool
    image_rank: int
    b0: int
    b1: int
    resolution: int


def _cube_labels(cx: CubicalComplex) -> np.ndarray:
    labels, _ = ndimage.label(cx.marked, structure=np.ones((3,) * cx.k))
    return labels


def relative_pair_check(member, net, box, resolution: int, field: str = "gf2",
                        polylines: Optional[Sequence[Sequence[Sequence[float]]]] = None,
                        complex_: Optional[CubicalComplex] = None, model: Optional[H1Model] = None) -> PairReport:
    """Oracle test that the network's components and loops generate those of the set.

    ``member`` is the set's box oracle; the network is sampled (or ``polylines``
    are used) and snapped onto the marked complex.
    """
    if complex_ is None:
        grid = make_grid(*box, resolution)
        cx = CubicalComplex(grid, mark(member, grid))
    else:
        cx = complex_
        grid = cx.grid
    b0, b1 = cx.betti()
    if polylines is None:
        polylines = [sample_curve(g, grid.h / 2) for g in net.edges]
    labels = _cube_labels(cx)
    g = Graph.from_net(net)
    comp = g.components()
    seen: Dict[int, int] = {}
    h0_iso = True
    for v, c in enumerate(comp):
        cube = grid.cube_of([a.approx(Fraction(1, 2 ** 40)) for a in net.points[v]])
        lab = int(labels[cube])
        if lab == 0:
            raise SnapError("a network vertex lies in an unmarked cell")
        if seen.setdefault(c, lab) != lab:
            h0_iso = False
    if len(set(seen.values())) != len(seen) or len(set(seen.values())) != b0:
        h0_iso = False
    if model is None:
        model = H1Model(cx, field)
    cycles = cycle_basis(g)
    chains = [snap_cycle(c, polylines, cx) for c in cycles.cycles]
    rank = model.image_rank(chains)
    return PairReport(h0_iso, rank == model.b1, rank, b0, model.b1, resolution)
