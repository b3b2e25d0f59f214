"""Command-line driver: skeleton, closed-formula loops and oracle verification.

Exit codes: 0 success, 2 input or contract error, 3 oracle instability.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .formulas import FALSE, FormulaError, disj, formula_to_json, parse_formula, polys_of
from .homology import (FormulaOracle, Graph, H1Model, SnapError, SpanError, CubicalComplex, cycle_basis,
                       h0_basis, make_grid, mark, minimal_spanning_subset, relative_pair_check,
                       sample_curve, snap_cycle, tighten_box)
from .realroots import TriThomEncoding, weak_thom_formula
from .skeleton import Radius, big_enough_radius, skeleton, with_ball

EXIT_OK, EXIT_CONTRACT, EXIT_UNSTABLE = 0, 2, 3


class ContractError(ValueError):
    pass


class OracleInstability(RuntimeError):
    pass


@dataclass
class RunConfig:
    field: str = "gf2"
    resolution: int = 64
    max_refine: int = 3
    radius: Optional[Fraction] = None
    seed: int = 0
    timing: bool = False

    def validate(self) -> None:
        r = self.resolution
        if r < 16 or r & (r - 1):
            raise ContractError("resolution must be a power of two, at least 16")
        if self.field not in ("gf2", "rational"):
            raise ContractError("field must be gf2 or rational")
        if self.max_refine < 0:
            raise ContractError("max-refine must be nonnegative")
        if self.radius is not None and self.radius <= 0:
            raise ContractError("radius must be positive")


class _Clock:
    def __init__(self):
        self.stages: Dict[str, float] = {}
        self._t = time.perf_counter()

    def lap(self, name: str) -> None:
        now = time.perf_counter()
        self.stages[name] = round(now - self._t, 3)
        self._t = now


def _load(document):
    try:
        names, _, phi = parse_formula(document)
    except FormulaError as exc:
        raise ContractError(str(exc)) from exc
    k = len(names)
    if k not in (2, 3):
        raise ContractError(f"expected 2 or 3 variables, got {k}")
    return names, phi, k


def _radius(phi, k: int, cfg: RunConfig) -> Radius:
    if cfg.radius is not None:
        r = Fraction(cfg.radius)
        return Radius(Fraction(r.numerator), Fraction(r.denominator))
    return big_enough_radius(TriThomEncoding.empty(k), polys_of(phi), phi)


def _round(pts) -> List[List[float]]:
    return [[round(float(c), 6) for c in p] for p in pts]


def _oracle(phi, k: int, radius: Radius, cfg: RunConfig):
    """Betti numbers at successive resolutions until two consecutive ones agree."""
    _, bounded = with_ball(polys_of(phi), phi, k, radius)
    member = FormulaOracle(bounded, k)
    r = float(radius.r)
    box = tighten_box(member, [-r] * k, [r] * k)
    reports = []
    if box is None:
        return member, None, [{"resolution": cfg.resolution, "b0": 0, "b1": 0}], None
    res = cfg.resolution // 2
    prev = None
    final = None
    for step in range(cfg.max_refine + 2):
        grid = make_grid(*box, res)
        cx = CubicalComplex(grid, mark(member, grid))
        b = cx.betti()
        reports.append({"resolution": res, "b0": b[0], "b1": b[1]})
        if prev is not None and prev == b:
            final = cx
            break
        prev = b
        res *= 2
    if final is None:
        raise OracleInstability("cubical Betti numbers did not stabilize: "
                                + ", ".join(f"{d['resolution']}:{d['b0']},{d['b1']}" for d in reports))
    return member, box, reports, final


def _edge_closures(net) -> List:
    from .closure import curve_to_closed
    return [curve_to_closed(g.context, g)[1] for g in net.edges]


def _vertex_formula(pt, k: int):
    return weak_thom_formula(TriThomEncoding.from_point(pt, k))


def _gamma_doc(net, polylines) -> dict:
    return {
        "vertices": [[a.to_dict() for a in p] for p in net.points],
        "edges": [{"left": l, "right": r, "polyline": _round(pl)}
                  for l, r, pl in zip(net.left, net.right, polylines)],
    }


def run_skeleton(document, cfg: RunConfig = RunConfig()) -> dict:
    cfg.validate()
    names, phi, k = _load(document)
    clock = _Clock()
    radius = _radius(phi, k, cfg)
    net, radius, _ = skeleton(polys_of(phi), phi, k, radius)
    clock.lap("skeleton")
    step = float(radius.r) / 256
    polylines = [sample_curve(g, step) for g in net.edges]
    clock.lap("sampling")
    out = {"vars": names, "radius": str(radius.r), "network": net.to_dict(), "gamma": _gamma_doc(net, polylines)}
    out["provenance"] = _provenance(cfg, radius, net, [], clock)
    return out


def run_betti(document, cfg: RunConfig = RunConfig()) -> dict:
    cfg.validate()
    _, phi, k = _load(document)
    clock = _Clock()
    radius = _radius(phi, k, cfg)
    _, _, reports, _ = _oracle(phi, k, radius, cfg)
    clock.lap("oracle")
    last = reports[-1]
    out = {"betti": [last["b0"], last["b1"]], "stable": True, "resolutions": reports}
    if cfg.timing:
        out["timing"] = clock.stages
    return out


def _provenance(cfg: RunConfig, radius: Radius, net, reports, clock) -> dict:
    prov = {
        "config": {"field": cfg.field, "resolution": cfg.resolution, "max_refine": cfg.max_refine,
                   "radius": None if cfg.radius is None else str(cfg.radius), "seed": cfg.seed},
        "radius": {"value": str(radius.r), "distinguished_values": [v.to_dict() for v in radius.values]},
        "morse_values": [{"left": g.left.to_dict(), "right": g.right.to_dict()} for g in net.groups],
        "resolutions": [d["resolution"] for d in reports],
    }
    if cfg.timing:
        prov["timing"] = clock.stages
    return prov


def run_basis(document, cfg: RunConfig = RunConfig()) -> dict:
    """Skeleton, loop formulas, minimal spanning loops and the oracle verification report."""
    return compute_basis(document, cfg)[0]


def compute_basis(document, cfg: RunConfig = RunConfig()):
    """Like :func:`run_basis`, also returning the network and the closed formula of every edge."""
    cfg.validate()
    names, phi, k = _load(document)
    clock = _Clock()
    radius = _radius(phi, k, cfg)
    net, radius, _ = skeleton(polys_of(phi), phi, k, radius)
    clock.lap("skeleton")
    closures = _edge_closures(net)
    clock.lap("closure")
    member, box, reports, cx = _oracle(phi, k, radius, cfg)
    clock.lap("oracle")
    g = Graph.from_net(net)
    cycles = cycle_basis(g)
    if cx is None:
        polylines = [sample_curve(e, float(radius.r) / 256) for e in net.edges]
        chosen: List[int] = []
        pair = {"h0_iso": not net.points, "h1_epi": True, "image_rank": 0}
        b0 = b1 = 0
    else:
        polylines = [sample_curve(e, cx.grid.h / 2) for e in net.edges]
        clock.lap("sampling")
        try:
            model = H1Model(cx, cfg.field)
            b0, b1 = cx.betti()
            if model.b1 != b1:
                raise OracleInstability("chain-level and duality Betti numbers disagree")
            chains = [snap_cycle(c, polylines, cx) for c in cycles.cycles]
            chosen = minimal_spanning_subset(cycles, chains, model)
            rep = relative_pair_check(member, net, box, reports[-1]["resolution"], cfg.field,
                                      polylines, complex_=cx, model=model)
        except (SnapError, SpanError) as exc:
            raise ContractError(str(exc)) from exc
        pair = {"h0_iso": rep.h0_iso, "h1_epi": rep.h1_epi, "image_rank": rep.image_rank}
        clock.lap("verification")
    cycle_docs = []
    for h in chosen:
        steps = cycles.cycles[h]
        psi = disj(*[closures[e] for e, _ in steps])
        cycle_docs.append({"edges": [e for e, _ in steps], "directions": [d for _, d in steps],
                           "formula": formula_to_json(psi, names)})
    z0 = [formula_to_json(_vertex_formula(u.point(), k), names) for u in h0_basis(net)]
    on_edges = set(net.left) | set(net.right)
    lonely = [_vertex_formula(p, k) for v, p in enumerate(net.points) if v not in on_edges]
    z1 = disj(*closures, *lonely) if (closures or lonely) else FALSE
    result = {
        "vars": names,
        "betti": [b0, b1],
        "cycles": cycle_docs,
        "z0": z0,
        "z1": formula_to_json(z1, names),
        "verification": {**pair, "resolutions": reports},
        "gamma": _gamma_doc(net, polylines),
        "provenance": _provenance(cfg, radius, net, reports, clock),
    }
    return result, net, closures


# ---------------------------------------------------------------------------
# rendering

_PALETTE = ["#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"]


def render_svg(result: dict, plane: Tuple[int, int] = (0, 1), size: int = 480) -> str:
    """Polylines of the network projected to a coordinate plane; chosen loops highlighted."""
    a, b = plane
    edges = result.get("gamma", {}).get("edges", [])
    pts = [(p[a], p[b]) for e in edges for p in e["polyline"]]
    if pts:
        xs = [p[0] for p in pts]
        ys = [p[1] for p in pts]
        lo_x, hi_x, lo_y, hi_y = min(xs), max(xs), min(ys), max(ys)
    else:
        lo_x, hi_x, lo_y, hi_y = -1.0, 1.0, -1.0, 1.0
    span = max(hi_x - lo_x, hi_y - lo_y, 1e-9)
    cx, cy = (lo_x + hi_x) / 2, (lo_y + hi_y) / 2
    margin = 24
    scale = (size - 2 * margin) / span

    def tr(x, y):
        return (f"{margin + (x - cx) * scale + (size - 2 * margin) / 2:.2f}",
                f"{size - margin - (y - cy) * scale - (size - 2 * margin) / 2:.2f}")

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
           f'viewBox="0 0 {size} {size}">',
           f'<rect width="{size}" height="{size}" fill="white"/>']
    x0, y0 = tr(0.0, 0.0)
    out.append(f'<line x1="0" y1="{y0}" x2="{size}" y2="{y0}" stroke="#bbbbbb" stroke-width="1"/>')
    out.append(f'<line x1="{x0}" y1="0" x2="{x0}" y2="{size}" stroke="#bbbbbb" stroke-width="1"/>')

    def poly(points, color, width):
        coords = " ".join(",".join(tr(p[a], p[b])) for p in points)
        return f'<polyline points="{coords}" fill="none" stroke="{color}" stroke-width="{width}"/>'

    for e in edges:
        out.append(poly(e["polyline"], "#555555", 1.5))
    for j, cyc in enumerate(result.get("cycles", [])):
        color = _PALETTE[j % len(_PALETTE)]
        for e in cyc["edges"]:
            out.append(poly(edges[e]["polyline"], color, 3))
    out.append("</svg>")
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# entry point


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="sabasis", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    for name in ("basis", "betti", "skeleton"):
        s = sub.add_parser(name)
        s.add_argument("input", help="formula document (JSON file, or - for stdin)")
        s.add_argument("--field", default="gf2", choices=["gf2", "rational"])
        s.add_argument("--resolution", type=int, default=64)
        s.add_argument("--max-refine", type=int, default=3)
        s.add_argument("--radius", type=Fraction, default=None)
        s.add_argument("--seed", type=int, default=0)
        s.add_argument("--timing", action="store_true", help="record per-stage timing")
        s.add_argument("--out", default=None)
    r = sub.add_parser("render")
    r.add_argument("input", help="result document from basis or skeleton")
    r.add_argument("--plane", default="0,1", help="coordinate pair, e.g. 0,1")
    r.add_argument("--out", default=None)
    return p


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _write(text: str, path: Optional[str]) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = _parser().parse_args(argv)
    try:
        text = _read(args.input)
        if args.command == "render":
            plane = tuple(int(t) for t in args.plane.split(","))
            if len(plane) != 2:
                raise ContractError("plane must name two coordinates")
            _write(render_svg(json.loads(text), plane), args.out)
            return EXIT_OK
        cfg = RunConfig(args.field, args.resolution, args.max_refine, args.radius, args.seed, args.timing)
        run = {"basis": run_basis, "betti": run_betti, "skeleton": run_skeleton}[args.command]
        result = run(text, cfg)
        _write(json.dumps(result, indent=1, sort_keys=True) + "\n", args.out)
        return EXIT_OK
    except (ContractError, OSError, json.JSONDecodeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONTRACT
    except OracleInstability as exc:
        print(f"unstable: {exc}", file=sys.stderr)
        return EXIT_UNSTABLE


if __name__ == "__main__":
    sys.exit(main())
