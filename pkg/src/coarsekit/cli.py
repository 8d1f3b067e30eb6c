"""``coarsekit`` command line: one subcommand per construction or check.

Exit codes: 0 on success, 1 when a certificate fails (including violated
preconditions or postconditions), 2 on usage or input-validation errors.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
import warnings
from dataclasses import asdict, dataclass, field
from fractions import Fraction

import numpy as np

from . import config, graphs, io
from .constructions import (
    RoundingParams,
    amenable_cover_to_pou,
    average_pou,
    horizon_ratio,
    ratio_bound_from_pou,
    round_to_barycentric,
)
from .errors import CoarseError, PostconditionError, PreconditionError, ValidationError
from .measures import cover_finder, msp_greedy, scan_boundary_set
from .metric import separated_net
from .pou import (
    coboundedness,
    levin_pou,
    lipschitz_number,
    pou_metrics,
    pou_to_witness,
    witness_to_pou,
)

HOLDS, FAILS, NA = "holds", "fails", "not-applicable"


@dataclass
class Report:
    operation: str
    inputs: dict
    results: dict
    status: str = NA
    violated: str | None = None
    summary: str = ""
    notes: list[str] = field(default_factory=list)

    def to_json(self) -> str:
        return json.dumps(_plain(asdict(self)), indent=1, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> Report:
        return cls(**json.loads(text))

    def to_text(self) -> str:
        lines = [self.summary] if self.summary else []
        lines += [f"{k} = {_show(v)}" for k, v in self.results.items() if not self.summary]
        if self.status != NA:
            tail = f" ({self.violated})" if self.violated else ""
            lines.append(f"certificate: {self.status}{tail}")
        lines += [f"note: {n}" for n in self.notes]
        return "\n".join(lines)

    @property
    def exit_code(self) -> int:
        return 1 if self.status == FAILS else 0


def _plain(obj):
    """JSON-safe copy: Fractions become "p/q", infinities "inf", sets sorted lists."""
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, float):
        return "inf" if math.isinf(obj) else obj
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return _plain(float(obj))
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (set, frozenset)):
        return sorted(_plain(v) for v in obj)
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    return obj


def _show(v) -> str:
    v = _plain(v)
    return v if isinstance(v, str) else json.dumps(v)


def _subset(text: str) -> list[int]:
    return [int(t) for t in text.replace(" ", "").split(",") if t]


def _space(args):
    if getattr(args, "space", None):
        return io.parse_instance(args.space, "space")
    if getattr(args, "graph", None):
        return graphs.graph_metric(io.parse_instance(args.graph, "graph"))
    raise ValidationError("give --space or --graph")


def _status(ok: bool, clause: str) -> tuple[str, str | None]:
    return (HOLDS, None) if ok else (FAILS, clause)


def cmd_cheeger(args) -> Report:
    G = io.parse_instance(args.graph, "graph")
    res = graphs.cheeger_constant(G, heuristic=args.heuristic)
    kind = "" if res.exact else " (heuristic upper bound)"
    return Report(
        "cheeger",
        {"graph": args.graph},
        {"h": res.h, "A": list(res.subset), "exact": res.exact},
        summary=f"h = {res.h}, A = [{','.join(map(str, res.subset))}]{kind}",
    )


def cmd_girth(args) -> Report:
    G = io.parse_instance(args.graph, "graph")
    g = graphs.girth(G)
    return Report("girth", {"graph": args.graph}, {"girth": g}, summary=f"girth = {_show(g)}")


def cmd_halo(args) -> Report:
    X = _space(args)
    res = graphs.halo_ratio_search(X, args.max_size, seed=args.seed, samples=args.samples)
    rep = Report(
        "halo",
        {"max_size": args.max_size, "c": args.c},
        {"min_ratio": res.min_ratio, "A": list(res.subset), "exhaustive": res.exhaustive, "checked": res.checked},
        summary=f"min |halo(A)|/|A| = {res.min_ratio} at A = {list(res.subset)}"
        + ("" if res.exhaustive else f" (sampled, {res.checked} subsets)"),
    )
    if args.c is not None:
        rep.status, rep.violated = _status(res.min_ratio >= Fraction(args.c), f"min_ratio < c = {args.c}")
        rep.notes.append(f"prefix certificate: only subsets with |A| <= {args.max_size}")
    return rep


def cmd_girth_halo(args) -> Report:
    G = io.parse_instance(args.graph, "graph")
    pool = _subset(args.vertices) if args.vertices else None
    res = graphs.girth_halo_check(G, args.M, pool)
    rep = Report(
        "girth-halo",
        {"graph": args.graph, "M": args.M},
        {"holds": res.holds, "checked": res.checked, "counterexample": res.counterexample},
        summary=f"|halo(A)| >= |A| for all {res.checked} subsets with |A| <= {args.M}"
        if res.holds
        else f"counterexample A = {list(res.counterexample)}",
    )
    rep.status, rep.violated = _status(res.holds, "|halo(A)| < |A|")
    return rep


def cmd_expander(args) -> Report:
    G = io.parse_instance(args.graph, "graph")
    ok = graphs.expander_check(G, args.k, args.eps)
    rep = Report("expander", {"k": args.k, "eps": args.eps}, {"expander": ok}, summary=f"({args.k},{args.eps})-expander: {ok}")
    rep.status, rep.violated = _status(ok, "degree > k or h < eps")
    return rep


def cmd_expander_light(args) -> Report:
    ratios = []
    for path in args.graph:
        G = io.parse_instance(path, "graph")
        res = graphs.halo_ratio_search(graphs.graph_metric(G), args.max_size, seed=args.seed, samples=args.samples)
        ratios.append({"graph": path, "n": G.n, "min_ratio": res.min_ratio, "A": list(res.subset), "exhaustive": res.exhaustive})
    ok = all(r["min_ratio"] >= Fraction(args.c) for r in ratios)
    rep = Report(
        "expander-light",
        {"max_size": args.max_size, "c": args.c},
        {"members": ratios},
        summary="; ".join(f"n={r['n']}: {r['min_ratio']}" for r in ratios),
        notes=[f"prefix certificate over {len(ratios)} members and |A| <= {args.max_size}"],
    )
    rep.status, rep.violated = _status(ok, f"some member has min ratio < c = {args.c}")
    return rep


def cmd_amenability(args) -> Report:
    X = _space(args)
    U = io.parse_instance(args.cover, "cover", X)
    rep_ = horizon_ratio(X, U, args.r, args.s)
    rep = Report(
        "amenability",
        {"r": args.r, "s": args.s, "eps": args.eps},
        {
            "min_ratio": rep_.min_ratio,
            "worst_point": rep_.worst_point,
            "horizon_sizes": rep_.horizon_sizes,
        },
        summary=f"min ratio = {rep_.min_ratio} at point {rep_.worst_point}",
        notes=["certifies only the supplied (r, s) pair"],
    )
    if args.eps is not None:
        rep.status, rep.violated = _status(rep_.holds(args.eps), f"min_ratio <= 1 - eps = {1 - args.eps}")
    return rep


def cmd_double_count(args) -> Report:
    G = io.parse_instance(args.graph, "graph")
    U = io.parse_instance(args.cover, "cover", graphs.graph_metric(G))
    r = graphs.double_counting_check(G, U)
    rep = Report(
        "double-count",
        {"graph": args.graph, "cover": args.cover},
        {"lhs": r.lhs, "rhs": r.rhs, "p_min": r.p_min, "c_min": r.c_min, "bound_ok": r.bound_ok},
        summary=f"lhs = {r.lhs}, rhs = {r.rhs}, p_min = {r.p_min}, c_min = {r.c_min}",
    )
    if not r.identity_holds:
        rep.status, rep.violated = FAILS, "lhs != rhs"
    elif r.bound_ok is False:
        rep.status, rep.violated = FAILS, "p_min > 1/(1+c_min)"
    else:
        rep.status = HOLDS
    return rep


def cmd_levin(args) -> Report:
    X = _space(args)
    S = _subset(args.S) if args.S else list(range(X.n))
    f, W = levin_pou(X, S, args.r)
    if args.out:
        io.write_json(args.out, io.pou_to_json(f))
    m = pou_metrics(f, args.r)
    rep = Report(
        "levin",
        {"r": args.r, "S": S},
        {"coboundedness": m.coboundedness, "lebesgue": m.lebesgue, "lipschitz": m.lipschitz_number, "pou": io.pou_to_json(f)},
        summary=f"coboundedness = {m.coboundedness:g} (< 6r = {6 * args.r:g}), lebesgue = {m.lebesgue:g} (>= r)",
    )
    rep.status = HOLDS
    return rep


def cmd_round(args) -> Report:
    X = _space(args)
    g = io.parse_instance(args.pou, "pou", X)
    params = RoundingParams(args.n, args.m, args.eps)
    res = round_to_barycentric(g, params)
    if args.out:
        io.write_json(args.out, io.pou_to_json(res.p))
    err = max(res.h[x].distance(g[x]) for x in range(X.n))
    rep = Report(
        "round",
        {"n": args.n, "m": args.m, "eps": args.eps},
        {"G2": res.G2, "max_error": err, "bound": (2 * args.n + 2) / args.m, "h": io.pou_to_json(res.h), "p": io.pou_to_json(res.p)},
        summary=f"max ||h - g|| = {err:.6g} <= (2n+2)/m = {(2 * args.n + 2) / args.m:.6g}",
    )
    rep.status = HOLDS
    return rep


def cmd_average(args) -> Report:
    X = _space(args)
    f = io.parse_instance(args.pou, "pou", X)
    U = io.parse_instance(args.cover, "cover", X)
    g = average_pou(f, U, args.eps, M=args.M)
    if args.out:
        io.write_json(args.out, io.pou_to_json(g))
    m = pou_metrics(g)
    rep = Report(
        "average",
        {"eps": args.eps, "M": args.M},
        {"lebesgue": m.lebesgue, "lipschitz": m.lipschitz_number, "pou": io.pou_to_json(g)},
        summary=f"lebesgue = {m.lebesgue:g} >= 1/eps, lipschitz = {m.lipschitz_number:.6g}",
    )
    rep.status = HOLDS
    return rep


def cmd_cover_to_pou(args) -> Report:
    X = _space(args)
    U = io.parse_instance(args.cover, "cover", X)
    g = amenable_cover_to_pou(X, U, args.r, args.mu, args.eps)
    if args.out:
        io.write_json(args.out, io.pou_to_json(g))
    m = pou_metrics(g)
    rep = Report(
        "cover-to-pou",
        {"r": args.r, "mu": args.mu, "eps": args.eps},
        {"lebesgue": m.lebesgue, "lipschitz": m.lipschitz_number, "pou": io.pou_to_json(g)},
        summary=f"lebesgue = {m.lebesgue:g} >= 2r, lipschitz = {m.lipschitz_number:.6g}",
    )
    rep.status = HOLDS
    return rep


def cmd_ratio_bound(args) -> Report:
    X = _space(args)
    U = io.parse_instance(args.cover, "cover", X)
    bound, r = ratio_bound_from_pou(X, U, args.s, args.mu, args.M)
    rep = Report(
        "ratio-bound",
        {"s": args.s, "mu": args.mu, "M": args.M},
        {"bound": bound, "min_ratio": r.min_ratio, "worst_point": r.worst_point},
        summary=f"min ratio {r.min_ratio} >= bound {bound:.6g}",
    )
    rep.status = HOLDS
    return rep


def cmd_property_a(args) -> Report:
    X = _space(args)
    if args.pou:
        f = io.parse_instance(args.pou, "pou", X)
        w = pou_to_witness(f, args.R, args.eps, args.M)
        if args.out:
            io.write_json(args.out, io.witness_to_json(w))
        worst, where = w.worst_pair(X, args.R)
        rep = Report(
            "property-a",
            {"direction": "pou-to-witness", "R": args.R, "eps": args.eps},
            {"S_bound": w.S_bound, "worst_ratio": worst, "worst_pair": where, "witness": io.witness_to_json(w)},
            summary=f"witness with S = {w.S_bound:g}, worst ratio {worst:.6g} < eps",
        )
    else:
        w = io.parse_instance(args.witness, "witness", X)
        f = witness_to_pou(X, w, args.eps)
        if args.out:
            io.write_json(args.out, io.pou_to_json(f))
        rep = Report(
            "property-a",
            {"direction": "witness-to-pou", "eps": args.eps},
            {"lipschitz": lipschitz_number(f), "coboundedness": coboundedness(f), "pou": io.pou_to_json(f)},
            summary=f"partition is ({args.eps},{args.eps})-Lipschitz, coboundedness {coboundedness(f):g}",
        )
    rep.status = HOLDS
    return rep


def cmd_folner(args) -> Report:
    G = io.parse_instance(args.group, "group")
    F = _subset(args.F)
    r = graphs.folner_analysis(G, F)
    rep = Report(
        "folner",
        {"F": F},
        {"max_gen_ratio": r.max_gen_ratio, "phi_lipschitz": r.phi_lipschitz},
        summary=f"max_gen_ratio = {r.max_gen_ratio}, phi lipschitz = {r.phi_lipschitz:.6g}",
    )
    rep.status, rep.violated = _status(r.sandwich_ok, "translation sandwich fails")
    return rep


def cmd_product_group(args) -> Report:
    G = io.parse_instance(args.group, "group")
    res = graphs.product_halo_claim_check(G, args.n, args.M, seed=args.seed, samples=args.samples)
    rep = Report(
        "product-group",
        {"n": args.n, "M": args.M},
        {"holds": res.holds, "checked": res.checked, "exhaustive": res.exhaustive, "counterexample": res.counterexample},
        summary=(f"|halo(A)| >= |A| on {res.checked} subsets" if res.holds else f"counterexample {list(res.counterexample)}")
        + ("" if res.exhaustive else " (sampled)"),
    )
    rep.status, rep.violated = _status(res.holds, "|halo(A)| < |A|")
    return rep


def cmd_msp(args) -> Report:
    X = _space(args)
    mu = io.parse_instance(args.measure, "measure", X)
    U = io.parse_instance(args.cover, "cover", X)
    fam = msp_greedy(X, mu, args.R, args.S, cover_finder(X, U, args.R, args.eps), args.c, args.eps)
    rep = Report(
        "msp",
        {"R": args.R, "S": args.S, "c": args.c, "eps": args.eps},
        {"members": [sorted(Z) for Z in fam.members], "mass": fam.mass(mu)},
        summary=f"{len(fam.members)} R-disjoint sets of mass {fam.mass(mu):.6g} > c",
        notes=["certificate for this measure only"],
    )
    rep.status = HOLDS
    return rep


def cmd_ula_scan(args) -> Report:
    X = _space(args)
    mu = io.parse_instance(args.measure, "measure", X)
    U = io.parse_instance(args.cover, "cover", X)
    label, pts = scan_boundary_set(X, mu, U, args.R, args.eps)
    rep = Report(
        "ula-scan",
        {"R": args.R, "eps": args.eps},
        {"label": label, "points": sorted(pts)},
        summary=f"element {label} has a light {args.R}-boundary",
        notes=["certificate for this measure only"],
    )
    rep.status = HOLDS
    return rep


def cmd_net(args) -> Report:
    X = _space(args)
    net = sorted(separated_net(X, args.r))
    return Report("net", {"r": args.r}, {"net": net}, summary=f"net = {net}")


GENERATORS = {
    "cycle": lambda a: graphs.cycle_graph(a.size),
    "path": lambda a: graphs.path_graph(a.size),
    "complete": lambda a: graphs.complete_graph(a.size),
    "hypercube": lambda a: graphs.hypercube_graph(a.size),
    "petersen": lambda a: graphs.petersen_graph(),
    "regular": lambda a: graphs.random_regular_graph(a.degree, a.size, a.seed),
    "tree": lambda a: graphs.truncated_regular_tree(a.degree, a.size)[0],
}


def cmd_gen(args) -> Report:
    if args.family == "cyclic-group":
        data = io.group_to_json(graphs.FiniteGroup.cyclic(args.size, (1,)))
    elif args.family == "product-group":
        H, G = graphs.product_group_space(graphs.FiniteGroup.cyclic(2), args.size)
        data = io.graph_to_json(G)
    else:
        G = GENERATORS[args.family](args)
        data = graphs.graph_metric(G) if args.as_space else G
        data = io.space_to_json(data) if args.as_space else io.graph_to_json(data)
    if args.out:
        io.write_json(args.out, data)
    return Report("gen", {"family": args.family, "size": args.size}, {"instance": data}, summary=args.out or json.dumps(data))


def cmd_acceptance(args) -> Report:
    from .acceptance import run_all

    results = run_all()
    ok = all(r.passed for r in results)
    lines = [r.line() for r in results]
    rep = Report(
        "acceptance",
        {},
        {"criteria": [{"id": r.ident, "passed": r.passed, "detail": r.detail, "seconds": r.seconds} for r in results]},
        summary="\n".join(lines),
    )
    rep.status, rep.violated = _status(ok, "some criteria failed")
    return rep


def _add_space(p, required=True):
    g = p.add_mutually_exclusive_group(required=required)
    g.add_argument("--space", help="space JSON file")
    g.add_argument("--graph", help="graph JSON file (shortest-path metric)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="coarsekit", description=__doc__.splitlines()[0])
    parser.add_argument("--format", choices=["text", "json"], default="text")
    parser.add_argument("--tol", type=float, default=None, help="global comparison tolerance")
    parser.add_argument("--seed", type=int, default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("cheeger", help="exact Cheeger constant")
    p.add_argument("--graph", required=True)
    p.add_argument("--heuristic", action="store_true", help="allow sweep-cut bound above the cap")
    p.set_defaults(func=cmd_cheeger)

    p = sub.add_parser("girth", help="shortest cycle length")
    p.add_argument("--graph", required=True)
    p.set_defaults(func=cmd_girth)

    p = sub.add_parser("halo", help="minimum halo ratio over small subsets")
    _add_space(p)
    p.add_argument("--max-size", type=int, required=True)
    p.add_argument("--c", type=float)
    p.add_argument("--samples", type=int, default=10**4)
    p.set_defaults(func=cmd_halo)

    p = sub.add_parser("girth-halo", help="halo bound on a large-girth graph")
    p.add_argument("--graph", required=True)
    p.add_argument("--M", type=int, required=True)
    p.add_argument("--vertices", help="comma-separated candidate pool")
    p.set_defaults(func=cmd_girth_halo)

    p = sub.add_parser("expander", help="(k, eps)-expander check")
    p.add_argument("--graph", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--eps", type=float, required=True)
    p.set_defaults(func=cmd_expander)

    p = sub.add_parser("expander-light", help="halo ratios along a finite graph sequence")
    p.add_argument("--graph", action="append", required=True)
    p.add_argument("--max-size", type=int, required=True)
    p.add_argument("--c", type=float, required=True)
    p.add_argument("--samples", type=int, default=10**4)
    p.set_defaults(func=cmd_expander_light)

    p = sub.add_parser("amenability", help="(r, s) horizon ratios of a cover")
    _add_space(p)
    p.add_argument("--cover", required=True)
    p.add_argument("--r", type=float, required=True)
    p.add_argument("--s", type=float, required=True)
    p.add_argument("--eps", type=float)
    p.set_defaults(func=cmd_amenability)

    p = sub.add_parser("double-count", help="halo double-counting identity and bound")
    p.add_argument("--graph", required=True)
    p.add_argument("--cover", required=True)
    p.set_defaults(func=cmd_double_count)

    p = sub.add_parser("levin", help="cobounded partition from a dense subset")
    _add_space(p)
    p.add_argument("--r", type=float, required=True)
    p.add_argument("--S", help="comma-separated dense subset (default all points)")
    p.add_argument("--out")
    p.set_defaults(func=cmd_levin)

    p = sub.add_parser("round", help="integer rounding to a barycentric partition")
    _add_space(p)
    p.add_argument("--pou", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--eps", type=float)
    p.add_argument("--out")
    p.set_defaults(func=cmd_round)

    p = sub.add_parser("average", help="average a partition over cover basepoints")
    _add_space(p)
    p.add_argument("--pou", required=True)
    p.add_argument("--cover", required=True)
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--M", type=float)
    p.add_argument("--out")
    p.set_defaults(func=cmd_average)

    p = sub.add_parser("cover-to-pou", help="barycentric partition from an amenable cover")
    _add_space(p)
    p.add_argument("--cover", required=True)
    p.add_argument("--r", type=float, required=True)
    p.add_argument("--mu", type=float, required=True)
    p.add_argument("--eps", type=float)
    p.add_argument("--out")
    p.set_defaults(func=cmd_cover_to_pou)

    p = sub.add_parser("ratio-bound", help="horizon ratio bound from the induced partition")
    _add_space(p)
    p.add_argument("--cover", required=True)
    p.add_argument("--s", type=float, required=True)
    p.add_argument("--mu", type=float)
    p.add_argument("--M", type=int)
    p.set_defaults(func=cmd_ratio_bound)

    p = sub.add_parser("property-a", help="convert between partitions and finite-set witnesses")
    _add_space(p)
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--pou")
    src.add_argument("--witness")
    p.add_argument("--R", type=float, default=1.0)
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--M", type=float)
    p.add_argument("--out")
    p.set_defaults(func=cmd_property_a)

    p = sub.add_parser("folner", help="translation ratio of a group subset")
    p.add_argument("--group", required=True)
    p.add_argument("--F", required=True, help="comma-separated elements")
    p.set_defaults(func=cmd_folner)

    p = sub.add_parser("product-group", help="halo claim in a power of a finite group")
    p.add_argument("--group", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--M", type=int, required=True)
    p.add_argument("--samples", type=int, default=10**4)
    p.set_defaults(func=cmd_product_group)

    p = sub.add_parser("msp", help="greedy R-disjoint family for a measure")
    _add_space(p)
    p.add_argument("--measure", required=True)
    p.add_argument("--cover", required=True)
    p.add_argument("--R", type=float, required=True)
    p.add_argument("--S", type=float, required=True)
    p.add_argument("--c", type=float, required=True)
    p.add_argument("--eps", type=float, required=True)
    p.set_defaults(func=cmd_msp)

    p = sub.add_parser("ula-scan", help="cover element with a light boundary")
    _add_space(p)
    p.add_argument("--measure", required=True)
    p.add_argument("--cover", required=True)
    p.add_argument("--R", type=float, required=True)
    p.add_argument("--eps", type=float, required=True)
    p.set_defaults(func=cmd_ula_scan)

    p = sub.add_parser("net", help="greedy maximal r-separated subset")
    _add_space(p)
    p.add_argument("--r", type=float, required=True)
    p.set_defaults(func=cmd_net)

    p = sub.add_parser("gen", help="write a built-in instance")
    p.add_argument("family", choices=[*GENERATORS, "cyclic-group", "product-group"])
    p.add_argument("--size", type=int, default=0)
    p.add_argument("--degree", type=int, default=3)
    p.add_argument("--as-space", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("acceptance", help="run the acceptance criteria")
    p.set_defaults(func=cmd_acceptance)
    return parser


def run(argv=None) -> tuple[Report | None, int, str]:
    """Parse and dispatch; returns the report, exit code and rendered output."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return None, int(exc.code or 0), ""
    if args.tol is not None:
        if not args.tol > 0:
            return None, 2, "error: --tol must be positive"
        config.set_tol(args.tol)
    try:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            report = args.func(args)
        report.notes += [str(w.message) for w in caught]
    except ValidationError as exc:
        return None, 2, f"error: {exc}"
    except (PreconditionError, PostconditionError) as exc:
        report = Report(args.command, {}, {}, FAILS, str(exc), summary=f"{type(exc).__name__}: {exc}")
    except (CoarseError, ValueError, IndexError) as exc:
        return None, 2, f"error: {exc}"
    finally:
        if args.tol is not None:
            config.set_tol(config.DEFAULT_TOL)
    out = report.to_json() if args.format == "json" else report.to_text()
    return report, report.exit_code, out


def main(argv=None) -> int:
    report, code, out = run(argv)
    if out:
        print(out, file=sys.stderr if report is None else sys.stdout)
    return code


if __name__ == "__main__":
    sys.exit(main())
