"""Measured horizon ratios on hypercubes against the bound from the induced partition's Lipschitz number."""
import argparse
from dataclasses import dataclass

from coarsekit.constructions import ratio_bound_from_pou
from coarsekit.errors import PreconditionError
from coarsekit.graphs import graph_metric, hypercube_graph
from coarsekit.instances import closed_ball_cover


@dataclass
class Config:
    dims: tuple[int, ...] = (3, 4, 5, 6)
    radii: tuple[int, ...] = (1, 2, 3)
    scales: tuple[float, ...] = (1.0, 2.0)


def main(cfg: Config) -> None:
    print(f"{'d':>2} {'radius':>6} {'s':>4} {'bound':>8} {'measured':>9}")
    for d in cfg.dims:
        X = graph_metric(hypercube_graph(d))
        for radius in cfg.radii:
            U = closed_ball_cover(X, radius)
            for s in cfg.scales:
                try:
                    bound, rep = ratio_bound_from_pou(X, U, s)
                except PreconditionError as exc:
                    print(f"{d:>2} {radius:>6} {s:>4g} {'-':>8} {'-':>9}  ({exc})")
                    continue
                print(f"{d:>2} {radius:>6} {s:>4g} {bound:>8.4f} {float(rep.min_ratio):>9.4f}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--dims", type=int, nargs="*", default=[3, 4, 5, 6])
    a = ap.parse_args()
    main(Config(dims=tuple(a.dims)))
