"""Minimum halo ratio over small subsets along growing cycles, random regular graphs and hypercubes.

Cycles stay near 2/|A| while random 3-regular graphs keep ratios bounded away
from zero, which is the finite-prefix picture behind expander-light sequences.
"""
import argparse
from dataclasses import dataclass

from coarsekit.graphs import cycle_graph, graph_metric, halo_ratio_search, hypercube_graph, random_regular_graph


@dataclass
class Config:
    sizes: tuple[int, ...] = (16, 32, 64, 128)
    max_size: int = 4
    degree: int = 3
    samples: int = 20000
    seed: int = 0


def families(cfg: Config):
    for n in cfg.sizes:
        yield "cycle", n, cycle_graph(n)
        yield f"{cfg.degree}-regular", n, random_regular_graph(cfg.degree, n, cfg.seed)
    for d in range(3, 8):
        yield "hypercube", 2**d, hypercube_graph(d)


def main(cfg: Config) -> None:
    print(f"{'family':>12} {'n':>5} {'min ratio':>10} {'subset':>22} exhaustive")
    for name, n, G in families(cfg):
        res = halo_ratio_search(graph_metric(G), cfg.max_size, seed=cfg.seed, samples=cfg.samples)
        print(f"{name:>12} {n:>5} {str(res.min_ratio):>10} {str(res.subset):>22} {res.exhaustive}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-size", type=int, default=4)
    ap.add_argument("--samples", type=int, default=20000)
    ap.add_argument("--seed", type=int, default=0)
    a = ap.parse_args()
    main(Config(max_size=a.max_size, samples=a.samples, seed=a.seed))
