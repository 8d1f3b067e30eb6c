"""How far |A Δ B| / |A ∩ B| can exceed the l1 distance of the uniform vectors on A and B.

The witness built from a partition certifies only the l1 distance, so a
ratio above eps can survive a small l1 distance. Scans |A|, |B| up to a bound
and reports the worst ratio/l1 factor among pairs with l1 < eps, plus the smallest instance that breaks
eps = 1/2 with l1 < 1/2.
"""
import argparse
from dataclasses import dataclass
from fractions import Fraction

from coarsekit.pou import simplex_bounds


@dataclass
class Config:
    max_size: int = 120
    eps: Fraction = Fraction(1, 2)


def main(cfg: Config) -> None:
    worst = (Fraction(0), None)
    breaker = None
    for a in range(1, cfg.max_size + 1):
        for b in range(a, cfg.max_size + 1):
            for k in range(1, a + 1):
                A = set(range(a))
                B = set(range(a - k, a - k + b))
                l1 = simplex_bounds(A, B).exact
                if l1 == 0:
                    continue
                ratio = Fraction(len(A ^ B), k)
                if l1 < cfg.eps and ratio / l1 > worst[0]:
                    worst = (ratio / l1, (a, b, k, l1, ratio))
                if breaker is None and l1 < cfg.eps < ratio:
                    breaker = (a, b, k, l1, ratio)
    f, (a, b, k, l1, ratio) = worst
    print(f"worst ratio / l1 = {float(f):.4f} at |A|={a}, |B|={b}, |A∩B|={k} (l1 {float(l1):.4f}, ratio {float(ratio):.4f})")
    if breaker:
        a, b, k, l1, ratio = breaker
        print(f"first instance with l1 < {cfg.eps} < ratio: |A|={a}, |B|={b}, |A∩B|={k}, l1 {float(l1):.4f}, ratio {float(ratio):.4f}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-size", type=int, default=120)
    ap.add_argument("--eps", type=Fraction, default=Fraction(1, 2))
    a = ap.parse_args()
    main(Config(a.max_size, a.eps))
