"""Run every acceptance criterion and print one line each; optional JSON dump."""
import argparse
import json
import sys
from dataclasses import asdict, dataclass

from coarsekit.acceptance import CRITERIA


@dataclass
class Config:
    out: str | None = None
    only: tuple[int, ...] = ()


def main(cfg: Config) -> int:
    results = []
    for i, crit in enumerate(CRITERIA, start=1):
        if cfg.only and i not in cfg.only:
            continue
        r = crit()
        print(r.line(), flush=True)
        results.append(r)
    if cfg.out:
        with open(cfg.out, "w") as fh:
            json.dump([asdict(r) for r in results], fh, indent=1)
    return 0 if all(r.passed for r in results) else 1


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out")
    ap.add_argument("--only", type=int, nargs="*", default=())
    a = ap.parse_args()
    sys.exit(main(Config(a.out, tuple(a.only))))
