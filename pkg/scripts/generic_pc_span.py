"""Empirical fraction of random k-dim CES in 3x3 whose orthogonal product vectors span after PC.

Genericity needs a probability model; this one draws Haar-random subspaces
(conditioned on certifying as CES) and reports the fraction without gating
on it.  The special V1
instance shows the fraction is not 1 on every subspace.
"""

import argparse
import time
from dataclasses import dataclass

from dewces.prodvec_families import enumerate_product_vectors, span_certificate
from dewces.subspaces import random_ces
from dewces.tensor_core import BipartiteDims


@dataclass
class Config:
    trials: int = 100
    seed: int = 0
    dims: tuple[int, int] = (3, 3)
    subspace_dims: tuple[int, ...] = (1, 2, 3, 4)


def main(cfg: Config) -> None:
    dims = BipartiteDims(*cfg.dims)
    full = dims.total
    for k in cfg.subspace_dims:
        start = time.perf_counter()
        hist: dict[int, int] = {}
        for t in range(cfg.trials):
            V, cert = random_ces(dims, k, seed=cfg.seed * 100_003 + 1000 * k + t)
            fam = enumerate_product_vectors(V, seed=t, certificate=cert)
            pc = span_certificate(fam).pc_span_dim if len(fam) else 0
            hist[pc] = hist.get(pc, 0) + 1
        frac = hist.get(full, 0) / cfg.trials
        print(f"k={k}: PC span = {full} in {frac:.1%} of {cfg.trials} draws; "
              f"histogram {dict(sorted(hist.items()))}; {time.perf_counter() - start:.1f}s")


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--trials", type=int, default=Config.trials)
    p.add_argument("--seed", type=int, default=Config.seed)
    args = p.parse_args()
    main(Config(trials=args.trials, seed=args.seed))
