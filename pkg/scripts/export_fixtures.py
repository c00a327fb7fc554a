"""Write the catalogued subspaces and operators as JSON documents for the CLI."""

import argparse
from dataclasses import dataclass
from pathlib import Path

from dewces.catalog import ladder_ces, pyramid_Q, pyramid_upb, v1_subspace, v2_subspace
from dewces.documents import from_matrix, from_subspace
from dewces.tensor_core import BipartiteDims


@dataclass
class Config:
    out_dir: str = "fixtures"


def main(cfg: Config) -> None:
    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    docs = {f"ladder{n}.json": from_subspace(ladder_ces(n), {"example": "ladder", "n": n}) for n in range(3, 7)}
    docs["v1.json"] = from_subspace(v1_subspace(1, 2, 0, 1), {"example": "v1", "params": [1, 2, 0, 1]})
    docs["v2.json"] = from_subspace(v2_subspace(), {"example": "v2"})
    docs["pyramid_complement.json"] = from_subspace(pyramid_upb().complement, {"example": "pyramid"})
    for r in (0.0, 0.1, 0.25, 0.4, 0.5):
        docs[f"pyramid_Q_{r}.json"] = from_matrix(pyramid_Q(r), BipartiteDims(3, 3), {"example": "pyramid", "r": r})
    for name, doc in docs.items():
        (out / name).write_text(doc.dumps(indent=1) + "\n")
        print(out / name)


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--out-dir", default=Config.out_dir)
    main(Config(p.parse_args().out_dir))
