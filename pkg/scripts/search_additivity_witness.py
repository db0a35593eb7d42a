"""Search for a sequential-rule additivity witness and archive it.

The archived witness lets the test suite verify the nonadditivity gap
without re-running the random search.
"""

from __future__ import annotations

import argparse
from pathlib import Path

from seqmeas import io
from seqmeas.instruments import search_additivity_witness

DEFAULT_OUT = Path(__file__).resolve().parents[1] / "tests" / "fixtures" / "additivity_witness.json"


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--seed", type=int, default=7)
    parser.add_argument("--restarts", type=int, default=64)
    parser.add_argument("--out", type=Path, default=DEFAULT_OUT)
    args = parser.parse_args()

    witness = search_additivity_witness(seed=args.seed, restarts=args.restarts)
    print(f"best gap {witness.gap:.6f} at restart {witness.restart_index}")
    args.out.parent.mkdir(parents=True, exist_ok=True)
    io.dump_json(io.witness_to_obj(witness, args.seed, args.restarts), args.out)
    print(f"archived to {args.out}")


if __name__ == "__main__":
    main()
