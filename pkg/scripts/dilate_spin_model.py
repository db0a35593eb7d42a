"""Dilate the canonical instrument of a spin observable and inspect the model."""

from __future__ import annotations

import argparse

import numpy as np

from seqmeas import io
from seqmeas.instruments import induced_observable, luders_instrument
from seqmeas.models import dilation_matches_instrument, ozawa_dilation, verify_reproducing
from seqmeas.qubit import as_direction, spin_observable


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--direction", type=str, default="0,0,1")
    parser.add_argument("--trials", type=int, default=50)
    parser.add_argument("--seed", type=int, default=7)
    parser.add_argument("--out", type=str, default=None)
    args = parser.parse_args()

    n = as_direction([float(x) for x in args.direction.split(",")])
    inst = luders_instrument(spin_observable(n))
    model = ozawa_dilation(inst)

    print(f"direction {n}")
    print(f"probe dimension {model.dim_probe}")
    print("interaction unitary:")
    print(np.round(model.unitary, 6))
    print(f"branch Choi distance   {dilation_matches_instrument(model, inst):.3e}")
    deviation = verify_reproducing(
        model, trials=args.trials, seed=args.seed, expected=induced_observable(inst)
    )
    print(f"reproduction deviation {deviation:.3e}")
    if args.out:
        io.dump_json(io.model_to_obj(model), args.out)
        print(f"model written to {args.out}")


if __name__ == "__main__":
    main()
