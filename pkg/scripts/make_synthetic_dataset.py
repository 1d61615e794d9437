"""Write a synthetic per-qubit parameter file on a Chimera chip.

Values are i.i.d. normal with an optional shift for positions 4-7, and a
random fraction of qubits is dropped to mimic dead qubits.
"""
import argparse

import numpy as np

from chimera_dynamics.ingest import PARAMETERS, QubitDataset, QubitRecord, write_dataset

MEANS = {"beta": 1.0, "b": 0.0, "gamma": 1.0, "eta": 0.05}


def synthesize(rows, cols, dead_fraction, shift, seed):
    rng = np.random.default_rng(seed)
    n = rows * cols * 8
    alive = rng.random(n) >= dead_fraction
    records = []
    for q in np.flatnonzero(alive):
        vals = {p: MEANS[p] + 0.1 * rng.normal() for p in PARAMETERS}
        if q % 8 >= 4:
            vals["beta"] -= shift
            vals["gamma"] -= shift
        records.append(QubitRecord(int(q), **vals))
    return QubitDataset.from_records(records, chip_size=n)


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("out")
    p.add_argument("--rows", type=int, default=16)
    p.add_argument("--cols", type=int, default=16)
    p.add_argument("--dead-fraction", type=float, default=0.01)
    p.add_argument("--shift", type=float, default=0.0, help="beta/gamma offset for positions 4-7")
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args()
    data = synthesize(args.rows, args.cols, args.dead_fraction, args.shift, args.seed)
    write_dataset(data, args.out)
    print(f"wrote {len(data)} qubits to {args.out}")


if __name__ == "__main__":
    main()
