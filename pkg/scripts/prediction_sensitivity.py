"""Sweep the quantum offset and report how many predictions fall outside [0, 1]."""

import argparse

import numpy as np

from qconcepts import predict


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--samples", type=int, default=10000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rng = np.random.default_rng(args.seed)
    draws = rng.uniform(0.0, 0.6, size=(args.samples, 3))
    for offset in (1.0, 1.4, 1.81, 2.0):
        out = sum(predict.quantum_prediction(*row, offset=offset).out_of_range for row in draws)
        print(f"offset {offset:4.2f}: {out / args.samples:6.1%} out of range")


if __name__ == "__main__":
    main()
