"""Recompute the per-item table (phase, lambda, rank, sign) and the model scalars."""

import argparse

from qconcepts import hilbert, ingest


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("input", nargs="?", default=None, help="membership table; bundled corpus when omitted")
    ap.add_argument("--no-renormalize", action="store_true")
    args = ap.parse_args()
    renorm = not args.no_renormalize
    data = (ingest.load_bundled_corpus(renormalize_columns=renorm) if args.input is None
            else ingest.load_probability_table(args.input, renormalize_columns=renorm))
    model = hilbert.build_state_vectors(data)
    print(hilbert.build_report(model).to_text(), end="")


if __name__ == "__main__":
    main()
