"""Regenerate src/hypcount/data/psi_cheb.json (the mollifier table)."""

import argparse
import json

from hypcount.transforms import PSI_TABLE, build_psi_table


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--bits", type=int, default=192)
    ap.add_argument("--pieces", type=int, default=16)
    ap.add_argument("--degree", type=int, default=24)
    ap.add_argument("--out", default=str(PSI_TABLE))
    args = ap.parse_args()
    table = build_psi_table(args.bits, args.pieces, args.degree)
    with open(args.out, "w") as fh:
        json.dump(table, fh, indent=1)
        fh.write("\n")


if __name__ == "__main__":
    main()
