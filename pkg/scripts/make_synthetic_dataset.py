#!/usr/bin/env python3
"""Write the deterministic synthetic corpus as annotation JSON files, ready
for the CLI: `semqg train --data <outdir> ...`."""

import argparse
from pathlib import Path

from semqg.annotations import to_json
from semqg.synthdata import make_corpus


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", required=True, help="output directory")
    parser.add_argument("--n", type=int, default=50, help="number of documents")
    args = parser.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for name, doc in make_corpus(args.n):
        (out / f"{name}.json").write_bytes(to_json(doc))
    print(f"wrote {args.n} documents to {out}")


if __name__ == "__main__":
    main()
