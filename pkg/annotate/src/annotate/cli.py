"""CLI: read {"text","answer","question"} JSONL, write one annotations JSON
per line. Exit codes: 0 success, 1 stage failure (message names the stage),
2 usage error."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .errors import AdapterError
from .pipeline import BACKENDS, annotate_text


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="annotate", description="Annotate raw text into the graph-pipeline JSON schema."
    )
    parser.add_argument("--in", dest="infile", required=True, help="JSONL input")
    parser.add_argument("--out", dest="outdir", required=True, help="output directory")
    parser.add_argument("--backend", choices=sorted(BACKENDS), default="rule")
    parser.add_argument("--manifest", help="override the packaged version manifest")
    args = parser.parse_args(argv)

    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    try:
        lines = Path(args.infile).read_text(encoding="utf-8").splitlines()
        count = 0
        for i, line in enumerate(lines):
            if not line.strip():
                continue
            record = json.loads(line)
            if "text" not in record or "answer" not in record:
                print(f"error: [input] line {i + 1} needs 'text' and 'answer'", file=sys.stderr)
                return 2
            if not str(record["text"]).strip():
                print(f"error: [input] line {i + 1} has empty text", file=sys.stderr)
                return 2
            payload = annotate_text(
                record["text"],
                record["answer"],
                record.get("question"),
                backend=args.backend,
                manifest_path=args.manifest,
            )
            (outdir / f"{i:04d}.json").write_bytes(payload)
            count += 1
        if count == 0:
            print("error: [input] no records in input", file=sys.stderr)
            return 2
    except AdapterError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: [input] {exc}", file=sys.stderr)
        return 1
    print(f"annotated {count} document(s) into {outdir}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
