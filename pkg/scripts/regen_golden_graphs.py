#!/usr/bin/env python3
"""Regenerate golden graphs from the ORACLE implementations (tests/oracles.py).

The goldens are produced by the independent transliteration of the build
procedures, never by the package under test; the test suite then asserts that
the package byte-matches them (and that the oracle still agrees, catching
drift on either side).
"""

import json
import sys
from pathlib import Path

BASE = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(BASE / "tests"))

from oracles import oracle_dp_graph, oracle_srl_graph, oracle_tagging  # noqa: E402
from fixture_table import DP_OPTIONS, FIXTURE_NAMES  # noqa: E402

DOCS = BASE / "tests" / "fixtures" / "docs"
GOLDEN = BASE / "tests" / "fixtures" / "golden"


def main():
    GOLDEN.mkdir(parents=True, exist_ok=True)
    for name in FIXTURE_NAMES:
        doc = json.loads((DOCS / f"{name}.json").read_text())
        srl = oracle_srl_graph(doc)
        (GOLDEN / f"{name}.srl.json").write_bytes(srl)
        opts = DP_OPTIONS.get(name, {})
        dp = oracle_dp_graph(doc, **opts)
        (GOLDEN / f"{name}.dp.json").write_bytes(dp)
        print(f"{name}: srl={len(srl)}B dp={len(dp)}B")
    # CLI golden: tagged DP graph for the two-sentence shared-argument fixture
    doc = json.loads((DOCS / "f04_shared_argument.json").read_text())
    obj = json.loads(oracle_dp_graph(doc))
    obj = oracle_tagging(obj, doc["answer"], doc.get("question"))
    (GOLDEN / "f04_shared_argument.dp.tagged.json").write_bytes(
        (json.dumps(obj, indent=2) + "\n").encode("utf-8")
    )
    print("wrote tagged CLI golden")


if __name__ == "__main__":
    main()
