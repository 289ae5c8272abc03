import json
import sys
import warnings
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

TESTS = Path(__file__).resolve().parent
sys.path.insert(0, str(TESTS))

DOCS = TESTS / "fixtures" / "docs"
GOLDEN = TESTS / "fixtures" / "golden"

settings.register_profile(
    "ci",
    derandomize=True,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("ci")

warnings.filterwarnings("ignore", category=UserWarning, module="semqg")


@pytest.fixture(scope="session")
def fixture_docs():
    from semqg import parse_annotations

    out = {}
    for path in sorted(DOCS.glob("*.json")):
        out[path.stem] = parse_annotations(path.read_bytes())
    return out


@pytest.fixture(scope="session")
def fixture_raw():
    return {p.stem: json.loads(p.read_text()) for p in sorted(DOCS.glob("*.json"))}


def golden_bytes(name: str) -> bytes:
    return (GOLDEN / name).read_bytes()
