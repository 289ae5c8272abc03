"""Annotation adapter: raw text to the semantic-graph annotations schema."""

__version__ = "0.1.0"

from .errors import AdapterError  # noqa: E402
from .fixture import make_fixture  # noqa: E402
from .pipeline import annotate_text, load_manifest, manifest_hash  # noqa: E402

__all__ = ["AdapterError", "annotate_text", "load_manifest", "manifest_hash", "make_fixture", "__version__"]
