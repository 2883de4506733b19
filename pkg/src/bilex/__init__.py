"""Two-source deterministic extractors over finite fields and elliptic curves,
with an exhaustive audit engine for their statistical-distance bounds."""

__version__ = "0.1.0"
