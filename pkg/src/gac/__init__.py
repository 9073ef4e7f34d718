"""Morita-equivalence invariants, graph moves and move-path search for graph algebras."""

__version__ = "0.1.0"
