"""Graph manifolds, the Seifert motion group, and representation obstructions."""

__version__ = "0.1.0"
