"""graphinv - classification invariants of graph C*-algebras."""

__version__ = "0.1.0"
