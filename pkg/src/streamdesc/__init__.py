"""Memory-bounded streaming graph descriptors (GABE, MAEVE, SANTA)."""

__version__ = "0.1.0"
