"""Exact computations with instantons on the quintic del Pezzo threefold Y5."""

__version__ = "0.1.0"
