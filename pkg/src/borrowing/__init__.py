"""Quantify how likely a foreign word is borrowed rather than code-mixed, from bilingual tweets."""

__version__ = "0.1.0"
