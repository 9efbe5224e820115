"""Batch verifier for a small purely functional language with inline contracts."""

__version__ = "0.1.0"
