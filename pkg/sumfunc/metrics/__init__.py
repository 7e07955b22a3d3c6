"""Analyzers over arithmetic function tables."""
