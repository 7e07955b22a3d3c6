"""Error types and exit-code handling."""
