"""Command handlers for the sumfunc CLI."""
