"""Segmented sieve and trial-division oracle."""
