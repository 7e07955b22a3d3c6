"""Test suite for sumfunc."""
