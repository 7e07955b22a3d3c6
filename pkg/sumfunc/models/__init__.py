"""Pydantic models for tables, reports and experiments."""
