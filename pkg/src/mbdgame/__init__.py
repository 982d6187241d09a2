"""Maker-Breaker domination games with predomination."""
