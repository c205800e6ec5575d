# Path from repo root: app/__init__.py
"""Sublinear adversarial training engine."""
