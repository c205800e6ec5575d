# Path from repo root: app/services/verify/__init__.py
