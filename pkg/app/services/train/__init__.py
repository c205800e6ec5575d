# Path from repo root: app/services/train/__init__.py
