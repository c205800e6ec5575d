# Path from repo root: app/api/__init__.py
