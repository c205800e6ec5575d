# Path from repo root: app/services/dataset/__init__.py
