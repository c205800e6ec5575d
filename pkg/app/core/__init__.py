# Path from repo root: app/core/__init__.py
