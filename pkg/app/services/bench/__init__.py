# Path from repo root: app/services/bench/__init__.py
