# Path from repo root: app/__main__.py
from __future__ import annotations

import sys

from app.cli import main


sys.exit(main())
