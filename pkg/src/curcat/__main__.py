"""Entry point for python -m curcat."""
from __future__ import annotations

from curcat.cli import main

if __name__ == "__main__":
    raise SystemExit(main())
