#!/usr/bin/env python3
"""wedgecasimir — Casimir stresses and Casimir-Polder energies in a medium-filled wedge.

Usage:
    python wedgecasimir.py tensor --p 3 --r 1
    python wedgecasimir.py force --alpha 1e-4 --r 1cm --units cgs
    python wedgecasimir.py polder --p 2 --r 1 --theta-fraction 0.25 --oracle split
    python wedgecasimir.py validate --format csv
    python wedgecasimir.py sweep tensor --p 2:6:5 --r 0.5,1,2 --oracle images --workers 4

Results go to stdout.  Logging goes to ~/.wedgecasimir/wedgecasimir.log
and to stderr.  Exit status: 0 success, 1 usage/config error, 2 numerical
failure (including failed validation checks).
"""

import logging
import sys
from pathlib import Path

from wedgecasimir.cli import main


def setup_logging(level_name: str) -> None:
    level = getattr(logging, level_name.upper(), logging.WARNING)
    log_dir = Path.home() / ".wedgecasimir"
    log_dir.mkdir(parents=True, exist_ok=True)
    log_file = log_dir / "wedgecasimir.log"

    fmt = "%(asctime)s %(name)s %(levelname)s %(message)s"
    logging.basicConfig(
        level=level,
        format=fmt,
        handlers=[
            logging.FileHandler(log_file),
            logging.StreamHandler(sys.stderr),
        ],
    )


if __name__ == "__main__":
    sys.exit(main(sys.argv[1:], setup_logging=setup_logging))
