#!/usr/bin/env python3
"""
LoopWorks entry point.

    python loopworks.py paige 2 -o m2.tbl
    python loopworks.py lagrange m2.tbl --certificate m2.cert
"""

import sys

from src.cli import main


if __name__ == "__main__":
    sys.exit(main())
