#!/usr/bin/env python3
"""Run the full reproduction harness from the command line.

Equivalent to `einso verify-paper`; kept as a script so the whole
verification can be launched and logged in one step:

    python scripts/verify_published.py --json report.json
"""

import sys

from einso.cli import main as cli_main

if __name__ == "__main__":
    sys.argv = [sys.argv[0], "verify-paper"] + sys.argv[1:]
    cli_main()
