#!/usr/bin/env python3
"""
Run script for the atomkit command line
"""

import sys

from dotenv import load_dotenv

# Load environment variables from .env file before settings are read
load_dotenv()

from atomkit.harness.cli import main  # noqa: E402

if __name__ == "__main__":
    sys.exit(main())
