#!/usr/bin/env python3
"""
Entry script for SymSteer
Run `python run.py --help` for the list of commands
"""

import sys

from cli.app import main

if __name__ == "__main__":
    sys.exit(main())
