#!/usr/bin/env python3
"""Script to run the exceptional-primes command-line tool from a checkout."""
import sys

from exceptional_primes.cli.main import main

if __name__ == "__main__":
    sys.exit(main())
