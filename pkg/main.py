"""Main application entry point."""

import sys

from src.experiment_cli import main

if __name__ == "__main__":
    sys.exit(main())
