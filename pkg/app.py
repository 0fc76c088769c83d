"""Main entry point for the cogfeed command-line tool."""

import sys
from pathlib import Path

# Add src to path
sys.path.insert(0, str(Path(__file__).parent / "src"))

from src.cli.app import app
from src.utils.logging_config import setup_logging


def main():
    """Run the cogfeed CLI."""
    # Setup logging; --log-level on the command line reconfigures it
    setup_logging()

    app(prog_name="cogfeed")


if __name__ == "__main__":
    main()
