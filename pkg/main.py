"""Application entry point for qfb.

Usage: python main.py <command> <scenario.json> [options]
"""

import sys

from src.cli.commands import run


def main() -> int:
    """
    Application entry point.

    Returns:
        Exit code (0 success, 1 domain error, 2 usage error)
    """
    return run(sys.argv[1:])


if __name__ == "__main__":
    sys.exit(main())
