"""
Logic:
- Entry point: python app.py <command> [options]
- Commands: layout, timing, errors, evaluate, sweep, frontier, validate
- Everything is delegated to cli.commands.run_cli, whose return value is the exit code
"""

import sys

from cli.commands import run_cli

if __name__ == "__main__":
    sys.exit(run_cli(sys.argv[1:]))
