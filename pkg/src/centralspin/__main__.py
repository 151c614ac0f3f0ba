"""Module entry point: ``python -m centralspin`` runs the CLI."""

from .cli import main

main()
