"""Command-line surface: python -m cli <command>."""
