"""Command-line surface: run configuration, sub-commands and CSV tables."""
