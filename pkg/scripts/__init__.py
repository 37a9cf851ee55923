"""Command-line scripts for ratexp."""
