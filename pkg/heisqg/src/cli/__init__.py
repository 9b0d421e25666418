"""Command-line front end (verify, sweep, report)."""
