"""Command-line entry point of the toolkit."""
