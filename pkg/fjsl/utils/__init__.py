"""Utility functions and classes shared by the components and the CLI."""
