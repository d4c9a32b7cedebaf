"""Scheduling components: instances, evaluation, heuristics, oracle and models."""
