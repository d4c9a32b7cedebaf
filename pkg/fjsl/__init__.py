"""Flexible job shop scheduling with sequencing flexibility and learning effect."""

# Standard times are integers; every derived time is expressed in hundredths of them
TIME_SCALE = 100

# Learning rates used throughout the experiments
ALPHA_PRESETS = (0.0, 0.1, 0.2, 0.3, 0.5)

# Learning rates of the heuristic benchmark tables
BENCH_ALPHAS = (0.1, 0.2, 0.3)
