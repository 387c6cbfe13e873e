"""Multi-objective wrapper feature selection."""
