"""Distributed vectorized query engine: plans, operators, built-in workload."""
