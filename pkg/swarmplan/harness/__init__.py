"""Scenario generation, serialization and Monte Carlo experiments."""
