"""Energy-aware inspection planning for heterogeneous UAV swarms."""

__version__ = "0.1.0"
