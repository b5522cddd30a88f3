"""Planning core (graphs, j-MST, swarm/baseline planners, metrics, oracle)."""
