"""Domain services: graphs, lattices, K-theory, monoids, diagrams, verdicts."""
