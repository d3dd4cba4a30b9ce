"""Computation engines and orchestration services."""
