"""qfb - Quantum measurement-feedback control: filtering, kernels and Bellman dynamic programming."""

__version__ = "1.0.0"
