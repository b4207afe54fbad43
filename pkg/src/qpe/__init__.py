"""Quantum phase-estimation workbench: state-vector and density-matrix
simulation, phase-estimation algorithms, gate decompositions, noisy
benchmark circuits and small cryptographic protocols."""

__version__ = "0.1.0"
