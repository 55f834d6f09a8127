"""Simulation and verification of multivariate subordinated Lévy processes in truncated Hilbert
spaces.
"""
