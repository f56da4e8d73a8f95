"""Teleportation-based QKD: state algebra, protocol simulation and key-rate analysis."""
