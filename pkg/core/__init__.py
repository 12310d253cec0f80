"""
Core package for the averaging toolkit: polynomial fields, resonance,
dynamics and Hamiltonian averaging.
"""
