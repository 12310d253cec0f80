"""
Persistence package for the averaging toolkit.
"""
