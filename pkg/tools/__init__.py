"""
Studies and command-line interface for the averaging toolkit.
"""
