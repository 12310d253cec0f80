"""
Tests for the averaging toolkit.
"""
