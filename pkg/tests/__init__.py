"""
Test suite for diagonal copula bounds
"""
