"""
Exact engine: diagonals, constructions, curves, asymmetry and oracles
"""
