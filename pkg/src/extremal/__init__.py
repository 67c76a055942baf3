# Extremal modules
"""
Extremal (0,1)-matrix constructions, staircase enumeration, characteristic
polynomials and the exhaustive maximizer search.
"""
