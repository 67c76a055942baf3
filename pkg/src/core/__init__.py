# Matrix core modules
"""
Matrices, partitions, quotient matrices and the nonzero-pattern graph.
"""
