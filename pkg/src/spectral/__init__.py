# Spectral modules
"""
Perron roots, largest real eigenvalues and dense eigenvalues.
"""
