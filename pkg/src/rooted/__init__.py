# Rooted matrix modules
"""
Rooted vectors and matrices, Q-similarity transform.
"""
