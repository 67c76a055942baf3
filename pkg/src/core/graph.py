"""
Nonzero-pattern graph of a square matrix.

Irreducibility is strong connectivity of the digraph with an arc i -> j
whenever c_ij != 0 (exact test, no tolerance). The strong components and
their reachability relation give the Frobenius normal form used by the
spectral fallback.
"""

from typing import List, Tuple

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components


def strong_components(c: np.ndarray) -> Tuple[int, np.ndarray]:
    """Return (count, labels) of the strongly connected components of the pattern of c."""
    pattern = csr_matrix((np.asarray(c) != 0).astype(np.int8))
    count, labels = connected_components(pattern, directed=True, connection="strong")
    return int(count), labels


def is_irreducible(c: np.ndarray) -> bool:
    c = np.asarray(c)
    if c.shape[0] == 1:
        return True
    count, _ = strong_components(c)
    return count == 1


def component_reachability(c: np.ndarray, labels: np.ndarray, count: int) -> np.ndarray:
    """
    Boolean matrix R over components with R[K, L] true iff some path leads
    from an index of K to an index of L (R is reflexive).
    """
    pattern = np.asarray(c) != 0
    adj = np.zeros((count, count), dtype=bool)
    rows, cols = np.nonzero(pattern)
    adj[labels[rows], labels[cols]] = True
    reach = adj | np.eye(count, dtype=bool)
    # transitive closure by repeated squaring
    while True:
        nxt = reach | ((reach.astype(np.int64) @ reach.astype(np.int64)) > 0)
        if np.array_equal(nxt, reach):
            return reach
        reach = nxt


def component_members(labels: np.ndarray, count: int) -> List[np.ndarray]:
    return [np.flatnonzero(labels == k) for k in range(count)]
