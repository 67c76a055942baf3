"""
Ordered set partitions of {1, ..., n}.

Blocks are kept in the order given. The LAST block is the distinguished one
in every bound built on a partition, so blocks are never re-sorted.
Indices are 0-based inside the object and 1-based in to_dict()/from_dict().
"""

import json
from dataclasses import dataclass
from typing import Any, Dict, Iterable, List, Sequence, Tuple

import numpy as np

from src.core.errors import PartitionError


@dataclass(frozen=True)
class Partition:
    """Ordered partition (pi_1, ..., pi_l) of the row indices of an n x n matrix."""

    n: int
    blocks: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        if not isinstance(self.n, (int, np.integer)) or self.n < 1:
            raise PartitionError(f"Partition size must be a positive integer, got {self.n!r}")
        if len(self.blocks) < 1:
            raise PartitionError("Partition must have at least one block")

        seen: Dict[int, int] = {}
        for b, block in enumerate(self.blocks):
            if len(block) == 0:
                raise PartitionError(f"block {b + 1} is empty")
            for j in block:
                if not 0 <= j < self.n:
                    raise PartitionError(
                        f"block {b + 1}: index {j + 1} outside 1..{self.n}"
                    )
                if j in seen:
                    raise PartitionError(
                        f"index {j + 1} appears in blocks {seen[j] + 1} and {b + 1}"
                    )
                seen[j] = b

        if len(seen) != self.n:
            missing = sorted(set(range(self.n)) - set(seen))
            raise PartitionError(
                f"indices {[m + 1 for m in missing]} are not covered by any block"
            )

    # ------------------------------------------------------------------
    # Constructors
    # ------------------------------------------------------------------

    @classmethod
    def from_zero_based(cls, n: int, blocks: Iterable[Iterable[int]]) -> "Partition":
        return cls(int(n), tuple(tuple(int(j) for j in block) for block in blocks))

    @classmethod
    def from_one_based(cls, n: int, blocks: Iterable[Iterable[int]]) -> "Partition":
        return cls(int(n), tuple(tuple(int(j) - 1 for j in block) for block in blocks))

    @classmethod
    def identity(cls, n: int) -> "Partition":
        """Singleton blocks {1}, {2}, ..., {n}."""
        return cls(int(n), tuple((j,) for j in range(n)))

    @classmethod
    def trivial(cls, n: int) -> "Partition":
        """One block holding every index."""
        return cls(int(n), (tuple(range(n)),))

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "Partition":
        """Parse Partition JSON: {"n": 7, "blocks": [[1,2,3],[4,5],[6,7]]}."""
        if not isinstance(data, dict) or "n" not in data or "blocks" not in data:
            raise PartitionError('Partition JSON must be an object with "n" and "blocks"')
        n = data["n"]
        blocks = data["blocks"]
        if isinstance(n, bool) or not isinstance(n, int):
            raise PartitionError(f'"n" must be an integer, got {n!r}')
        if not isinstance(blocks, list):
            raise PartitionError('"blocks" must be a list of index lists')
        for b, block in enumerate(blocks):
            if not isinstance(block, list):
                raise PartitionError(f"block {b + 1} must be a list of integers")
            for j in block:
                if isinstance(j, bool) or not isinstance(j, int):
                    raise PartitionError(f"block {b + 1}: index {j!r} is not an integer")
        return cls.from_one_based(n, blocks)

    @classmethod
    def from_json(cls, text: str) -> "Partition":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise PartitionError(f"Partition JSON is malformed: line {e.lineno}: {e.msg}") from e
        return cls.from_dict(data)

    # ------------------------------------------------------------------
    # Views
    # ------------------------------------------------------------------

    @property
    def size(self) -> int:
        """Number of blocks (l)."""
        return len(self.blocks)

    @property
    def block_sizes(self) -> np.ndarray:
        return np.array([len(block) for block in self.blocks], dtype=float)

    @property
    def last_block(self) -> Tuple[int, ...]:
        return self.blocks[-1]

    def block_of(self) -> np.ndarray:
        """Array mapping each 0-based index to its 0-based block number."""
        owner = np.empty(self.n, dtype=int)
        for b, block in enumerate(self.blocks):
            owner[list(block)] = b
        return owner

    def is_identity(self) -> bool:
        return all(len(block) == 1 for block in self.blocks)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "n": self.n,
            "blocks": [[j + 1 for j in block] for block in self.blocks],
        }

    def blocks_one_based(self) -> List[List[int]]:
        return [[j + 1 for j in block] for block in self.blocks]


def partition_from_sizes(sizes: Sequence[int]) -> Partition:
    """Consecutive blocks of the given sizes: (2, 1) -> {1,2}, {3}."""
    blocks = []
    start = 0
    for size in sizes:
        blocks.append(tuple(range(start, start + int(size))))
        start += int(size)
    return Partition(start, tuple(blocks))
