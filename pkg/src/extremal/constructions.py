"""
Extremal (0,1)-matrices with a prescribed number of ones.

With e = c^2 + t (or e = c(c-1) + t for zero trace):

    A_0      J_c (or J_c - I_c) bordered by floor(t/2) ones down an extra
             column and ceil(t/2) ones along an extra row, padded with zeros
    A'_0     J_{c-1} widened by two all-ones columns and two all-ones rows,
             the competitor when t = 2c - 3
    small t  t = 0: J_c (+) O; t = 1: one extra one outside the core, plus the
             directed 3-cycle when the zero-trace count is e = 3
"""

import math
from dataclasses import dataclass
from typing import Any, Dict, List

import numpy as np

from src.core.errors import DimensionError, InputError


@dataclass(frozen=True)
class ExtremalParams:
    n: int
    e: int
    c: int
    t: int
    zero_trace: bool = False

    def __post_init__(self):
        if self.c < 1:
            raise InputError(f"c must be positive, got {self.c}")
        core = self.c * (self.c - 1) if self.zero_trace else self.c * self.c
        if self.e != core + self.t:
            form = "c(c-1)+t" if self.zero_trace else "c^2+t"
            raise InputError(f"e={self.e} does not equal {form} with c={self.c}, t={self.t}")
        if not 0 <= self.t <= self.t_max:
            raise InputError(f"t={self.t} outside 0..{self.t_max} for c={self.c}")
        if self.n < self.c + 1:
            raise DimensionError(f"n={self.n} must be at least c+1={self.c + 1}")

    @property
    def t_max(self) -> int:
        return 2 * self.c - 1 if self.zero_trace else 2 * self.c

    @property
    def column_ones(self) -> int:
        return self.t // 2

    @property
    def row_ones(self) -> int:
        return (self.t + 1) // 2

    @classmethod
    def build(cls, c: int, t: int, n: int, zero_trace: bool = False) -> "ExtremalParams":
        c, t = int(c), int(t)
        core = c * (c - 1) if zero_trace else c * c
        return cls(int(n), core + t, c, t, bool(zero_trace))

    @classmethod
    def from_e(cls, n: int, e: int, zero_trace: bool = False) -> "ExtremalParams":
        """Decompose e into its (c, t) form."""
        e = int(e)
        if e < 0:
            raise InputError(f"e must be nonnegative, got {e}")
        if zero_trace:
            c = 1
            while (c + 1) * c <= e:
                c += 1
            t = e - c * (c - 1)
        else:
            c = max(math.isqrt(e), 1)
            t = e - c * c
            if t < 0:
                raise InputError("e=0 has no (c, t) decomposition without zero trace")
        return cls(int(n), e, c, t, bool(zero_trace))

    def to_dict(self) -> Dict[str, Any]:
        return {"n": self.n, "e": self.e, "c": self.c, "t": self.t, "zero_trace": self.zero_trace}


def _core(params: ExtremalParams) -> np.ndarray:
    a = np.zeros((params.n, params.n), dtype=np.int64)
    a[:params.c, :params.c] = 1
    if params.zero_trace:
        np.fill_diagonal(a, 0)
    return a


def construct_a0(params: ExtremalParams) -> np.ndarray:
    if params.t < 2:
        raise InputError(f"A_0 is defined for t >= 2, got t={params.t}; use small_t_extremal")
    a = _core(params)
    c = params.c
    a[:params.column_ones, c] = 1
    a[c, :params.row_ones] = 1
    return a


def construct_a0_prime(c: int, n: int) -> np.ndarray:
    """The t = 2c - 3 competitor with c^2 + 2c - 3 ones."""
    if c < 3:
        raise InputError(f"A'_0 requires c >= 3, got {c}")
    if n < c + 1:
        raise DimensionError(f"n={n} must be at least c+1={c + 1}")
    a = np.zeros((n, n), dtype=np.int64)
    a[:c - 1, :c + 1] = 1
    a[c - 1:c + 1, :c - 1] = 1
    return a


def small_t_extremal(params: ExtremalParams) -> List[np.ndarray]:
    """All extremal forms (up to permutation) for t in {0, 1}."""
    if params.t not in (0, 1):
        raise InputError(f"small_t_extremal handles t in {{0, 1}}, got t={params.t}")
    core = _core(params)
    if params.t == 0:
        return [core]

    c = params.c
    below = core.copy()
    below[c, 0] = 1
    forms = [below, below.T.copy()]
    if params.zero_trace and params.e == 3:
        cycle = np.zeros((params.n, params.n), dtype=np.int64)
        cycle[0, 1] = cycle[1, 2] = cycle[2, 0] = 1
        forms.append(cycle)
    return forms
