"""
Matrix text format and partition file I/O.

Matrix text format:
    first line   "n_rows n_cols"
    then         n_rows lines of n_cols whitespace-separated reals

Every matrix written by format_matrix_text re-parses to the identical array:
integral values print as integers, everything else with repr() (shortest
round-trip form).
"""

import os
from typing import Union

import numpy as np

from src.core.errors import MatrixFormatError, PartitionError
from src.core.matrix import as_matrix
from src.core.partition import Partition


def parse_matrix_text(text: str, name: str = "matrix") -> np.ndarray:
    lines = [line for line in text.splitlines() if line.strip() and not line.lstrip().startswith("#")]
    if not lines:
        raise MatrixFormatError(f"{name}: empty input")

    header = lines[0].split()
    if len(header) != 2:
        raise MatrixFormatError(f'{name}: line 1: expected "n_rows n_cols", found {lines[0].strip()!r}')
    try:
        n_rows, n_cols = int(header[0]), int(header[1])
    except ValueError:
        raise MatrixFormatError(f"{name}: line 1: dimensions must be integers, found {lines[0].strip()!r}")
    if n_rows < 1 or n_cols < 1:
        raise MatrixFormatError(f"{name}: line 1: dimensions must be positive, found {n_rows}x{n_cols}")

    body = lines[1:]
    if len(body) != n_rows:
        raise MatrixFormatError(f"{name}: expected {n_rows} rows, found {len(body)}")

    rows = []
    for i, line in enumerate(body, start=1):
        tokens = line.split()
        if len(tokens) != n_cols:
            raise MatrixFormatError(f"{name}: row {i}: expected {n_cols} entries, found {len(tokens)}")
        row = []
        for j, token in enumerate(tokens, start=1):
            try:
                row.append(float(token))
            except ValueError:
                raise MatrixFormatError(f"{name}: entry ({i},{j}): {token!r} is not a real number")
        rows.append(row)
    return as_matrix(rows, name)


def read_matrix(path: str) -> np.ndarray:
    name = os.path.basename(path)
    try:
        with open(path, "r", encoding="utf-8") as f:
            text = f.read()
    except OSError as e:
        raise MatrixFormatError(f"{name}: cannot read file ({e.strerror})") from e
    return parse_matrix_text(text, name)


def _format_entry(x: float) -> str:
    if float(x).is_integer() and abs(x) < 2 ** 53:
        return str(int(x))
    return repr(float(x))


def format_matrix_text(a: Union[np.ndarray, list]) -> str:
    a = as_matrix(a)
    lines = [f"{a.shape[0]} {a.shape[1]}"]
    lines.extend(" ".join(_format_entry(x) for x in row) for row in a)
    return "\n".join(lines) + "\n"


def write_matrix(path: str, a: np.ndarray) -> None:
    with open(path, "w", encoding="utf-8") as f:
        f.write(format_matrix_text(a))


def read_partition(path: str) -> Partition:
    name = os.path.basename(path)
    try:
        with open(path, "r", encoding="utf-8") as f:
            text = f.read()
    except OSError as e:
        raise PartitionError(f"{name}: cannot read file ({e.strerror})") from e
    try:
        return Partition.from_json(text)
    except PartitionError as e:
        raise PartitionError(f"{name}: {e}") from e
