from __future__ import annotations

from typing import Sequence

from models.schemas import FieldConfig, FieldMatrix

from .errors import DimensionMismatchError, ZeroInverseError


def field_add(a: int, b: int, field: FieldConfig) -> int:
    return (a + b) % field.modulus


def field_sub(a: int, b: int, field: FieldConfig) -> int:
    return (a - b) % field.modulus


def field_mul(a: int, b: int, field: FieldConfig) -> int:
    return (a * b) % field.modulus


def field_inv(a: int, field: FieldConfig) -> int:
    if a % field.modulus == 0:
        raise ZeroInverseError(f"0 has no inverse in GF({field.modulus})")
    return pow(a, -1, field.modulus)


def _echelon(rows: list[list[int]], n_cols: int, modulus: int) -> tuple[list[list[int]], list[int]]:
    """
    Reduced row echelon form by Gauss-Jordan elimination, pivoting on the
    first non-zero entry of each column. Returns the reduced rows and the
    pivot columns.
    """
    work = [[value % modulus for value in row] for row in rows]
    n_rows = len(work)
    pivots: list[int] = []
    r = 0
    for c in range(n_cols):
        if r == n_rows:
            break
        pivot = next((i for i in range(r, n_rows) if work[i][c]), None)
        if pivot is None:
            continue
        work[r], work[pivot] = work[pivot], work[r]
        inv = pow(work[r][c], -1, modulus)
        work[r] = [value * inv % modulus for value in work[r]]
        for i in range(n_rows):
            factor = work[i][c]
            if i != r and factor:
                work[i] = [(x - factor * y) % modulus for x, y in zip(work[i], work[r])]
        pivots.append(c)
        r += 1
    return work, pivots


def _column_rows(M: FieldMatrix, columns: Sequence[int]) -> list[list[int]]:
    return [[M.entries[i * M.cols + j] for j in columns] for i in range(M.rows)]


def rank(M: FieldMatrix) -> int:
    return len(_echelon(M.row_lists(), M.cols, M.field.modulus)[1])


def column_rank(M: FieldMatrix, columns: Sequence[int]) -> int:
    """Rank of the submatrix on the given 0-based columns."""
    if not columns or M.rows == 0:
        return 0
    return len(_echelon(_column_rows(M, columns), len(columns), M.field.modulus)[1])


def submatrix(M: FieldMatrix, columns: Sequence[int]) -> FieldMatrix:
    return FieldMatrix.from_rows(_column_rows(M, columns), M.field, cols=len(columns))


def transpose(M: FieldMatrix) -> FieldMatrix:
    return FieldMatrix.from_rows([M.column(j) for j in range(M.cols)], M.field, cols=M.rows)


def identity(n: int, field: FieldConfig) -> FieldMatrix:
    return FieldMatrix.from_rows([[int(i == j) for j in range(n)] for i in range(n)], field, cols=n)


def in_span(v: Sequence[int], M: FieldMatrix) -> bool:
    """True when v is a GF(L) combination of the columns of M."""
    if len(v) != M.rows:
        raise DimensionMismatchError(f"vector of length {len(v)} against {M.rows} rows")
    if not any(value % M.field.modulus for value in v):
        return True
    base = rank(M)
    augmented = [row + [value] for row, value in zip(M.row_lists(), v)]
    return len(_echelon(augmented, M.cols + 1, M.field.modulus)[1]) == base


def solve_left(M: FieldMatrix, target: Sequence[int]) -> list[int] | None:
    """
    Find lambda with lambda . M = target, or None when no such vector exists.
    Free variables are set to zero.
    """
    if len(target) != M.cols:
        raise DimensionMismatchError(f"target of length {len(target)} against {M.cols} columns")
    # lambda . M = t  <=>  M^T lambda^T = t^T
    augmented = [M.column(j) + [target[j]] for j in range(M.cols)]
    work, pivots = _echelon(augmented, M.rows + 1, M.field.modulus)
    if M.rows in pivots:
        return None
    solution = [0] * M.rows
    for r, c in enumerate(pivots):
        solution[c] = work[r][M.rows]
    return solution


def encode(A: FieldMatrix, messages: Sequence[int]) -> list[int]:
    """The broadcast y = A b over GF(L)."""
    if len(messages) != A.cols:
        raise DimensionMismatchError(f"{len(messages)} messages against {A.cols} columns")
    modulus = A.field.modulus
    return [
        sum(a * b for a, b in zip(A.row(i), messages)) % modulus
        for i in range(A.rows)
    ]
