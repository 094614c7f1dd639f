from __future__ import annotations

import logging
from itertools import combinations
from typing import Iterator

from models.schemas import FieldConfig, FieldMatrix, SchemeParams, SegmentPattern

from .combinatorics import check_cap, pattern_count
from .errors import ParameterError
from .field import column_rank

logger = logging.getLogger(__name__)


def vandermonde_generator(ell: int, r: int, field: FieldConfig | None = None) -> FieldMatrix:
    """
    r x ell generator with entry (i, j) = x_j^(i+1) at the distinct non-zero
    points x_j = j + 1. Every min(r, ell) columns are independent, so for
    r <= ell this is the generator of an MDS code.
    """
    field = field or FieldConfig()
    if ell < 1 or r < 0:
        raise ParameterError(f"need ell >= 1 and r >= 0, got ell={ell}, r={r}")
    if ell > field.modulus - 1:
        raise ParameterError(f"GF({field.modulus}) has only {field.modulus - 1} non-zero points, need {ell}")
    modulus = field.modulus
    rows = [[pow(x, i, modulus) for x in range(1, ell + 1)] for i in range(1, r + 1)]
    return FieldMatrix.from_rows(rows, field, cols=ell)


def is_mds(M: FieldMatrix) -> bool:
    """True when every rows x rows column submatrix is non-singular."""
    if M.rows > M.cols:
        return False
    return all(
        column_rank(M, cols) == M.rows
        for cols in combinations(range(M.cols), M.rows)
    )


def canonical_pattern(p: SchemeParams) -> SegmentPattern:
    """Segment j holds indices j*ell+1 .. (j+1)*ell; the rest are zero columns."""
    segments = [
        tuple(range(j * p.ell + 1, (j + 1) * p.ell + 1))
        for j in range(p.k)
    ]
    return SegmentPattern.from_segments(p.m, segments)


def build_base_matrix(
    p: SchemeParams, pattern: SegmentPattern, block: FieldMatrix | None = None
) -> FieldMatrix:
    """
    Block-diagonal T x m matrix: segment j occupies rows j*T/k .. (j+1)*T/k - 1
    with the generator block on its columns (in increasing index order), and
    the zero block is all zeros. A custom block may replace the Vandermonde
    generator.
    """
    if (pattern.m, pattern.k, pattern.ell) != (p.m, p.k, p.ell):
        raise ParameterError(
            f"pattern (m={pattern.m}, k={pattern.k}, ell={pattern.ell}) does not fit "
            f"(m={p.m}, k={p.k}, ell={p.ell})"
        )
    r = p.rows_per_segment
    block = block or vandermonde_generator(p.ell, r, p.field)
    if (block.rows, block.cols) != (r, p.ell):
        raise ParameterError(f"block must be {r}x{p.ell}, got {block.rows}x{block.cols}")
    if block.field.modulus != p.field.modulus:
        raise ParameterError("block and parameters use different fields")

    grid = [[0] * p.m for _ in range(p.T)]
    for j, segment in enumerate(pattern.segments):
        for i in range(r):
            for position, index in enumerate(segment):
                grid[j * r + i][index - 1] = block.entry(i, position)
    return FieldMatrix.from_rows(grid, p.field, cols=p.m)


def _assign(remaining: tuple[int, ...], k: int, ell: int) -> Iterator[tuple[tuple[tuple[int, ...], ...], tuple[int, ...]]]:
    if k == 0:
        yield (), remaining
        return
    for segment in combinations(remaining, ell):
        chosen = set(segment)
        rest = tuple(i for i in remaining if i not in chosen)
        for tail, zero in _assign(rest, k - 1, ell):
            yield (segment,) + tail, zero


def _iter_patterns(m: int, k: int, ell: int) -> Iterator[SegmentPattern]:
    for segments, zero in _assign(tuple(range(1, m + 1)), k, ell):
        yield SegmentPattern(m=m, segments=segments, zero_block=zero)


def enumerate_patterns(p: SchemeParams, cap: int | None = None) -> Iterator[SegmentPattern]:
    """
    Every labeled segment pattern for (m, k, ell). Checks the multinomial
    count against the enumeration cap before yielding anything.
    """
    total = pattern_count(p.m, p.k, p.ell)
    check_cap(total, cap)
    logger.debug("enumerating %s patterns for m=%s k=%s ell=%s", total, p.m, p.k, p.ell)
    return _iter_patterns(p.m, p.k, p.ell)
