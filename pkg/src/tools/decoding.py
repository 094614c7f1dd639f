from __future__ import annotations

import logging
from itertools import combinations
from typing import Sequence

from models.schemas import ClientPair, DecodableSets, FieldMatrix, SchemeParams, SegmentPattern

from .cache import DecodableStore, store_key
from .combinatorics import binom, check_cap
from .errors import (
    DimensionMismatchError,
    IndexRangeError,
    InconsistentInputError,
    NotDecodableError,
    ParameterError,
)
from .field import column_rank, in_span, solve_left, submatrix

logger = logging.getLogger(__name__)


def _check_pair(m: int, pair: ClientPair) -> None:
    bad = [i for i in (pair.q, *pair.S) if not 1 <= i <= m]
    if bad:
        raise IndexRangeError(f"indices {bad} outside [1..{m}]")


def _unknown_columns(m: int, pair: ClientPair) -> list[int]:
    """0-based columns of the interfering messages: neither requested nor known."""
    known = set(pair.S)
    return [j for j in range(m) if j + 1 != pair.q and j + 1 not in known]


def is_decodable(A: FieldMatrix, pair: ClientPair) -> bool:
    """
    A client demanding b_q and knowing b_S decodes iff column q of A is not
    in the span of the columns outside {q} and S.
    """
    _check_pair(A.cols, pair)
    others = submatrix(A, _unknown_columns(A.cols, pair))
    return not in_span(A.column(pair.q - 1), others)


def _build_sets(m: int, s: int, found: list[tuple[tuple[int, ...], list[int]]]) -> DecodableSets:
    pairs = tuple(ClientPair(q=q, S=S) for S, qs in found for q in qs)
    return DecodableSets(
        m=m,
        s=s,
        pairs=pairs,
        requests=tuple(sorted({q for _, qs in found for q in qs})),
        side_infos=tuple(S for S, _ in found),
        counts={S: len(qs) for S, qs in found},
    )


def enumerate_decodable(
    A: FieldMatrix,
    s: int,
    cap: int | None = None,
    store: DecodableStore | None = None,
) -> DecodableSets:
    """
    D(A, s): all (q, S) with |S| = s that A serves, in lexicographic order of
    S and then q. For each S the complement C is ranked once; q in C decodes
    iff dropping it from C lowers the rank.
    """
    m = A.cols
    if not 0 <= s <= m - 1:
        raise ParameterError(f"side-information size s={s} must lie in [0, {m - 1}]")
    key = store_key(A, s)
    if store is not None:
        cached = store.get(key)
        if cached is not None:
            return cached

    check_cap(binom(m, s) * m, cap)
    found: list[tuple[tuple[int, ...], list[int]]] = []
    for S in combinations(range(1, m + 1), s):
        known = set(S)
        complement = [j for j in range(m) if j + 1 not in known]
        full = column_rank(A, complement)
        if full == 0:
            continue
        decodable = [
            j + 1
            for j in complement
            if column_rank(A, [c for c in complement if c != j]) < full
        ]
        if decodable:
            found.append((S, decodable))

    result = _build_sets(m, s, found)
    logger.debug("m=%s s=%s: |D|=%s |D^Q|=%s |D^S|=%s", m, s, result.size_joint, result.size_q, result.size_s)
    if store is not None:
        store.put(key, result)
    return result


def is_decodable_structural(pattern: SegmentPattern, pair: ClientPair, rows_per_segment: int) -> bool:
    """
    Decodability read off the pattern alone: with r rows per segment, q is
    decodable iff it sits in a segment and S covers at least ell - r of that
    segment's columns.
    """
    _check_pair(pattern.m, pair)
    label = pattern.segment_of(pair.q)
    if label is None:
        return False
    known = set(pair.S)
    covered = sum(1 for i in pattern.segments[label] if i in known)
    return covered >= pattern.ell - rows_per_segment


def enumerate_block_decodable(pattern: SegmentPattern, s: int, rows_per_segment: int) -> DecodableSets:
    """D(A, s) for a block-diagonal matrix with MDS blocks, without any rank computation."""
    m = pattern.m
    if not 0 <= s <= m - 1:
        raise ParameterError(f"side-information size s={s} must lie in [0, {m - 1}]")
    found: list[tuple[tuple[int, ...], list[int]]] = []
    for S in combinations(range(1, m + 1), s):
        known = set(S)
        decodable = []
        for segment in pattern.segments:
            if sum(1 for i in segment if i in known) >= pattern.ell - rows_per_segment:
                decodable += [i for i in segment if i not in known]
        if decodable:
            found.append((S, sorted(decodable)))
    return _build_sets(m, s, found)


def enumerate_scheme_decodable(p: SchemeParams, pattern: SegmentPattern, s: int) -> DecodableSets:
    return enumerate_block_decodable(pattern, s, p.rows_per_segment)


def recover_message(
    A: FieldMatrix,
    y: Sequence[int],
    pair: ClientPair,
    known: dict[int, int],
) -> int:
    """
    Recover b_q from the broadcast y and the known messages b_S: find lambda
    with lambda . A equal to e_q on the interfering columns, then
    b_q = lambda . y - sum_{j in S} (lambda . A)_j b_j.
    """
    _check_pair(A.cols, pair)
    if len(y) != A.rows:
        raise DimensionMismatchError(f"broadcast of length {len(y)} against {A.rows} rows")
    if set(known) != set(pair.S):
        raise InconsistentInputError(f"known messages {sorted(known)} do not match S={list(pair.S)}")

    columns = [pair.q - 1] + _unknown_columns(A.cols, pair)
    target = [1] + [0] * (len(columns) - 1)
    lam = solve_left(submatrix(A, columns), target)
    if lam is None:
        raise NotDecodableError(f"b_{pair.q} cannot be recovered with S={list(pair.S)}")

    modulus = A.field.modulus
    value = sum(l * v for l, v in zip(lam, y))
    for j in pair.S:
        coefficient = sum(l * a for l, a in zip(lam, A.column(j - 1)))
        value -= coefficient * known[j]
    return value % modulus
