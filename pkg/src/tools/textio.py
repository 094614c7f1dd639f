from __future__ import annotations

from pathlib import Path

from pydantic import ValidationError

from models.schemas import FieldConfig, FieldMatrix, SegmentPattern

from .errors import ParameterError


def _numbers(line: str, where: str) -> list[int]:
    try:
        return [int(token) for token in line.split()]
    except ValueError as exc:
        raise ParameterError(f"{where}: expected integers, got {line!r}") from exc


def _content_lines(text: str) -> list[str]:
    return [line for line in text.splitlines() if line.strip() and not line.lstrip().startswith("#")]


def parse_matrix(text: str) -> FieldMatrix:
    """
    Parse the matrix text format: a header line "T m L" followed by T rows
    of m integers in [0, L).
    """
    lines = _content_lines(text)
    if not lines:
        raise ParameterError("empty matrix file")
    header = _numbers(lines[0], "header")
    if len(header) != 3:
        raise ParameterError(f"header must be 'T m L', got {lines[0]!r}")
    n_rows, n_cols, modulus = header
    body = lines[1:]
    if len(body) != n_rows:
        raise ParameterError(f"expected {n_rows} rows, found {len(body)}")
    rows = [_numbers(line, f"row {i + 1}") for i, line in enumerate(body)]
    for i, row in enumerate(rows):
        if len(row) != n_cols:
            raise ParameterError(f"row {i + 1} has {len(row)} entries, expected {n_cols}")
    try:
        return FieldMatrix.from_rows(rows, FieldConfig(modulus=modulus), cols=n_cols)
    except ValidationError as exc:
        raise ParameterError(str(exc)) from exc


def format_matrix(M: FieldMatrix) -> str:
    lines = [f"{M.rows} {M.cols} {M.field.modulus}"]
    lines += [" ".join(str(value) for value in M.row(i)) for i in range(M.rows)]
    return "\n".join(lines) + "\n"


def parse_pattern(text: str) -> SegmentPattern:
    """
    Parse the pattern text format: a header line "k ell m" followed by k
    lines of ell indices. Indices left out form the zero block.
    """
    lines = _content_lines(text)
    if not lines:
        raise ParameterError("empty pattern file")
    header = _numbers(lines[0], "header")
    if len(header) != 3:
        raise ParameterError(f"header must be 'k ell m', got {lines[0]!r}")
    k, ell, m = header
    body = lines[1:]
    if len(body) != k:
        raise ParameterError(f"expected {k} segments, found {len(body)}")
    segments = [_numbers(line, f"segment {i + 1}") for i, line in enumerate(body)]
    if any(len(seg) != ell for seg in segments):
        raise ParameterError(f"every segment needs exactly {ell} indices")
    try:
        return SegmentPattern.from_segments(m, segments)
    except ValidationError as exc:
        raise ParameterError(str(exc)) from exc


def format_pattern(pattern: SegmentPattern) -> str:
    lines = [f"{pattern.k} {pattern.ell} {pattern.m}"]
    lines += [" ".join(str(i) for i in seg) for seg in pattern.segments]
    return "\n".join(lines) + "\n"


def read_matrix(path: str | Path) -> FieldMatrix:
    return parse_matrix(Path(path).read_text(encoding="utf-8"))


def write_matrix(path: str | Path, M: FieldMatrix) -> None:
    Path(path).write_text(format_matrix(M), encoding="utf-8")


def read_pattern(path: str | Path) -> SegmentPattern:
    return parse_pattern(Path(path).read_text(encoding="utf-8"))


def write_pattern(path: str | Path, pattern: SegmentPattern) -> None:
    Path(path).write_text(format_pattern(pattern), encoding="utf-8")
