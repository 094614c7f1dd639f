import tempfile
import unittest
from pathlib import Path

from models.schemas import SegmentPattern
from tests.helpers import A2
from tools.errors import ParameterError
from tools.textio import (
    format_matrix,
    format_pattern,
    parse_matrix,
    parse_pattern,
    read_matrix,
    read_pattern,
    write_pattern,
)


class MatrixFormatTests(unittest.TestCase):
    def test_parse_matrix(self):
        M = parse_matrix("2 5 257\n1 1 0 0 0\n0 0 1 1 0\n")
        self.assertEqual(M, A2)

    def test_format_matrix(self):
        self.assertEqual(format_matrix(A2), "2 5 257\n1 1 0 0 0\n0 0 1 1 0\n")

    def test_comments_and_blank_lines_are_skipped(self):
        M = parse_matrix("# example\n2 5 257\n\n1 1 0 0 0\n0 0 1 1 0\n")
        self.assertEqual(M.rows, 2)

    def test_bad_inputs(self):
        with self.assertRaises(ParameterError):
            parse_matrix("")
        with self.assertRaises(ParameterError):
            parse_matrix("2 5\n")
        with self.assertRaises(ParameterError):
            parse_matrix("2 5 257\n1 1 0 0 0\n")
        with self.assertRaises(ParameterError):
            parse_matrix("1 3 257\n1 2\n")
        with self.assertRaises(ParameterError):
            parse_matrix("1 2 257\n1 x\n")
        with self.assertRaises(ParameterError):
            parse_matrix("1 2 7\n1 9\n")
        with self.assertRaises(ParameterError):
            parse_matrix("1 2 8\n1 1\n")

    def test_read_matrix_from_file(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / "a2.txt"
            path.write_text(format_matrix(A2), encoding="utf-8")
            self.assertEqual(read_matrix(path), A2)


class PatternFormatTests(unittest.TestCase):
    def test_parse_pattern_fills_zero_block(self):
        pattern = parse_pattern("2 2 6\n3 1\n4 6\n")
        self.assertEqual(pattern.segments, ((1, 3), (4, 6)))
        self.assertEqual(pattern.zero_block, (2, 5))

    def test_format_pattern(self):
        pattern = SegmentPattern.from_segments(5, [[1], [3]])
        self.assertEqual(format_pattern(pattern), "2 1 5\n1\n3\n")

    def test_bad_patterns(self):
        with self.assertRaises(ParameterError):
            parse_pattern("2 2 6\n1 2\n")
        with self.assertRaises(ParameterError):
            parse_pattern("2 2 6\n1 2\n2 3\n")
        with self.assertRaises(ParameterError):
            parse_pattern("1 2 3\n1 4\n")
        with self.assertRaises(ParameterError):
            parse_pattern("2 2 6\n1 2\n3\n")

    def test_pattern_file(self):
        pattern = SegmentPattern.from_segments(6, [[2, 5], [1, 3]])
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / "pattern.txt"
            write_pattern(path, pattern)
            self.assertEqual(read_pattern(path), pattern)


if __name__ == "__main__":
    unittest.main()
