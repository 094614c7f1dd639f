import unittest

from pydantic import ValidationError

from models.schemas import FieldConfig, FieldMatrix, SchemeParams, SegmentPattern
from tests.helpers import A1, A2, FIELD
from tools.combinatorics import pattern_count
from tools.construction import (
    build_base_matrix,
    canonical_pattern,
    enumerate_patterns,
    is_mds,
    vandermonde_generator,
)
from tools.decoding import enumerate_decodable
from tools.errors import EnumerationCapError, ParameterError
from tools.field import column_rank


class VandermondeTests(unittest.TestCase):
    def test_single_row_is_all_ones_times_points(self):
        G = vandermonde_generator(2, 1, FIELD)
        self.assertEqual(G.row_lists(), [[1, 2]])

    def test_generator_is_mds(self):
        for ell in range(1, 6):
            for r in range(1, ell + 1):
                self.assertTrue(is_mds(vandermonde_generator(ell, r, FIELD)))

    def test_more_rows_than_columns_keeps_full_column_rank(self):
        G = vandermonde_generator(2, 4, FIELD)
        self.assertEqual(column_rank(G, [0, 1]), 2)

    def test_too_few_points(self):
        with self.assertRaises(ParameterError):
            vandermonde_generator(5, 2, FieldConfig(modulus=5))
        self.assertTrue(is_mds(vandermonde_generator(4, 2, FieldConfig(modulus=5))))


class MdsTests(unittest.TestCase):
    def test_examples(self):
        self.assertTrue(is_mds(FieldMatrix.from_rows([[1, 1, 1]], FIELD)))
        self.assertFalse(is_mds(FieldMatrix.from_rows([[1, 0, 1]], FIELD)))
        self.assertFalse(is_mds(A1))
        self.assertFalse(is_mds(FieldMatrix.from_rows([[1], [1]], FIELD)))


class SchemeParamsTests(unittest.TestCase):
    def test_constraints(self):
        SchemeParams(m=6, T=2, k=2, ell=2, s_min=2)
        with self.assertRaises(ValidationError):
            SchemeParams(m=6, T=3, k=2, ell=1, s_min=1)
        with self.assertRaises(ValidationError):
            SchemeParams(m=6, T=2, k=2, ell=4, s_min=3)
        with self.assertRaises(ValidationError):
            SchemeParams(m=6, T=2, k=2, ell=3, s_min=1)


class BaseMatrixTests(unittest.TestCase):
    def test_identity_pattern_reproduces_first_example(self):
        p = SchemeParams(m=5, T=2, k=2, ell=1, s_min=1)
        pattern = SegmentPattern.from_segments(5, [[1], [3]])
        self.assertEqual(build_base_matrix(p, pattern), A1)

    def test_explicit_block_reproduces_second_example(self):
        p = SchemeParams(m=5, T=2, k=2, ell=2, s_min=1)
        pattern = SegmentPattern.from_segments(5, [[1, 2], [3, 4]])
        block = FieldMatrix.from_rows([[1, 1]], FIELD)
        self.assertEqual(build_base_matrix(p, pattern, block), A2)

    def test_vandermonde_block_layout(self):
        p = SchemeParams(m=6, T=2, k=2, ell=2, s_min=2)
        A = build_base_matrix(p, SegmentPattern.from_segments(6, [[4, 2], [5, 6]]))
        self.assertEqual(A.row_lists(), [[0, 1, 0, 2, 0, 0], [0, 0, 0, 0, 1, 2]])

    def test_two_rows_per_segment(self):
        p = SchemeParams(m=6, T=4, k=2, ell=3, s_min=1)
        A = build_base_matrix(p, canonical_pattern(p))
        self.assertEqual(
            A.row_lists(),
            [
                [1, 2, 3, 0, 0, 0],
                [1, 4, 9, 0, 0, 0],
                [0, 0, 0, 1, 2, 3],
                [0, 0, 0, 1, 4, 9],
            ],
        )

    def test_pattern_must_fit_params(self):
        p = SchemeParams(m=6, T=2, k=2, ell=2, s_min=2)
        with self.assertRaises(ParameterError):
            build_base_matrix(p, SegmentPattern.from_segments(6, [[1], [2]]))
        with self.assertRaises(ParameterError):
            build_base_matrix(p, canonical_pattern(p), FieldMatrix.from_rows([[1, 1, 1]], FIELD))


class BlockChoiceTests(unittest.TestCase):
    CASES = (
        (
            SchemeParams(m=6, T=2, k=2, ell=2, s_min=2),
            [[[2, 1]], [[3, 5]]],
        ),
        (
            SchemeParams(m=7, T=4, k=2, ell=3, s_min=2),
            [[[3, 1, 2], [9, 1, 4]], [[5, 6, 7], [25, 36, 49]]],
        ),
    )

    def test_decodable_sets_do_not_depend_on_the_block(self):
        for p, alternatives in self.CASES:
            pattern = canonical_pattern(p)
            expected = enumerate_decodable(build_base_matrix(p, pattern), p.s_min)
            for rows in alternatives:
                block = FieldMatrix.from_rows(rows, FIELD)
                self.assertTrue(is_mds(block))
                sets = enumerate_decodable(build_base_matrix(p, pattern, block), p.s_min)
                self.assertEqual(sets, expected, msg=rows)

    def test_single_segment_over_two_rows_is_always_feasible(self):
        for m in range(2, 8):
            for s_min in range(1, m):
                p = SchemeParams(m=m, T=2, k=1, ell=s_min, s_min=s_min)
                A = build_base_matrix(p, canonical_pattern(p))
                self.assertEqual((A.rows, A.cols), (2, m))
                self.assertGreater(enumerate_decodable(A, s_min).size_joint, 0, msg=(m, s_min))


class PatternTests(unittest.TestCase):
    def test_segment_pattern_validation(self):
        with self.assertRaises(ValidationError):
            SegmentPattern(m=4, segments=((1, 2), (3,)), zero_block=(4,))
        with self.assertRaises(ValidationError):
            SegmentPattern(m=4, segments=((1, 2),), zero_block=(3,))
        with self.assertRaises(ValidationError):
            SegmentPattern(m=4, segments=(), zero_block=(1, 2, 3, 4))

    def test_segment_lookup(self):
        pattern = SegmentPattern.from_segments(6, [[5, 1], [2, 3]])
        self.assertEqual(pattern.segment_of(5), 0)
        self.assertEqual(pattern.segment_of(3), 1)
        self.assertIsNone(pattern.segment_of(6))

    def test_canonical_pattern(self):
        p = SchemeParams(m=7, T=2, k=2, ell=3, s_min=2)
        pattern = canonical_pattern(p)
        self.assertEqual(pattern.segments, ((1, 2, 3), (4, 5, 6)))
        self.assertEqual(pattern.zero_block, (7,))

    def test_enumeration_count(self):
        cases = [((5, 2, 2, 1), 30), ((5, 2, 1, 1), 20), ((6, 2, 2, 2), 90), ((4, 1, 4, 3), 1)]
        for (m, T, ell, s), expected in cases:
            p = SchemeParams(m=m, T=T, k=T, ell=ell, s_min=s)
            patterns = list(enumerate_patterns(p))
            self.assertEqual(len(patterns), expected)
            self.assertEqual(len(set(patterns)), expected)
            self.assertEqual(pattern_count(m, T, ell), expected)

    def test_enumeration_size_is_logged_at_debug(self):
        p = SchemeParams(m=6, T=2, k=2, ell=2, s_min=2)
        with self.assertLogs("tools.construction", level="DEBUG") as logs:
            enumerate_patterns(p)
        self.assertEqual([record.levelname for record in logs.records], ["DEBUG"])
        self.assertIn("enumerating 90 patterns", logs.output[0])

    def test_enumeration_cap(self):
        p = SchemeParams(m=6, T=2, k=2, ell=2, s_min=2)
        with self.assertRaises(EnumerationCapError):
            enumerate_patterns(p, cap=10)


if __name__ == "__main__":
    unittest.main()
