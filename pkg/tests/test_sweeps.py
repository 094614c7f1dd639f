import io
import math
import unittest

from pydantic import ValidationError

from analysis.sweeps import (
    asymptotic_gaps,
    asymptotic_point,
    case1_check,
    figure2_point,
    gnuplot_script,
    sweep_figure2,
    write_csv,
)
from models.schemas import AsymptoticSpec, Figure2Row, GapRow, SweepSpec
from tools.errors import ParameterError


class Figure2Tests(unittest.TestCase):
    def test_single_points(self):
        self.assertAlmostEqual(figure2_point(30, 3, 3, 4).r_q, 0.4, places=12)
        self.assertAlmostEqual(figure2_point(30, 3, 3, 1).r_joint, 0.9, places=12)

    def test_default_grid(self):
        rows = sweep_figure2(SweepSpec(m=30, s=3))
        self.assertEqual([(r.T, r.ell) for r in rows], [(T, ell) for T in (1, 2, 3, 5) for ell in range(1, 5)])
        self.assertTrue(all(r.note is None for r in rows))

    def test_trends(self):
        rows = sweep_figure2(SweepSpec(m=30, s=3))
        for T in (1, 2, 3, 5):
            series = [r for r in rows if r.T == T]
            r_q = [r.r_q for r in series]
            r_joint = [r.r_joint for r in series]
            self.assertEqual(r_q, sorted(r_q))
            self.assertEqual(r_joint, sorted(r_joint, reverse=True))
            for r in series:
                self.assertLessEqual(r.r_s, 1.0 + 1e-12)
                self.assertLessEqual(r.r_joint, r.r_s + 1e-12)

    def test_invalid_points_become_notes(self):
        rows = sweep_figure2(SweepSpec(m=6, s=3, T_values=[5, 2, 7]))
        self.assertEqual([r.T for r in rows], [2, 2, 2, 5, 7])
        self.assertIsNotNone(rows[-1].note)
        self.assertEqual(rows[-1].as_csv_row(), [7, "", "", "", "# no valid ell for T=7"])

    def test_grid_validation(self):
        with self.assertRaises(ValidationError):
            SweepSpec(m=5, s=5)
        with self.assertRaises(ValidationError):
            SweepSpec(m=5, s=2, T_values=[0])


class AsymptoticTests(unittest.TestCase):
    def test_joint_gap_closes_at_half(self):
        rows = asymptotic_gaps(AsymptoticSpec(c=0.5, b=0.0, T=2))
        self.assertEqual([r.m for r in rows], [10, 20, 40, 80])
        for r in rows:
            self.assertAlmostEqual(r.G_joint, 0.0, places=9)
            self.assertAlmostEqual(r.G_q, math.log2(r.m / 2), places=9)
        self.assertEqual(sorted(r.G_q for r in rows), [r.G_q for r in rows])

    def test_gap_ordering(self):
        for r in asymptotic_gaps(AsymptoticSpec(c=0.25, b=0.25, T=2, m_values=[8, 16, 24])):
            self.assertGreaterEqual(r.G_s_upper + 1e-9, r.G_s)
            self.assertAlmostEqual(r.G_joint_full, r.G_joint + 1.0, places=9)
            self.assertGreaterEqual(r.k_corr, 0.0)

    def test_point_values(self):
        row = asymptotic_point(6, 2, 2, 2)
        self.assertAlmostEqual(row.G_q, math.log2(6) - 2.0, places=12)
        self.assertAlmostEqual(row.G_joint, math.log2(15) - 4.0, places=12)
        self.assertAlmostEqual(row.G_s_upper, math.log2(15) - 2.0, places=12)
        self.assertAlmostEqual(row.G_s, math.log2(15) - 3.5, places=12)
        self.assertAlmostEqual(row.G_joint_full, math.log2(30) - 4.0, places=12)

    def test_points_outside_the_constraints_are_skipped(self):
        self.assertEqual([r.m for r in asymptotic_gaps(AsymptoticSpec(c=0.95, b=0.0, T=2, m_values=[10, 20]))], [20])
        self.assertEqual(asymptotic_gaps(AsymptoticSpec(c=0.5, b=0.5, T=3, m_values=[10])), [])

    def test_fraction_validation(self):
        with self.assertRaises(ValidationError):
            AsymptoticSpec(c=0.2, b=0.3, T=2)
        with self.assertRaises(ValidationError):
            AsymptoticSpec(c=1.0, b=0.0, T=2)


class CaseOneTests(unittest.TestCase):
    def test_mds_generator_is_fully_private(self):
        for m, k_c in ((6, 2), (6, 5), (5, 1)):
            report = case1_check(m, k_c)
            self.assertTrue(report.full_privacy_joint, (m, k_c))
            self.assertTrue(report.full_privacy_q, (m, k_c))
            self.assertTrue(report.full_privacy_s, (m, k_c))

    def test_set_sizes(self):
        report = case1_check(6, 2)
        self.assertEqual((report.size_joint, report.size_q, report.size_s), (30, 6, 15))

    def test_bad_dimension(self):
        with self.assertRaises(ParameterError):
            case1_check(6, 6)
        with self.assertRaises(ParameterError):
            case1_check(6, 0)


class OutputTests(unittest.TestCase):
    def test_csv_headers(self):
        out = io.StringIO()
        write_csv([figure2_point(30, 3, 1, 1)], Figure2Row.CSV_HEADER, out)
        lines = out.getvalue().splitlines()
        self.assertEqual(lines[0], "T,ell,r_q,r_s,r_joint")
        self.assertTrue(lines[1].startswith("1,1,"))

        out = io.StringIO()
        write_csv([asymptotic_point(6, 2, 2, 2)], GapRow.CSV_HEADER, out)
        self.assertEqual(out.getvalue().splitlines()[0], "m,s,ell,G_q,G_joint,G_s_upper")

    def test_gnuplot_script(self):
        script = gnuplot_script("out/figure2.csv", "figure2")
        self.assertIn("'out/figure2.csv'", script)
        self.assertIn("columnheader", script)
        self.assertIn("set xlabel 'm'", gnuplot_script("gaps.csv", "asymptotics"))
        with self.assertRaises(ParameterError):
            gnuplot_script("x.csv", "histogram")


if __name__ == "__main__":
    unittest.main()
