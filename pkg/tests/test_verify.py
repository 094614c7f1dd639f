import json
import tempfile
import unittest
from pathlib import Path
from unittest.mock import patch

from analysis.logger import default_log_path, log_check
from analysis.verify import VerificationRunner, format_summary, special_case_grid, verify_all
from models.schemas import CheckResult


class VerifyAllTests(unittest.TestCase):
    def test_small_run_passes(self):
        summary = verify_all(5, bound_samples=20)
        self.assertTrue(summary.ok, format_summary(summary))
        self.assertEqual(summary.total, summary.passed)
        for name in ("five_message_example", "block_counts", "scheme_entropies", "counting_routes", "posterior_uniformity", "asymptotics"):
            self.assertGreater(summary.by_check[name]["passed"], 0, name)

    def test_corrupted_correction_is_reported(self):
        with patch("tools.scheme.k_correction", return_value=0.0):
            summary = verify_all(5, bound_samples=5)
        self.assertFalse(summary.ok)
        self.assertGreater(summary.by_check["scheme_entropies"]["failed"], 0)
        self.assertIn("FAIL scheme_entropies", format_summary(summary))

    def test_raising_check_is_recorded_and_run_continues(self):
        runner = VerificationRunner(4, bound_samples=5)
        runner.checks = {
            "broken": lambda: iter([1 / 0]),
            "five_message_example": runner.check_five_message_example,
        }
        summary = runner.run()
        self.assertEqual(summary.by_check["broken"], {"passed": 0, "failed": 1})
        self.assertEqual(summary.by_check["five_message_example"]["passed"], 2)
        self.assertIn("ZeroDivisionError", summary.failures[0].actual)

    def test_log_lines_carry_pass_flag(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / "logs" / "verify.jsonl"
            runner = VerificationRunner(4, log_path=path, bound_samples=3)
            runner.checks = {"five_message_example": runner.check_five_message_example}
            runner.run()
            lines = [json.loads(line) for line in path.read_text(encoding="utf-8").splitlines()]
        self.assertEqual(len(lines), 2)
        self.assertEqual(lines[0]["check"], "five_message_example")
        self.assertIs(lines[0]["pass"], True)
        self.assertIn("ts", lines[0])


class GridTests(unittest.TestCase):
    def test_special_case_grid_only_yields_valid_points(self):
        points = list(special_case_grid(4, 2))
        self.assertIn((4, 2, 2, 1), [(p.m, p.T, p.ell, p.s) for p in points])
        self.assertTrue(all(p.ell <= min(p.s + 1, p.m // p.T) for p in points))


class LoggerTests(unittest.TestCase):
    def test_no_path_means_no_log(self):
        record = CheckResult(check="x", passed=True)
        with patch.dict("os.environ", {}, clear=True):
            self.assertIsNone(default_log_path())
            log_check(record)

    def test_unwritable_path_is_ignored(self):
        with tempfile.TemporaryDirectory() as tmp:
            blocker = Path(tmp) / "file"
            blocker.write_text("", encoding="utf-8")
            log_check(CheckResult(check="x", passed=False), blocker / "nested.jsonl")
            self.assertEqual(blocker.read_text(encoding="utf-8"), "")


if __name__ == "__main__":
    unittest.main()
