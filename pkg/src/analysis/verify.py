from __future__ import annotations

import logging
import math
import random
from collections import Counter
from fractions import Fraction
from pathlib import Path
from typing import Callable, Iterator

from pydantic import ValidationError

from models.schemas import (
    AsymptoticSpec,
    CheckResult,
    ClientPair,
    FieldConfig,
    FieldMatrix,
    SchemeParams,
    SegmentPattern,
    SpecialCaseParams,
    SweepSpec,
    VerificationSummary,
)
from tools import bounds, scheme
from tools.cache import DecodableStore, InMemoryDecodableStore
from tools.combinatorics import binom, pattern_count
from tools.construction import (
    build_base_matrix,
    canonical_pattern,
    enumerate_patterns,
    is_mds,
    vandermonde_generator,
)
from tools.decoding import enumerate_block_decodable, enumerate_decodable
from tools.field import column_rank

from . import sweeps
from .logger import log_check

logger = logging.getLogger(__name__)

TOLERANCE = 1e-9

Check = Callable[[], Iterator[CheckResult]]


def special_case_grid(max_m: int, max_T: int) -> Iterator[SpecialCaseParams]:
    """Every valid two-client scheme point with m <= max_m and T <= max_T."""
    for m in range(2, max_m + 1):
        for T in range(1, max_T + 1):
            for s in range(1, m):
                for ell in range(1, min(s + 1, m // T) + 1):
                    try:
                        yield SpecialCaseParams(m=m, T=T, ell=ell, s=s)
                    except ValidationError:
                        continue


def block_scheme_grid(max_m: int, T_values: tuple[int, ...]) -> Iterator[tuple[SchemeParams, int]]:
    """Every (params, s) of the general block construction with k | T."""
    for m in range(2, max_m + 1):
        for T in T_values:
            for k in (d for d in range(1, T + 1) if T % d == 0):
                for s in range(1, m):
                    for ell in range(1, min(s + T // k, m // k) + 1):
                        try:
                            yield SchemeParams(m=m, T=T, k=k, ell=ell, s_min=s), s
                        except ValidationError:
                            continue


def _close(a: float, b: float) -> bool:
    return abs(a - b) <= TOLERANCE


class VerificationRunner:
    """
    Runs every oracle-equivalence check and collects one result per grid
    point. A check that raises is recorded as a failure and the run moves on.
    """

    def __init__(
        self,
        max_m: int,
        log_path: str | Path | None = None,
        store: DecodableStore | None = None,
        bound_samples: int = 1000,
        seed: int = 0,
    ):
        self.max_m = max_m
        self.log_path = log_path
        self.store = store or InMemoryDecodableStore()
        self.bound_samples = bound_samples
        self.seed = seed
        self.field = FieldConfig()
        self.checks: dict[str, Check] = {
            "five_message_example": self.check_five_message_example,
            "block_counts": self.check_block_counts,
            "structural_rule": self.check_structural_rule,
            "scheme_entropies": self.check_scheme_entropies,
            "counting_routes": self.check_counting_routes,
            "serving_pattern_count": self.check_serving_pattern_count,
            "general_bounds": self.check_general_bounds,
            "mds_full_support": self.check_mds_full_support,
            "posterior_uniformity": self.check_posterior_uniformity,
            "ratio_trends": self.check_ratio_trends,
            "asymptotics": self.check_asymptotics,
        }

    def run(self) -> VerificationSummary:
        summary = VerificationSummary(max_m=self.max_m)
        for name, check in self.checks.items():
            try:
                for result in check():
                    self._record(summary, result)
            except Exception as exc:
                logger.exception("check %s raised", name)
                self._record(
                    summary,
                    CheckResult(
                        check=name,
                        params={"max_m": self.max_m},
                        expected="no error",
                        actual=f"{type(exc).__name__}: {exc}",
                        passed=False,
                    ),
                )
        logger.info("verification finished: %s passed, %s failed", summary.passed, summary.failed)
        return summary

    def _record(self, summary: VerificationSummary, result: CheckResult) -> None:
        log_check(result, self.log_path)
        tally = summary.by_check.setdefault(result.check, {"passed": 0, "failed": 0})
        summary.total += 1
        if result.passed:
            summary.passed += 1
            tally["passed"] += 1
        else:
            summary.failed += 1
            tally["failed"] += 1
            summary.failures.append(result)

    def check_five_message_example(self) -> Iterator[CheckResult]:
        A1 = FieldMatrix.from_rows([[1, 0, 0, 0, 0], [0, 0, 1, 0, 0]], self.field)
        A2 = FieldMatrix.from_rows([[1, 1, 0, 0, 0], [0, 0, 1, 1, 0]], self.field)
        first = enumerate_decodable(A1, 1, store=self.store)
        second = enumerate_decodable(A2, 1, store=self.store)
        yield CheckResult(
            check="five_message_example",
            params={"matrix": "A1", "s": 1},
            expected=[8, [1, 3], 5],
            actual=[first.size_joint, list(first.requests), first.size_s],
            passed=(first.size_joint, first.requests, first.size_s) == (8, (1, 3), 5),
        )
        expected_pairs = ["1:2", "2:1", "3:4", "4:3"]
        actual_pairs = sorted(p.label() for p in second.pairs)
        yield CheckResult(
            check="five_message_example",
            params={"matrix": "A2", "s": 1},
            expected=[expected_pairs, [1, 2, 3, 4], [1, 2, 3, 4]],
            actual=[actual_pairs, list(second.requests), [S[0] for S in second.side_infos]],
            passed=(
                actual_pairs == expected_pairs
                and second.requests == (1, 2, 3, 4)
                and sorted(second.side_infos) == [(1,), (2,), (3,), (4,)]
            ),
        )

    def check_block_counts(self) -> Iterator[CheckResult]:
        for p, s in block_scheme_grid(min(self.max_m, 10), (1, 2, 4)):
            A = build_base_matrix(p, canonical_pattern(p))
            sets = enumerate_decodable(A, s, store=self.store)
            expected = [bounds.thm1_joint_count(p, s), bounds.thm1_request_count(p)]
            yield CheckResult(
                check="block_counts",
                params={"m": p.m, "T": p.T, "k": p.k, "ell": p.ell, "s": s},
                expected=expected,
                actual=[sets.size_joint, sets.size_q],
                passed=[sets.size_joint, sets.size_q] == expected,
            )

    def check_structural_rule(self) -> Iterator[CheckResult]:
        for p, s in block_scheme_grid(min(self.max_m, 8), (1, 2, 3, 4)):
            pattern = canonical_pattern(p)
            by_rank = enumerate_decodable(build_base_matrix(p, pattern), s, store=self.store)
            by_rule = enumerate_block_decodable(pattern, s, p.rows_per_segment)
            yield CheckResult(
                check="structural_rule",
                params={"m": p.m, "T": p.T, "k": p.k, "ell": p.ell, "s": s},
                expected=by_rank.size_joint,
                actual=by_rule.size_joint,
                passed=by_rank.pairs == by_rule.pairs,
            )

    def check_scheme_entropies(self) -> Iterator[CheckResult]:
        for p in special_case_grid(min(self.max_m, 12), 3):
            report = scheme.entropy_oracle(p, store=self.store)
            expected = [scheme.lb_q(p), scheme.lb_joint(p), scheme.lb_s(p)]
            actual = [report.h_q, report.h_joint, report.h_s]
            n_bar = scheme.n_bar_t(p, route="direct", store=self.store)
            decomposition = report.h_joint - n_bar / report.size_joint
            passed = (
                all(_close(a, e) for a, e in zip(actual, expected))
                and _close(report.h_s, decomposition)
                and report.h_s >= report.h_joint - report.h_q - TOLERANCE
                and scheme.k_correction(p) <= scheme.lb_q(p) + TOLERANCE
            )
            yield CheckResult(
                check="scheme_entropies",
                params={"m": p.m, "T": p.T, "ell": p.ell, "s": p.s},
                expected=expected,
                actual=actual,
                passed=passed,
            )

    def check_counting_routes(self) -> Iterator[CheckResult]:
        for p in special_case_grid(min(self.max_m, 12), 3):
            b_closed = [scheme.appendix_B_value(p, x) for x in range(p.T + 1)]
            b_raw = [scheme.appendix_B_value(p, x, route="raw_sum") for x in range(p.T + 1)]
            c_routes = [
                [scheme.appendix_C_value(p, x, route=route) for x in range(1, p.T + 1)]
                for route in ("recurrence", "closed_form", "raw_sum")
            ]
            n_bars = [
                scheme.n_bar_t(p, route=route, store=self.store)
                for route in ("closed_form", "multi_sum", "direct")
            ]
            passed = (
                b_closed == b_raw
                and c_routes[0] == c_routes[1] == c_routes[2]
                and all(_close(n_bars[0], value) for value in n_bars[1:])
            )
            yield CheckResult(
                check="counting_routes",
                params={"m": p.m, "T": p.T, "ell": p.ell, "s": p.s},
                expected={"B": b_closed, "C": c_routes[0], "n_bar": n_bars[0]},
                actual={"B": b_raw, "C": c_routes[1:], "n_bar": n_bars[1:]},
                passed=passed,
            )

    def check_serving_pattern_count(self) -> Iterator[CheckResult]:
        for p in special_case_grid(min(self.max_m, 8), 2):
            if p.T != 2 or p.ell > 2:
                continue
            params = p.to_scheme_params()
            patterns = list(enumerate_patterns(params))
            served: Counter[ClientPair] = Counter()
            for pattern in patterns:
                served.update(enumerate_block_decodable(pattern, p.s, 1).pairs)
            K = scheme.count_satisfying_K(p)
            n_pairs = p.m * binom(p.m - 1, p.s)
            size = bounds.thm1_joint_count(params, p.s)
            passed = (
                len(served) == n_pairs
                and set(served.values()) == {K}
                and K * n_pairs == pattern_count(p.m, p.T, p.ell) * size
                and len(patterns) == pattern_count(p.m, p.T, p.ell)
            )
            yield CheckResult(
                check="serving_pattern_count",
                params={"m": p.m, "T": p.T, "ell": p.ell, "s": p.s},
                expected={"K": K, "pairs": n_pairs},
                actual={"K": sorted(set(served.values())), "pairs": len(served)},
                passed=passed,
            )

    def check_general_bounds(self) -> Iterator[CheckResult]:
        if self.max_m < 2:
            return
        rng = random.Random(self.seed)
        modulus = self.field.modulus
        for sample in range(self.bound_samples):
            m = rng.randint(2, min(self.max_m, 10))
            T = rng.randint(1, 4)
            rows = [[rng.randrange(modulus) for _ in range(m)] for _ in range(T)]
            A = FieldMatrix.from_rows(rows, self.field)
            violations = []
            for s in range(1, m):
                sets = enumerate_decodable(A, s)
                ub_joint, ub_q, ub_s = bounds.ub_lemma2(m, T, s)
                if sets.size_joint > ub_joint or sets.size_q > ub_q or sets.size_s > ub_s:
                    violations.append(s)
                served: dict[tuple[int, ...], list[int]] = {}
                for pair in sets.pairs:
                    served.setdefault(pair.S, []).append(pair.q - 1)
                for S, columns in served.items():
                    if len(columns) > T or column_rank(A, columns) != len(columns):
                        violations.append(s)
                        break
            yield CheckResult(
                check="general_bounds",
                params={"sample": sample, "m": m, "T": T},
                expected=[],
                actual=violations,
                passed=not violations,
            )

    def check_mds_full_support(self) -> Iterator[CheckResult]:
        for m in range(2, min(self.max_m, 8) + 1):
            for T in range(1, m):
                B = vandermonde_generator(m, T, self.field)
                for s in range(m - T, m):
                    sets = enumerate_decodable(B, s, store=self.store)
                    expected = [m, m * binom(m - 1, s)]
                    yield CheckResult(
                        check="mds_full_support",
                        params={"m": m, "T": T, "s": s},
                        expected=expected,
                        actual=[sets.size_q, sets.size_joint],
                        passed=is_mds(B) and [sets.size_q, sets.size_joint] == expected,
                    )
            for k_c in (1, 2, 3):
                if m - k_c < 1:
                    continue
                report = sweeps.case1_check(m, k_c, self.field, store=self.store)
                yield CheckResult(
                    check="mds_full_support",
                    params={"m": m, "k_c": k_c, "case": "I"},
                    expected=[m, binom(m, m - k_c)],
                    actual=[report.size_q, report.size_s],
                    passed=report.full_privacy_q and report.full_privacy_s,
                )

    def check_posterior_uniformity(self) -> Iterator[CheckResult]:
        # (m, T, ell, s): counts vary in the first, ell = s + 1 in the second
        for m, T, ell, s, expected in ((6, 2, 2, 2, (True, True, False)), (4, 2, 2, 1, (True, True, True))):
            if m > self.max_m:
                continue
            p = SpecialCaseParams(m=m, T=T, ell=ell, s=s)
            space = list(enumerate_patterns(p.to_scheme_params()))
            strategy = scheme.scheme_strategy(p, space)
            observed = canonical_pattern(p.to_scheme_params())
            flags = bounds.check_uniformity(space, strategy, observed, s, T)
            report = bounds.posterior_entropies(space, strategy, observed, s, T)
            tight = (
                _close(report.h_joint, math.log2(report.size_joint))
                and _close(report.h_q, math.log2(report.size_q))
            )
            yield CheckResult(
                check="posterior_uniformity",
                params={"m": m, "T": T, "ell": ell, "s": s, "strategy": "uniform"},
                expected=list(expected),
                actual=list(flags),
                passed=flags == expected and tight,
            )

            skewed = _skewed_strategy(strategy, observed, victim=1)
            sets = enumerate_block_decodable(observed, s, 1)
            skewed_report = bounds.posterior_entropies(space, skewed, observed, s, T)
            skewed_flags = bounds.check_uniformity(space, skewed, observed, s, T)
            yield CheckResult(
                check="posterior_uniformity",
                params={"m": m, "T": T, "ell": ell, "s": s, "strategy": "skewed"},
                expected={"h_joint_below": math.log2(sets.size_joint)},
                actual={"h_joint": skewed_report.h_joint},
                passed=(
                    skewed_report.h_joint < math.log2(sets.size_joint) - TOLERANCE
                    and not skewed_flags[0]
                ),
            )

    def check_ratio_trends(self) -> Iterator[CheckResult]:
        spec = SweepSpec(m=30, s=3, T_values=[1, 2, 3, 5])
        rows = sweeps.sweep_figure2(spec)
        for T in spec.T_values:
            curve = [row for row in rows if row.T == T and row.note is None]
            r_q = [row.r_q for row in curve]
            r_s = [row.r_s for row in curve]
            yield CheckResult(
                check="ratio_trends",
                params={"m": 30, "s": 3, "T": T},
                expected="r_q increasing, r_s decreasing in ell",
                actual={"r_q": r_q, "r_s": r_s},
                passed=(
                    all(a < b for a, b in zip(r_q, r_q[1:]))
                    and all(a > b for a, b in zip(r_s, r_s[1:]))
                    and all(0 < r <= 1 for row in curve for r in (row.r_q, row.r_s, row.r_joint))
                ),
            )
        by_point = {(row.T, row.ell): row for row in rows}
        for T_lo, T_hi in zip(spec.T_values, spec.T_values[1:]):
            shared = [ell for (T, ell) in by_point if T == T_lo and (T_hi, ell) in by_point]
            monotone = all(
                by_point[(T_hi, ell)].r_q >= by_point[(T_lo, ell)].r_q
                and by_point[(T_hi, ell)].r_s >= by_point[(T_lo, ell)].r_s - TOLERANCE
                for ell in shared
            )
            yield CheckResult(
                check="ratio_trends",
                params={"m": 30, "s": 3, "T": [T_lo, T_hi]},
                expected="r_q and r_s nondecreasing in T",
                actual=shared,
                passed=monotone,
            )
        spot = [by_point[(3, 4)].r_q, by_point[(3, 1)].r_joint]
        yield CheckResult(
            check="ratio_trends",
            params={"m": 30, "s": 3, "points": ["T=3,ell=4 r_q", "T=3,ell=1 r_joint"]},
            expected=[0.4, 0.9],
            actual=spot,
            passed=spot == [0.4, 0.9],
        )

    def check_asymptotics(self) -> Iterator[CheckResult]:
        half = sweeps.asymptotic_gaps(AsymptoticSpec(c=0.5, b=0, T=2, m_values=list(range(10, 41, 2))))
        for row in half:
            yield CheckResult(
                check="asymptotics",
                params={"case": "II", "b": 0, "c": 0.5, "T": 2, "m": row.m},
                expected=[0.0, 0.0],
                actual=[row.G_joint, row.G_q - math.log2(row.m / 2)],
                passed=_close(row.G_joint, 0.0) and _close(row.G_q, math.log2(row.m / 2)),
            )
        quarter = sweeps.asymptotic_gaps(AsymptoticSpec(c=0.25, b=0.25, T=2, m_values=list(range(8, 41, 4))))
        for row in quarter:
            yield CheckResult(
                check="asymptotics",
                params={"case": "II", "b": 0.25, "c": 0.25, "T": 2, "m": row.m},
                expected={"k_corr": 0.0, "G_q_at_most": math.log2(1 / (2 * 0.25))},
                actual={"k_corr": row.k_corr, "G_q": row.G_q},
                passed=_close(row.k_corr, 0.0) and row.G_q <= math.log2(1 / (2 * 0.25)) + TOLERANCE,
            )


def _skewed_strategy(
    strategy: bounds.StrategyTable, observed: SegmentPattern, victim: int
) -> bounds.StrategyTable:
    """Move every pair requesting `victim` off the observed pattern."""
    entries = {}
    for pair, dist in strategy.entries.items():
        if pair.q == victim and len(dist) > 1:
            other = next(pattern for pattern in dist if pattern != observed)
            entries[pair] = {other: Fraction(1)}
        else:
            entries[pair] = dist
    return bounds.StrategyTable(entries=entries)


def verify_all(
    max_m: int,
    log_path: str | Path | None = None,
    store: DecodableStore | None = None,
    bound_samples: int = 1000,
    seed: int = 0,
) -> VerificationSummary:
    runner = VerificationRunner(max_m, log_path, store, bound_samples, seed)
    return runner.run()


def format_summary(summary: VerificationSummary) -> str:
    lines = [f"verify-all max_m={summary.max_m}"]
    for name, tally in summary.by_check.items():
        lines.append(f"  {name:<20} {tally['passed']:>6} passed {tally['failed']:>4} failed")
    lines.append(f"total {summary.total}: {summary.passed} passed, {summary.failed} failed")
    for failure in summary.failures[:20]:
        lines.append(f"  FAIL {failure.check} {failure.params}: expected {failure.expected}, got {failure.actual}")
    return "\n".join(lines)
