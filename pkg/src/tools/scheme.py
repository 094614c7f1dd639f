from __future__ import annotations

import logging
import math
import random
from fractions import Fraction
from itertools import combinations, product
from typing import Literal

from models.schemas import (
    ClientPair,
    PrivacyReport,
    SchemeRow,
    SegmentPattern,
    SpecialCaseParams,
)

from .bounds import StrategyTable, uniform_posterior_report
from .cache import DecodableStore
from .combinatorics import binom, multinomial
from .construction import build_base_matrix, canonical_pattern, enumerate_patterns
from .decoding import enumerate_decodable, is_decodable_structural
from .errors import IndexRangeError, ParameterError

logger = logging.getLogger(__name__)

BITS_MATCH = 1e-9

NBarRoute = Literal["closed_form", "direct", "multi_sum"]
BRoute = Literal["closed_form", "raw_sum"]
CRoute = Literal["recurrence", "closed_form", "raw_sum"]


def _check_pair(p: SpecialCaseParams, pair: ClientPair) -> None:
    if pair.s != p.s:
        raise ParameterError(f"side information has size {pair.s}, expected s={p.s}")
    bad = [i for i in (pair.q, *pair.S) if not 1 <= i <= p.m]
    if bad:
        raise IndexRangeError(f"indices {bad} outside [1..{p.m}]")


def count_satisfying_K(p: SpecialCaseParams) -> int:
    """
    Number of labeled patterns in which a fixed pair (q, S) decodes: T choices
    for q's segment, C(s, ell-1) partners from S, and a multinomial spread of
    the other m-ell indices over the T-1 other segments and the zero block.
    """
    rest = [p.ell] * (p.T - 1) + [p.m - p.T * p.ell]
    return p.T * binom(p.s, p.ell - 1) * multinomial(p.m - p.ell, rest)


def sample_satisfying_pattern(p: SpecialCaseParams, pair: ClientPair, seed: int) -> SegmentPattern:
    """Draw uniformly from the K patterns serving pair; deterministic for a given seed."""
    _check_pair(p, pair)
    rng = random.Random(seed)
    label = rng.randrange(p.T)
    partners = rng.sample(pair.S, p.ell - 1)

    taken = {pair.q, *partners}
    rest = [i for i in range(1, p.m + 1) if i not in taken]
    rng.shuffle(rest)

    segments: list[tuple[int, ...]] = []
    cursor = 0
    for j in range(p.T):
        if j == label:
            segments.append((pair.q, *partners))
        else:
            segments.append(tuple(rest[cursor : cursor + p.ell]))
            cursor += p.ell
    return SegmentPattern(m=p.m, segments=tuple(segments), zero_block=tuple(rest[cursor:]))


def satisfying_patterns(
    p: SpecialCaseParams, pair: ClientPair, space: list[SegmentPattern] | None = None
) -> list[SegmentPattern]:
    _check_pair(p, pair)
    if space is None:
        space = list(enumerate_patterns(p.to_scheme_params()))
    return [pattern for pattern in space if is_decodable_structural(pattern, pair, 1)]


def scheme_strategy(p: SpecialCaseParams, space: list[SegmentPattern] | None = None) -> StrategyTable:
    """p(pattern | q, S) = 1/K on the patterns serving (q, S), for every pair with |S| = s."""
    if space is None:
        space = list(enumerate_patterns(p.to_scheme_params()))
    entries: dict[ClientPair, dict[SegmentPattern, Fraction]] = {}
    for S in combinations(range(1, p.m + 1), p.s):
        known = set(S)
        for q in range(1, p.m + 1):
            if q in known:
                continue
            pair = ClientPair(q=q, S=S)
            serving = satisfying_patterns(p, pair, space)
            weight = Fraction(1, len(serving))
            entries[pair] = {pattern: weight for pattern in serving}
    return StrategyTable(entries=entries)


def lb_q(p: SpecialCaseParams) -> float:
    return math.log2(p.T * p.ell)


def lb_joint(p: SpecialCaseParams) -> float:
    return math.log2(p.T * p.ell * binom(p.m - p.ell, p.s - p.ell + 1))


def _log_difference_sum(weights: dict[int, Fraction]) -> float:
    """
    sum_i w_i sum_{x=1}^{i} (-1)^(i-x) C(i-1, x-1) log2 x.
    The alternating binomials grow like 2^i, so the terms are regrouped by x
    with exact coefficients and only the final log2 products are floats.
    """
    top = max(weights, default=0)
    terms = []
    for x in range(2, top + 1):
        c_x = sum(
            ((-1) ** (i - x) * binom(i - 1, x - 1) * w for i, w in weights.items() if i >= x and w),
            Fraction(0),
        )
        if c_x:
            terms.append(float(c_x) * math.log2(x))
    return math.fsum(terms)


def k_correction(p: SpecialCaseParams) -> float:
    """
    The entropy deficit of H(S | A) below the joint entropy:
    sum_i C(T-1, i-1) ell^(i-1) C(m - i*ell, s - i(ell-1)) / C(m-ell, s-ell+1) * sum_x (-1)^(i-x) C(i-1,x-1) log2 x.
    """
    denominator = binom(p.m - p.ell, p.s - p.ell + 1)
    weights = {
        i: Fraction(binom(p.T - 1, i - 1) * p.ell ** (i - 1) * binom(p.m - i * p.ell, p.s - i * (p.ell - 1)), denominator)
        for i in range(1, p.T + 1)
    }
    return _log_difference_sum(weights)


def lb_s(p: SpecialCaseParams) -> float:
    return lb_joint(p) - k_correction(p)


def ratios(p: SpecialCaseParams) -> tuple[float, float, float]:
    """(r_q, r_joint, r_s) against the general count bounds; the first two are exact rationals."""
    r_q = Fraction(p.T * p.ell, p.m)
    r_joint = Fraction(p.T * p.ell * binom(p.m - p.ell, p.s - p.ell + 1), p.T * binom(p.m, p.s))
    r_s = 2.0 ** (lb_s(p) - math.log2(binom(p.m, p.s)))
    return float(r_q), float(r_joint), r_s


def _observed_or_canonical(p: SpecialCaseParams, observed: SegmentPattern | None) -> SegmentPattern:
    if observed is None:
        return canonical_pattern(p.to_scheme_params())
    if (observed.m, observed.k, observed.ell) != (p.m, p.T, p.ell):
        raise ParameterError("observed pattern does not match (m, T, ell)")
    return observed


def entropy_oracle(
    p: SpecialCaseParams,
    observed: SegmentPattern | None = None,
    store: DecodableStore | None = None,
) -> PrivacyReport:
    """
    Brute-force entropies for an observed pattern. Every pair is served by
    exactly K patterns, so the posterior is uniform over D(A, s).
    """
    params = p.to_scheme_params()
    pattern = _observed_or_canonical(p, observed)
    A = build_base_matrix(params, pattern)
    sets = enumerate_decodable(A, p.s, store=store)
    return uniform_posterior_report(sets, p.T)


def _b(p: SpecialCaseParams, free: int) -> int:
    x = p.T - free
    return binom(p.m - x * p.ell, p.s - x * (p.ell - 1))


def _raw_sum(p: SpecialCaseParams, free: int, skip_partial: bool) -> int:
    # free segments hold ell_i members of S each, the zero block holds the rest
    x = p.T - free
    budget = p.s - x * (p.ell - 1)
    zeros = p.m - p.T * p.ell
    widths = [w for w in range(p.ell + 1) if not (skip_partial and w == p.ell - 1)]
    total = 0
    for counts in product(widths, repeat=free):
        term = binom(zeros, budget - sum(counts))
        for c in counts:
            term *= binom(p.ell, c)
        total += term
    return total


def appendix_B_value(p: SpecialCaseParams, x: int, route: BRoute = "closed_form") -> int:
    """
    Number of side sets of size s holding exactly ell-1 members of x fixed
    segments (no constraint on the other T-x): C(m - x*ell, s - x(ell-1)).
    """
    if not 0 <= x <= p.T:
        raise ParameterError(f"x={x} outside [0, {p.T}]")
    if route == "closed_form":
        return _b(p, p.T - x)
    if route == "raw_sum":
        return _raw_sum(p, p.T - x, skip_partial=False)
    raise ParameterError(f"unknown route {route!r}")


def _c_recurrence(p: SpecialCaseParams, free: int, memo: dict[int, int]) -> int:
    if free not in memo:
        value = _b(p, free)
        for y in range(1, free + 1):
            value -= binom(free, y) * p.ell**y * _c_recurrence(p, free - y, memo)
        memo[free] = value
    return memo[free]


def _c_closed_form(p: SpecialCaseParams, free: int) -> int:
    return sum(
        (-1) ** v * p.ell**v * binom(free, v) * _b(p, free - v)
        for v in range(free + 1)
    )


def appendix_C_value(p: SpecialCaseParams, x: int, route: CRoute = "closed_form") -> int:
    """
    Like appendix_B_value, but none of the other T-x segments may hold
    exactly ell-1 members of S.
    """
    if not 1 <= x <= p.T:
        raise ParameterError(f"x={x} outside [1, {p.T}]")
    free = p.T - x
    if route == "recurrence":
        return _c_recurrence(p, free, {})
    if route == "closed_form":
        return _c_closed_form(p, free)
    if route == "raw_sum":
        return _raw_sum(p, free, skip_partial=True)
    raise ParameterError(f"unknown route {route!r}")


def n_bar_t(p: SpecialCaseParams, route: NBarRoute = "closed_form", store: DecodableStore | None = None) -> float:
    """
    sum over decodable side sets of N log2 N, where N is the number of
    requests a side set decodes.
    """
    if route == "closed_form":
        weights = {
            i: Fraction(p.T * binom(p.T - 1, i - 1) * p.ell**i * _b(p, p.T - i)) for i in range(1, p.T + 1)
        }
        return _log_difference_sum(weights)
    if route == "multi_sum":
        # x segments with exactly ell-1 members of S decode one request each
        return sum(
            x * math.log2(x) * binom(p.T, x) * p.ell**x * _c_closed_form(p, p.T - x)
            for x in range(1, p.T + 1)
        )
    if route == "direct":
        params = p.to_scheme_params()
        A = build_base_matrix(params, canonical_pattern(params))
        sets = enumerate_decodable(A, p.s, store=store)
        return sum(n * math.log2(n) for n in sets.counts.values())
    raise ParameterError(f"unknown route {route!r}")


def scheme_row(p: SpecialCaseParams, verify: bool = False, store: DecodableStore | None = None) -> SchemeRow:
    r_q, r_joint, r_s = ratios(p)
    lbq, lbj, k_corr = lb_q(p), lb_joint(p), k_correction(p)
    lbs = lb_s(p)
    row = dict(
        m=p.m, T=p.T, ell=p.ell, s=p.s,
        lb_q=lbq, lb_joint=lbj, k_corr=k_corr, lb_s=lbs,
        ub_q=math.log2(p.m),
        ub_joint=math.log2(p.T * binom(p.m, p.s)),
        ub_s=math.log2(binom(p.m, p.s)),
        r_q=r_q, r_joint=r_joint, r_s=r_s,
    )
    if verify:
        report = entropy_oracle(p, store=store)
        row.update(
            oracle_h_q=report.h_q,
            oracle_h_joint=report.h_joint,
            oracle_h_s=report.h_s,
            match=(
                abs(report.h_q - lbq) <= BITS_MATCH
                and abs(report.h_joint - lbj) <= BITS_MATCH
                and abs(report.h_s - lbs) <= BITS_MATCH
            ),
        )
        if not row["match"]:
            logger.warning("closed forms disagree with enumeration at m=%s T=%s ell=%s s=%s", p.m, p.T, p.ell, p.s)
    return SchemeRow(**row)
