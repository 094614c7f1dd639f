from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

from scipy.stats import entropy

from models.schemas import ClientPair, DecodableSets, PrivacyReport, SchemeParams, SegmentPattern

from .combinatorics import binom
from .decoding import enumerate_block_decodable, is_decodable_structural
from .errors import ObservedNotInSpaceError, ParameterError, StrategySupportError

logger = logging.getLogger(__name__)

PROBABILITY_TOLERANCE = 1e-12


def ub_lemma2(m: int, T: int, s: int) -> tuple[int, int, int]:
    """Upper bounds on (|D|, |D^Q|, |D^S|) for any T x m encoding matrix: (T*C(m,s), m, C(m,s))."""
    if T < 1 or not 0 <= s <= m - 1:
        raise ParameterError(f"need T >= 1 and 0 <= s <= m-1, got m={m}, T={T}, s={s}")
    return T * binom(m, s), m, binom(m, s)


def thm1_joint_count(p: SchemeParams, s: int) -> int:
    """|D| of the block-diagonal construction: k*ell * sum_{j=ell-r}^{ell-1} C(ell-1,j) C(m-ell,s-j), r = T/k."""
    if not 0 <= s <= p.m - 1:
        raise ParameterError(f"need 0 <= s <= m-1, got m={p.m}, s={s}")
    r = p.rows_per_segment
    return p.k * p.ell * sum(
        binom(p.ell - 1, j) * binom(p.m - p.ell, s - j)
        for j in range(max(p.ell - r, 0), p.ell)
    )


def thm1_request_count(p: SchemeParams) -> int:
    return p.k * p.ell


@dataclass(frozen=True)
class ConditioningContext:
    """
    What the posterior is conditioned on besides the observed pattern. The
    eavesdropper holds no request of its own, and only the two-client setting
    has a strategy.
    """

    n_clients: int = 2


@dataclass(frozen=True)
class StrategyTable:
    """p(pattern | q, S): one distribution over patterns per client pair."""

    entries: Mapping[ClientPair, Mapping[SegmentPattern, Fraction]] = field(default_factory=dict)

    def __post_init__(self) -> None:
        for pair, dist in self.entries.items():
            total = sum(dist.values(), Fraction(0))
            if any(p < 0 for p in dist.values()):
                raise ValueError(f"negative probability for pair {pair.label()}")
            if abs(float(total) - 1.0) > PROBABILITY_TOLERANCE:
                raise ValueError(f"probabilities for pair {pair.label()} add up to {total}, not 1")

    def likelihood(self, pair: ClientPair, pattern: SegmentPattern) -> Fraction:
        return Fraction(self.entries.get(pair, {}).get(pattern, 0))

    @property
    def pairs(self) -> list[ClientPair]:
        return list(self.entries)


def _check_support(
    space: Iterable[SegmentPattern], strategy: StrategyTable, rows_per_segment: int
) -> None:
    members = set(space)
    for pair, dist in strategy.entries.items():
        for pattern, probability in dist.items():
            if probability == 0:
                continue
            if pattern not in members:
                raise StrategySupportError(f"pair {pair.label()} uses a pattern outside the space")
            if not is_decodable_structural(pattern, pair, rows_per_segment):
                raise StrategySupportError(f"pair {pair.label()} is not decodable under a pattern it uses")


def posterior(
    space: list[SegmentPattern],
    strategy: StrategyTable,
    observed: SegmentPattern,
    s: int,
    T: int,
    prior: Mapping[ClientPair, Fraction] | None = None,
    context: ConditioningContext | None = None,
) -> dict[ClientPair, Fraction]:
    """
    Exact Bayes posterior p(q, S | observed) over the pairs with |S| = s.
    Without a prior the pair is uniform over all m*C(m-1,s) choices.
    """
    context = context or ConditioningContext()
    if context.n_clients != 2:
        raise NotImplementedError("strategies are only available for two clients")
    if observed not in set(space):
        raise ObservedNotInSpaceError("observed pattern is not in the pattern space")
    if T % observed.k:
        raise ParameterError(f"T={T} is not a multiple of k={observed.k}")
    _check_support(space, strategy, T // observed.k)

    uniform = Fraction(1, observed.m * binom(observed.m - 1, s))
    weights: dict[ClientPair, Fraction] = {}
    for pair in strategy.entries:
        if pair.s != s:
            continue
        weight = strategy.likelihood(pair, observed) * (prior.get(pair, Fraction(0)) if prior else uniform)
        if weight:
            weights[pair] = weight
    total = sum(weights.values(), Fraction(0))
    if total == 0:
        raise ValueError("the observed pattern has zero probability under this strategy")
    return {pair: weight / total for pair, weight in weights.items()}


def _marginals(
    joint: Mapping[ClientPair, Fraction],
) -> tuple[dict[int, Fraction], dict[tuple[int, ...], Fraction]]:
    by_request: dict[int, Fraction] = {}
    by_side_info: dict[tuple[int, ...], Fraction] = {}
    for pair, p in joint.items():
        by_request[pair.q] = by_request.get(pair.q, Fraction(0)) + p
        by_side_info[pair.S] = by_side_info.get(pair.S, Fraction(0)) + p
    return by_request, by_side_info


def _bits(probabilities: Iterable[Fraction]) -> float:
    values = [float(p) for p in probabilities if p]
    return float(entropy(values, base=2)) if values else 0.0


def posterior_entropies(
    space: list[SegmentPattern],
    strategy: StrategyTable,
    observed: SegmentPattern,
    s: int,
    T: int,
    prior: Mapping[ClientPair, Fraction] | None = None,
    context: ConditioningContext | None = None,
) -> PrivacyReport:
    """
    H(Q,S | observed), H(Q | observed) and H(S | observed) in bits, with the
    matching upper bounds for an m-message, side-information-s system.
    """
    joint = posterior(space, strategy, observed, s, T, prior, context)
    by_request, by_side_info = _marginals(joint)
    ub_joint, ub_q, ub_s = ub_lemma2(observed.m, T, s)
    return PrivacyReport(
        h_joint=_bits(joint.values()),
        h_q=_bits(by_request.values()),
        h_s=_bits(by_side_info.values()),
        ub_joint=math.log2(ub_joint),
        ub_q=math.log2(ub_q),
        ub_s=math.log2(ub_s),
        size_joint=len(joint),
        size_q=len(by_request),
        size_s=len(by_side_info),
    )


def _is_uniform_over(dist: Mapping, support: Iterable) -> bool:
    support = set(support)
    if set(dist) != support or not support:
        return False
    target = Fraction(1, len(support))
    return all(p == target for p in dist.values())


def check_uniformity(
    space: list[SegmentPattern],
    strategy: StrategyTable,
    observed: SegmentPattern,
    s: int,
    T: int,
) -> tuple[bool, bool, bool]:
    """Whether p(q,S|A), p(q|A) and p(S|A) are uniform over D, D^Q and D^S."""
    joint = posterior(space, strategy, observed, s, T)
    sets = enumerate_block_decodable(observed, s, T // observed.k)
    by_request, by_side_info = _marginals(joint)
    return (
        _is_uniform_over(joint, sets.pairs),
        _is_uniform_over(by_request, sets.requests),
        _is_uniform_over(by_side_info, sets.side_infos),
    )


def uniform_posterior_report(sets: DecodableSets, T: int) -> PrivacyReport:
    """
    Entropies when the posterior is uniform over D: the joint entropy is
    log2|D| and each marginal weighs a value by its share of D.
    """
    size = sets.size_joint
    if size == 0:
        raise ValueError("no decodable pairs")
    log_size = math.log2(size)
    n_bar_s = sum(n * math.log2(n) for n in sets.counts.values())
    n_bar_q = sum(n * math.log2(n) for n in sets.request_counts().values())
    ub_joint, ub_q, ub_s = ub_lemma2(sets.m, T, sets.s)
    return PrivacyReport(
        h_joint=log_size,
        h_q=log_size - n_bar_q / size,
        h_s=log_size - n_bar_s / size,
        ub_joint=math.log2(ub_joint),
        ub_q=math.log2(ub_q),
        ub_s=math.log2(ub_s),
        size_joint=size,
        size_q=sets.size_q,
        size_s=sets.size_s,
    )
