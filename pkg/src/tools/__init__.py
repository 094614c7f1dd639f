from .field import encode, in_span, rank, solve_left
from .construction import build_base_matrix, canonical_pattern, enumerate_patterns, is_mds, vandermonde_generator
from .decoding import enumerate_block_decodable, enumerate_decodable, is_decodable, is_decodable_structural, recover_message
from .bounds import check_uniformity, posterior_entropies, thm1_joint_count, thm1_request_count, ub_lemma2
from .scheme import (
    appendix_B_value,
    appendix_C_value,
    count_satisfying_K,
    entropy_oracle,
    k_correction,
    lb_joint,
    lb_q,
    lb_s,
    n_bar_t,
    sample_satisfying_pattern,
)

__all__ = [
    "encode",
    "in_span",
    "rank",
    "solve_left",
    "build_base_matrix",
    "canonical_pattern",
    "enumerate_patterns",
    "is_mds",
    "vandermonde_generator",
    "enumerate_block_decodable",
    "enumerate_decodable",
    "is_decodable",
    "is_decodable_structural",
    "recover_message",
    "check_uniformity",
    "posterior_entropies",
    "thm1_joint_count",
    "thm1_request_count",
    "ub_lemma2",
    "appendix_B_value",
    "appendix_C_value",
    "count_satisfying_K",
    "entropy_oracle",
    "k_correction",
    "lb_joint",
    "lb_q",
    "lb_s",
    "n_bar_t",
    "sample_satisfying_pattern",
]
