from __future__ import annotations

import math
import os
from typing import Sequence

from .errors import EnumerationCapError, ParameterError


def binom(n: int, k: int) -> int:
    """C(n, k), zero whenever the arguments fall outside 0 <= k <= n."""
    if n < 0 or k < 0 or k > n:
        return 0
    return math.comb(n, k)


def multinomial(n: int, parts: Sequence[int]) -> int:
    if any(p < 0 for p in parts) or sum(parts) != n:
        raise ParameterError(f"parts {list(parts)} do not add up to {n}")
    out = math.factorial(n)
    for p in parts:
        out //= math.factorial(p)
    return out


def pattern_count(m: int, k: int, ell: int) -> int:
    """Number of labeled segment patterns: m! / ((ell!)^k (m - k*ell)!)."""
    if k * ell > m:
        return 0
    return multinomial(m, [ell] * k + [m - k * ell])


def enumeration_cap() -> int:
    return int(os.getenv("INDEX_CODING_ENUMERATION_CAP", "10000000"))


def check_cap(needed: int, cap: int | None = None) -> None:
    cap = enumeration_cap() if cap is None else cap
    if needed > cap:
        raise EnumerationCapError(needed, cap)
