import random
from itertools import combinations
from typing import Iterator

from models.schemas import ClientPair, FieldConfig, FieldMatrix, SpecialCaseParams

FIELD = FieldConfig(modulus=257)

# The two matrices of the five-message, two-transmission example.
A1 = FieldMatrix.from_rows([[1, 0, 0, 0, 0], [0, 0, 1, 0, 0]], FIELD)
A2 = FieldMatrix.from_rows([[1, 1, 0, 0, 0], [0, 0, 1, 1, 0]], FIELD)


def random_matrix(rng: random.Random, rows: int, cols: int, field: FieldConfig = FIELD) -> FieldMatrix:
    return FieldMatrix.from_rows(
        [[rng.randrange(field.modulus) for _ in range(cols)] for _ in range(rows)],
        field,
        cols=cols,
    )


def sparse_matrix(rng: random.Random, rows: int, cols: int, field: FieldConfig = FIELD) -> FieldMatrix:
    """Mostly-zero matrix, so rank deficiencies actually show up."""
    return FieldMatrix.from_rows(
        [[rng.randrange(field.modulus) if rng.random() < 0.4 else 0 for _ in range(cols)] for _ in range(rows)],
        field,
        cols=cols,
    )


def all_pairs(m: int, s: int) -> Iterator[ClientPair]:
    for S in combinations(range(1, m + 1), s):
        for q in range(1, m + 1):
            if q not in S:
                yield ClientPair(q=q, S=S)



def scheme_grid(max_m: int = 8, max_T: int = 3) -> Iterator[SpecialCaseParams]:
    for m in range(2, max_m + 1):
        for T in range(1, max_T + 1):
            for s in range(1, m):
                for ell in range(1, min(s + 1, m // T) + 1):
                    yield SpecialCaseParams(m=m, T=T, ell=ell, s=s)
