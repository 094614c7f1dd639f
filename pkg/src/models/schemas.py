from __future__ import annotations

import math
import os
from typing import Any, ClassVar

from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    PrivateAttr,
    computed_field,
    field_validator,
    model_validator,
)

# Entropies are compared with this tolerance (bits).
BITS_TOLERANCE = 1e-9


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def _default_modulus() -> int:
    return int(os.getenv("INDEX_CODING_FIELD_MODULUS", "257"))


class FieldConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    modulus: int = Field(default_factory=_default_modulus, ge=2)

    @field_validator("modulus")
    @classmethod
    def _check_prime(cls, value: int) -> int:
        if not _is_prime(value):
            raise ValueError(f"field modulus {value} is not prime")
        return value


class FieldMatrix(BaseModel):
    """
    A rows x cols matrix over GF(L), stored row-major.
    """

    model_config = ConfigDict(frozen=True)

    rows: int = Field(ge=0)
    cols: int = Field(ge=0)
    entries: tuple[int, ...] = ()
    field: FieldConfig = Field(default_factory=FieldConfig)

    @model_validator(mode="after")
    def _check_entries(self) -> FieldMatrix:
        if self.rows * self.cols != len(self.entries):
            raise ValueError(
                f"{self.rows}x{self.cols} matrix needs {self.rows * self.cols} entries, got {len(self.entries)}"
            )
        modulus = self.field.modulus
        for value in self.entries:
            if not 0 <= value < modulus:
                raise ValueError(f"entry {value} outside [0, {modulus})")
        return self

    @classmethod
    def from_rows(
        cls, rows: list[list[int]], field: FieldConfig | None = None, cols: int | None = None
    ) -> FieldMatrix:
        field = field or FieldConfig()
        n_cols = len(rows[0]) if rows else (cols or 0)
        if any(len(row) != n_cols for row in rows):
            raise ValueError("ragged rows")
        return cls(
            rows=len(rows),
            cols=n_cols,
            entries=tuple(value for row in rows for value in row),
            field=field,
        )

    def entry(self, i: int, j: int) -> int:
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> list[int]:
        return list(self.entries[i * self.cols : (i + 1) * self.cols])

    def row_lists(self) -> list[list[int]]:
        return [self.row(i) for i in range(self.rows)]

    def column(self, j: int) -> list[int]:
        """Column j, 0-based."""
        return [self.entries[i * self.cols + j] for i in range(self.rows)]


class SchemeParams(BaseModel):
    model_config = ConfigDict(frozen=True)

    m: int = Field(ge=1)
    T: int = Field(ge=1)
    k: int = Field(ge=1)
    ell: int = Field(ge=1)
    s_min: int = Field(ge=0)
    field: FieldConfig = Field(default_factory=FieldConfig)

    @model_validator(mode="after")
    def _check_constraints(self) -> SchemeParams:
        if self.T % self.k:
            raise ValueError(f"T={self.T} is not a multiple of k={self.k}")
        limit = min(self.s_min + self.T // self.k, self.m // self.k)
        if self.ell > limit:
            raise ValueError(f"ell={self.ell} exceeds min(s_min + T/k, floor(m/k)) = {limit}")
        if self.ell > self.field.modulus - 1:
            raise ValueError(f"GF({self.field.modulus}) has too few non-zero points for ell={self.ell}")
        return self

    @property
    def rows_per_segment(self) -> int:
        return self.T // self.k


class SegmentPattern(BaseModel):
    """
    Labeled segments of equal width plus the zero block; indices are 1-based.
    """

    model_config = ConfigDict(frozen=True)

    m: int = Field(ge=1)
    segments: tuple[tuple[int, ...], ...]
    zero_block: tuple[int, ...] = ()

    _labels: dict[int, int] = PrivateAttr(default_factory=dict)

    @field_validator("segments")
    @classmethod
    def _sort_segments(cls, value: tuple[tuple[int, ...], ...]) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(sorted(seg)) for seg in value)

    @field_validator("zero_block")
    @classmethod
    def _sort_zero_block(cls, value: tuple[int, ...]) -> tuple[int, ...]:
        return tuple(sorted(value))

    @model_validator(mode="after")
    def _check_partition(self) -> SegmentPattern:
        if not self.segments:
            raise ValueError("a pattern needs at least one segment")
        width = len(self.segments[0])
        if width == 0 or any(len(seg) != width for seg in self.segments):
            raise ValueError("segments must share the same non-zero width")
        seen: list[int] = [i for seg in self.segments for i in seg] + list(self.zero_block)
        if len(seen) != len(set(seen)):
            raise ValueError("segments and zero block must be disjoint")
        if set(seen) != set(range(1, self.m + 1)):
            raise ValueError(f"segments and zero block must cover [1..{self.m}] exactly")
        return self

    def model_post_init(self, __context: Any) -> None:
        self._labels = {i: label for label, seg in enumerate(self.segments) for i in seg}

    @classmethod
    def from_segments(cls, m: int, segments: list[list[int]] | tuple[tuple[int, ...], ...]) -> SegmentPattern:
        used = {i for seg in segments for i in seg}
        zero = tuple(i for i in range(1, m + 1) if i not in used)
        return cls(m=m, segments=tuple(tuple(seg) for seg in segments), zero_block=zero)

    @property
    def k(self) -> int:
        return len(self.segments)

    @property
    def ell(self) -> int:
        return len(self.segments[0])

    def segment_of(self, index: int) -> int | None:
        """0-based segment label of a message index, None for the zero block."""
        return self._labels.get(index)


class ClientPair(BaseModel):
    model_config = ConfigDict(frozen=True)

    q: int = Field(ge=1)
    S: tuple[int, ...] = ()

    @field_validator("S")
    @classmethod
    def _sort_side_info(cls, value: tuple[int, ...]) -> tuple[int, ...]:
        if len(set(value)) != len(value):
            raise ValueError("side information contains duplicates")
        if any(i < 1 for i in value):
            raise ValueError("message indices are 1-based")
        return tuple(sorted(value))

    @model_validator(mode="after")
    def _check_request_outside(self) -> ClientPair:
        if self.q in self.S:
            raise ValueError(f"request {self.q} cannot be part of its own side information")
        return self

    @property
    def s(self) -> int:
        return len(self.S)

    def label(self) -> str:
        return f"{self.q}:{','.join(str(i) for i in self.S)}"


class DecodableSets(BaseModel):
    """
    D(A, s) with its projections D^Q, D^S and the per-side-set request counts.
    """

    model_config = ConfigDict(frozen=True)

    m: int = Field(ge=1)
    s: int = Field(ge=0)
    pairs: tuple[ClientPair, ...] = ()
    requests: tuple[int, ...] = ()
    side_infos: tuple[tuple[int, ...], ...] = ()
    counts: dict[tuple[int, ...], int] = Field(default_factory=dict)

    @model_validator(mode="after")
    def _check_projections(self) -> DecodableSets:
        if tuple(sorted({p.q for p in self.pairs})) != tuple(sorted(self.requests)):
            raise ValueError("requests must be the projection of pairs onto q")
        if {p.S for p in self.pairs} != set(self.side_infos):
            raise ValueError("side_infos must be the projection of pairs onto S")
        if set(self.counts) != set(self.side_infos) or any(n < 1 for n in self.counts.values()):
            raise ValueError("counts must hold a positive entry per decodable side set")
        if sum(self.counts.values()) != len(self.pairs):
            raise ValueError("counts must add up to |D|")
        return self

    @property
    def size_joint(self) -> int:
        return len(self.pairs)

    @property
    def size_q(self) -> int:
        return len(self.requests)

    @property
    def size_s(self) -> int:
        return len(self.side_infos)

    def request_counts(self) -> dict[int, int]:
        """Number of decodable side sets per request."""
        out: dict[int, int] = {}
        for pair in self.pairs:
            out[pair.q] = out.get(pair.q, 0) + 1
        return out


class PrivacyReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    h_joint: float
    h_q: float
    h_s: float
    ub_joint: float
    ub_q: float
    ub_s: float
    size_joint: int | None = None
    size_q: int | None = None
    size_s: int | None = None

    @model_validator(mode="before")
    @classmethod
    def _snap_to_bounds(cls, data: Any) -> Any:
        # Float round-off may push an entropy a hair above its bound.
        if isinstance(data, dict):
            data = dict(data)
            for name in ("joint", "q", "s"):
                h, ub = data.get(f"h_{name}"), data.get(f"ub_{name}")
                if h is not None and ub is not None and ub < h <= ub + BITS_TOLERANCE:
                    data[f"h_{name}"] = ub
                if h is not None and -BITS_TOLERANCE <= h < 0:
                    data[f"h_{name}"] = 0.0
        return data

    @model_validator(mode="after")
    def _check_bounds(self) -> PrivacyReport:
        for name in ("joint", "q", "s"):
            h, ub = getattr(self, f"h_{name}"), getattr(self, f"ub_{name}")
            if not 0 <= h <= ub:
                raise ValueError(f"h_{name}={h} must lie in [0, ub_{name}={ub}]")
        return self

    @computed_field
    @property
    def g_joint(self) -> float:
        return self.ub_joint - self.h_joint

    @computed_field
    @property
    def g_q(self) -> float:
        return self.ub_q - self.h_q

    @computed_field
    @property
    def g_s(self) -> float:
        return self.ub_s - self.h_s

    @computed_field
    @property
    def r_joint(self) -> float:
        return 2.0 ** (-self.g_joint)

    @computed_field
    @property
    def r_q(self) -> float:
        return 2.0 ** (-self.g_q)

    @computed_field
    @property
    def r_s(self) -> float:
        return 2.0 ** (-self.g_s)

    @property
    def full_privacy_q(self) -> bool:
        return self.g_q <= BITS_TOLERANCE

    @property
    def full_privacy_s(self) -> bool:
        return self.g_s <= BITS_TOLERANCE

    @property
    def full_privacy_joint(self) -> bool:
        return self.g_joint <= BITS_TOLERANCE


class SpecialCaseParams(BaseModel):
    """
    Parameters of the two-client scheme: one row per segment (k = T).
    """

    model_config = ConfigDict(frozen=True)

    m: int = Field(ge=2)
    T: int = Field(ge=1)
    ell: int = Field(ge=1)
    s: int = Field(ge=1)
    field: FieldConfig = Field(default_factory=FieldConfig)

    @model_validator(mode="after")
    def _check_constraints(self) -> SpecialCaseParams:
        if self.s > self.m - 1:
            raise ValueError(f"s={self.s} must be at most m-1={self.m - 1}")
        limit = min(self.s + 1, self.m // self.T)
        if self.ell > limit:
            raise ValueError(f"ell={self.ell} exceeds min(s+1, floor(m/T)) = {limit}")
        if self.ell > self.field.modulus - 1:
            raise ValueError(f"GF({self.field.modulus}) has too few non-zero points for ell={self.ell}")
        top, bottom = self.m - self.ell, self.s - self.ell + 1
        if not 0 <= bottom <= top or math.comb(top, bottom) == 0:
            raise ValueError("C(m-ell, s-ell+1) vanishes at this point")
        return self

    @property
    def k(self) -> int:
        return self.T

    def to_scheme_params(self) -> SchemeParams:
        return SchemeParams(m=self.m, T=self.T, k=self.T, ell=self.ell, s_min=self.s, field=self.field)


class SweepSpec(BaseModel):
    m: int = Field(ge=2)
    s: int = Field(ge=1)
    T_values: list[int] = Field(default_factory=lambda: [1, 2, 3, 5])

    @model_validator(mode="after")
    def _check_grid(self) -> SweepSpec:
        if self.s > self.m - 1:
            raise ValueError(f"s={self.s} must be at most m-1={self.m - 1}")
        if any(t < 1 for t in self.T_values):
            raise ValueError("T values must be positive")
        return self

    def ell_range(self, T: int) -> range:
        return range(1, min(self.s + 1, self.m // T) + 1)


class AsymptoticSpec(BaseModel):
    c: float = Field(gt=0, lt=1)
    b: float = Field(ge=0)
    T: int = Field(ge=1)
    m_values: list[int] = Field(default_factory=lambda: [10, 20, 40, 80])
    k_c: int | None = Field(default=None, ge=1)

    @model_validator(mode="after")
    def _check_fractions(self) -> AsymptoticSpec:
        if self.b > self.c:
            raise ValueError(f"b={self.b} must not exceed c={self.c}")
        return self


class BoundsRow(BaseModel):
    CSV_HEADER: ClassVar[tuple[str, ...]] = (
        "m", "T", "k", "ell", "s", "ub_joint", "ub_q", "ub_s", "thm1_joint", "thm1_q",
    )

    m: int
    T: int
    k: int | None = None
    ell: int | None = None
    s: int
    ub_joint: int
    ub_q: int
    ub_s: int
    thm1_joint: int | None = None
    thm1_q: int | None = None

    def as_csv_row(self) -> list[Any]:
        return [getattr(self, name) for name in self.CSV_HEADER]


class SchemeRow(BaseModel):
    CSV_HEADER: ClassVar[tuple[str, ...]] = (
        "m", "T", "l", "s", "lb_q", "lb_joint", "k_corr", "lb_s",
        "ub_q", "ub_joint", "ub_s", "r_q", "r_joint", "r_s",
    )
    ORACLE_HEADER: ClassVar[tuple[str, ...]] = ("oracle_h_q", "oracle_h_joint", "oracle_h_s", "match")

    m: int
    T: int
    ell: int
    s: int
    lb_q: float
    lb_joint: float
    k_corr: float
    lb_s: float
    ub_q: float
    ub_joint: float
    ub_s: float
    r_q: float
    r_joint: float
    r_s: float
    oracle_h_q: float | None = None
    oracle_h_joint: float | None = None
    oracle_h_s: float | None = None
    match: bool | None = None

    def as_csv_row(self, with_oracle: bool = False) -> list[Any]:
        values = [
            self.m, self.T, self.ell, self.s, self.lb_q, self.lb_joint, self.k_corr, self.lb_s,
            self.ub_q, self.ub_joint, self.ub_s, self.r_q, self.r_joint, self.r_s,
        ]
        if with_oracle:
            values += [self.oracle_h_q, self.oracle_h_joint, self.oracle_h_s, self.match]
        return values


class Figure2Row(BaseModel):
    CSV_HEADER: ClassVar[tuple[str, ...]] = ("T", "ell", "r_q", "r_s", "r_joint")

    T: int
    ell: int | None = None
    r_q: float | None = None
    r_s: float | None = None
    r_joint: float | None = None
    note: str | None = None

    def as_csv_row(self) -> list[Any]:
        if self.note:
            return [self.T, self.ell or "", "", "", f"# {self.note}"]
        return [self.T, self.ell, self.r_q, self.r_s, self.r_joint]


class GapRow(BaseModel):
    CSV_HEADER: ClassVar[tuple[str, ...]] = ("m", "s", "ell", "G_q", "G_joint", "G_s_upper")

    m: int
    s: int
    ell: int
    G_q: float
    G_joint: float
    G_s_upper: float
    G_joint_full: float
    G_s: float
    k_corr: float

    def as_csv_row(self) -> list[Any]:
        return [getattr(self, name) for name in self.CSV_HEADER]


class CheckResult(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    check: str
    params: dict[str, Any] = Field(default_factory=dict)
    expected: Any = None
    actual: Any = None
    passed: bool = Field(serialization_alias="pass")


class VerificationSummary(BaseModel):
    max_m: int
    total: int = 0
    passed: int = 0
    failed: int = 0
    by_check: dict[str, dict[str, int]] = Field(default_factory=dict)
    failures: list[CheckResult] = Field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.failed == 0
