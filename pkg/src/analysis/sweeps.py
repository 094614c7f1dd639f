from __future__ import annotations

import csv
import logging
import math
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence, TextIO

from pydantic import BaseModel, ValidationError

from models.schemas import (
    AsymptoticSpec,
    FieldConfig,
    Figure2Row,
    GapRow,
    PrivacyReport,
    SpecialCaseParams,
    SweepSpec,
)
from tools import scheme
from tools.bounds import uniform_posterior_report
from tools.cache import DecodableStore
from tools.combinatorics import binom
from tools.construction import vandermonde_generator
from tools.decoding import enumerate_decodable
from tools.errors import ParameterError

logger = logging.getLogger(__name__)


def figure2_point(m: int, s: int, T: int, ell: int) -> Figure2Row:
    p = SpecialCaseParams(m=m, T=T, ell=ell, s=s)
    r_q, r_joint, r_s = scheme.ratios(p)
    return Figure2Row(T=T, ell=ell, r_q=r_q, r_s=r_s, r_joint=r_joint)


def sweep_figure2(spec: SweepSpec) -> list[Figure2Row]:
    """
    Privacy ratios of the two-client scheme over the (T, ell) grid, ordered
    by T and then ell. Points that do not form valid parameters come back as
    rows carrying only a note.
    """
    rows: list[Figure2Row] = []
    for T in sorted(set(spec.T_values)):
        ells = spec.ell_range(T)
        if not ells:
            logger.warning("no valid ell for m=%s s=%s T=%s", spec.m, spec.s, T)
            rows.append(Figure2Row(T=T, note=f"no valid ell for T={T}"))
            continue
        for ell in ells:
            try:
                rows.append(figure2_point(spec.m, spec.s, T, ell))
            except ValidationError as exc:
                logger.warning("skipping T=%s ell=%s: %s", T, ell, exc.errors()[0]["msg"])
                rows.append(Figure2Row(T=T, ell=ell, note="invalid point"))
    return rows


def asymptotic_point(m: int, s: int, T: int, ell: int) -> GapRow:
    p = SpecialCaseParams(m=m, T=T, ell=ell, s=s)
    lbq, lbj = scheme.lb_q(p), scheme.lb_joint(p)
    k_corr = scheme.k_correction(p)
    log_subsets = math.log2(binom(m, s))
    return GapRow(
        m=m,
        s=s,
        ell=ell,
        G_q=math.log2(m) - lbq,
        G_joint=log_subsets - lbj,
        G_s_upper=log_subsets - (lbj - lbq),
        G_joint_full=math.log2(T * binom(m, s)) - lbj,
        G_s=log_subsets - (lbj - k_corr),
        k_corr=k_corr,
    )


def asymptotic_gaps(spec: AsymptoticSpec) -> list[GapRow]:
    """
    Gaps along s = floor(c*m), ell = floor(b*m) + 1. Points that fall outside
    the scheme's constraints after rounding are skipped.
    """
    c = Fraction(str(spec.c))
    b = Fraction(str(spec.b))
    rows: list[GapRow] = []
    for m in spec.m_values:
        s = math.floor(c * m)
        ell = math.floor(b * m) + 1
        if c > Fraction(m - 1, m):
            logger.warning("skipping m=%s: c=%s exceeds (m-1)/m", m, spec.c)
            continue
        try:
            rows.append(asymptotic_point(m, s, spec.T, ell))
        except ValidationError as exc:
            logger.warning("skipping m=%s (s=%s, ell=%s): %s", m, s, ell, exc.errors()[0]["msg"])
    return rows


def case1_check(
    m: int,
    k_c: int,
    field: FieldConfig | None = None,
    store: DecodableStore | None = None,
) -> PrivacyReport:
    """
    Privacy of a k_c x m MDS generator with side information s = m - k_c:
    every side set decodes every outside request.
    """
    s = m - k_c
    if k_c < 1 or s < 1:
        raise ParameterError(f"need 1 <= k_c <= m-1, got m={m}, k_c={k_c}")
    B = vandermonde_generator(m, k_c, field)
    sets = enumerate_decodable(B, s, store=store)
    return uniform_posterior_report(sets, k_c)


def write_csv(rows: Iterable[BaseModel], header: Sequence[str], out: TextIO, **row_kwargs) -> None:
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow(row.as_csv_row(**row_kwargs))


def gnuplot_script(csv_path: str | Path, kind: str) -> str:
    """A gnuplot script plotting the CSV written by figure2 or asymptotics."""
    csv_name = Path(csv_path).as_posix()
    lines = ["set datafile separator ','", "set key outside", "set grid"]
    if kind == "figure2":
        lines += [
            "set xlabel 'ell'",
            "set ylabel 'privacy ratio'",
            "set yrange [0:1.05]",
            f"plot for [col=3:5] '{csv_name}' using 2:col with linespoints title columnheader(col)",
        ]
    elif kind == "asymptotics":
        lines += [
            "set xlabel 'm'",
            "set ylabel 'gap (bits)'",
            f"plot for [col=4:6] '{csv_name}' using 1:col with linespoints title columnheader(col)",
        ]
    else:
        raise ParameterError(f"unknown plot kind {kind!r}")
    return "\n".join(lines) + "\n"
