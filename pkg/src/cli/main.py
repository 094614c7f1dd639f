from __future__ import annotations

import functools
import io
import logging
import sys
from pathlib import Path

import click
from dotenv import load_dotenv
from pydantic import ValidationError

from analysis import sweeps
from analysis.verify import format_summary, verify_all
from models.schemas import (
    AsymptoticSpec,
    BoundsRow,
    ClientPair,
    Figure2Row,
    GapRow,
    SchemeParams,
    SchemeRow,
    SpecialCaseParams,
    SweepSpec,
)
from tools import bounds, scheme
from tools.construction import build_base_matrix
from tools.decoding import enumerate_decodable, recover_message
from tools.field import encode
from tools.textio import format_pattern, read_matrix, read_pattern

load_dotenv()


def _int_list(value: str) -> list[int]:
    try:
        return [int(token) for token in value.replace(" ", "").split(",") if token]
    except ValueError as exc:
        raise click.BadParameter(f"expected comma-separated integers, got {value!r}") from exc


def _validation_message(exc: ValidationError) -> str:
    return "; ".join(error["msg"] for error in exc.errors())


def reports_errors(fn):
    """Turn domain errors into a one-line message and exit status 1."""

    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except ValidationError as exc:
            raise click.ClickException(_validation_message(exc)) from exc
        except (ValueError, RuntimeError) as exc:
            raise click.ClickException(str(exc)) from exc

    return wrapper


def _emit(rows, header, out: str | None = None, **row_kwargs) -> None:
    """Write CSV rows to a file, or echo them when no file is given."""
    if out and out != "-":
        with open(out, "w", encoding="utf-8", newline="") as f:
            sweeps.write_csv(rows, header, f, **row_kwargs)
        return
    buffer = io.StringIO()
    sweeps.write_csv(rows, header, buffer, **row_kwargs)
    click.echo(buffer.getvalue(), nl=False)


def _require_out_for_gnuplot(out: str | None, gnuplot_path: str | None) -> None:
    # the script reads the CSV back from disk
    if gnuplot_path and (not out or out == "-"):
        raise click.UsageError("--gnuplot needs --out FILE for the data it plots")


@click.group()
@click.option("--verbose", "-v", is_flag=True, help="Log progress at debug level.")
def cli(verbose: bool) -> None:
    """Exact analysis of privacy-preserving index coding schemes."""
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )


@cli.command()
@click.option("--matrix", "matrix_path", type=click.Path(exists=True, dir_okay=False), help="Matrix text file.")
@click.option("--pattern", "pattern_path", type=click.Path(exists=True, dir_okay=False), help="Pattern text file.")
@click.option("--T", "T", type=int, help="Rows of the base matrix built from --pattern.")
@click.option("--s", "s", type=int, required=True, help="Side-information size.")
@click.option("--list", "show_pairs", is_flag=True, help="Also print every decodable pair as q:S.")
@reports_errors
def decodable(matrix_path: str | None, pattern_path: str | None, T: int | None, s: int, show_pairs: bool) -> None:
    """Print |D| |D^Q| |D^S| for a matrix or a base-matrix pattern."""
    if bool(matrix_path) == bool(pattern_path):
        raise click.UsageError("give exactly one of --matrix or --pattern")
    if matrix_path:
        A = read_matrix(matrix_path)
    else:
        if T is None:
            raise click.UsageError("--pattern needs --T")
        pattern = read_pattern(pattern_path)
        params = SchemeParams(m=pattern.m, T=T, k=pattern.k, ell=pattern.ell, s_min=s)
        A = build_base_matrix(params, pattern)
    sets = enumerate_decodable(A, s)
    click.echo(f"{sets.size_joint} {sets.size_q} {sets.size_s}")
    if show_pairs:
        for pair in sets.pairs:
            click.echo(pair.label())


@cli.command("bounds")
@click.option("--m", "m", type=int, required=True)
@click.option("--T", "T", type=int, required=True)
@click.option("--s", "s", type=int, required=True)
@click.option("--k", "k", type=int, default=None, help="Segments of the base matrix (needs --ell).")
@click.option("--ell", "ell", type=int, default=None, help="Segment width (needs --k).")
@reports_errors
def bounds_command(m: int, T: int, s: int, k: int | None, ell: int | None) -> None:
    """Count bounds for any T x m matrix, plus the block-construction counts when k and ell are given."""
    ub_joint, ub_q, ub_s = bounds.ub_lemma2(m, T, s)
    thm1_joint = thm1_q = None
    if (k is None) != (ell is None):
        raise click.UsageError("--k and --ell go together")
    if k is not None:
        params = SchemeParams(m=m, T=T, k=k, ell=ell, s_min=s)
        thm1_joint = bounds.thm1_joint_count(params, s)
        thm1_q = bounds.thm1_request_count(params)
    row = BoundsRow(
        m=m, T=T, k=k, ell=ell, s=s,
        ub_joint=ub_joint, ub_q=ub_q, ub_s=ub_s,
        thm1_joint=thm1_joint, thm1_q=thm1_q,
    )
    _emit([row], BoundsRow.CSV_HEADER)


@cli.command("scheme")
@click.option("--m", "m", type=int, required=True)
@click.option("--T", "T", type=int, required=True)
@click.option("--l", "ell", type=int, required=True, help="Segment width.")
@click.option("--s", "s", type=int, required=True)
@click.option("--verify", is_flag=True, help="Check the closed forms against enumeration.")
@reports_errors
def scheme_command(m: int, T: int, ell: int, s: int, verify: bool) -> None:
    """Closed-form entropies and ratios of the two-client scheme."""
    p = SpecialCaseParams(m=m, T=T, ell=ell, s=s)
    row = scheme.scheme_row(p, verify=verify)
    header = SchemeRow.CSV_HEADER + (SchemeRow.ORACLE_HEADER if verify else ())
    _emit([row], header, with_oracle=verify)


@cli.command()
@click.option("--m", "m", type=int, required=True)
@click.option("--T", "T", type=int, required=True)
@click.option("--l", "ell", type=int, required=True, help="Segment width.")
@click.option("--q", "q", type=int, required=True, help="Requested message.")
@click.option("--S", "S", type=str, required=True, help='Side information, e.g. "2,3".')
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None, help="Pattern file (stdout if omitted).")
@reports_errors
def sample(m: int, T: int, ell: int, q: int, S: str, seed: int, out: str | None) -> None:
    """Draw a pattern serving (q, S) uniformly at random."""
    side_info = tuple(_int_list(S))
    p = SpecialCaseParams(m=m, T=T, ell=ell, s=len(side_info))
    pattern = scheme.sample_satisfying_pattern(p, ClientPair(q=q, S=side_info), seed)
    text = format_pattern(pattern)
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        click.echo(text, nl=False)


@cli.command()
@click.option("--m", "m", type=int, default=30, show_default=True)
@click.option("--s", "s", type=int, default=3, show_default=True)
@click.option("--T", "T_values", type=str, default="1,2,3,5", show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None, help="CSV file (stdout if omitted).")
@click.option("--gnuplot", "gnuplot_path", type=click.Path(dir_okay=False), default=None)
@reports_errors
def figure2(m: int, s: int, T_values: str, out: str | None, gnuplot_path: str | None) -> None:
    """Privacy ratios r_q, r_s, r_joint over the (T, ell) grid."""
    _require_out_for_gnuplot(out, gnuplot_path)
    rows = sweeps.sweep_figure2(SweepSpec(m=m, s=s, T_values=_int_list(T_values)))
    _emit(rows, Figure2Row.CSV_HEADER, out)
    if gnuplot_path:
        Path(gnuplot_path).write_text(sweeps.gnuplot_script(out, "figure2"), encoding="utf-8")


@cli.command()
@click.option("--c", "c", type=float, required=True, help="Side-information fraction.")
@click.option("--b", "b", type=float, required=True, help="Segment fraction.")
@click.option("--T", "T", type=int, required=True)
@click.option("--m-values", "m_values", type=str, default="10,20,40,80", show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None, help="CSV file (stdout if omitted).")
@click.option("--gnuplot", "gnuplot_path", type=click.Path(dir_okay=False), default=None)
@reports_errors
def asymptotics(c: float, b: float, T: int, m_values: str, out: str | None, gnuplot_path: str | None) -> None:
    """Privacy gaps as m grows with s = floor(c m) and ell = floor(b m) + 1."""
    _require_out_for_gnuplot(out, gnuplot_path)
    rows = sweeps.asymptotic_gaps(AsymptoticSpec(c=c, b=b, T=T, m_values=_int_list(m_values)))
    _emit(rows, GapRow.CSV_HEADER, out)
    if gnuplot_path:
        Path(gnuplot_path).write_text(sweeps.gnuplot_script(out, "asymptotics"), encoding="utf-8")


@cli.command()
@click.option("--m", "m", type=int, required=True)
@click.option("--k-c", "k_c", type=int, required=True, help="Rows of the MDS generator.")
@reports_errors
def case1(m: int, k_c: int) -> None:
    """Privacy report of an MDS generator with s = m - k_c."""
    report = sweeps.case1_check(m, k_c)
    click.echo(report.model_dump_json(indent=2))


@cli.command()
@click.option("--matrix", "matrix_path", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--messages", type=str, required=True, help='Message vector, e.g. "10,20,30,40,50".')
@click.option("--q", "q", type=int, required=True)
@click.option("--S", "S", type=str, default="", help='Side information, e.g. "2".')
@reports_errors
def recover(matrix_path: str, messages: str, q: int, S: str) -> None:
    """Encode a message vector and decode b_q back from the broadcast."""
    A = read_matrix(matrix_path)
    b = _int_list(messages)
    y = encode(A, b)
    pair = ClientPair(q=q, S=tuple(_int_list(S)))
    if any(i > len(b) for i in pair.S):
        raise click.BadParameter("side information refers to a missing message")
    value = recover_message(A, y, pair, {j: b[j - 1] for j in pair.S})
    click.echo(f"y = {' '.join(str(v) for v in y)}")
    click.echo(f"b_{q} = {value}")


@cli.command("verify-all")
@click.option("--max-m", "max_m", type=int, default=8, show_default=True)
@click.option("--log", "log_path", type=click.Path(dir_okay=False), default=None, help="JSON-lines log file.")
@click.option("--samples", type=int, default=1000, show_default=True, help="Random matrices for the general bound check.")
@click.option("--seed", type=int, default=0, show_default=True)
def verify_all_command(max_m: int, log_path: str | None, samples: int, seed: int) -> None:
    """Run every closed-form check against enumeration."""
    summary = verify_all(max_m, log_path=log_path, bound_samples=samples, seed=seed)
    click.echo(format_summary(summary))
    if not summary.ok:
        sys.exit(1)


def main() -> None:
    cli()
