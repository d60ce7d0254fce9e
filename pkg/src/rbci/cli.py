"""Command-line front end.

Three subcommands: ``ci`` inverts the randomization test on a trial file
and prints the interval as JSON, ``pfunction`` exports the recovered
p-value step function as CSV for external plotting, and ``simulate`` runs
the repeated-sampling studies. Trial files are strict two-column CSVs with
header ``z,y``; pass ``-`` to read from stdin.

Exit codes: 0 on success, 2 for parse or validation problems, 3 when no
interval exists (every effect value rejected, or crossed bounds).
"""

from __future__ import annotations

import csv
import io
import json
import math
import sys
from pathlib import Path

import click
import numpy as np

from .design import enumerate_cre, sample_cre
from .errors import CrossedBounds, EmptyInterval, RbciError
from .invert import confidence_interval, recover_p_function
from .simulate import (
    REPORT_CSV_HEADER,
    SimulationConfig,
    exact_sweep_example1,
    report_csv_row,
    run_replications,
)
from .stats import Statistic

#: Largest assignment space the auto mode will enumerate exactly.
DEFAULT_EXACT_CAP = 1_000_000


class TrialFileError(click.UsageError):
    """Malformed trial file; exits with status 2 like other usage errors."""


def _read_trial(source: str, statistic: Statistic) -> tuple[np.ndarray, np.ndarray]:
    try:
        text = sys.stdin.read() if source == "-" else Path(source).read_text()
    except OSError as exc:
        raise TrialFileError(f"cannot read {source}: {exc}") from None
    rows = list(csv.reader(io.StringIO(text)))
    rows = [r for r in rows if r]  # allow a trailing newline
    if not rows:
        raise TrialFileError("trial file is empty")
    if [c.strip() for c in rows[0]] != ["z", "y"]:
        raise TrialFileError("trial file must start with the exact header 'z,y'")
    z_list: list[int] = []
    y_list: list[float] = []
    for lineno, row in enumerate(rows[1:], start=2):
        if len(row) != 2:
            raise TrialFileError(f"line {lineno}: expected exactly 2 columns")
        z_raw, y_raw = row[0].strip(), row[1].strip()
        if z_raw not in ("0", "1"):
            raise TrialFileError(f"line {lineno}: z must be 0 or 1, got {z_raw!r}")
        try:
            y_val = float(y_raw)
        except ValueError:
            raise TrialFileError(f"line {lineno}: y must be a number, got {y_raw!r}") from None
        if not math.isfinite(y_val):
            raise TrialFileError(f"line {lineno}: y must be finite")
        z_list.append(int(z_raw))
        y_list.append(y_val)
    if len(z_list) < 4:
        raise TrialFileError("need at least 4 units")
    z = np.array(z_list, dtype=np.int8)
    n1 = int(z.sum())
    n0 = z.size - n1
    if min(n1, n0) < 1:
        raise TrialFileError("both arms must contain at least one unit")
    if statistic == Statistic.STUDENTIZED_T and min(n1, n0) < 2:
        raise TrialFileError("the studentized statistic needs at least 2 units per arm")
    return z, np.array(y_list, dtype=np.float64)


def _resolve_refset(z, mode: str, n_fisher: int, seed: int, exact_cap: int):
    n = z.size
    n1 = int(z.sum())
    if mode == "auto":
        mode = "exact" if math.comb(n, n1) <= exact_cap else "mc"
    if mode == "exact":
        return enumerate_cre(n, n1), "exact"
    return sample_cre(n, n1, n_fisher, seed, observed=z), "mc"


def _fail(exc: RbciError, code: int) -> None:
    click.echo(f"error: {exc}", err=True)
    sys.exit(code)


_common_options = [
    click.option("--alpha", type=float, default=0.05, show_default=True,
                 help="Significance level."),
    click.option("--stat", "statistic", type=click.Choice(["dim", "t"]),
                 default="t", show_default=True,
                 help="Test statistic: difference in means or studentized t."),
    click.option("--mode", type=click.Choice(["auto", "exact", "mc"]),
                 default="auto", show_default=True,
                 help="Reference set: full enumeration or Monte Carlo. Auto "
                      "enumerates when the assignment space fits the cap."),
    click.option("--n-fisher", type=int, default=10_000, show_default=True,
                 help="Monte Carlo reference-set size (includes the observed "
                      "assignment)."),
    click.option("--seed", type=int, default=0, show_default=True,
                 help="Seed for Monte Carlo sampling."),
    click.option("--exact-cap", type=int, default=DEFAULT_EXACT_CAP, show_default=True,
                 help="Auto-mode threshold on the assignment-space size."),
]


def _with_common_options(fn):
    for option in reversed(_common_options):
        fn = option(fn)
    return fn


@click.group()
def main() -> None:
    """Exact randomization-based confidence intervals by analytic test inversion.

    Set RBCI_MAX_THREADS before launch to cap the linear-algebra thread
    pools; all computation is otherwise single-process and deterministic
    for a given seed.
    """


@main.command("ci")
@click.argument("input_file")
@click.option("--alternative", type=click.Choice(["greater", "less", "two-sided"]),
              default="two-sided", show_default=True)
@_with_common_options
def cmd_ci(input_file, alternative, alpha, statistic, mode, n_fisher, seed, exact_cap) -> None:
    """Confidence interval for a constant treatment effect from a trial CSV."""
    stat = Statistic(statistic)
    z, y = _read_trial(input_file, stat)
    try:
        refset, resolved = _resolve_refset(z, mode, n_fisher, seed, exact_cap)
        ci = confidence_interval(z, y, refset, stat, alpha, alternative)
    except (EmptyInterval, CrossedBounds) as exc:
        _fail(exc, 3)
        return
    except RbciError as exc:
        _fail(exc, 2)
        return
    payload = {
        "lower": "-inf" if ci.lower == -math.inf else ci.lower,
        "upper": "+inf" if ci.upper == math.inf else ci.upper,
        "alpha": ci.alpha,
        "alternative": ci.alternative,
        "statistic": stat.value,
        "mode": resolved,
        "n_assignments": ci.diagnostics.denominator,
        "jump_count": ci.diagnostics.jump_count,
        "seed": seed,
        "generator": refset.generator,
    }
    click.echo(json.dumps(payload))


@main.command("pfunction")
@click.argument("input_file")
@click.option("--side", type=click.Choice(["greater", "less"]), required=True,
              help="Which one-sided p-value function to export.")
@_with_common_options
def cmd_pfunction(input_file, side, alpha, statistic, mode, n_fisher, seed, exact_cap) -> None:
    """Export the recovered p-value step function as CSV (theta,p,kind).

    The first row carries the base value just below the first jump; each
    following row gives a jump location and the value to its right.
    """
    stat = Statistic(statistic)
    z, y = _read_trial(input_file, stat)
    try:
        refset, _ = _resolve_refset(z, mode, n_fisher, seed, exact_cap)
        pfun = recover_p_function(z, y, refset, stat, side)
    except RbciError as exc:
        _fail(exc, 2)
        return
    lines = ["theta,p,kind", f"{pfun.base_probe!r},{float(pfun.interval_values[0])!r},base"]
    for jp, value in zip(pfun.jumps, pfun.interval_values[1:]):
        lines.append(f"{jp.theta!r},{float(value)!r},jump")
    click.echo("\n".join(lines))


@main.command("simulate")
@click.option("--dgp", type=click.Choice(["example1-exact", "normal"]), required=True,
              help="example1-exact sweeps the bundled 8-unit experiment "
                   "exhaustively; normal runs seeded replications.")
@click.option("--n", type=int, default=100, show_default=True,
              help="Units for the normal generator (treated count is n/2).")
@click.option("--n-fisher", type=int, default=10_000, show_default=True)
@click.option("--n-rep", type=int, default=1_000, show_default=True)
@click.option("--alpha", type=float, default=0.05, show_default=True)
@click.option("--stat", "statistic", type=click.Choice(["dim", "t"]), default="t",
              show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None,
              help="Also write a one-row summary CSV to this path.")
@click.option("--no-timing", is_flag=True,
              help="Zero the timing fields so output is byte-stable across runs.")
def cmd_simulate(dgp, n, n_fisher, n_rep, alpha, statistic, seed, out, no_timing) -> None:
    """Coverage / rejection-rate study, as JSON (and optionally a CSV row)."""
    stat = Statistic(statistic)
    try:
        if dgp == "example1-exact":
            report = exact_sweep_example1(alpha=alpha, statistic=stat)
            row_n, row_fisher = 8, report.n_rep
        else:
            if n % 2 != 0:
                raise click.UsageError("the normal generator needs an even n")
            config = SimulationConfig(
                n=n,
                n1=n // 2,
                dgp="normal-unit-effect",
                statistic=stat,
                alpha=alpha,
                n_fisher=n_fisher,
                n_rep=n_rep,
                seed=seed,
            )
            report = run_replications(config)
            row_n, row_fisher = n, n_fisher
    except RbciError as exc:
        _fail(exc, 2)
        return
    if no_timing:
        report.mean_seconds_pvalue = 0.0
        report.mean_seconds_rbci = 0.0
    click.echo(report.to_json())
    if out is not None:
        Path(out).write_text(
            REPORT_CSV_HEADER + "\n" + report_csv_row(report, row_n, row_fisher) + "\n"
        )


if __name__ == "__main__":
    main()
