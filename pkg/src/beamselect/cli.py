"""Command-line front end: ``bounds``, ``trial`` and ``sweep``."""

from __future__ import annotations

import csv
import io
import json
import math
import sys

import click

from beamselect.bounds import bound_constants
from beamselect.channel import RngSeed, sample_channel
from beamselect.experiments import ALGORITHMS, SweepConfig, run_sweep, stream_id
from beamselect.protocol import distributed_select
from beamselect.selection import (
    DEFAULT_EXHAUSTIVE_CAP,
    ComplexityLimitError,
    amplitude_threshold_select,
    coherent_composite,
    exhaustive_select,
    greedy_select,
    received_power,
    sector_select,
    single_best_select,
    with_fallback,
)

EXIT_COMPLEXITY = 3
EXIT_IO = 4

TRIAL_ALGORITHMS = ALGORITHMS + ("distributed",)
RECORD_FIELDS = (
    "algorithm",
    "k",
    "mean_power",
    "mean_power_over_k",
    "mean_fraction",
    "std_err",
    "trials",
)


def _num(x: float) -> str:
    return format(x, ".9g")


def _db(ratio: float) -> float:
    return 10.0 * math.log10(ratio) if ratio > 0 else -math.inf


def _comma_list(ctx, param, value):
    if value is None:
        return None
    items = [v.strip() for v in value.split(",") if v.strip()]
    if not items:
        raise click.BadParameter("expected a comma-separated list")
    return items


def _emit_pairs(pairs: dict, fmt: str) -> None:
    if fmt == "json":
        click.echo(json.dumps(pairs, indent=2))
        return
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["name", "value"])
    for key, value in pairs.items():
        if isinstance(value, float):
            value = _num(value)
        elif isinstance(value, list):
            value = " ".join(_num(v) if isinstance(v, float) else str(v) for v in value)
        writer.writerow([key, value])
    click.echo(buf.getvalue(), nl=False)


format_option = click.option(
    "--format", "fmt", type=click.Choice(["csv", "json"]), default="csv", show_default=True
)


@click.group()
@click.version_option(package_name="artifact")
def main():
    """Opportunistic collaborative beamforming node selection."""


@main.command()
@format_option
def bounds(fmt):
    """Print the large-K bound constants."""
    _emit_pairs(bound_constants().as_dict(), fmt)


@main.command()
@click.option("--k", "k", type=click.IntRange(min=1), required=True, help="Number of nodes.")
@click.option("--seed", type=click.IntRange(0, 2**64 - 1), default=0, show_default=True)
@click.option("--trial-index", type=click.IntRange(0, 2**32 - 1), default=0, show_default=True,
              help="Substream of the seed, matching trial numbering in sweeps.")
@click.option("--algorithm", type=click.Choice(TRIAL_ALGORITHMS), required=True)
@click.option("--r", "r", type=click.FloatRange(min=0), default=None, help="Amplitude threshold.")
@click.option("--alpha", type=click.FloatRange(0, math.pi, min_open=True), default=None,
              help="Sector half-angle in radians.")
@click.option("--exhaustive-cap", type=click.IntRange(min=1), default=DEFAULT_EXHAUSTIVE_CAP,
              show_default=True)
@format_option
def trial(k, seed, trial_index, algorithm, r, alpha, exhaustive_cap, fmt):
    """Run one selection rule on one seeded channel realization."""
    consts = bound_constants()
    r = consts.r_star if r is None else r
    alpha = consts.alpha_star if alpha is None else alpha
    h = sample_channel(k, RngSeed(seed, stream_id(k, trial_index)))
    extra = {}
    if algorithm == "exhaustive":
        try:
            outcome = exhaustive_select(h, cap=exhaustive_cap)
        except ComplexityLimitError as exc:
            click.echo(f"Error: {exc}", err=True)
            sys.exit(EXIT_COMPLEXITY)
    elif algorithm == "greedy":
        outcome = greedy_select(h)
    elif algorithm == "sector":
        outcome = with_fallback(sector_select(h, r, alpha), h)
    elif algorithm == "upper_bound":
        outcome = with_fallback(amplitude_threshold_select(h, r), h, gain=coherent_composite)
    elif algorithm == "single_best":
        outcome = single_best_select(h)
    else:
        selected, budget = distributed_select(h, r, alpha)
        outcome = None
        extra = {"bits_sent": budget.bits_sent, "rounds": budget.rounds,
                 "broadcasts": budget.broadcasts}

    if outcome is None:
        indices = [i for i, s in enumerate(selected) if s]
        power = received_power(h, selected)
        iterations, trace = 0, ()
    else:
        indices, power = outcome.indices, outcome.power
        iterations, trace = outcome.iterations, outcome.trace

    pairs = {
        "algorithm": algorithm,
        "k": k,
        "selected": [i + 1 for i in indices],
        "count": len(indices),
        "power": power,
        "power_over_k": power / k,
        "gain_over_single_best_db": _db(power / single_best_select(h).power),
    }
    if algorithm == "greedy":
        pairs["iterations"] = iterations
        pairs["trace"] = [float(p) for p in trace]
    pairs.update(extra)
    _emit_pairs(pairs, fmt)


def format_records(result, fmt: str) -> str:
    rows = [
        (c.algorithm, c.k, c.mean_power, c.mean_power_over_k, c.mean_fraction,
         c.std_err_power, c.trials)
        for c in result.records()
    ]
    if fmt == "json":
        return json.dumps([dict(zip(RECORD_FIELDS, row)) for row in rows], indent=2) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(RECORD_FIELDS)
    for row in rows:
        writer.writerow([row[0], row[1], *map(_num, row[2:6]), row[6]])
    return buf.getvalue()


@main.command()
@click.option("--k-list", required=True, callback=_comma_list,
              help="Comma-separated ascending node counts.")
@click.option("--trials", type=click.IntRange(min=1), default=None,
              help="Trials per K (default depends on K).")
@click.option("--seed", type=click.IntRange(0, 2**64 - 1), default=0, show_default=True)
@click.option("--algorithms", callback=_comma_list, default=",".join(ALGORITHMS),
              show_default=True)
@click.option("--r", "r", type=click.FloatRange(min=0), default=None)
@click.option("--alpha", type=click.FloatRange(0, math.pi, min_open=True), default=None)
@click.option("--exhaustive-cap", type=click.IntRange(min=1), default=12, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None,
              help="Output file (default stdout).")
@format_option
def sweep(k_list, trials, seed, algorithms, r, alpha, exhaustive_cap, out, fmt):
    """Monte Carlo averages of power and selected fraction per algorithm and K."""
    try:
        k_values = [int(k) for k in k_list]
    except ValueError:
        raise click.BadParameter("K values must be integers", param_hint="--k-list")
    unknown = [a for a in algorithms if a not in ALGORITHMS]
    if unknown:
        raise click.BadParameter(
            f"unknown algorithm(s) {', '.join(unknown)}; choose from {', '.join(ALGORITHMS)}",
            param_hint="--algorithms",
        )
    try:
        config = SweepConfig(k_values=k_values, trials=trials, master_seed=seed,
                             algorithms=algorithms, exhaustive_k_cap=exhaustive_cap,
                             r=r, alpha=alpha)
    except ValueError as exc:
        raise click.BadParameter(str(exc))

    handle = None
    if out is not None:
        try:
            handle = open(out, "w", newline="", encoding="utf-8")
        except OSError as exc:
            click.echo(f"Error: cannot write {out}: {exc.strerror}", err=True)
            sys.exit(EXIT_IO)

    result = run_sweep(config)
    for name, k in result.skipped:
        click.echo(f"skipped {name} at K={k} (above exhaustive cap {exhaustive_cap})", err=True)
    text = format_records(result, fmt)
    if handle is None:
        click.echo(text, nl=False)
        return
    try:
        with handle:
            handle.write(text)
    except OSError as exc:
        click.echo(f"Error: cannot write {out}: {exc.strerror}", err=True)
        sys.exit(EXIT_IO)
