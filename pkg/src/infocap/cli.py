"""Command-line front end.

Subcommands: bound (closed-form bounds over parameter grids), oracle
(discrimination oracle on an ensemble file), certify (dual certificate for
an ensemble and POVM pair), search (seeded tightness search), sweep
(plot-ready CSV along one parameter axis), paper-numbers (built-in
reference checks) and sr-demo (shared-randomness demonstration).

Exit codes: 0 success, 1 check or convergence failure, 2 parameter-domain
error, 3 input-file error.  The environment variable INFOCAP_THREADS caps
parallelism across grid points and restarts (0 = auto); output ordering
never depends on scheduling.
"""

from __future__ import annotations

import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import click
import numpy as np

from . import bounds
from .discrimination import dual_certificate, guess_value, optimize_discrimination, povm_from_json
from .ensembles import (
    AlmostDim,
    Distrust,
    UniformOverlap,
    Vacuum,
    ensemble_from_json,
    ensemble_from_vectors,
    equiangular_ensemble,
    vacuum_cone_ensemble,
)
from .errors import InfocapError, ParamOutOfRangeError
from .randomness import ea_average_counterexample
from .search import almost_dim_seed, tightness_search


@dataclass(frozen=True)
class RunConfig:
    tol: float = 1e-10
    max_iter: int = 10_000
    restarts: int = 16
    seed: int = 0
    output: str | None = None
    fmt: str = "json"


def _max_workers() -> int:
    raw = os.environ.get("INFOCAP_THREADS", "").strip()
    if not raw:
        return 1
    value = int(raw)
    if value == 0:
        return os.cpu_count() or 1
    return max(1, value)


def _pmap(fn, items):
    items = list(items)
    workers = _max_workers()
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _emit(text: str, output: str | None) -> None:
    if output:
        with open(output, "w", newline="") as fh:
            fh.write(text)
    else:
        click.echo(text, nl=False)


def _fmt9(x: float) -> str:
    return f"{x:.9g}"


def _csv(header: list[str], rows: list[list[str]]) -> str:
    lines = [",".join(header)]
    lines.extend(",".join(row) for row in rows)
    return "\n".join(lines) + "\n"


def _load_json_file(path: str) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        click.echo(f"error: cannot read {path}: {exc}", err=True)
        sys.exit(3)


def _load_ensemble(path: str):
    obj = _load_json_file(path)
    try:
        return ensemble_from_json(obj)
    except (InfocapError, KeyError, TypeError) as exc:
        click.echo(f"error: invalid ensemble file {path}: {exc}", err=True)
        sys.exit(3)


def _load_targets(path: str) -> np.ndarray:
    e = _load_ensemble(path)
    if not all(e.pure_flags):
        click.echo(f"error: targets in {path} must be pure states", err=True)
        sys.exit(3)
    return e.state_vectors()


@click.group()
def main():
    """Capacity bounds and discrimination oracles for restricted quantum
    state ensembles."""


_BOUND_KINDS = ("dimension", "ea-dimension", "vacuum", "overlap", "almost-dim", "coherent", "distrust")


def _bound_rows(kind, n_values, d_values, omega_values, a_values, eps_values, nbar_values, targets):
    """(param-column names, list of (param values, BoundResult))."""
    combos: list[tuple[tuple, bounds.BoundResult]] = []
    if kind == "dimension":
        cols = ["d"]
        jobs = [(d, n) for d in d_values for n in n_values]
        results = _pmap(lambda j: bounds.bound_dimension(*j), jobs)
        combos = [((d,), r) for (d, n), r in zip(jobs, results)]
    elif kind == "ea-dimension":
        cols = ["d"]
        jobs = [(d, n) for d in d_values for n in n_values]
        results = _pmap(lambda j: bounds.bound_ea_dimension(*j), jobs)
        combos = [((d,), r) for (d, n), r in zip(jobs, results)]
    elif kind == "vacuum":
        cols = ["omega"]
        jobs = [(n, w) for w in omega_values for n in n_values]
        results = _pmap(lambda j: bounds.bound_vacuum(*j), jobs)
        combos = [((w,), r) for (n, w), r in zip(jobs, results)]
    elif kind == "overlap":
        cols = ["a"]
        jobs = [(n, a) for a in a_values for n in n_values]
        results = _pmap(lambda j: bounds.bound_overlap(*j), jobs)
        combos = [((a,), r) for (n, a), r in zip(jobs, results)]
    elif kind == "almost-dim":
        cols = ["d", "eps"]
        jobs = [(d, n, e) for d in d_values for e in eps_values for n in n_values]
        results = _pmap(lambda j: bounds.bound_almost_dim(*j), jobs)
        combos = [((d, e), r) for (d, n, e), r in zip(jobs, results)]
    elif kind == "coherent":
        cols = ["nbar"]
        jobs = [(nb, n) for nb in nbar_values for n in n_values]
        results = _pmap(lambda j: bounds.coherent_capacity(*j), jobs)
        combos = [((nb,), r) for (nb, n), r in zip(jobs, results)]
    elif kind == "distrust":
        cols = ["eps"]
        target_ensemble = ensemble_from_vectors(targets)
        jobs = list(eps_values)
        results = _pmap(lambda e: bounds.bound_distrust(target_ensemble, e), jobs)
        combos = [((e,), r) for e, r in zip(jobs, results)]
    else:  # pragma: no cover
        raise ParamOutOfRangeError(f"unknown kind {kind}")
    return cols, combos


@main.command()
@click.argument("kind", type=click.Choice(_BOUND_KINDS))
@click.option("--n", "n_values", type=int, multiple=True, required=True, help="Number of inputs (repeatable).")
@click.option("--d", "d_values", type=int, multiple=True, help="Dimension parameter (repeatable).")
@click.option("--omega", "omega_values", type=float, multiple=True, help="Vacuum deviation (repeatable).")
@click.option("--a", "a_values", type=float, multiple=True, help="Pairwise overlap (repeatable).")
@click.option("--eps", "eps_values", type=float, multiple=True, help="Deviation parameter (repeatable).")
@click.option("--nbar", "nbar_values", type=float, multiple=True, help="Mean photon number (repeatable).")
@click.option("--targets", "targets_file", type=str, default=None, help="Target ensemble JSON (distrust).")
@click.option("--output", "-o", type=str, default=None)
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="csv")
def bound(kind, n_values, d_values, omega_values, a_values, eps_values, nbar_values, targets_file, output, fmt):
    """Evaluate the closed-form bound for one assumption over a grid."""
    required = {
        "dimension": d_values,
        "ea-dimension": d_values,
        "vacuum": omega_values,
        "overlap": a_values,
        "almost-dim": d_values and eps_values,
        "coherent": nbar_values,
        "distrust": eps_values and targets_file,
    }
    if not required[kind]:
        click.echo(f"error: missing parameters for kind {kind}", err=True)
        sys.exit(2)
    targets = _load_targets(targets_file) if kind == "distrust" else None
    try:
        cols, combos = _bound_rows(
            kind, n_values, d_values, omega_values, a_values, eps_values, nbar_values, targets
        )
    except ParamOutOfRangeError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(2)
    if fmt == "csv":
        header = ["assumption", *cols, "n", "pg_bound", "info_bits", "validity"]
        rows = [
            [kind, *[_fmt9(p) if isinstance(p, float) else str(p) for p in params],
             str(r.n), _fmt9(r.pg_bound), _fmt9(r.info_bits), r.validity.value]
            for params, r in combos
        ]
        _emit(_csv(header, rows), output)
    else:
        payload = [
            {"assumption": kind, "params": dict(zip(cols, params)), **r.to_json()}
            for params, r in combos
        ]
        _emit(json.dumps(payload, indent=2) + "\n", output)


@main.command()
@click.argument("ensemble_file", type=str)
@click.option("--tol", type=float, default=1e-10)
@click.option("--max-iter", type=int, default=10_000)
@click.option("--seed", type=int, default=0)
@click.option("--output", "-o", type=str, default=None)
def oracle(ensemble_file, tol, max_iter, seed, output):
    """Run the discrimination oracle on an ensemble file; exit 0 iff the
    dual certificate closes the gap."""
    config = RunConfig(tol=tol, max_iter=max_iter, seed=seed, output=output)
    e = _load_ensemble(ensemble_file)
    try:
        res = optimize_discrimination(
            e, tol=config.tol, max_iter=config.max_iter, seed=config.seed
        )
    except InfocapError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(2)
    cert = res.certificate
    payload = {
        "value": res.value,
        "certified_upper": cert.certified_upper(),
        "gap": cert.trace_value - res.value,
        "iterations": res.iterations,
        "converged": res.converged,
    }
    _emit(json.dumps(payload, indent=2) + "\n", config.output)
    sys.exit(0 if res.converged else 1)


@main.command()
@click.argument("ensemble_file", type=str)
@click.argument("povm_file", type=str)
@click.option("--output", "-o", type=str, default=None)
def certify(ensemble_file, povm_file, output):
    """Evaluate a POVM on an ensemble and emit its dual certificate; exit 0
    iff the certificate is valid."""
    e = _load_ensemble(ensemble_file)
    obj = _load_json_file(povm_file)
    try:
        m = povm_from_json(obj)
        value = guess_value(e, m)
    except (InfocapError, KeyError, TypeError) as exc:
        click.echo(f"error: invalid POVM file {povm_file}: {exc}", err=True)
        sys.exit(3)
    cert = dual_certificate(e, m)
    payload = {
        "guess_value": value,
        "trace_value": cert.trace_value,
        "min_slack": cert.min_slack,
        "valid": cert.is_valid,
        "certified_upper": cert.certified_upper(),
    }
    _emit(json.dumps(payload, indent=2) + "\n", output)
    sys.exit(0 if cert.is_valid else 1)


_SEARCH_KINDS = ("vacuum", "overlap", "almost-dim", "distrust")


def _search_assumption(kind, d, omega, a, eps, targets):
    if kind == "vacuum":
        if omega is None:
            raise ParamOutOfRangeError("vacuum search needs --omega")
        return Vacuum(omega=omega)
    if kind == "overlap":
        if a is None:
            raise ParamOutOfRangeError("overlap search needs --a")
        return UniformOverlap(a=a)
    if kind == "almost-dim":
        if d is None or eps is None:
            raise ParamOutOfRangeError("almost-dim search needs --d and --eps")
        return AlmostDim(d=d, eps=eps)
    if eps is None or targets is None:
        raise ParamOutOfRangeError("distrust search needs --eps and --targets")
    return Distrust(targets=targets, eps=eps)


@main.command()
@click.argument("kind", type=click.Choice(_SEARCH_KINDS))
@click.option("--n", type=int, default=None)
@click.option("--d", type=int, default=None)
@click.option("--omega", type=float, default=None)
@click.option("--a", type=float, default=None)
@click.option("--eps", type=float, default=None)
@click.option("--targets", "targets_file", type=str, default=None)
@click.option("--restarts", type=int, default=16)
@click.option("--seed", type=int, default=0)
@click.option("--tol", type=float, default=1e-10)
@click.option("--output", "-o", type=str, default=None)
def search(kind, n, d, omega, a, eps, targets_file, restarts, seed, tol, output):
    """Seeded tightness search: best achievable value vs the bound."""
    config = RunConfig(tol=tol, restarts=restarts, seed=seed, output=output)
    targets = _load_targets(targets_file) if targets_file else None
    try:
        assumption = _search_assumption(kind, d, omega, a, eps, targets)
        if kind != "distrust" and n is None:
            raise ParamOutOfRangeError("search needs --n")
        report = tightness_search(
            assumption, n, restarts=config.restarts, seed=config.seed, tol=config.tol
        )
    except ParamOutOfRangeError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(2)
    _emit(json.dumps(report.to_json(), indent=2) + "\n", config.output)


_SWEEP_KINDS = ("vacuum", "overlap", "almost-dim", "coherent")
_SWEEP_AXIS = {"vacuum": "omega", "overlap": "a", "almost-dim": "eps", "coherent": "nbar"}


def _sweep_point(kind, n, d, x, with_oracle, tol, seed):
    if kind == "vacuum":
        res = bounds.bound_vacuum(n, x)
        builder = (lambda: vacuum_cone_ensemble(n, x)[0]) if x <= (n - 1) / n else None
    elif kind == "overlap":
        res = bounds.bound_overlap(n, x)
        builder = lambda: equiangular_ensemble(n, x)
    elif kind == "almost-dim":
        res = bounds.bound_almost_dim(d, n, x)
        builder = lambda: ensemble_from_vectors(almost_dim_seed(d, n, x)[0])
    else:
        res = bounds.coherent_capacity(x, n)
        builder = None
    oracle_value = float("nan")
    if with_oracle and builder is not None:
        oracle_value = optimize_discrimination(builder(), tol=tol, seed=seed).value
    return res, oracle_value


@main.command()
@click.argument("kind", type=click.Choice(_SWEEP_KINDS))
@click.option("--n", type=int, required=True)
@click.option("--d", type=int, default=2, help="Subspace dimension (almost-dim only).")
@click.option("--start", type=float, required=True)
@click.option("--stop", type=float, required=True)
@click.option("--points", type=int, required=True)
@click.option("--with-oracle", is_flag=True, default=False)
@click.option("--tol", type=float, default=1e-10)
@click.option("--seed", type=int, default=0)
@click.option("--output", "-o", type=str, default=None)
def sweep(kind, n, d, start, stop, points, with_oracle, tol, seed, output):
    """Sweep the assumption's scalar parameter and emit plot-ready CSV."""
    if points < 1:
        click.echo("error: need at least one grid point", err=True)
        sys.exit(2)
    axis = np.linspace(start, stop, points)
    try:
        results = _pmap(
            lambda x: _sweep_point(kind, n, d, float(x), with_oracle, tol, seed), axis
        )
    except ParamOutOfRangeError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(2)
    header = [_SWEEP_AXIS[kind], "pg_bound", "info_bits"]
    if with_oracle:
        header.append("oracle_value")
    rows = []
    for x, (res, oracle_value) in zip(axis, results):
        row = [_fmt9(float(x)), _fmt9(res.pg_bound), _fmt9(res.info_bits)]
        if with_oracle:
            row.append(_fmt9(oracle_value))
        rows.append(row)
    _emit(_csv(header, rows), output)


@main.command(name="paper-numbers")
@click.option("--only", type=str, default=None, help="Comma-separated subset of check names.")
def paper_numbers(only):
    """Run the built-in reference checks and print one pass/fail line each;
    exit 0 iff all pass."""
    from .checks import CHECK_NAMES, run_check

    names = list(CHECK_NAMES)
    if only:
        wanted = [s.strip() for s in only.split(",") if s.strip()]
        unknown = [w for w in wanted if w not in CHECK_NAMES]
        if unknown:
            click.echo(f"error: unknown checks {unknown}", err=True)
            sys.exit(2)
        names = wanted
    all_ok = True
    for name in names:
        result = run_check(name)
        status = "PASS" if result.passed else "FAIL"
        click.echo(f"{status}  {name}  ({result.elapsed_s:.1f}s)  {result.detail}")
        all_ok = all_ok and result.passed
    sys.exit(0 if all_ok else 1)


@main.command(name="sr-demo")
@click.option("--tol", type=float, default=1e-9)
@click.option("--strategy", "strategy_file", type=str, default=None,
              help="Analyze a strategy JSON file instead of the built-in demo.")
def sr_demo(tol, strategy_file):
    """Shared-randomness demonstration: averaging the entanglement-assisted
    dimension beats its peak-parameter bound.  With --strategy, report the
    mixture value, its classical-register embedding and the log-averaged
    information of the given strategy."""
    if strategy_file:
        from .randomness import averaged_log_pg, embed_cq, mixture_guess_value, strategy_from_json

        obj = _load_json_file(strategy_file)
        try:
            s = strategy_from_json(obj)
        except (InfocapError, KeyError, TypeError) as exc:
            click.echo(f"error: invalid strategy file {strategy_file}: {exc}", err=True)
            sys.exit(3)
        mixture = mixture_guess_value(s, tol=tol)
        embedded = optimize_discrimination(embed_cq(s), tol=tol).value
        click.echo(f"branches: {len(s.branches)}, n = {s.n}, kind = {s.kind}")
        click.echo(f"mixture guessing value:            {mixture:.9f}")
        click.echo(f"embedded-ensemble guessing value:  {embedded:.9f}")
        click.echo(f"log-averaged information (bits):   {averaged_log_pg(s, tol=tol):.9f}")
        return
    peak, average = ea_average_counterexample(tol=tol)
    cap = bounds.bound_ea_dimension(3, 30).pg_bound
    click.echo(f"single entanglement-assisted qutrit branch (n=30): Pg = {peak:.6f}")
    click.echo(f"bound at message dimension 3:                     Pg <= {cap:.6f}")
    click.echo("average-dimension mixture (qubit 2/3, 5-dim 1/3):  Pg = "
               f"{average:.6f}")
    click.echo(f"excess over the peak-parameter bound: {average - cap:+.6f}")
