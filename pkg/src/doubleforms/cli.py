"""Command-line front end: generate, classify, decompose, and solve.

Curvature tensors travel as JSON documents with fields n and entries,
each entry {"i": [a, b], "j": [c, d], "v": value} giving the coefficient
R(e_a, e_b; e_c, e_d) on increasing index pairs.  Omitted entries are
zero; the loader symmetrizes across (i, j) <-> (j, i) and rejects
contradictory duplicates.

Exit codes: 0 success, 1 parse/usage error, 2 invariant violation,
3 solver non-convergence (the best iterate is still written).
"""

from __future__ import annotations

import json
import sys

import click
import numpy as np

from .classify import classify_all
from .curvature import (
    AlgebraicCurvature,
    bianchi_residual,
    constant_curvature,
    curvature_power,
    non_einstein_3d,
    random_curvature,
    ricci_flat_4d,
)
from .decompose import NotDivisibleError, divide_by_g, divisibility_residual, split
from .forms import DEFAULT_TOL, DoubleForm, from_entries
from .indices import rank_of
from .solve import SolveOptions, minimize_residual, pq_einstein_condition, star_condition

#: Largest first-Bianchi residual the loader accepts.
BIANCHI_LOAD_TOL = 1e-8


class FileFormatError(Exception):
    """Malformed curvature file; mapped to exit code 1."""


class InvariantError(Exception):
    """Structurally valid file violating a tensor invariant; exit code 2."""


def _entry_pair(entry, key, n):
    pair = entry.get(key)
    if (not isinstance(pair, list) or len(pair) != 2
            or not all(isinstance(x, int) and not isinstance(x, bool) for x in pair)):
        raise FileFormatError(f"entry {entry}: field '{key}' must be a pair of integers")
    a, b = pair
    if not 0 <= a < b < n:
        raise FileFormatError(
            f"entry {entry}: index pair {pair} must be strictly increasing in [0, {n})")
    return (a, b)


def load_curvature(text, check_bianchi=True):
    """Parse a curvature JSON document into an AlgebraicCurvature."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FileFormatError(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict) or "n" not in doc or "entries" not in doc:
        raise FileFormatError("document must be an object with fields 'n' and 'entries'")
    n = doc["n"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 2:
        raise FileFormatError(f"field 'n' must be an integer >= 2, got {n!r}")
    if not isinstance(doc["entries"], list):
        raise FileFormatError("field 'entries' must be a list")
    values = {}
    for entry in doc["entries"]:
        if not isinstance(entry, dict):
            raise FileFormatError(f"entry {entry!r} must be an object")
        I = _entry_pair(entry, "i", n)
        J = _entry_pair(entry, "j", n)
        v = entry.get("v")
        if not isinstance(v, (int, float)) or isinstance(v, bool):
            raise FileFormatError(f"entry {entry}: field 'v' must be a number")
        v = float(v)
        if (I, J) in values:
            raise FileFormatError(f"entry {entry}: duplicate coefficient for i={list(I)}, j={list(J)}")
        mirrored = values.get((J, I))
        if mirrored is not None and mirrored != v:
            raise FileFormatError(
                f"entry {entry}: contradicts symmetric entry i={list(J)}, j={list(I)}")
        values[(I, J)] = v
    full = dict(values)
    for (I, J), v in values.items():
        full.setdefault((J, I), v)
    form = from_entries(n, 2, 2, [(I, J, v) for (I, J), v in full.items()])
    R = AlgebraicCurvature(form)
    if check_bianchi:
        residual = bianchi_residual(R)
        if residual > BIANCHI_LOAD_TOL:
            raise InvariantError(
                f"first Bianchi identity violated (residual {residual:.3e})")
    return R


def serialize_curvature(R):
    """Canonical JSON text: nonzero entries with rank(i) <= rank(j)."""
    n = R.n
    entries = []
    coeffs = R.form.coeffs
    from .indices import enumerate_basis

    basis = enumerate_basis(n, 2)
    for a, I in enumerate(basis):
        for b in range(a, len(basis)):
            v = coeffs[a, b]
            if v != 0.0:
                entries.append({"i": list(I), "j": list(basis[b]), "v": v})
    return json.dumps({"n": n, "entries": entries}, indent=2) + "\n"


def _read_input(path):
    try:
        if path == "-":
            return sys.stdin.read()
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise FileFormatError(f"cannot read {path}: {exc}") from exc


@click.group()
def cli():
    """Pointwise classification of algebraic curvature tensors."""


@cli.command()
@click.argument("input", type=str)
@click.option("--tol", type=float, default=DEFAULT_TOL, show_default=True,
              help="Relative tolerance for proportionality verdicts.")
@click.option("--no-bianchi-check", is_flag=True,
              help="Skip the first-Bianchi invariant check on load.")
def classify(input, tol, no_bianchi_check):
    """Classify the tensor in INPUT (path or - for stdin)."""
    R = load_curvature(_read_input(input), check_bianchi=not no_bianchi_check)
    report = classify_all(R, tol=tol)
    for line in report.to_lines():
        click.echo(line)
    return 0


@cli.command()
@click.argument("kind", type=click.Choice(
    ["constant", "ricci-flat-4d", "non-einstein-3d", "random"]))
@click.option("--n", type=int, default=4, show_default=True, help="Dimension.")
@click.option("--kappa", type=float, default=1.0, show_default=True,
              help="Sectional curvature for kind 'constant'.")
@click.option("--c", "plane_curvatures", type=float, nargs=3, default=(1.0, 1.0, -2.0),
              show_default=True, help="Plane curvatures for kind 'ricci-flat-4d'.")
@click.option("--seed", type=int, default=0, show_default=True,
              help="Seed for kind 'random'.")
def generate(kind, n, kappa, plane_curvatures, seed):
    """Emit a model curvature tensor as a JSON document on stdout."""
    if kind == "constant":
        R = constant_curvature(n, kappa)
    elif kind == "ricci-flat-4d":
        try:
            R = ricci_flat_4d(*plane_curvatures)
        except ValueError as exc:
            raise click.UsageError(str(exc))
    elif kind == "non-einstein-3d":
        R = non_einstein_3d()
    else:
        R = random_curvature(n, seed)
    click.echo(serialize_curvature(R), nl=False)
    return 0


@cli.command()
@click.argument("input", type=str)
@click.option("--q", type=int, default=1, show_default=True,
              help="Power of the curvature tensor to decompose.")
@click.option("--no-bianchi-check", is_flag=True,
              help="Skip the first-Bianchi invariant check on load.")
def decompose(input, q, no_bianchi_check):
    """Print trace-free component norms of R^q and its divisibility by g."""
    if q < 1:
        raise click.UsageError("--q must be >= 1")
    R = load_curvature(_read_input(input), check_bianchi=not no_bianchi_check)
    n = R.n
    click.echo(f"n: {n}")
    click.echo(f"q: {q}")
    if 2 * q > n:
        click.echo("degenerate: true")
        for r in range(2 * q, -1, -1):
            click.echo(f"component_norm_{r}: 0.0")
        click.echo("divisible_by_g: true")
        click.echo("divisibility_residual: 0.0")
        return 0
    click.echo("degenerate: false")
    power = curvature_power(R, q)
    dec = split(power)
    for r in range(2 * q, -1, -1):
        click.echo(f"component_norm_{r}: {dec.component(r).norm()!r}")
    residual = divisibility_residual(power) if power.norm() else 0.0
    click.echo(f"divisible_by_g: {'true' if residual <= 1e-8 else 'false'}")
    click.echo(f"divisibility_residual: {residual!r}")
    return 0


@cli.command()
@click.argument("input", type=str)
@click.option("--p", type=int, default=None,
              help="Contraction order of the Einstein-type target condition.")
@click.option("--q", type=int, default=1, show_default=True,
              help="Curvature power of the target condition.")
@click.option("--thorpe", is_flag=True,
              help="Target star invariance of g^(n/2-2q) R^q instead.")
@click.option("--tol", type=float, default=1e-8, show_default=True,
              help="Target relative residual.")
@click.option("--max-iterations", type=int, default=500, show_default=True)
@click.option("--step", type=float, default=0.1, show_default=True,
              help="Initial gradient step.")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--no-bianchi-check", is_flag=True,
              help="Skip the first-Bianchi invariant check on load.")
def solve(input, p, q, thorpe, tol, max_iterations, step, seed, no_bianchi_check):
    """Minimize a condition residual starting from the tensor in INPUT.

    Writes the solved tensor to stdout and a residual-per-iteration
    table to stderr; exits 3 when the target residual is not reached.
    """
    if thorpe:
        if p is not None:
            raise click.UsageError("--thorpe does not take --p")
        condition = star_condition(q)
    else:
        if p is None:
            raise click.UsageError("need either --p (with --q) or --thorpe")
        if not 0 < p < 2 * q:
            raise click.UsageError(f"need 0 < p < 2q, got p={p}, q={q}")
        condition = pq_einstein_condition(p, q)
    R = load_curvature(_read_input(input), check_bianchi=not no_bianchi_check)
    try:
        condition.validate(R.n)
    except ValueError as exc:
        raise click.UsageError(str(exc))
    opts = SolveOptions(max_iterations=max_iterations, step=step, tol=tol, seed=seed)
    result = minimize_residual(R, condition, opts)
    click.echo(f"condition: {condition.describe()}", err=True)
    for it, res in enumerate(result.residuals):
        click.echo(f"iteration {it}: residual {res!r}", err=True)
    click.echo(serialize_curvature(result.curvature), nl=False)
    return 0 if result.converged else 3


def main(argv=None):
    """Run the CLI, mapping errors to the documented exit codes."""
    try:
        result = cli.main(args=argv, prog_name="doubleforms", standalone_mode=False)
        return int(result) if isinstance(result, int) else 0
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except (click.UsageError, click.ClickException) as exc:
        click.echo(f"error: {exc.format_message()}", err=True)
        return 1
    except FileFormatError as exc:
        click.echo(f"error: {exc}", err=True)
        return 1
    except InvariantError as exc:
        click.echo(f"error: {exc}", err=True)
        return 2
    except (ValueError, NotDivisibleError) as exc:
        click.echo(f"error: {exc}", err=True)
        return 2


def entry_point():
    sys.exit(main())
