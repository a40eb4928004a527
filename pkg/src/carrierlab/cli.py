"""Command-line front end.

Exit codes: 0 success or member, 1 negative verdict, 2 usage or data
error, 3 resource budget exceeded. Errors go to stderr as one JSON object.
"""
from __future__ import annotations

import json
import sys
import warnings
from pathlib import Path

import click

from .behavior import Behavior
from .exact import format_fraction
from .juntas import BudgetExceeded, count_k_juntas, enumerate_k_juntas
from .polytope import f_vector, facet_enumeration, membership_C, vertices_of_C

EXIT_OK, EXIT_NEGATIVE, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3


class CLIError(Exception):
    def __init__(self, code: int, kind: str, message: str):
        super().__init__(message)
        self.code = code
        self.kind = kind


def _emit(obj) -> None:
    click.echo(json.dumps(obj, sort_keys=False))


def _quiet_optimizer() -> None:
    # stderr carries error JSON only; per-restart convergence is in the run log
    warnings.filterwarnings("ignore", module=r"scipy\.optimize")


def _check_nk(N: int, K: int) -> None:
    if N < 1 or K < 0 or K > N:
        raise CLIError(EXIT_USAGE, "usage", f"need N >= 1 and 0 <= K <= N, got N={N}, K={K}")


@click.group()
def cli():
    """Classical juntas, interference polytopes and quantum fingerprinting strategies."""


@cli.group()
def junta():
    """Count or list the K-juntas on N variables."""


@junta.command("count")
@click.argument("N", type=int)
@click.argument("K", type=int)
def junta_count(n, k):
    _check_nk(n, k)
    click.echo(str(count_k_juntas(n, k)))


@junta.command("enumerate")
@click.argument("N", type=int)
@click.argument("K", type=int)
@click.option("--output", "-o", type=click.Path(dir_okay=False), help="Write JSON here instead of stdout.")
def junta_enumerate(n, k, output):
    _check_nk(n, k)
    funcs = enumerate_k_juntas(n, k)
    payload = {"N": n, "K": k, "count": len(funcs), "truth_tables_hex": [f.to_hex() for f in funcs]}
    if output:
        Path(output).write_text(json.dumps(payload) + "\n")
        _emit({"N": n, "K": k, "count": len(funcs), "output": output})
    else:
        _emit(payload)


@cli.command()
@click.argument("what", type=click.Choice(["facets", "fvector", "dim"]))
@click.argument("N", type=int)
@click.argument("K", type=int)
@click.option("--budget-vertices", type=int, default=None, help="Vertex limit for facet enumeration.")
def polytope(what, n, k, budget_vertices):
    """Geometry of C_{N,K}: facets, f-vector or affine dimension."""
    _check_nk(n, k)
    p = vertices_of_C(n, k)
    if what == "dim":
        _emit({"N": n, "K": k, "vertices": len(p.vertices), "dim": p.affine_dim})
        return
    p = facet_enumeration(p, budget_vertices=budget_vertices)
    if what == "fvector":
        _emit({"N": n, "K": k, "dim": p.affine_dim, "f_vector": list(f_vector(p))})
    else:
        _emit({"N": n, "K": k, "dim": p.affine_dim,
               "facets": [{"normal": list(f.normal), "offset": f.offset} for f in p.facets]})


@cli.command()
@click.argument("behavior_file", type=click.Path(dir_okay=False))
@click.argument("N", type=int)
@click.argument("K", type=int)
@click.option("--float", "use_float", is_flag=True, help="Use the floating-point LP instead of exact simplex.")
def membership(behavior_file, n, k, use_float):
    """Decide whether a behavior lies in C_{N,K}; exit 0 member, 1 non-member."""
    _check_nk(n, k)
    try:
        text = Path(behavior_file).read_text()
        beh = Behavior.from_json(text)
    except (OSError, ValueError) as exc:
        raise CLIError(EXIT_USAGE, "data", f"cannot read behavior: {exc}")
    if beh.n_inputs != n:
        raise CLIError(EXIT_USAGE, "data", f"behavior has N={beh.n_inputs}, expected {n}")
    cert = membership_C(beh, n, k, exact=not use_float)
    _emit(cert.to_dict())
    if not cert.member:
        sys.exit(EXIT_NEGATIVE)


@cli.command()
@click.argument("N", type=int)
@click.argument("D", type=int)
@click.option("--sym-u", is_flag=True, help="One encoding shared by every site.")
@click.option("--sym-p", is_flag=True, help="Uniform path weights.")
@click.option("--restarts", type=int, default=None, help="Random restarts [64].")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--method", type=click.Choice(["bfgs", "nelder-mead", "slsqp"]), default="bfgs", show_default=True)
@click.option("--workers", type=int, default=1, show_default=True)
@click.option("--log", "log_path", type=click.Path(dir_okay=False), help="JSON-lines log of every restart.")
def optimize(n, d, sym_u, sym_p, restarts, seed, method, workers, log_path):
    """Best fingerprinting violation over quantum strategies with internal dimension D."""
    from .optimize import DEFAULT_RESTARTS, optimize_violation
    from .quantum import theorem1_delta

    if n < 2 or d < 1:
        raise CLIError(EXIT_USAGE, "usage", "need N >= 2 and d >= 1")
    _quiet_optimizer()
    restarts = DEFAULT_RESTARTS if restarts is None else restarts
    if restarts < 1 or workers < 1:
        raise CLIError(EXIT_USAGE, "usage", "restarts and workers must be positive")
    res = optimize_violation(n, d, symmetric_unitaries=sym_u, symmetric_weights=sym_p,
                             restarts=restarts, seed=seed, method=method, workers=workers)
    if log_path:
        Path(log_path).write_text(res.log_lines())
    _emit({
        "N": n, "d": d, "sym_u": sym_u, "sym_p": sym_p, "restarts": restarts, "seed": seed,
        "method": method, "delta": res.delta, "theorem1_delta": format_fraction(theorem1_delta(n)),
        "best_restart": res.best_restart, "strategy": res.strategy.to_dict(),
    })


@cli.command()
@click.argument("config_file", type=click.Path(dir_okay=False))
@click.option("--restarts", type=int, default=None)
@click.option("--seed", type=int, default=None)
@click.option("--workers", type=int, default=None)
@click.option("--output", "output_path", type=click.Path(dir_okay=False), default=None,
              help="CSV path; '-' for stdout.")
@click.option("--check-order", is_flag=True, help="Exit 1 if a row breaks the expected ordering.")
def scan(config_file, restarts, seed, workers, output_path, check_order):
    """Run a TOML-configured scan and write one CSV row per (N, mode)."""
    from .scan import ScanConfig, ordering_violations, rows_to_csv, run_scan

    try:
        text = Path(config_file).read_text()
        cfg = ScanConfig.from_toml(text, restarts=restarts, seed=seed, workers=workers,
                                   output_path=output_path)
    except (OSError, ValueError) as exc:
        raise CLIError(EXIT_USAGE, "config", f"bad config: {exc}")
    _quiet_optimizer()
    rows = run_scan(cfg)
    body = rows_to_csv(rows)
    if cfg.output_path == "-":
        click.echo(body, nl=False)
    else:
        Path(cfg.output_path).write_text(body)
        _emit({"rows": len(rows), "output": cfg.output_path})
    if check_order:
        problems = ordering_violations(rows)
        if problems:
            click.echo(json.dumps({"error": "ordering", "message": problems}), err=True)
            sys.exit(EXIT_NEGATIVE)


@cli.command()
@click.argument("N", type=int)
def theorem2(n):
    """Exact optimum of the second-order interference LP with its optimal behavior."""
    from .interference_lp import MAX_DENSE_N, optimal_behavior_report

    if n <= 3:
        raise CLIError(EXIT_USAGE, "usage", f"the closed form is valid for N > 3 only (got N={n})")
    if n > MAX_DENSE_N:
        raise CLIError(EXIT_BUDGET, "budget", f"dense behavior output is limited to N <= {MAX_DENSE_N}")
    _emit(optimal_behavior_report(n))


def main(argv=None) -> int:
    try:
        cli.main(args=argv, prog_name="carrierlab", standalone_mode=False)
    except CLIError as exc:
        click.echo(json.dumps({"error": exc.kind, "message": str(exc)}), err=True)
        return exc.code
    except BudgetExceeded as exc:
        click.echo(json.dumps({"error": "budget", "message": str(exc)}), err=True)
        return EXIT_BUDGET
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.exceptions.Abort:
        click.echo(json.dumps({"error": "aborted", "message": "aborted"}), err=True)
        return EXIT_USAGE
    except click.ClickException as exc:
        click.echo(json.dumps({"error": "usage", "message": exc.format_message()}), err=True)
        return EXIT_USAGE
    except SystemExit as exc:
        return int(exc.code or 0)
    return EXIT_OK


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
