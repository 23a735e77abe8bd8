from __future__ import annotations

import io
import logging
from contextlib import contextmanager
from pathlib import Path
from typing import Iterator, NoReturn, Optional

import typer
from rich.console import Console
from rich.logging import RichHandler
from rich.table import Table

from .audit import AuditChecker, write_audit_report
from .config import ConfigError, CviConfig, resolve_config
from .entropy import EntropyKind, entropy
from .inequalities import GridSpec, nesting_violations, scan_region, write_region_csv
from .io import CMFileError, dumps_report, format_number, load_cm, write_cm
from .reproducibility import stamp_version
from .steering import gaussian_steerability, min_reid, monogamy_check, optimal_gains, reid_product
from .symplectic import (
    CovarianceError,
    DimensionError,
    HypothesisError,
    Partition,
    PartitionError,
    is_bona_fide,
    mode_count,
    random_cm,
    symplectic_spectrum,
)

app = typer.Typer(add_completion=False, no_args_is_help=True)
err_console = Console(stderr=True)

logger = logging.getLogger("cvinfo_cli")

INPUT_ERRORS = (CovarianceError, PartitionError, HypothesisError, CMFileError, ConfigError)


def _configure_logging(verbose: bool) -> None:
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        format="%(message)s",
        handlers=[RichHandler(console=err_console, show_time=False, show_path=False)],
        force=True,
    )


def _fail(message: str, code: int = 2) -> NoReturn:
    err_console.print(f"error: {message}", markup=False, highlight=False, soft_wrap=True)
    raise typer.Exit(code=code)


@contextmanager
def _input_errors() -> Iterator[None]:
    try:
        yield
    except INPUT_ERRORS as e:
        _fail(str(e))


def _config(ctx: typer.Context) -> CviConfig:
    return ctx.obj if isinstance(ctx.obj, CviConfig) else CviConfig()


def _emit(ctx: typer.Context, payload: dict) -> None:
    typer.echo(dumps_report(payload, _config(ctx).scan.digits))


def _single_group(text: str, what: str) -> tuple[int, ...]:
    p = Partition.parse(text)
    if len(p) != 1:
        raise PartitionError(f"{what} must be one comma-separated group, got '{text}'")
    return p[0]


@app.callback()
def main(
    ctx: typer.Context,
    config: Optional[Path] = typer.Option(
        None, "--config", help="TOML config file (default: nearest cvinfo.toml)"
    ),
    verbose: bool = typer.Option(False, "--verbose", "-v", help="Debug logging on stderr"),
):
    """Covariance-matrix entropy inequalities and Gaussian steering checks."""
    _configure_logging(verbose)
    with _input_errors():
        ctx.obj = resolve_config(config)


@app.command("gen")
def gen(
    ctx: typer.Context,
    modes: int = typer.Option(..., "--modes", "-n", min=1, help="Number of modes"),
    seed: int = typer.Option(..., "--seed", min=0),
    nu_max: float = typer.Option(1.0, "--nu-max", help="Symplectic eigenvalues drawn from [1, nu_max]"),
    strength: float = typer.Option(1.0, "--strength", help="Scale of the random symplectic generator"),
    out: Path = typer.Option(..., "--out", dir_okay=False),
    stamp: bool = typer.Option(False, "--stamp", help="Write a version sidecar next to --out"),
):
    """Write a random bona fide covariance matrix."""
    try:
        V = random_cm(modes, seed, nu_max=nu_max, strength=strength)
    except ValueError as e:
        _fail(str(e))
    write_cm(V, out)
    if stamp:
        stamp_version(
            out, {"command": "gen", "modes": modes, "seed": seed, "nu_max": nu_max, "strength": strength}
        )
    err_console.print(f"Wrote {modes}-mode covariance matrix to {out}", markup=False, soft_wrap=True)


@app.command("check")
def check(
    ctx: typer.Context,
    cm_file: Path = typer.Argument(..., dir_okay=False),
):
    """Bona fide verdict and symplectic spectrum. Exit 1 when not bona fide."""
    tol = _config(ctx).tolerances
    with _input_errors():
        V = load_cm(cm_file, tol.parse_symmetry)
        spectrum = symplectic_spectrum(V, tol.pairing)
        bona_fide = is_bona_fide(V, tol.bona_fide)
    _emit(
        ctx,
        {
            "modes": mode_count(V),
            "bona_fide": bona_fide,
            "symplectic_spectrum": list(spectrum.values),
            "pairing_error": spectrum.pairing_error,
        },
    )
    if not bona_fide:
        raise typer.Exit(code=1)


@app.command("entropy")
def entropy_cmd(
    ctx: typer.Context,
    cm_file: Path = typer.Argument(..., dir_okay=False),
    kind: Optional[EntropyKind] = typer.Option(None, "--kind", case_sensitive=False),
):
    """One entropy functional as a bare number, or all three as JSON."""
    tol = _config(ctx).tolerances
    with _input_errors():
        V = load_cm(cm_file, tol.parse_symmetry)
        if kind is not None:
            typer.echo(format_number(entropy(kind, V), _config(ctx).scan.digits))
            return
        payload: dict[str, Optional[float]] = {}
        for k in EntropyKind:
            try:
                payload[k.value] = entropy(k, V)
            except HypothesisError as e:
                logger.warning("%s undefined: %s", k.value, e)
                payload[k.value] = None
    _emit(ctx, payload)


@app.command("ssa")
def ssa(
    ctx: typer.Context,
    cm_file: Path = typer.Argument(..., dir_okay=False),
    partition: str = typer.Option(..., "--partition", "-p", help='Groups, e.g. "1;2;3,4"'),
    kind: EntropyKind = typer.Option(EntropyKind.LOG_DET, "--kind", case_sensitive=False),
    report: Optional[Path] = typer.Option(None, "--report", dir_okay=False, help="Markdown audit report"),
):
    """Subadditivity, strong subadditivity and triangle residuals. Exit 1 on a violation."""
    cfg = _config(ctx)
    with _input_errors():
        V = load_cm(cm_file, cfg.tolerances.parse_symmetry)
        p = Partition.parse(partition)
        result = AuditChecker(tolerances=cfg.tolerances, kind=kind).run(V, p)
    for w in result.warnings:
        logger.warning(w)
    if report is not None:
        write_audit_report(result, report, source=str(cm_file))
    _emit(
        ctx,
        {
            "partition": result.partition,
            "kind": result.kind.value,
            "passed": result.passed,
            "residuals": result.residuals,
        },
    )
    if not result.passed:
        raise typer.Exit(code=1)


@app.command("steer")
def steer(
    ctx: typer.Context,
    cm_file: Path = typer.Argument(..., dir_okay=False),
    measured: str = typer.Option(..., "--measured", help='Measuring modes, e.g. "1,2"'),
    steered: Optional[str] = typer.Option(None, "--steered", help="Steered modes (default: the rest)"),
):
    """Gaussian steerability report as JSON."""
    cfg = _config(ctx)
    with _input_errors():
        V = load_cm(cm_file, cfg.tolerances.parse_symmetry)
        a = _single_group(measured, "--measured")
        b = _single_group(steered, "--steered") if steered is not None else None
        report = gaussian_steerability(V, a, b, cfg.tolerances.steering)
    _emit(ctx, report.to_dict())


@app.command("monogamy")
def monogamy(
    ctx: typer.Context,
    cm_file: Path = typer.Argument(..., dir_okay=False),
    partition: str = typer.Option(..., "--partition", "-p", help='A;B;C with B a single mode, e.g. "1;2;3"'),
):
    """Steering monogamy verdict as JSON. Exit 1 when inconsistent."""
    cfg = _config(ctx)
    with _input_errors():
        V = load_cm(cm_file, cfg.tolerances.parse_symmetry)
        verdict = monogamy_check(
            V, Partition.parse(partition), cfg.tolerances.steering, cfg.tolerances.residual
        )
    _emit(ctx, verdict.to_dict())
    if not verdict.consistent:
        raise typer.Exit(code=1)


@app.command("scan")
def scan(
    ctx: typer.Context,
    c: float = typer.Option(..., "--c", help="Fixed single-mode invariant of mode C"),
    grid: int = typer.Option(200, "--grid", min=1, help="Points per axis"),
    lo: float = typer.Option(1.0, "--min", help="Lower end of the a and b axes"),
    hi: float = typer.Option(..., "--max", help="Upper end of the a and b axes"),
    out: Optional[Path] = typer.Option(None, "--out", dir_okay=False, help="CSV path (default: stdout)"),
    workers: Optional[int] = typer.Option(None, "--workers", min=1),
    stamp: bool = typer.Option(False, "--stamp", help="Write a version sidecar next to --out"),
):
    """Triangle-inequality region membership for H, M and D on an (a, b) grid. Exit 1 if not nested."""
    cfg = _config(ctx)
    try:
        axis = GridSpec(lo, hi, grid)
        points = scan_region(c, axis, axis, workers=workers or cfg.scan.workers)
    except ValueError as e:
        _fail(str(e))

    if out is None:
        buf = io.StringIO()
        write_region_csv(points, buf, cfg.scan.digits)
        typer.echo(buf.getvalue(), nl=False)
    else:
        out.parent.mkdir(parents=True, exist_ok=True)
        with out.open("w", encoding="utf-8", newline="") as fh:
            write_region_csv(points, fh, cfg.scan.digits)
        if stamp:
            stamp_version(out, {"command": "scan", "c": c, "grid": grid, "min": lo, "max": hi})

        table = Table(title=f"Region scan at c={format_number(c)}")
        table.add_column("Entropy")
        table.add_column("Points inside", justify="right")
        for kind in EntropyKind:
            table.add_row(kind.value, str(sum(pt.member(kind) for pt in points)))
        err_console.print(table)

    violations = nesting_violations(points)
    if violations:
        first = violations[0]
        _fail(
            f"{len(violations)} grid points break D <= M <= H nesting, first at "
            f"a={format_number(first.a)} b={format_number(first.b)}",
            code=1,
        )


@app.command("reid")
def reid(
    ctx: typer.Context,
    cm_file: Path = typer.Argument(..., dir_okay=False),
    measured: int = typer.Option(1, "--measured", min=1, max=2, help="Measuring mode of the pair"),
):
    """Reid product and its local-frame minimum for a two-mode state."""
    cfg = _config(ctx)
    with _input_errors():
        V = load_cm(cm_file, cfg.tolerances.parse_symmetry)
        if mode_count(V) != 2:
            raise DimensionError(f"reid needs a two-mode covariance matrix, got {mode_count(V)} modes")
        steered = 3 - measured
        g_q, g_p = optimal_gains(V, measured, steered)
        payload = {
            "direction": [[measured], [steered]],
            "gains": [g_q, g_p],
            "reid_product": reid_product(V, measured, steered),
            "min_reid": min_reid(V, (measured,), (steered,)),
        }
    _emit(ctx, payload)


if __name__ == "__main__":
    app()
