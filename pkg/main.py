#!/usr/bin/env python3
"""
Diagonal copula bounds
Main entry point for the command-line interface
"""

from fractions import Fraction
from typing import List, Optional, Tuple

import typer
from pydantic import ValidationError
from rich.console import Console
from rich.panel import Panel
from rich.progress import Progress, SpinnerColumn, TextColumn
from rich.table import Table

from src.core.analyzer import PLOT_KINDS, DiagonalAnalyzer
from src.core.bounds import ConstructionKind
from src.core.errors import DiagonalCopulaError, IoFailure, RouteMismatch
from src.core.piecewise import format_rational, to_rational
from src.core.verify import copula_suite
from src.utils.config import CommandConfig, load_config
from src.utils.logger import setup_logger

app = typer.Typer(help="Exact copula bounds and maximal asymmetry for a prescribed diagonal section")
console = Console()

EXIT_VALIDATION = 1
EXIT_ROUTE_MISMATCH = 2
EXIT_IO = 3
EXIT_NOT_COPULA = 4

KIND_CHOICES = {"U": ConstructionKind.U, "CBAR": ConstructionKind.CBAR, "A": ConstructionKind.A,
                "B": ConstructionKind.BERTINO, "K": ConstructionKind.K, "SPLICE": ConstructionKind.SPLICE}


def _report_error(e: Exception) -> int:
    """Print the error panel and return the exit code for it"""
    if isinstance(e, RouteMismatch):
        code, title = EXIT_ROUTE_MISMATCH, "Route mismatch"
    elif isinstance(e, IoFailure):
        code, title = EXIT_IO, "I/O error"
    elif isinstance(e, (DiagonalCopulaError, ValidationError, ValueError)):
        code, title = EXIT_VALIDATION, type(e).__name__
    else:
        raise e
    console.print(Panel(f"[red]❌ {type(e).__name__}: {e}[/red]", title=title, border_style="red"))
    return code


def _command(subcommand: str, path: Optional[str] = None, **options) -> Tuple[CommandConfig, DiagonalAnalyzer]:
    config = load_config()
    engine = config.engine
    options = {k: v for k, v in options.items() if v is not None}
    cmd = CommandConfig(
        subcommand=subcommand,
        input_path=path,
        n=options.get("n", engine.grid_n),
        output_path=options.get("out"),
        seed=options.get("seed", engine.seed),
        count=options.get("count", engine.sample_count),
        exact=options.get("exact", engine.exact),
        precision=options.get("precision", config.export.precision),
    )
    config.export.precision = cmd.precision
    config.export.exact = cmd.exact
    config.engine.seed = cmd.seed
    return cmd, DiagonalAnalyzer(config)


def _parse_point(text: str) -> Tuple[Fraction, Fraction]:
    parts = text.split(",")
    if len(parts) != 2:
        raise ValueError(f"--at expects 'x,y', got {text!r}")
    return to_rational(parts[0]), to_rational(parts[1])


@app.callback()
def main(
    log_level: Optional[str] = typer.Option(None, "--log-level", help="Override LOG_LEVEL"),
):
    """Configure logging once for every subcommand"""
    config = load_config()
    setup_logger(level=log_level or config.log_level, log_file=config.log_file)


@app.command()
def validate(path: str = typer.Argument(..., help="Diagonal file")):
    """Check that a file describes a valid diagonal section"""
    try:
        _, analyzer = _command("validate", path)
        d = analyzer.load(path)
        console.print(Panel(
            f"[green]✅ Valid diagonal section[/green]\n"
            f"Source: {d.provenance}\n"
            f"Breakpoints: {len(d.breakpoints)}",
            title="Valid",
            border_style="green"
        ))
    except Exception as e:
        raise typer.Exit(_report_error(e))


@app.command(name="eval")
def evaluate(
    path: str = typer.Argument(..., help="Diagonal file"),
    kind: str = typer.Option("CBAR", "--kind", "-k", help="U, CBAR, A, B, K or SPLICE"),
    at: str = typer.Option(..., "--at", help="Point as x,y (p/q or decimals)"),
):
    """Print one value of a construction"""
    try:
        _, analyzer = _command("eval", path)
        if kind.upper() not in KIND_CHOICES:
            raise ValueError(f"Unknown kind {kind!r}; choose from {', '.join(KIND_CHOICES)}")
        x, y = _parse_point(at)
        value = analyzer.evaluate(analyzer.load(path), KIND_CHOICES[kind.upper()], x, y)
        console.print(format_rational(value), highlight=False)
    except Exception as e:
        raise typer.Exit(_report_error(e))


@app.command()
def grid(
    path: str = typer.Argument(..., help="Diagonal file"),
    kind: str = typer.Option("CBAR", "--kind", "-k", help="U, CBAR, A, B, K or SPLICE"),
    n: Optional[int] = typer.Option(None, "--n", help="Grid size"),
    exact: Optional[bool] = typer.Option(None, "--exact/--float", help="Exact p/q values and breakpoint refinement"),
    precision: Optional[int] = typer.Option(None, "--precision", help="Decimal places"),
    out: str = typer.Option("grid.csv", "--out", "-o", help="Output CSV"),
):
    """Export a construction on an n x n grid as CSV"""
    try:
        cmd, analyzer = _command("grid", path, n=n, exact=exact, precision=precision, out=out)
        if kind.upper() not in KIND_CHOICES:
            raise ValueError(f"Unknown kind {kind!r}; choose from {', '.join(KIND_CHOICES)}")
        d = analyzer.load(path)
        written = analyzer.export_grid(d, KIND_CHOICES[kind.upper()], cmd.n, cmd.output_path, cmd.exact)
        console.print(f"[green]✅ Wrote {written}[/green]")
    except Exception as e:
        raise typer.Exit(_report_error(e))


@app.command()
def bounds(
    path: str = typer.Argument(..., help="Diagonal file"),
    n: Optional[int] = typer.Option(None, "--n", help="Grid size"),
):
    """Order chain, C-bar = K and C-bar = A characterizations, copula checks"""
    try:
        cmd, analyzer = _command("bounds", path, n=n)
        d = analyzer.load(path)
        with Progress(SpinnerColumn(), TextColumn("[progress.description]{task.description}"),
                      console=console, transient=True) as progress:
            progress.add_task("Checking bounds...", total=None)
            summary = analyzer.bounds_summary(d, cmd.n)
            checks = copula_suite(d, cmd.n, exact=True, workers=analyzer.workers)

        table = Table(title=f"Bounds for {d.provenance} (n = {cmd.n})")
        table.add_column("Check")
        table.add_column("Result")
        table.add_row("B <= K <= C-bar <= A", "✅" if summary.order_chain_ok else "❌")
        table.add_row("C-bar = K", str(summary.cbar_equals_k).lower())
        table.add_row("sup |C-bar - K| on grid", format_rational(summary.k_grid_gap))
        table.add_row("C-bar = A", str(summary.cbar_equals_a).lower())
        table.add_row("sup |C-bar - A| on grid", format_rational(summary.a_grid_gap))
        table.add_row("U(x,y) + B(y,x) <= d(x) + d(y)", "✅" if summary.splice_inequality_ok else "❌")
        table.add_row("ordinal sum points", ", ".join(format_rational(t) for t in summary.ordinal_points) or "none")
        for name, report in checks.items():
            table.add_row(f"{name} is a copula on grid", "✅" if report.is_copula_on_grid else
                          f"❌ min volume {report.min_volume}")
        console.print(table)

        failed = [name for name, report in checks.items() if not report.is_copula_on_grid]
        if failed or not summary.order_chain_ok or not summary.splice_inequality_ok:
            console.print(Panel(f"[red]❌ Claimed copula checks failed: {', '.join(failed) or 'order chain'}[/red]",
                                title="Error", border_style="red"))
            raise typer.Exit(EXIT_NOT_COPULA)
    except typer.Exit:
        raise
    except Exception as e:
        raise typer.Exit(_report_error(e))


@app.command()
def asym(
    path: str = typer.Argument(..., help="Diagonal file"),
    n: Optional[int] = typer.Option(None, "--n", help="Grid size of the brute-force oracle"),
    out: Optional[str] = typer.Option(None, "--out", "-o", help="Write the structured report here"),
    omega_out: Optional[str] = typer.Option(None, "--omega-out", help="Write the witness set as CSV"),
):
    """Maximal asymmetry along every route"""
    try:
        _, analyzer = _command("asym", path, n=n, out=out)
        d = analyzer.load(path)
        with Progress(SpinnerColumn(), TextColumn("[progress.description]{task.description}"),
                      console=console, transient=True) as progress:
            progress.add_task("Computing maximal asymmetry...", total=None)
            report = analyzer.asymmetry(d, oracle_n=n or analyzer.config.engine.oracle_n)

        console.print(f"mu = {analyzer.exporter.format_mu(report.mu)}", highlight=False)
        console.print(
            f"witness = ({format_rational(report.witness[0])}, {format_rational(report.witness[1])})",
            highlight=False,
        )
        if out:
            analyzer.exporter.write_report(report, out)
        if omega_out:
            analyzer.exporter.write_omega_csv(report.omega, omega_out)
    except Exception as e:
        raise typer.Exit(_report_error(e))


@app.command()
def regions(
    path: str = typer.Argument(..., help="Diagonal file"),
    out: Optional[str] = typer.Option(None, "--out", "-o", help="Curve CSV"),
    at: List[str] = typer.Option([], "--at", help="Point x,y to classify (repeatable)"),
):
    """Export g_U, g_L, h and H, and classify points"""
    try:
        _, analyzer = _command("regions", path, out=out)
        d = analyzer.load(path)
        queries = [_parse_point(p) for p in at]
        curves, labels = analyzer.regions(d, out, queries)

        table = Table(title=f"Curves of {d.provenance}")
        table.add_column("Curve")
        table.add_column("Knots")
        table.add_column("Jumps")
        for curve in (curves.g_upper, curves.g_lower, curves.h):
            table.add_row(curve.name, str(len(curve.knots)), str(len(curve.jumps())))
        console.print(table)
        for (x, y), label in zip(queries, labels):
            console.print(f"({format_rational(x)}, {format_rational(y)}) -> {label.value}", highlight=False)
    except Exception as e:
        raise typer.Exit(_report_error(e))


@app.command()
def plot(
    path: str = typer.Argument(..., help="Diagonal file"),
    what: str = typer.Option("curves", "--what", help=f"One of {', '.join(PLOT_KINDS)}"),
    n: int = typer.Option(64, "--n", help="Cells per side for regions and heatmaps"),
    out: str = typer.Option("figure.svg", "--out", "-o", help="Output SVG"),
):
    """Draw a static SVG figure"""
    try:
        cmd, analyzer = _command("plot", path, n=n, out=out)
        written = analyzer.plot(analyzer.load(path), cmd.output_path, what, cmd.n)
        console.print(f"[green]✅ Wrote {written}[/green]")
    except Exception as e:
        raise typer.Exit(_report_error(e))


@app.command()
def sample(
    path: str = typer.Argument(..., help="Diagonal file"),
    count: Optional[int] = typer.Option(None, "--count", help="Number of samples"),
    seed: Optional[int] = typer.Option(None, "--seed", help="Random seed"),
    precision: Optional[int] = typer.Option(None, "--precision", help="Decimal places"),
    out: str = typer.Option("samples.csv", "--out", "-o", help="Output CSV"),
):
    """Draw samples from U_delta"""
    try:
        cmd, analyzer = _command("sample", path, count=count, seed=seed, precision=precision, out=out)
        analyzer.sample(analyzer.load(path), cmd.count, cmd.seed, cmd.output_path)
        console.print(f"[green]✅ Wrote {cmd.count} samples to {cmd.output_path}[/green]")
    except Exception as e:
        raise typer.Exit(_report_error(e))


@app.command()
def perturb(
    path: str = typer.Argument(..., help="Diagonal file with a slope-1 segment"),
    teeth: List[int] = typer.Option([10, 100], "--teeth", help="Numbers of zigzag teeth (repeatable)"),
    n: int = typer.Option(30, "--n", help="Grid size for the C-bar comparison"),
):
    """Zigzag perturbations: close diagonals, distant upper bounds"""
    try:
        cmd, analyzer = _command("perturb", path, n=n)
        rows = analyzer.perturb(analyzer.load(path), teeth, cmd.n)
        table = Table(title="Zigzag perturbations")
        table.add_column("teeth")
        table.add_column("sup |d_n - d|")
        table.add_column("C-bar = K")
        table.add_column("sup |C-bar_n - C-bar| on grid")
        for row in rows:
            table.add_row(str(row.teeth), format_rational(row.sup_distance),
                          str(row.cbar_equals_k).lower(), format_rational(row.cbar_gap))
        console.print(table)
    except Exception as e:
        raise typer.Exit(_report_error(e))


@app.command()
def setup():
    """Setup environment configuration"""
    try:
        from src.utils.config import save_env_template

        if save_env_template(".env"):
            console.print(Panel(
                "[green]✅ .env template created successfully![/green]\n\n"
                "Edit .env to change grid sizes, tolerance, precision, seed and logging.",
                title="Setup Complete",
                border_style="green"
            ))
        else:
            console.print(Panel(
                "[red]❌ Failed to create .env template[/red]",
                title="Error",
                border_style="red"
            ))
            raise typer.Exit(EXIT_IO)
    except typer.Exit:
        raise
    except Exception as e:
        raise typer.Exit(_report_error(e))


if __name__ == "__main__":
    app()
