"""
CSV and text exports of grids, curves, witness sets, samples and reports
"""

import csv
import io
import logging
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from src.core.bounds import QuasiCopulaEvaluator
from src.core.errors import IoFailure
from src.core.geometry import CurveSet, StepCurve
from src.core.piecewise import format_rational, to_rational
from src.models.copula_models import AsymmetryReport, OmegaComponent

logger = logging.getLogger(__name__)

Value = Union[Fraction, float, int]


@dataclass
class ExportConfig:
    precision: int = 6
    exact: bool = False


class ExportService:
    """Writes every artifact the CLI produces; output bytes depend only on the inputs"""

    def __init__(self, config: Optional[ExportConfig] = None):
        self.config = config or ExportConfig()
        self.logger = logging.getLogger(__name__)

    def format_value(self, value: Value) -> str:
        if self.config.exact and isinstance(value, (Fraction, int)):
            return format_rational(Fraction(value))
        return f"{float(value):.{self.config.precision}f}"

    def format_mu(self, mu: Fraction) -> str:
        """'13/80 (0.1625)'"""
        return f"{format_rational(mu)} ({float(mu):.{self.config.precision}g})"

    # -- writers -------------------------------------------------------------

    def _write_rows(self, path: str, header: Sequence[str], rows: Iterable[Sequence[str]]) -> Path:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)
        return self.write_text(path, buffer.getvalue())

    def write_text(self, path: str, text: str) -> Path:
        target = Path(path)
        try:
            target.parent.mkdir(parents=True, exist_ok=True)
            target.write_text(text, encoding="utf-8")
        except OSError as e:
            self.logger.error(f"Error writing {target}: {e}")
            raise IoFailure(f"Cannot write {target}: {e}") from e
        self.logger.debug(f"Wrote {target}")
        return target

    def grid_rows(self, q: QuasiCopulaEvaluator, points: Sequence[Fraction]) -> List[Tuple[str, str, str]]:
        z = q.grid(points)
        fmt = self.format_value
        return [
            (fmt(x), fmt(y), fmt(z[i, j]))
            for i, x in enumerate(points)
            for j, y in enumerate(points)
        ]

    def write_grid_csv(self, q: QuasiCopulaEvaluator, points: Sequence[Fraction], path: str) -> Path:
        """Header x,y,value, row-major over the grid"""
        return self._write_rows(path, ("x", "y", "value"), self.grid_rows(q, points))

    def read_grid_csv(self, path: str) -> List[Tuple[Fraction, Fraction, Fraction]]:
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as e:
            raise IoFailure(f"Cannot read {path}: {e}") from e
        reader = csv.DictReader(io.StringIO(text))
        return [(to_rational(r["x"]), to_rational(r["y"]), to_rational(r["value"])) for r in reader]

    def curve_rows(self, curve: StepCurve) -> List[Tuple[str, str, str, str]]:
        fmt = self.format_value
        rows = []
        for a, b, slope, intercept in curve.pieces:
            start, end = slope * a + intercept, slope * b + intercept
            rows.append((fmt(a), fmt(start), fmt(start), curve.name))
            rows.append((fmt(b), fmt(end), fmt(end), curve.name))
        for jump in curve.jumps():
            low = min(jump.left, jump.value, jump.right)
            high = max(jump.left, jump.value, jump.right)
            rows.append((fmt(jump.x), fmt(low), fmt(high), f"{curve.name}_vertical"))
        return rows

    def write_curves_csv(self, curves: CurveSet, path: str) -> Path:
        """Header x,y_low,y_high,kind; one row per piece endpoint plus verticals"""
        rows = []
        rows += self.curve_rows(curves.g_upper)
        rows += self.curve_rows(curves.g_lower)
        h_rows = self.curve_rows(curves.h)
        rows += [r for r in h_rows if not r[3].endswith("_vertical")]
        fmt = self.format_value
        rows += [(fmt(x), fmt(lo), fmt(hi), "H_vertical") for x, lo, hi in curves.hset.verticals]
        return self._write_rows(path, ("x", "y_low", "y_high", "kind"), rows)

    def write_omega_csv(self, omega: Sequence[OmegaComponent], path: str) -> Path:
        fmt = self.format_value
        rows = [
            (fmt(c.x_lo), fmt(c.x_hi), str(c.lo_closed).lower(), str(c.hi_closed).lower())
            for c in omega
        ]
        return self._write_rows(path, ("x_lo", "x_hi", "lo_closed", "hi_closed"), rows)

    def write_samples_csv(self, samples: np.ndarray, path: str) -> Path:
        p = self.config.precision
        rows = ((f"{x:.{p}f}", f"{y:.{p}f}") for x, y in samples.tolist())
        return self._write_rows(path, ("x", "y"), rows)

    # -- reports -------------------------------------------------------------

    def format_report(self, report: AsymmetryReport) -> str:
        """Structured text, one 'key: value' per line"""
        fmt = format_rational
        routes = report.route_values
        lines = [
            f"mu: {fmt(report.mu)}",
            f"mu_decimal: {float(report.mu):.{self.config.precision}g}",
            f"witness_x: {fmt(report.witness[0])}",
            f"witness_y: {fmt(report.witness[1])}",
            f"omega_components: {len(report.omega)}",
        ]
        for c in report.omega:
            if c.is_point:
                lines.append(f"omega: {fmt(c.x_lo)}")
            else:
                left = "[" if c.lo_closed else "("
                right = "]" if c.hi_closed else ")"
                lines.append(f"omega: {left}{fmt(c.x_lo)}, {fmt(c.x_hi)}{right}")
        lines += [
            f"route_maxmin: {fmt(routes.maxmin)}",
            f"route_via_h: {fmt(routes.via_h)}",
            f"route_simple: {fmt(routes.simple) if routes.simple is not None else 'n/a'}",
            f"route_grid_oracle: {routes.grid_oracle if routes.grid_oracle is not None else 'n/a'}",
            f"oracle_n: {routes.oracle_n if routes.oracle_n else 'n/a'}",
            f"is_simple: {str(report.is_simple).lower()}",
            f"attained_by: {report.attained_by}",
        ]
        return "\n".join(lines) + "\n"

    def write_report(self, report: AsymmetryReport, path: str) -> Path:
        return self.write_text(path, self.format_report(report))
