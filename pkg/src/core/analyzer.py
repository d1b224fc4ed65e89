"""
Orchestrator tying the engine to files, exports and figures
"""

import logging
from fractions import Fraction
from pathlib import Path
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from src.core.asymmetry import run_mu_algorithm
from src.core.bounds import ConstructionKind, build_family, build_fsplit, cbar, evaluator_for
from src.core.diagonal import DiagonalSection, delta_hat, ordinal_points, zigzag_perturb
from src.core.errors import DiagonalCopulaError, RouteMismatch
from src.core.geometry import CurveSet, build_curves, classify_point
from src.core.sampling import sample_u_delta
from src.core.verify import (
    cbar_a_grid_gap,
    cbar_equals_A,
    cbar_equals_A_valleys,
    cbar_equals_K,
    cbar_k_grid_gap,
    check_splice_inequality,
    copula_suite,
    grid_points,
    grid_sup_distance,
    order_chain_check,
)
from src.models.copula_models import (
    AnalysisResult,
    AsymmetryReport,
    BoundsSummary,
    PerturbationRow,
    RegionLabel,
)
from src.services.diag_file_service import DiagFileService
from src.services.export_service import ExportService
from src.services.svg_service import Layer, SvgService
from src.utils.config import Config
from src.utils.logger import log_function_call

logger = logging.getLogger(__name__)

PLOT_KINDS = ("curves", "regions", "scatter", "heatmap")


class DiagonalAnalyzer:
    """Main entry point for analyses of one diagonal section"""

    def __init__(self, config: Config):
        self.config = config
        self.files = DiagFileService(config.files)
        self.exporter = ExportService(config.export)
        self.svg = SvgService(config.svg)
        self.logger = logging.getLogger(__name__)

    @property
    def workers(self) -> Optional[int]:
        return self.config.engine.workers or None

    @log_function_call
    def load(self, name: str) -> DiagonalSection:
        diagonal = self.files.read(name)
        self.logger.info(f"Loaded diagonal '{diagonal.provenance}' ({len(diagonal.breakpoints)} breakpoints)")
        return diagonal

    def evaluate(self, d: DiagonalSection, kind: ConstructionKind, x: Fraction, y: Fraction) -> Fraction:
        return evaluator_for(kind, d)(x, y)

    @log_function_call
    def export_grid(self, d: DiagonalSection, kind: ConstructionKind, n: int, out: str, exact: bool) -> Path:
        q = evaluator_for(kind, d)
        points = grid_points(n, d, exact)
        path = self.exporter.write_grid_csv(q, points, out)
        self.logger.info(f"Exported {kind.value} on {len(points)}x{len(points)} points to {path}")
        return path

    @log_function_call
    def bounds_summary(self, d: DiagonalSection, n: int) -> BoundsSummary:
        dh = delta_hat(d)
        equals_a = cbar_equals_A(d)
        if equals_a != cbar_equals_A_valleys(d):
            raise RouteMismatch("Segment-pair and valley-flat tests for C-bar = A disagree")

        summary = BoundsSummary(
            n=n,
            order_chain_ok=order_chain_check(build_family(d, dh), n, exact=True),
            cbar_equals_k=cbar_equals_K(d),
            cbar_equals_a=equals_a,
            k_grid_gap=cbar_k_grid_gap(d, n),
            a_grid_gap=cbar_a_grid_gap(d, n),
            splice_inequality_ok=check_splice_inequality(d, n)[0],
            ordinal_points=ordinal_points(d),
        )
        if summary.cbar_equals_k != (summary.k_grid_gap == 0):
            raise RouteMismatch(f"C-bar = K predicate disagrees with grid gap {summary.k_grid_gap}")
        if summary.cbar_equals_a != (summary.a_grid_gap == 0):
            raise RouteMismatch(f"C-bar = A predicate disagrees with grid gap {summary.a_grid_gap}")
        self.logger.info(
            f"Bounds for '{d.provenance}': chain={summary.order_chain_ok}, "
            f"C=K {summary.cbar_equals_k}, C=A {summary.cbar_equals_a}"
        )
        return summary

    @log_function_call
    def asymmetry(self, d: DiagonalSection, oracle_n: Optional[int] = None) -> AsymmetryReport:
        engine = self.config.engine
        report = run_mu_algorithm(
            d,
            oracle_n=engine.oracle_n if oracle_n is None else oracle_n,
            tolerance=engine.tolerance,
            workers=self.workers,
        )
        self.logger.info(
            f"mu = {report.mu} via max-min and H routes"
            + (", simple route agrees" if report.route_values.simple is not None else "")
            + (f", grid oracle {report.route_values.grid_oracle}" if report.route_values.grid_oracle is not None else "")
        )
        return report

    @log_function_call
    def regions(
        self, d: DiagonalSection, out: Optional[str] = None, queries: Sequence[Tuple[Fraction, Fraction]] = ()
    ) -> Tuple[CurveSet, List[RegionLabel]]:
        dh = delta_hat(d)
        fs = build_fsplit(d, dh)
        curves = build_curves(d, dh, fs)
        labels = [classify_point(fs, curves.g_upper, curves.g_lower, x, y) for x, y in queries]
        if out:
            self.exporter.write_curves_csv(curves, out)
            self.logger.info(f"Wrote curves of '{d.provenance}' to {out}")
        return curves, labels

    @log_function_call
    def plot(self, d: DiagonalSection, out: str, what: str = "curves", n: int = 64) -> Path:
        if what not in PLOT_KINDS:
            raise ValueError(f"Unknown plot {what!r}; choose from {', '.join(PLOT_KINDS)}")
        dh = delta_hat(d)
        fs = build_fsplit(d, dh)
        layers: List[Layer] = []

        if what == "heatmap":
            layers.append(self.svg.heatmap_layer(cbar(d, dh), n))
        elif what == "regions":
            curves = build_curves(d, dh, fs)
            layers.append(self.svg.region_layer(fs, curves.g_upper, curves.g_lower, n))
            layers.append(self.svg.curve_layer(curves.g_upper, "#000000"))
            layers.append(self.svg.curve_layer(curves.g_lower, "#000000"))
        elif what == "scatter":
            curves = build_curves(d, dh, fs)
            engine = self.config.engine
            samples = sample_u_delta(d, min(engine.sample_count, 5000), engine.seed, curves)
            layers.append(self.svg.scatter_layer(samples))
        else:
            curves = build_curves(d, dh, fs)
            layers.append(self.svg.function_layer(dh.pl, "#1f77b4", "delta_hat"))
            layers.append(self.svg.hset_layer(curves.hset))
            layers.append(self.svg.curve_layer(curves.g_upper, "#d62728", dashed=True))

        layers.insert(0, self.svg.frame_layer())
        path = self.svg.render_svg(layers, out)
        self.logger.info(f"Wrote {what} figure to {path}")
        return path

    @log_function_call
    def sample(self, d: DiagonalSection, count: int, seed: int, out: Optional[str] = None) -> np.ndarray:
        samples = sample_u_delta(d, count, seed)
        if out:
            self.exporter.write_samples_csv(samples, out)
            self.logger.info(f"Wrote {count} samples to {out}")
        return samples

    @log_function_call
    def perturb(self, d: DiagonalSection, teeth: Iterable[int], n: int) -> List[PerturbationRow]:
        """Compare zigzag perturbations of d with d itself"""
        base_cbar = cbar(d)
        rows = []
        for k in teeth:
            dn = zigzag_perturb(d, k)
            gap = grid_sup_distance(cbar(dn), base_cbar, n, extra=d.breakpoints)
            rows.append(PerturbationRow(
                teeth=k,
                sup_distance=dn.pl.sup_distance(d.pl),
                cbar_equals_k=cbar_equals_K(dn),
                cbar_gap=gap,
            ))
            self.logger.info(f"n={k}: |delta_n - delta| = {rows[-1].sup_distance}, C-bar gap = {gap}")
        return rows

    @log_function_call
    def analyze(self, d: DiagonalSection, n: int = 32) -> AnalysisResult:
        """Run every check on d; engine failures are reported, not raised"""
        try:
            summary = self.bounds_summary(d, n)
            report = self.asymmetry(d, oracle_n=None)
            checks = copula_suite(d, n, exact=True, workers=self.workers)
            return AnalysisResult(
                success=True,
                provenance=d.provenance,
                breakpoints=len(d.breakpoints),
                ordinal_points=summary.ordinal_points,
                cbar_equals_k=summary.cbar_equals_k,
                cbar_equals_a=summary.cbar_equals_a,
                order_chain_ok=summary.order_chain_ok,
                asymmetry=report,
                copula_checks=checks,
            )
        except DiagonalCopulaError as e:
            self.logger.error(f"Error analyzing '{d.provenance}': {e}")
            return AnalysisResult(success=False, provenance=d.provenance, error=str(e))
