"""
Static SVG figures of diagonals, curves, regions, samples and heatmaps
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

import numpy as np

from src.core.bounds import FSplit, QuasiCopulaEvaluator
from src.core.errors import IoFailure
from src.core.geometry import HSet, StepCurve, classify_point
from src.core.piecewise import PiecewiseLinear
from src.models.copula_models import RegionLabel

logger = logging.getLogger(__name__)

PREAMBLE = """\
<?xml version="1.0" standalone="no"?>
<!DOCTYPE svg PUBLIC "-//W3C//DTD SVG 1.1//EN"
"http://www.w3.org/Graphics/SVG/1.1/DTD/svg11.dtd">
<svg width="%(size)d" height="%(size)d" viewBox="0 0 %(size)d %(size)d" version="1.1"
    xmlns="http://www.w3.org/2000/svg">
<rect x="0" y="0" width="%(size)d" height="%(size)d" style="fill:#ffffff"/>
"""

POSTAMBLE = "</svg>\n"

REGION_COLORS = {
    RegionLabel.INTERIOR_DF: "#cfe2f3",
    RegionLabel.DX: "#fce5cd",
    RegionLabel.DY: "#d9ead3",
    RegionLabel.BOUNDARY_UPPER: "#666666",
    RegionLabel.BOUNDARY_LOWER: "#666666",
    RegionLabel.DIAGONAL: "#999999",
}


@dataclass
class SvgConfig:
    size: int = 480
    margin: int = 40
    precision: int = 3


@dataclass
class Layer:
    """One drawable layer; commands are SVG elements in unit-square coordinates"""
    name: str
    commands: List[str] = field(default_factory=list)


class SvgService:
    """Draws the unit square with y pointing up"""

    def __init__(self, config: Optional[SvgConfig] = None):
        self.config = config or SvgConfig()
        self.logger = logging.getLogger(__name__)

    # -- coordinates -----------------------------------------------------------

    @property
    def _scale(self) -> float:
        return self.config.size - 2 * self.config.margin

    def _px(self, x) -> str:
        return f"{self.config.margin + float(x) * self._scale:.{self.config.precision}f}"

    def _py(self, y) -> str:
        return f"{self.config.size - self.config.margin - float(y) * self._scale:.{self.config.precision}f}"

    def _polyline(self, points: Sequence[Tuple], color: str, width: float = 1.5, dashed: bool = False) -> str:
        coords = " ".join(f"{self._px(x)},{self._py(y)}" for x, y in points)
        dash = ";stroke-dasharray:4,3" if dashed else ""
        return f'<polyline points="{coords}" style="fill:none;stroke:{color};stroke-width:{width}{dash}"/>'

    # -- layers ------------------------------------------------------------------

    def frame_layer(self) -> Layer:
        corners = [(0, 0), (1, 0), (1, 1), (0, 1), (0, 0)]
        return Layer("frame", [
            self._polyline(corners, "#000000", 1.0),
            self._polyline([(0, 0), (1, 1)], "#bbbbbb", 0.75, dashed=True),
        ])

    def function_layer(self, pl: PiecewiseLinear, color: str = "#1f77b4", name: str = "function") -> Layer:
        return Layer(name, [self._polyline(pl.points, color)])

    def curve_layer(self, curve: StepCurve, color: str = "#d62728", dashed: bool = False) -> Layer:
        commands = []
        for a, b, slope, intercept in curve.pieces:
            commands.append(self._polyline([(a, slope * a + intercept), (b, slope * b + intercept)], color, dashed=dashed))
        for jump in curve.jumps():
            low = min(jump.left, jump.value, jump.right)
            high = max(jump.left, jump.value, jump.right)
            commands.append(self._polyline([(jump.x, low), (jump.x, high)], color, dashed=True))
        return Layer(curve.name, commands)

    def hset_layer(self, hset: HSet, color: str = "#000000") -> Layer:
        commands = []
        for a, b, slope, intercept in hset.curve.pieces:
            commands.append(self._polyline([(a, slope * a + intercept), (b, slope * b + intercept)], color))
        for x, low, high in hset.verticals:
            commands.append(self._polyline([(x, low), (x, high)], color))
        return Layer("H", commands)

    def region_layer(self, fs: FSplit, g_u: StepCurve, g_l: StepCurve, n: int = 64) -> Layer:
        """Cells colored by the region of their center"""
        cell = 1.0 / n
        width = f"{cell * self._scale:.{self.config.precision}f}"
        commands = []
        for i in range(n):
            for j in range(n):
                cx, cy = Fraction(2 * i + 1, 2 * n), Fraction(2 * j + 1, 2 * n)
                label = classify_point(fs, g_u, g_l, cx, cy)
                commands.append(
                    f'<rect x="{self._px(i * cell)}" y="{self._py((j + 1) * cell)}" '
                    f'width="{width}" height="{width}" style="fill:{REGION_COLORS[label]};stroke:none"/>'
                )
        return Layer("regions", commands)

    def scatter_layer(self, samples: np.ndarray, color: str = "#1f77b4", limit: int = 5000) -> Layer:
        commands = [
            f'<circle cx="{self._px(x)}" cy="{self._py(y)}" r="1" style="fill:{color};stroke:none"/>'
            for x, y in samples[:limit].tolist()
        ]
        return Layer("scatter", commands)

    def heatmap_layer(self, q: QuasiCopulaEvaluator, n: int = 40) -> Layer:
        """Grayscale of q at cell centers, darker for larger values"""
        cell = 1.0 / n
        width = f"{cell * self._scale:.{self.config.precision}f}"
        centers = [Fraction(2 * k + 1, 2 * n) for k in range(n)]
        z = q.grid(centers)
        commands = []
        for i in range(n):
            for j in range(n):
                level = 255 - int(round(float(z[i, j]) * 255))
                commands.append(
                    f'<rect x="{self._px(i * cell)}" y="{self._py((j + 1) * cell)}" width="{width}" '
                    f'height="{width}" style="fill:rgb({level},{level},{level});stroke:none"/>'
                )
        return Layer(f"heatmap_{q.tag}", commands)

    # -- output ------------------------------------------------------------------

    def render(self, layers: Sequence[Layer]) -> str:
        if not layers:
            raise ValueError("At least one layer is required")
        parts = [PREAMBLE % {"size": self.config.size}]
        for layer in layers:
            parts.append(f'<g id="{layer.name}">\n')
            parts.extend(c + "\n" for c in layer.commands)
            parts.append("</g>\n")
        parts.append(POSTAMBLE)
        return "".join(parts)

    def render_svg(self, layers: Sequence[Layer], path: str) -> Path:
        text = self.render(layers)
        target = Path(path)
        try:
            target.parent.mkdir(parents=True, exist_ok=True)
            target.write_text(text, encoding="utf-8")
        except OSError as e:
            self.logger.error(f"Error writing SVG {target}: {e}")
            raise IoFailure(f"Cannot write {target}: {e}") from e
        self.logger.debug(f"Wrote {len(layers)} layers to {target}")
        return target
