"""
Reading and writing ".diag" diagonal files
"""

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Tuple

from src.core.diagonal import DiagonalSection, validate_diagonal
from src.core.errors import IoFailure, MalformedPiecewise
from src.core.piecewise import PiecewiseLinear, format_rational, to_rational

logger = logging.getLogger(__name__)


@dataclass
class DiagFileConfig:
    directory: str = "diagonals"
    encoding: str = "utf-8"


class DiagFileService:
    """One breakpoint per line as "x value"; '#' starts a comment line"""

    def __init__(self, config: Optional[DiagFileConfig] = None):
        self.config = config or DiagFileConfig()
        self.logger = logging.getLogger(__name__)

    def resolve(self, name: str) -> Path:
        """Use the path as given if it exists, else look in the bundled directory"""
        path = Path(name)
        if path.exists():
            return path
        bundled = Path(self.config.directory) / name
        if bundled.exists():
            return bundled
        return path

    def parse(self, text: str, provenance: str = "") -> DiagonalSection:
        points: List[Tuple] = []
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            tokens = line.split()
            if len(tokens) != 2:
                raise MalformedPiecewise(f"{provenance}:{lineno}: expected 'x value', got {raw!r}")
            points.append((to_rational(tokens[0]), to_rational(tokens[1])))

        if len(points) < 2:
            raise MalformedPiecewise(f"{provenance}: need at least two breakpoints")
        for (x0, _), (x1, _) in zip(points, points[1:]):
            if not x0 < x1:
                raise MalformedPiecewise(f"{provenance}: breakpoints not sorted at x={x1}")

        return validate_diagonal(PiecewiseLinear.from_points(points), provenance=provenance)

    def read(self, name: str) -> DiagonalSection:
        path = self.resolve(name)
        try:
            text = path.read_text(encoding=self.config.encoding)
        except OSError as e:
            self.logger.error(f"Error reading diagonal file {path}: {e}")
            raise IoFailure(f"Cannot read {path}: {e}") from e
        diagonal = self.parse(text, provenance=path.stem)
        self.logger.debug(f"Loaded {path} with {len(diagonal.breakpoints)} breakpoints")
        return diagonal

    def write(self, d: DiagonalSection, path: str, comment: Optional[str] = None) -> Path:
        lines = []
        if comment:
            lines.extend(f"# {c}" for c in comment.splitlines())
        lines.extend(f"{format_rational(x)} {format_rational(y)}" for x, y in d.pl.points)
        target = Path(path)
        try:
            target.parent.mkdir(parents=True, exist_ok=True)
            target.write_text("\n".join(lines) + "\n", encoding=self.config.encoding)
        except OSError as e:
            self.logger.error(f"Error writing diagonal file {target}: {e}")
            raise IoFailure(f"Cannot write {target}: {e}") from e
        return target
