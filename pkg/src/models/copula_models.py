"""
Data models for diagonal-copula analysis results
"""

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Dict, List, Optional, Tuple, Union

Number = Union[Fraction, float]


class RegionLabel(Enum):
    """Where a point of the unit square sits relative to g_U and g_L"""
    INTERIOR_DF = "InteriorDf"
    DX = "Dx"
    DY = "Dy"
    BOUNDARY_UPPER = "BoundaryUpper"
    BOUNDARY_LOWER = "BoundaryLower"
    DIAGONAL = "Diagonal"


@dataclass(frozen=True)
class CurveJump:
    """One-sided limits and value of a step curve at a discontinuity"""
    x: Fraction
    left: Fraction
    value: Fraction
    right: Fraction


@dataclass(frozen=True)
class OmegaComponent:
    """A connected piece of the witness set: a point (x_lo == x_hi) or an interval"""
    x_lo: Fraction
    x_hi: Fraction
    lo_closed: bool = True
    hi_closed: bool = True

    @property
    def is_point(self) -> bool:
        return self.x_lo == self.x_hi


@dataclass
class GridReport:
    """Result of checking the copula axioms on a square grid"""
    n: int
    points: int
    exact: bool
    grounded_ok: bool
    marginals_ok: bool
    lipschitz_ok: bool
    min_volume: Number
    worst_rectangle: Optional[Tuple[Number, Number, Number, Number]] = None
    is_copula_on_grid: bool = False


@dataclass
class RouteValues:
    """mu computed by each independent route"""
    maxmin: Fraction
    via_h: Fraction
    simple: Optional[Fraction] = None
    grid_oracle: Optional[float] = None
    oracle_n: Optional[int] = None


@dataclass
class AsymmetryReport:
    """Maximal asymmetry of copulas with a given diagonal"""
    mu: Fraction
    witness: Tuple[Fraction, Fraction]
    omega: List[OmegaComponent]
    route_values: RouteValues
    attained_by: str
    is_simple: bool = False

    @property
    def omega_points(self) -> List[Tuple[Fraction, Fraction]]:
        return [(c.x_lo, c.x_hi) for c in self.omega]


@dataclass
class AnalysisResult:
    """Everything the analyzer computes for one diagonal"""
    success: bool
    provenance: str = ""
    breakpoints: int = 0
    ordinal_points: List[Fraction] = field(default_factory=list)
    cbar_equals_k: Optional[bool] = None
    cbar_equals_a: Optional[bool] = None
    order_chain_ok: Optional[bool] = None
    asymmetry: Optional[AsymmetryReport] = None
    copula_checks: Dict[str, GridReport] = field(default_factory=dict)
    error: Optional[str] = None


@dataclass
class BoundsSummary:
    """Order chain and characterization checks for one diagonal"""
    n: int
    order_chain_ok: bool
    cbar_equals_k: bool
    cbar_equals_a: bool
    k_grid_gap: Fraction
    a_grid_gap: Fraction
    splice_inequality_ok: bool
    ordinal_points: List[Fraction] = field(default_factory=list)


@dataclass
class PerturbationRow:
    """One zigzag perturbation compared with its base diagonal"""
    teeth: int
    sup_distance: Fraction
    cbar_equals_k: bool
    cbar_gap: Fraction
