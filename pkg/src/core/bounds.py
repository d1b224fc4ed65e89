"""
Copulas and quasi-copulas determined by a diagonal section

All constructions are exposed through QuasiCopulaEvaluator, so the
verification code and the CLI treat U, C-bar, Bertino, A, K, splices and
transposes the same way.
"""

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from src.core.diagonal import (
    DeltaHat,
    DiagonalSection,
    delta_hat,
    extremum_on_interval,
    total_variation,
)
from src.core.errors import DiagonalMismatch
from src.core.piecewise import HALF, PiecewiseLinear, RationalLike, check_unit, to_rational

logger = logging.getLogger(__name__)


class ConstructionKind(Enum):
    """Named constructions; values double as CLI --kind tokens"""
    U = "U"
    CBAR = "CBAR"
    BERTINO = "B"
    A = "A"
    K = "K"
    SPLICE = "SPLICE"
    TRANSPOSE = "TRANSPOSE"


@dataclass(frozen=True)
class FSplit:
    """f(x, y) = f1(x) + f2(y), both increasing and 1-Lipschitz"""
    f1: PiecewiseLinear
    f2: PiecewiseLinear


def build_fsplit(d: DiagonalSection, dh: Optional[DeltaHat] = None) -> FSplit:
    """f1 = (TV - dhat) / 2 and f2 = id - (dhat + TV) / 2 on the breakpoint grid of delta"""
    dh = dh or delta_hat(d)
    xs = dh.xs
    tv = dh.tv_prefix.ys
    hat = dh.ys
    f1 = PiecewiseLinear(xs, tuple((t - h) * HALF for t, h in zip(tv, hat)))
    f2 = PiecewiseLinear(xs, tuple(x - (h + t) * HALF for x, h, t in zip(xs, hat, tv)))
    return FSplit(f1=f1, f2=f2)


def f_delta(fs: FSplit, x: RationalLike, y: RationalLike) -> Fraction:
    x = check_unit(to_rational(x), "x")
    y = check_unit(to_rational(y), "y")
    return fs.f1(x) + fs.f2(y)


def f_delta_tv(dh: DeltaHat, x: RationalLike, y: RationalLike) -> Fraction:
    """The same function written with the signed total variation from x to y"""
    x = check_unit(to_rational(x), "x")
    y = check_unit(to_rational(y), "y")
    return y - (dh(x) + dh(y) + total_variation(dh, x, y)) * HALF


def cbar_tv_formula(dh: DeltaHat, x: RationalLike, y: RationalLike) -> Fraction:
    """min{x, y, max{x,y} - (dhat(x) + dhat(y) + TV over [x^y, xvy]) / 2}"""
    x = check_unit(to_rational(x), "x")
    y = check_unit(to_rational(y), "y")
    lo, hi = min(x, y), max(x, y)
    return min(lo, hi - (dh(x) + dh(y) + total_variation(dh, lo, hi)) * HALF)


# numerators stay below this bound times a small constant, so int64 cannot overflow
INT64_DENOMINATOR_LIMIT = 2 ** 56


@dataclass(frozen=True)
class ScaledGrid:
    """Grid values num / denom with integer numerators.

    num is int64 when denom is small enough and a Python-int object array
    otherwise; either way the arithmetic is exact.
    """
    num: np.ndarray
    denom: int

    def to_fractions(self) -> np.ndarray:
        rows = [[Fraction(int(v), self.denom) for v in row] for row in self.num.tolist()]
        out = np.empty(self.num.shape, dtype=object)
        for i, row in enumerate(rows):
            out[i, :] = row
        return out

    def as_float(self) -> np.ndarray:
        return self.num.astype(float) / float(self.denom)

    def rescaled(self, denom: int) -> "ScaledGrid":
        if denom == self.denom:
            return self
        if denom % self.denom:
            raise ValueError(f"{denom} is not a multiple of {self.denom}")
        factor = denom // self.denom
        return ScaledGrid(_as_lattice_dtype(self.num, denom) * factor, denom)

    def transposed(self) -> "ScaledGrid":
        return ScaledGrid(self.num.T, self.denom)


def _as_lattice_dtype(values: np.ndarray, denom: int) -> np.ndarray:
    if denom < INT64_DENOMINATOR_LIMIT:
        return values.astype(np.int64)
    return values.astype(object)


def scale_to(denom: int, values: Sequence[Fraction]) -> np.ndarray:
    """Numerators of values over denom, which must be a common denominator"""
    nums = [v.numerator * (denom // v.denominator) for v in values]
    return np.array(nums, dtype=np.int64 if denom < INT64_DENOMINATOR_LIMIT else object)


def on_lattice(*vectors: Sequence[Fraction]) -> Tuple[int, List[np.ndarray]]:
    """Smallest common denominator of all vectors and their numerators over it"""
    denom = math.lcm(*(Fraction(v).denominator for vec in vectors for v in vec))
    return denom, [scale_to(denom, [Fraction(v) for v in vec]) for vec in vectors]


def common_denominator(grids: Sequence[ScaledGrid]) -> List[ScaledGrid]:
    denom = math.lcm(*(g.denom for g in grids))
    return [g.rescaled(denom) for g in grids]


GridFn = Callable[[Sequence[Fraction]], ScaledGrid]


@dataclass(frozen=True)
class QuasiCopulaEvaluator:
    """Uniform evaluation interface over every construction.

    grid_fn, when present, evaluates the whole square grid points x points at
    once (points sorted ascending); otherwise evaluation falls back to fn.
    """
    kind: ConstructionKind
    diagonal: DiagonalSection
    fn: Callable[[Fraction, Fraction], Fraction] = field(repr=False)
    grid_fn: Optional[GridFn] = field(default=None, repr=False)
    parts: Tuple["QuasiCopulaEvaluator", ...] = field(default=(), repr=False)

    def __call__(self, x: RationalLike, y: RationalLike) -> Fraction:
        x = check_unit(to_rational(x), "x")
        y = check_unit(to_rational(y), "y")
        return self.fn(x, y)

    @property
    def tag(self) -> str:
        if self.kind is ConstructionKind.SPLICE:
            return f"{self.parts[0].tag}|{self.parts[1].tag}"
        if self.kind is ConstructionKind.TRANSPOSE:
            return f"{self.parts[0].tag}^t"
        return self.kind.value

    def scaled_grid(self, points: Sequence[Fraction]) -> ScaledGrid:
        """Integer form of the grid; what the verification scans run on"""
        if self.grid_fn is not None:
            return self.grid_fn(points)
        rows = [[self.fn(x, y) for y in points] for x in points]
        denom, nums = on_lattice(*rows)
        return ScaledGrid(np.vstack(nums), denom)

    def grid(self, points: Sequence[Fraction]) -> np.ndarray:
        """Matrix Z with Z[i, j] = q(points[i], points[j]) as Fractions"""
        return self.scaled_grid(points).to_fractions()


# -- grid helpers -------------------------------------------------------------

def _column(values) -> np.ndarray:
    return np.array(list(values), dtype=object)


def _gap_extrema(dh: DeltaHat, points: Sequence[Fraction], which: str) -> List[Fraction]:
    """Extremum of delta-hat over each gap [points[k-1], points[k]], which may hide breakpoints"""
    return [dh(points[0])] + [
        extremum_on_interval(dh, points[k - 1], points[k], which)[0] for k in range(1, len(points))
    ]


def _interval_extremum_matrix(at_points: np.ndarray, gaps: np.ndarray, which: str) -> np.ndarray:
    """M[i, j] = extremum of delta-hat over the interval between points[i] and points[j]"""
    n = len(at_points)
    ufunc = np.minimum if which == "min" else np.maximum
    m = np.empty((n, n), dtype=at_points.dtype)
    for i in range(n):
        m[i, i] = at_points[i]
        if i + 1 < n:
            row = ufunc.accumulate(gaps[i + 1:])
            m[i, i + 1:] = row
            m[i + 1:, i] = row
    return m


# -- constructions ------------------------------------------------------------

def u_delta(d: DiagonalSection, dh: Optional[DeltaHat] = None, fs: Optional[FSplit] = None) -> QuasiCopulaEvaluator:
    """U(x, y) = min{x, y, f1(x) + f2(y)}"""
    dh = dh or delta_hat(d)
    fs = fs or build_fsplit(d, dh)

    def value(x: Fraction, y: Fraction) -> Fraction:
        return min(x, y, fs.f1(x) + fs.f2(y))

    def grid(points: Sequence[Fraction]) -> ScaledGrid:
        denom, (p, f1, f2) = on_lattice(points, [fs.f1(x) for x in points], [fs.f2(y) for y in points])
        return ScaledGrid(np.minimum(np.minimum.outer(p, p), np.add.outer(f1, f2)), denom)

    return QuasiCopulaEvaluator(ConstructionKind.U, d, value, grid)


def cbar(d: DiagonalSection, dh: Optional[DeltaHat] = None, fs: Optional[FSplit] = None) -> QuasiCopulaEvaluator:
    """C-bar(x, y) = max{U(x, y), U(y, x)}, the pointwise upper bound"""
    u = u_delta(d, dh, fs)

    def value(x: Fraction, y: Fraction) -> Fraction:
        return max(u.fn(x, y), u.fn(y, x))

    def grid(points: Sequence[Fraction]) -> ScaledGrid:
        z = u.scaled_grid(points)
        return ScaledGrid(np.maximum(z.num, z.num.T), z.denom)

    return QuasiCopulaEvaluator(ConstructionKind.CBAR, d, value, grid, parts=(u,))


def cbar_formula_grid(dh: DeltaHat, points: Sequence[Fraction]) -> np.ndarray:
    """C-bar on a grid through the total-variation formula"""
    p = _column(points)
    hat = _column(dh(x) for x in points)
    tv = _column(dh.tv_prefix(x) for x in points)
    spread = np.abs(np.subtract.outer(tv, tv))
    return np.minimum(
        np.minimum.outer(p, p),
        np.maximum.outer(p, p) - (np.add.outer(hat, hat) + spread) * HALF,
    )


def bertino(d: DiagonalSection, dh: Optional[DeltaHat] = None) -> QuasiCopulaEvaluator:
    """B(x, y) = min{x, y} - min of delta-hat between x and y"""
    dh = dh or delta_hat(d)

    def value(x: Fraction, y: Fraction) -> Fraction:
        return min(x, y) - extremum_on_interval(dh, min(x, y), max(x, y), "min")[0]

    def grid(points: Sequence[Fraction]) -> ScaledGrid:
        denom, (p, at, gaps) = on_lattice(points, [dh(x) for x in points], _gap_extrema(dh, points, "min"))
        return ScaledGrid(np.minimum.outer(p, p) - _interval_extremum_matrix(at, gaps, "min"), denom)

    return QuasiCopulaEvaluator(ConstructionKind.BERTINO, d, value, grid)


def a_quasi(d: DiagonalSection, dh: Optional[DeltaHat] = None) -> QuasiCopulaEvaluator:
    """A(x, y) = min{x, y, max{x, y} - max of delta-hat between x and y}"""
    dh = dh or delta_hat(d)

    def value(x: Fraction, y: Fraction) -> Fraction:
        lo, hi = min(x, y), max(x, y)
        return min(lo, hi - extremum_on_interval(dh, lo, hi, "max")[0])

    def grid(points: Sequence[Fraction]) -> ScaledGrid:
        denom, (p, at, gaps) = on_lattice(points, [dh(x) for x in points], _gap_extrema(dh, points, "max"))
        return ScaledGrid(
            np.minimum(
                np.minimum.outer(p, p),
                np.maximum.outer(p, p) - _interval_extremum_matrix(at, gaps, "max"),
            ),
            denom,
        )

    return QuasiCopulaEvaluator(ConstructionKind.A, d, value, grid)


def k_copula(d: DiagonalSection) -> QuasiCopulaEvaluator:
    """K(x, y) = min{x, y, (delta(x) + delta(y)) / 2}"""

    def value(x: Fraction, y: Fraction) -> Fraction:
        return min(x, y, (d(x) + d(y)) * HALF)

    def grid(points: Sequence[Fraction]) -> ScaledGrid:
        denom, (p, diag) = on_lattice(points, [d(x) for x in points])
        # over 2 * denom the halving stays integral
        return ScaledGrid(np.minimum(2 * np.minimum.outer(p, p), np.add.outer(diag, diag)), 2 * denom)

    return QuasiCopulaEvaluator(ConstructionKind.K, d, value, grid)


def splice(q1: QuasiCopulaEvaluator, q2: QuasiCopulaEvaluator) -> QuasiCopulaEvaluator:
    """q1 on and above the main diagonal (x <= y), q2 below it"""
    knots = sorted(set(q1.diagonal.breakpoints).union(q2.diagonal.breakpoints))
    for t in knots:
        if q1.diagonal(t) != q2.diagonal(t):
            raise DiagonalMismatch(
                f"Cannot splice {q1.tag} and {q2.tag}: diagonals differ at {t} "
                f"({q1.diagonal(t)} vs {q2.diagonal(t)})"
            )

    def value(x: Fraction, y: Fraction) -> Fraction:
        return q1.fn(x, y) if x <= y else q2.fn(x, y)

    def grid(points: Sequence[Fraction]) -> ScaledGrid:
        above, below = common_denominator([q1.scaled_grid(points), q2.scaled_grid(points)])
        upper = np.triu(np.ones((len(points), len(points)), dtype=bool))
        return ScaledGrid(np.where(upper, above.num, below.num), above.denom)

    return QuasiCopulaEvaluator(ConstructionKind.SPLICE, q1.diagonal, value, grid, parts=(q1, q2))


def transpose(q: QuasiCopulaEvaluator) -> QuasiCopulaEvaluator:
    """q^t(x, y) = q(y, x)"""

    def value(x: Fraction, y: Fraction) -> Fraction:
        return q.fn(y, x)

    def grid(points: Sequence[Fraction]) -> ScaledGrid:
        return q.scaled_grid(points).transposed()

    return QuasiCopulaEvaluator(ConstructionKind.TRANSPOSE, q.diagonal, value, grid, parts=(q,))


@dataclass(frozen=True)
class BoundFamily:
    """The five constructions sharing one diagonal"""
    a: QuasiCopulaEvaluator
    k: QuasiCopulaEvaluator
    cbar: QuasiCopulaEvaluator
    bertino: QuasiCopulaEvaluator
    u: QuasiCopulaEvaluator


def build_family(d: DiagonalSection, dh: Optional[DeltaHat] = None) -> BoundFamily:
    dh = dh or delta_hat(d)
    fs = build_fsplit(d, dh)
    logger.debug(f"Building bound family for '{d.provenance}'")
    return BoundFamily(
        a=a_quasi(d, dh),
        k=k_copula(d),
        cbar=cbar(d, dh, fs),
        bertino=bertino(d, dh),
        u=u_delta(d, dh, fs),
    )


def evaluator_for(kind: ConstructionKind, d: DiagonalSection, dh: Optional[DeltaHat] = None) -> QuasiCopulaEvaluator:
    """Evaluator for a CLI --kind token; SPLICE means C-bar above and Bertino below"""
    dh = dh or delta_hat(d)
    if kind is ConstructionKind.U:
        return u_delta(d, dh)
    if kind is ConstructionKind.CBAR:
        return cbar(d, dh)
    if kind is ConstructionKind.BERTINO:
        return bertino(d, dh)
    if kind is ConstructionKind.A:
        return a_quasi(d, dh)
    if kind is ConstructionKind.K:
        return k_copula(d)
    if kind is ConstructionKind.SPLICE:
        return splice(cbar(d, dh), bertino(d, dh))
    raise ValueError(f"No standalone evaluator for kind {kind.value}")
