"""
Plane geometry of a diagonal: the curves g_U, g_L and h, the set H and region labels

Every curve is piecewise affine on finitely many knots. The knots are found
from the breakpoint data, the exact curve value is computed pointwise, and
the pieces are recovered by fitting each open interval between knots.
"""

import logging
from bisect import bisect_left, bisect_right
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from src.core.bounds import FSplit, build_fsplit, u_delta
from src.core.diagonal import DeltaHat, DiagonalSection, delta_hat
from src.core.errors import RouteMismatch
from src.core.piecewise import ONE, ZERO, PiecewiseLinear, RationalLike, check_unit, to_rational
from src.models.copula_models import CurveJump, RegionLabel

logger = logging.getLogger(__name__)

Line = Tuple[Fraction, Fraction]


@dataclass(frozen=True)
class StepCurve:
    """Piecewise-affine curve on [0, 1] that may jump at its knots.

    values[i] is the curve value at knots[i]; lines[i] = (slope, intercept)
    describes it on the open interval (knots[i], knots[i + 1]).
    """
    name: str
    knots: Tuple[Fraction, ...]
    values: Tuple[Fraction, ...]
    lines: Tuple[Line, ...]
    continuity: str = "right"

    @classmethod
    def from_pointwise(
        cls,
        name: str,
        fn: Callable[[Fraction], Fraction],
        knots: Iterable[Fraction],
        continuity: str = "right",
    ) -> "StepCurve":
        """Fit fn between consecutive knots; fails if fn is not affine on some interval"""
        ks = tuple(sorted(set(knots) | {ZERO, ONE}))
        values = tuple(fn(k) for k in ks)
        lines = []
        for a, b in zip(ks, ks[1:]):
            p, q = a + (b - a) / 3, a + 2 * (b - a) / 3
            fp, fq = fn(p), fn(q)
            slope = (fq - fp) / (q - p)
            intercept = fp - slope * p
            mid = (a + b) / 2
            if fn(mid) != slope * mid + intercept:
                raise RouteMismatch(f"{name} is not affine on ({a}, {b}); knot set incomplete")
            lines.append((slope, intercept))
        return cls(name, ks, values, tuple(lines), continuity).merged()

    # -- evaluation ----------------------------------------------------------

    def _line(self, i: int, x: Fraction) -> Fraction:
        slope, intercept = self.lines[i]
        return slope * x + intercept

    def _knot_index(self, x: Fraction) -> Optional[int]:
        i = bisect_left(self.knots, x)
        if i < len(self.knots) and self.knots[i] == x:
            return i
        return None

    def __call__(self, x: RationalLike) -> Fraction:
        x = check_unit(to_rational(x))
        i = self._knot_index(x)
        if i is not None:
            return self.values[i]
        return self._line(bisect_right(self.knots, x) - 1, x)

    def left_limit(self, x: Fraction) -> Fraction:
        if x == 0:
            return self.values[0]
        return self._line(bisect_left(self.knots, x) - 1, x)

    def right_limit(self, x: Fraction) -> Fraction:
        if x == 1:
            return self.values[-1]
        return self._line(bisect_right(self.knots, x) - 1, x)

    @property
    def pieces(self) -> List[Tuple[Fraction, Fraction, Fraction, Fraction]]:
        """(a, b, slope, intercept) for every open interval"""
        return [(a, b, s, c) for (a, b), (s, c) in zip(zip(self.knots, self.knots[1:]), self.lines)]

    def jumps(self) -> List[CurveJump]:
        found = []
        for k, v in zip(self.knots, self.values):
            left, right = self.left_limit(k), self.right_limit(k)
            if left != v or right != v:
                found.append(CurveJump(x=k, left=left, value=v, right=right))
        return found

    def merged(self) -> "StepCurve":
        """Drop knots where the curve continues along the same line"""
        keep = [0]
        for i in range(1, len(self.knots) - 1):
            same_line = self.lines[i - 1] == self.lines[i]
            if not (same_line and self.values[i] == self._line(i, self.knots[i])):
                keep.append(i)
        keep.append(len(self.knots) - 1)
        lines = []
        for a, b in zip(keep, keep[1:]):
            lines.append(self.lines[a])
        return StepCurve(
            self.name,
            tuple(self.knots[i] for i in keep),
            tuple(self.values[i] for i in keep),
            tuple(lines),
            self.continuity,
        )

    def evaluate_array(self, xs: np.ndarray) -> np.ndarray:
        """Float evaluation at many points; knots hit exactly take the knot value"""
        knots = np.array([float(k) for k in self.knots])
        slopes = np.array([float(s) for s, _ in self.lines])
        intercepts = np.array([float(c) for _, c in self.lines])
        values = np.array([float(v) for v in self.values])

        idx = np.clip(np.searchsorted(knots, xs, side="right") - 1, 0, len(self.lines) - 1)
        out = slopes[idx] * xs + intercepts[idx]
        at = np.clip(np.searchsorted(knots, xs, side="left"), 0, len(knots) - 1)
        on_knot = knots[at] == xs
        out[on_knot] = values[at[on_knot]]
        return out


@dataclass(frozen=True)
class HSet:
    """Graph of h with the vertical segments filled in at its jumps"""
    curve: StepCurve
    verticals: Tuple[Tuple[Fraction, Fraction, Fraction], ...]
    _by_x: Dict[Fraction, Tuple[Fraction, Fraction]] = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        self._by_x.update({x: (lo, hi) for x, lo, hi in self.verticals})

    def vertical_at(self, x: Fraction) -> Optional[Tuple[Fraction, Fraction]]:
        return self._by_x.get(x)

    def contains(self, x: RationalLike, y: RationalLike) -> bool:
        x, y = to_rational(x), to_rational(y)
        if y == self.curve(x):
            return True
        span = self._by_x.get(x)
        return span is not None and span[0] <= y <= span[1]


@dataclass(frozen=True)
class CurveSet:
    """g_U, g_L, h and H for one diagonal"""
    g_upper: StepCurve
    g_lower: StepCurve
    h: StepCurve
    hset: HSet

    @property
    def jump_set(self) -> List[Fraction]:
        return [x for x, _, _ in self.hset.verticals]


# -- h ----------------------------------------------------------------------

def h_at(dh: DeltaHat, x: Fraction) -> Fraction:
    """Largest y >= x with delta-hat >= delta-hat(x) on all of [x, y]"""
    if x == 1:
        return ONE
    xs, ys, slopes = dh.xs, dh.ys, dh.pl.slopes
    i = dh.pl.segment_index(x)
    if slopes[i] < 0:
        return x
    level = dh(x)
    j = dh.min_table.first_below(i + 1, level)
    if j is None:
        return ONE
    return xs[j - 1] + (level - ys[j - 1]) / slopes[j - 1]


def h_delta(dh: DeltaHat) -> StepCurve:
    knots = set(dh.xs).union(dh.pl.preimages(dh.ys))
    curve = StepCurve.from_pointwise("h", lambda x: h_at(dh, x), knots, continuity="upper")
    logger.debug(f"h has {len(curve.knots)} knots")
    return curve


def h_jumps(curve: StepCurve) -> List[Tuple[Fraction, Fraction, Fraction]]:
    """(x, liminf of h at x, h(x)) for every discontinuity of h"""
    return [(j.x, min(j.left, j.right), j.value) for j in curve.jumps()]


def build_hset(dh: DeltaHat, curve: Optional[StepCurve] = None) -> HSet:
    curve = curve or h_delta(dh)
    return HSet(curve=curve, verticals=tuple(h_jumps(curve)))


# -- g_U and g_L ----------------------------------------------------------------

def _identity_crossings(fn: Callable[[Fraction], Fraction], knots: Sequence[Fraction]) -> List[Fraction]:
    """Points strictly between consecutive knots where the affine fn meets y = x"""
    found = []
    for a, b in zip(knots, knots[1:]):
        p, q = a + (b - a) / 3, a + 2 * (b - a) / 3
        slope = (fn(q) - fn(p)) / (q - p)
        if slope == 1:
            continue
        intercept = fn(p) - slope * p
        t = intercept / (1 - slope)
        if a < t < b:
            found.append(t)
    return found


class _Boundaries:
    """Pointwise formulas for g_U and g_L.

    Above the diagonal the strict region at x is {y : f2(y) < x - f1(x)}; its
    closure reaches the last level point of f2 when x - f1(x) keeps rising to
    the right of x, otherwise the first. Below the diagonal the same holds
    with f1(x) < y - f2(y), approached from the left.
    """

    def __init__(self, fs: FSplit):
        self.fs = fs
        xs = fs.f1.xs
        self.phi = PiecewiseLinear(xs, tuple(x - v for x, v in zip(xs, fs.f1.ys)))
        self.psi = PiecewiseLinear(xs, tuple(y - v for y, v in zip(xs, fs.f2.ys)))

    def upper_reach(self, x: Fraction) -> Fraction:
        level = self.phi(x)
        if self.phi.slope_right(x) > 0:
            return self.fs.f2.last_at_most(level)
        return self.fs.f2.first_at_least(level)

    def lower_reach(self, x: Fraction) -> Fraction:
        level = self.fs.f1(x)
        if self.fs.f1.slope_left(x) > 0:
            return self.psi.first_at_least(level)
        return self.psi.last_at_most(level)

    def g_upper(self, x: Fraction) -> Fraction:
        if x == 1:
            return ONE
        return max(x, self.upper_reach(x))

    def g_lower(self, x: Fraction) -> Fraction:
        if x == 0:
            return ZERO
        return min(x, self.lower_reach(x))


def g_upper_curve(fs: FSplit, d: DiagonalSection) -> StepCurve:
    """Exact g_U, right-continuous"""
    b = _Boundaries(fs)
    knots = sorted(set(d.breakpoints).union(b.phi.preimages(fs.f2.ys)) | {ZERO, ONE})
    knots += _identity_crossings(b.upper_reach, knots)
    return StepCurve.from_pointwise("g_U", b.g_upper, knots, continuity="right")


def g_lower_curve(fs: FSplit, d: DiagonalSection) -> StepCurve:
    """Exact g_L, left-continuous"""
    b = _Boundaries(fs)
    knots = sorted(set(d.breakpoints).union(fs.f1.preimages(b.psi.ys)) | {ZERO, ONE})
    knots += _identity_crossings(b.lower_reach, knots)
    return StepCurve.from_pointwise("g_L", b.g_lower, knots, continuity="left")


def g_curves(fs: FSplit, d: DiagonalSection) -> Tuple[StepCurve, StepCurve]:
    """Exact g_U (right-continuous) and g_L (left-continuous)"""
    g_u, g_l = g_upper_curve(fs, d), g_lower_curve(fs, d)
    logger.debug(f"g_U has {len(g_u.knots)} knots, g_L has {len(g_l.knots)} knots")
    return g_u, g_l


def build_curves(d: DiagonalSection, dh: Optional[DeltaHat] = None, fs: Optional[FSplit] = None) -> CurveSet:
    dh = dh or delta_hat(d)
    fs = fs or build_fsplit(d, dh)
    g_u, g_l = g_curves(fs, d)
    h = h_delta(dh)
    return CurveSet(g_upper=g_u, g_lower=g_l, h=h, hset=build_hset(dh, h))


# -- regions ------------------------------------------------------------------

def classify_point(fs: FSplit, g_u: StepCurve, g_l: StepCurve, x: RationalLike, y: RationalLike) -> RegionLabel:
    x = check_unit(to_rational(x), "x")
    y = check_unit(to_rational(y), "y")
    if x == y:
        return RegionLabel.DIAGONAL

    if x < y:
        top = g_u(x)
        if y > top:
            label = RegionLabel.DX
        elif y >= g_u.left_limit(x):
            label = RegionLabel.BOUNDARY_UPPER
        else:
            label = RegionLabel.INTERIOR_DF
    else:
        bottom = g_l(x)
        if y < bottom:
            label = RegionLabel.DY
        elif y <= g_l.right_limit(x):
            label = RegionLabel.BOUNDARY_LOWER
        else:
            label = RegionLabel.INTERIOR_DF

    if label is RegionLabel.INTERIOR_DF and fs.f1(x) + fs.f2(y) > min(x, y):
        raise RouteMismatch(f"({x}, {y}) labelled interior but f exceeds min(x, y)")
    return label


def region_volume_check(
    d: DiagonalSection, n: int, curves: Optional[CurveSet] = None
) -> Tuple[int, List[Tuple[Fraction, Fraction, Fraction, Fraction]]]:
    """U-volume of every grid cell that lies inside one closed region.

    Returns the number of such cells and the cells whose volume is not zero.
    """
    dh = delta_hat(d)
    fs = build_fsplit(d, dh)
    curves = curves or build_curves(d, dh, fs)
    g_u, g_l = curves.g_upper, curves.g_lower
    points = sorted({Fraction(k, n) for k in range(n + 1)}.union(d.breakpoints))
    z = u_delta(d, dh, fs).grid(points)

    checked, offending = 0, []
    for i in range(len(points) - 1):
        a, b = points[i], points[i + 1]
        for j in range(len(points) - 1):
            c, e = points[j], points[j + 1]
            in_dx = c >= g_u(b)
            in_dy = e <= g_l(a)
            in_df = e <= g_u(a) and c >= g_l(b)
            if not (in_dx or in_dy or in_df):
                continue
            checked += 1
            volume = z[i + 1, j + 1] - z[i, j + 1] - z[i + 1, j] + z[i, j]
            if volume != 0:
                offending.append((a, b, c, e))
    logger.debug(f"Region volume check: {checked} cells inside a region, {len(offending)} with mass")
    return checked, offending
