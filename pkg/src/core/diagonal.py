"""
Diagonal sections, their companion delta-hat and interval queries on it
"""

import logging
from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Callable, Iterable, List, Tuple

from src.core.errors import (
    EndpointMismatch,
    NoSlopeOneSegment,
    SlopeOutOfRange,
    ViolatesBound,
)
from src.core.piecewise import (
    ONE,
    ZERO,
    PiecewiseLinear,
    RangeExtremum,
    RationalLike,
    check_unit,
    to_rational,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DiagonalSection:
    """A validated diagonal section: delta(x) <= x, slopes in [0, 2], delta(0)=0, delta(1)=1"""
    pl: PiecewiseLinear
    provenance: str = ""

    def __call__(self, x: RationalLike) -> Fraction:
        return self.pl(x)

    @property
    def breakpoints(self) -> Tuple[Fraction, ...]:
        return self.pl.xs

    def is_identity(self) -> bool:
        return all(x == y for x, y in zip(self.pl.xs, self.pl.ys))


@dataclass(frozen=True)
class DeltaHat:
    """delta-hat = x - delta together with its total-variation prefix on the same grid"""
    pl: PiecewiseLinear
    tv_prefix: PiecewiseLinear

    def __call__(self, x: RationalLike) -> Fraction:
        return self.pl(x)

    @property
    def xs(self) -> Tuple[Fraction, ...]:
        return self.pl.xs

    @property
    def ys(self) -> Tuple[Fraction, ...]:
        return self.pl.ys

    @cached_property
    def min_table(self) -> RangeExtremum:
        return RangeExtremum(self.pl.ys, "min")

    @cached_property
    def max_table(self) -> RangeExtremum:
        return RangeExtremum(self.pl.ys, "max")

    def is_zero(self) -> bool:
        return all(v == 0 for v in self.pl.ys)


def validate_diagonal(pl: PiecewiseLinear, provenance: str = "") -> DiagonalSection:
    """Check the three diagonal conditions exactly at breakpoints and segments"""
    if pl.ys[0] != 0 or pl.ys[-1] != 1:
        raise EndpointMismatch(f"delta(0)={pl.ys[0]} and delta(1)={pl.ys[-1]}; expected 0 and 1")

    for x, y in zip(pl.xs, pl.ys):
        if y > x:
            raise ViolatesBound(f"delta({x}) = {y} exceeds {x}")

    for i, slope in enumerate(pl.slopes):
        if slope < 0 or slope > 2:
            raise SlopeOutOfRange(
                f"Segment [{pl.xs[i]}, {pl.xs[i + 1]}] has slope {slope}, outside [0, 2]"
            )

    logger.debug(f"Validated diagonal '{provenance}' with {len(pl.xs)} breakpoints")
    return DiagonalSection(pl=pl, provenance=provenance)


def delta_hat(d: DiagonalSection) -> DeltaHat:
    """Build delta-hat and the prefix map x -> TV of delta-hat over [0, x]"""
    xs = d.pl.xs
    hat_values = tuple(x - y for x, y in zip(xs, d.pl.ys))
    hat = PiecewiseLinear(xs, hat_values)

    running = ZERO
    prefix = [ZERO]
    for i, slope in enumerate(hat.slopes):
        running += abs(slope) * (xs[i + 1] - xs[i])
        prefix.append(running)

    return DeltaHat(pl=hat, tv_prefix=PiecewiseLinear(xs, tuple(prefix)))


def total_variation(dh: DeltaHat, x: RationalLike, y: RationalLike) -> Fraction:
    """Signed total variation of delta-hat from x to y (negative when y < x)"""
    x = check_unit(to_rational(x), "x")
    y = check_unit(to_rational(y), "y")
    return dh.tv_prefix(y) - dh.tv_prefix(x)


def extremum_on_interval(
    dh: DeltaHat, x: RationalLike, y: RationalLike, which: str = "min"
) -> Tuple[Fraction, Fraction]:
    """Exact min or max of delta-hat over [x, y] and the smallest point attaining it"""
    if which not in ("min", "max"):
        raise ValueError(f"which must be 'min' or 'max', got {which!r}")
    x = check_unit(to_rational(x), "x")
    y = check_unit(to_rational(y), "y")
    if y < x:
        x, y = y, x

    better = (lambda a, b: a < b) if which == "min" else (lambda a, b: a > b)
    table = dh.min_table if which == "min" else dh.max_table

    best_value, best_point = dh(x), x
    lo = bisect_right(dh.xs, x)
    hi = bisect_left(dh.xs, y) - 1
    idx = table.query(lo, hi)
    if idx is not None and better(dh.ys[idx], best_value):
        best_value, best_point = dh.ys[idx], dh.xs[idx]
    end_value = dh(y)
    if better(end_value, best_value):
        best_value, best_point = end_value, y
    return best_value, best_point


def zigzag_perturb(d: DiagonalSection, n: int) -> DiagonalSection:
    """Subtract n slope-one teeth from the first run of slope-1 segments of delta.

    Each tooth rises with slope 1 and falls with slope -1, so the perturbed
    diagonal has slopes 0 and 2 on that run and stays within (b - a) / (2n)
    of the original.
    """
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")

    slopes = d.pl.slopes
    start = next((i for i, s in enumerate(slopes) if s == 1), None)
    if start is None:
        raise NoSlopeOneSegment(f"Diagonal '{d.provenance}' has no segment of slope 1")
    end = start
    while end + 1 < len(slopes) and slopes[end + 1] == 1:
        end += 1
    a, b = d.pl.xs[start], d.pl.xs[end + 1]

    width = (b - a) / n
    teeth: List[Tuple[Fraction, Fraction]] = []
    for k in range(n):
        left = a + k * width
        teeth.append((left, ZERO))
        teeth.append((left + width / 2, width / 2))
    teeth.append((b, ZERO))

    outside = [(x, y) for x, y in d.pl.points if x < a or x > b]
    zone = [(x, d(x) - phi) for x, phi in teeth]
    points = sorted(outside + zone)

    logger.debug(f"Zigzag perturbation with {n} teeth on [{a}, {b}]")
    return validate_diagonal(
        PiecewiseLinear.from_points(points), provenance=f"{d.provenance} zigzag n={n}"
    )


def identity_diagonal() -> DiagonalSection:
    """The diagonal of the upper Frechet bound M"""
    return DiagonalSection(PiecewiseLinear.identity(), provenance="identity")


def chordal_diagonal(fn: Callable[[Fraction], Fraction], n: int, provenance: str = "") -> DiagonalSection:
    """Interpolate a smooth diagonal at k/n for k = 0..n and validate the result"""
    grid = [Fraction(k, n) for k in range(n + 1)]
    return validate_diagonal(PiecewiseLinear.from_function(fn, grid), provenance)


def diagonal_from_hat(points: Iterable[Tuple[RationalLike, RationalLike]], provenance: str = "") -> DiagonalSection:
    """Build delta = x - delta-hat from delta-hat breakpoints"""
    pts = [(to_rational(x), to_rational(v)) for x, v in points]
    return validate_diagonal(
        PiecewiseLinear.from_points((x, x - v) for x, v in pts), provenance
    )


def ordinal_points(d: DiagonalSection) -> List[Fraction]:
    """Interior breakpoints where delta(t) = t; any copula with this diagonal is an ordinal sum there"""
    return [x for x, y in d.pl.points if ZERO < x < ONE and x == y]
