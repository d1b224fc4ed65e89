"""
Exact piecewise-linear functions on [0, 1]

Every function the engine manipulates (delta, delta-hat, the total-variation
prefix, f1, f2) is stored as a PiecewiseLinear with Fraction breakpoints, so
values such as 13/80 are reproduced exactly.
"""

from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Callable, Iterable, List, Optional, Sequence, Tuple, Union

from src.core.errors import MalformedPiecewise, OutOfDomain

Rational = Fraction
RationalLike = Union[Fraction, int, str, float]

ZERO = Fraction(0)
ONE = Fraction(1)
HALF = Fraction(1, 2)


def to_rational(value: RationalLike) -> Fraction:
    """Convert a token or number to an exact Fraction.

    Strings may be "p/q" or a decimal literal; decimals convert exactly
    ("0.1625" -> 13/80). Floats convert to their exact binary value.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as e:
            raise MalformedPiecewise(f"Not a rational number: {value!r}") from e
    return Fraction(value)


def check_unit(x: Fraction, what: str = "x") -> Fraction:
    """Raise OutOfDomain unless 0 <= x <= 1"""
    if x < 0 or x > 1:
        raise OutOfDomain(f"{what}={x} lies outside [0, 1]")
    return x


def format_rational(value: Fraction) -> str:
    """Format as "p/q", or "p" for integers"""
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


@dataclass(frozen=True)
class PiecewiseLinear:
    """Continuous piecewise-linear function on [0, 1] given by its breakpoints"""
    xs: Tuple[Fraction, ...]
    ys: Tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.xs) != len(self.ys):
            raise MalformedPiecewise("xs and ys differ in length")
        if len(self.xs) < 2:
            raise MalformedPiecewise("At least two breakpoints are required")
        if self.xs[0] != 0 or self.xs[-1] != 1:
            raise MalformedPiecewise(
                f"Breakpoints must start at 0 and end at 1, got {self.xs[0]} .. {self.xs[-1]}"
            )
        for a, b in zip(self.xs, self.xs[1:]):
            if not a < b:
                raise MalformedPiecewise(f"Breakpoints not strictly increasing at {a}, {b}")

    @classmethod
    def from_points(cls, points: Iterable[Tuple[RationalLike, RationalLike]]) -> "PiecewiseLinear":
        pts = [(to_rational(x), to_rational(y)) for x, y in points]
        return cls(tuple(p[0] for p in pts), tuple(p[1] for p in pts))

    @classmethod
    def from_function(cls, fn: Callable[[Fraction], Fraction], grid: Sequence[Fraction]) -> "PiecewiseLinear":
        """Interpolate fn at the given grid (a chordal discretization)"""
        xs = tuple(sorted(set(to_rational(x) for x in grid)))
        return cls(xs, tuple(to_rational(fn(x)) for x in xs))

    @classmethod
    def identity(cls) -> "PiecewiseLinear":
        return cls((ZERO, ONE), (ZERO, ONE))

    @classmethod
    def constant(cls, value: RationalLike = 0) -> "PiecewiseLinear":
        v = to_rational(value)
        return cls((ZERO, ONE), (v, v))

    # -- structure -----------------------------------------------------------

    @property
    def points(self) -> List[Tuple[Fraction, Fraction]]:
        return list(zip(self.xs, self.ys))

    @property
    def segment_count(self) -> int:
        return len(self.xs) - 1

    @cached_property
    def slopes(self) -> Tuple[Fraction, ...]:
        return tuple(
            (y1 - y0) / (x1 - x0)
            for x0, x1, y0, y1 in zip(self.xs, self.xs[1:], self.ys, self.ys[1:])
        )

    def segment_index(self, x: Fraction) -> int:
        """Index i of the segment [xs[i], xs[i+1]) containing x (last segment for x = 1)"""
        i = bisect_right(self.xs, x) - 1
        return min(max(i, 0), len(self.xs) - 2)

    # -- evaluation ----------------------------------------------------------

    def __call__(self, x: RationalLike) -> Fraction:
        x = check_unit(to_rational(x))
        i = self.segment_index(x)
        x0, y0 = self.xs[i], self.ys[i]
        if x == x0:
            return y0
        return y0 + self.slopes[i] * (x - x0)

    def slope_right(self, x: Fraction) -> Fraction:
        """Slope of the segment starting at or containing x (left slope at x = 1)"""
        return self.slopes[self.segment_index(x)]

    def slope_left(self, x: Fraction) -> Fraction:
        """Slope of the segment ending at or containing x (right slope at x = 0)"""
        i = bisect_left(self.xs, x) - 1
        return self.slopes[min(max(i, 0), len(self.slopes) - 1)]

    # -- algebra -------------------------------------------------------------

    def refine(self, grid: Iterable[Fraction]) -> "PiecewiseLinear":
        """Same function with extra breakpoints inserted"""
        xs = sorted(set(self.xs).union(to_rational(g) for g in grid))
        return PiecewiseLinear(tuple(xs), tuple(self(x) for x in xs))

    def combine(self, other: "PiecewiseLinear", op: Callable[[Fraction, Fraction], Fraction]) -> "PiecewiseLinear":
        """Pointwise op on the union grid; exact whenever op is affine in each argument"""
        xs = sorted(set(self.xs).union(other.xs))
        return PiecewiseLinear(tuple(xs), tuple(op(self(x), other(x)) for x in xs)).simplified()

    def __add__(self, other: "PiecewiseLinear") -> "PiecewiseLinear":
        return self.combine(other, lambda a, b: a + b)

    def __sub__(self, other: "PiecewiseLinear") -> "PiecewiseLinear":
        return self.combine(other, lambda a, b: a - b)

    def scaled(self, factor: RationalLike) -> "PiecewiseLinear":
        c = to_rational(factor)
        return PiecewiseLinear(self.xs, tuple(c * y for y in self.ys))

    def simplified(self) -> "PiecewiseLinear":
        """Drop interior breakpoints where neighbouring slopes agree"""
        keep_x, keep_y = [self.xs[0]], [self.ys[0]]
        for i in range(1, len(self.xs) - 1):
            if self.slopes[i - 1] != self.slopes[i]:
                keep_x.append(self.xs[i])
                keep_y.append(self.ys[i])
        keep_x.append(self.xs[-1])
        keep_y.append(self.ys[-1])
        return PiecewiseLinear(tuple(keep_x), tuple(keep_y))

    def sup_distance(self, other: "PiecewiseLinear") -> Fraction:
        """Exact supremum norm of the difference"""
        xs = set(self.xs).union(other.xs)
        return max(abs(self(x) - other(x)) for x in xs)

    # -- monotone inverses ---------------------------------------------------

    def is_nondecreasing(self) -> bool:
        return all(s >= 0 for s in self.slopes)

    def first_at_least(self, c: Fraction) -> Fraction:
        """min{x : f(x) >= c} for non-decreasing f, clamped to [0, 1]"""
        i = bisect_left(self.ys, c)
        if i == 0:
            return self.xs[0]
        if i == len(self.ys):
            return self.xs[-1]
        return self.xs[i - 1] + (c - self.ys[i - 1]) / self.slopes[i - 1]

    def last_at_most(self, c: Fraction) -> Fraction:
        """max{x : f(x) <= c} for non-decreasing f, clamped to [0, 1]"""
        j = bisect_right(self.ys, c) - 1
        if j < 0:
            return self.xs[0]
        if j == len(self.ys) - 1:
            return self.xs[-1]
        return self.xs[j] + (c - self.ys[j]) / self.slopes[j]

    def preimages(self, levels: Iterable[Fraction]) -> List[Fraction]:
        """All x where f(x) equals one of the levels, including the ends of flat runs.

        Works for any (not necessarily monotone) function; cost is proportional to
        segments times log(levels) plus the output size.
        """
        ordered = sorted(set(levels))
        found = set()
        for i, slope in enumerate(self.slopes):
            x0, x1, y0, y1 = self.xs[i], self.xs[i + 1], self.ys[i], self.ys[i + 1]
            if slope == 0:
                k = bisect_left(ordered, y0)
                if k < len(ordered) and ordered[k] == y0:
                    found.add(x0)
                    found.add(x1)
                continue
            lo, hi = (y0, y1) if y0 < y1 else (y1, y0)
            for level in ordered[bisect_left(ordered, lo):bisect_right(ordered, hi)]:
                found.add(x0 + (level - y0) / slope)
        return sorted(found)


class RangeExtremum:
    """Sparse table answering min/max over index ranges of a value list.

    Ties resolve to the smallest index, which gives the deterministic
    smallest-argpoint rule of the interval extremum queries.
    """

    def __init__(self, values: Sequence[Fraction], which: str = "min"):
        if which not in ("min", "max"):
            raise ValueError(f"which must be 'min' or 'max', got {which!r}")
        self.values = list(values)
        self.which = which
        n = len(self.values)
        self._table: List[List[int]] = [list(range(n))]
        span = 1
        while 2 * span <= n:
            prev = self._table[-1]
            self._table.append([self._pick(prev[i], prev[i + span]) for i in range(n - 2 * span + 1)])
            span *= 2

    def _pick(self, i: int, j: int) -> int:
        a, b = self.values[i], self.values[j]
        if self.which == "min":
            return j if b < a else i
        return j if b > a else i

    def query(self, lo: int, hi: int) -> Optional[int]:
        """Index of the extremum over values[lo..hi] inclusive, or None if empty"""
        if lo > hi:
            return None
        level = (hi - lo + 1).bit_length() - 1
        row = self._table[level]
        return self._pick(row[lo], row[hi - (1 << level) + 1])

    def first_below(self, lo: int, threshold: Fraction) -> Optional[int]:
        """Smallest index j >= lo with values[j] < threshold (min tables only)"""
        n = len(self.values)
        if lo >= n:
            return None
        best = self.query(lo, n - 1)
        if self.values[best] >= threshold:
            return None
        left, right = lo, n - 1
        while left < right:
            mid = (left + right) // 2
            if self.values[self.query(lo, mid)] < threshold:
                right = mid
            else:
                left = mid + 1
        return left
