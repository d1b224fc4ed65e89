"""
Brute-force oracles: copula axioms on grids, grid asymmetry, the order chain
and the two characterizations of when C-bar equals K or A

Exact grid scans run on integer numerators over one common denominator and
are split into row blocks scanned by a thread pool.
"""

import logging
import math
import os
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from typing import Callable, Iterable, List, Optional, Tuple, TypeVar

import numpy as np

from src.core.bounds import (
    BoundFamily,
    QuasiCopulaEvaluator,
    ScaledGrid,
    a_quasi,
    bertino,
    build_family,
    cbar,
    common_denominator,
    k_copula,
    scale_to,
    u_delta,
)
from src.core.diagonal import DeltaHat, DiagonalSection, delta_hat, extremum_on_interval
from src.models.copula_models import GridReport

logger = logging.getLogger(__name__)

Point = Tuple[Fraction, Fraction]
T = TypeVar("T")

DEFAULT_WORKERS = min(8, os.cpu_count() or 1)


def uniform_grid(n: int) -> List[Fraction]:
    """{k/n : k = 0..n}"""
    if n < 1:
        raise ValueError(f"Grid size must be positive, got {n}")
    return [Fraction(k, n) for k in range(n + 1)]


def grid_points(n: int, d: Optional[DiagonalSection] = None, exact: bool = True,
                extra: Iterable[Fraction] = ()) -> List[Fraction]:
    """Uniform grid, refined by the breakpoints of d in exact mode"""
    points = set(uniform_grid(n)).union(Fraction(e) for e in extra)
    if exact and d is not None:
        points.update(d.breakpoints)
    return sorted(points)


def row_blocks(rows: int, workers: int) -> List[Tuple[int, int]]:
    """Split range(rows) into at most `workers` contiguous [lo, hi) blocks"""
    workers = max(1, min(workers, rows))
    size = -(-rows // workers)
    return [(lo, min(lo + size, rows)) for lo in range(0, rows, size)]


def map_rows(scan: Callable[[int, int], T], rows: int, workers: Optional[int] = None) -> List[T]:
    """scan(lo, hi) over row blocks, results in block order"""
    blocks = row_blocks(rows, workers or DEFAULT_WORKERS)
    if len(blocks) <= 1:
        return [scan(lo, hi) for lo, hi in blocks]
    with ThreadPoolExecutor(max_workers=len(blocks)) as pool:
        return list(pool.map(lambda block: scan(*block), blocks))


def _values(z: ScaledGrid, exact: bool) -> np.ndarray:
    return z.num if exact else z.as_float()


def _unscale(value, z: ScaledGrid, exact: bool):
    return Fraction(int(value), z.denom) if exact else float(value)


def check_copula_grid(
    q: QuasiCopulaEvaluator, n: int, exact: bool = True, tolerance: float = 1e-12,
    workers: Optional[int] = None,
) -> GridReport:
    """Groundedness, marginals, 1-Lipschitz monotonicity and adjacent-cell volumes"""
    pts = grid_points(n, q.diagonal, exact)
    z = q.scaled_grid(pts)
    values = _values(z, exact)
    if exact:
        p, tol = scale_to(z.denom, pts), 0
    else:
        p, tol = np.array([float(x) for x in pts]), tolerance

    grounded_ok = bool(np.all(np.abs(values[0, :]) <= tol) and np.all(np.abs(values[:, 0]) <= tol))
    marginals_ok = bool(
        np.all(np.abs(values[-1, :] - p) <= tol) and np.all(np.abs(values[:, -1] - p) <= tol)
    )

    step = np.diff(p)

    def scan(lo: int, hi: int):
        block = values[lo:hi + 1]
        dx = np.diff(block, axis=0)
        dy = np.diff(block, axis=1)
        lipschitz = bool(
            np.all(dx >= -tol) and np.all(dy >= -tol)
            and np.all(dx <= step[lo:hi, None] + tol) and np.all(dy <= step[None, :] + tol)
        )
        volumes = block[1:, 1:] - block[:-1, 1:] - block[1:, :-1] + block[:-1, :-1]
        k = int(np.argmin(volumes))
        i, j = divmod(k, volumes.shape[1])
        return lipschitz, volumes[i, j], lo + i, j

    results = map_rows(scan, len(pts) - 1, workers)
    lipschitz_ok = all(r[0] for r in results)
    # first block holding the smallest volume keeps the row-major first minimum
    _, raw, i, j = min(results, key=lambda r: r[1])
    min_volume = _unscale(raw, z, exact)
    worst = (pts[i], pts[i + 1], pts[j], pts[j + 1]) if min_volume < 0 else None

    is_copula = grounded_ok and marginals_ok and lipschitz_ok and min_volume >= -tol
    logger.debug(
        f"Grid check of {q.tag} on {len(pts)} points: min volume {min_volume}, copula={is_copula}"
    )
    return GridReport(
        n=n,
        points=len(pts),
        exact=exact,
        grounded_ok=grounded_ok,
        marginals_ok=marginals_ok,
        lipschitz_ok=lipschitz_ok,
        min_volume=min_volume,
        worst_rectangle=worst,
        is_copula_on_grid=bool(is_copula),
    )


def asymmetry_grid(q: QuasiCopulaEvaluator, n: int, exact: bool = True) -> Tuple[Fraction, Point]:
    """max |q(x, y) - q(y, x)| over grid pairs, at the lexicographically smallest pair"""
    pts = grid_points(n, q.diagonal, exact)
    z = q.scaled_grid(pts)
    values = _values(z, exact)
    gap = np.abs(values - values.T)
    i, j = divmod(int(np.argmax(gap)), gap.shape[1])
    return _unscale(gap[i, j], z, exact), (pts[i], pts[j])


def order_chain_check(family: BoundFamily, n: int, exact: bool = True, tolerance: float = 1e-12) -> bool:
    """max(x+y-1, 0) <= B <= K <= C-bar <= A <= min(x, y) at every grid point"""
    pts = grid_points(n, family.u.diagonal, exact)
    grids = common_denominator([
        family.bertino.scaled_grid(pts),
        family.k.scaled_grid(pts),
        family.cbar.scaled_grid(pts),
        family.a.scaled_grid(pts),
    ])
    denom = grids[0].denom
    p = scale_to(denom, pts)
    lower = np.maximum(np.add.outer(p, p) - denom, 0)
    upper = np.minimum.outer(p, p)
    chain = [lower] + [g.num for g in grids] + [upper]
    tol = 0
    if not exact:
        chain = [c.astype(float) / float(denom) for c in chain]
        tol = tolerance
    for low, high in zip(chain, chain[1:]):
        if not np.all(low <= high + tol):
            return False
    return True


# -- C-bar = K ------------------------------------------------------------------

def _k_offending_segments(dh: DeltaHat) -> List[int]:
    """Segments touching {delta < x} whose delta slope is neither 0 nor 2"""
    found = []
    for i, slope in enumerate(dh.pl.slopes):
        if (dh.ys[i] > 0 or dh.ys[i + 1] > 0) and abs(slope) != 1:
            found.append(i)
    return found


def cbar_equals_K(d: DiagonalSection) -> bool:
    """delta has slope 0 or 2 wherever delta(x) < x"""
    return not _k_offending_segments(delta_hat(d))


def cbar_k_witness(d: DiagonalSection) -> Optional[Point]:
    """A point where C-bar exceeds K, or None when they coincide"""
    dh = delta_hat(d)
    offending = _k_offending_segments(dh)
    if not offending:
        return None
    i = offending[0]
    a, b = dh.xs[i], dh.xs[i + 1]
    c = (a + b) / 2
    eps = min(dh(c) / 4, (b - a) / 4)
    return c - eps, c + eps


# -- C-bar = A ------------------------------------------------------------------

def cbar_equals_A(d: DiagonalSection) -> bool:
    """y - x >= max(dhat(x), dhat(y)) whenever dhat falls at x and rises at y > x.

    Both sides are affine on a pair of segments, so checking the four corners
    of every (falling, rising) segment pair is exact.
    """
    dh = delta_hat(d)
    xs, ys, slopes = dh.xs, dh.ys, dh.pl.slopes
    falling = [i for i, s in enumerate(slopes) if s < 0]
    rising = [j for j, s in enumerate(slopes) if s > 0]
    for i in falling:
        for j in rising:
            if j <= i:
                continue
            for x, hx in ((xs[i], ys[i]), (xs[i + 1], ys[i + 1])):
                for y, hy in ((xs[j], ys[j]), (xs[j + 1], ys[j + 1])):
                    if y - x < max(hx, hy):
                        return False
    return True


def valley_flats(dh: DeltaHat) -> List[Tuple[int, int]]:
    """(i, j) such that dhat falls on segment i, is flat on i+1..j-1 and rises on j"""
    slopes = dh.pl.slopes
    valleys = []
    last_fall = None
    for k, s in enumerate(slopes):
        if s < 0:
            last_fall = k
        elif s > 0:
            if last_fall is not None and all(slopes[t] == 0 for t in range(last_fall + 1, k)):
                valleys.append((last_fall, k))
            last_fall = None
    return valleys


def cbar_equals_A_valleys(d: DiagonalSection) -> bool:
    """Every valley flat of delta-hat is at least as wide as its height"""
    dh = delta_hat(d)
    for i, j in valley_flats(dh):
        x2, y2 = dh.xs[i + 1], dh.xs[j]
        if y2 - x2 < dh.ys[i + 1]:
            return False
    return True


def cbar_a_witness(d: DiagonalSection) -> Optional[Point]:
    """A point where C-bar falls below A, or None when they coincide"""
    dh = delta_hat(d)
    for i, j in valley_flats(dh):
        x2, y2 = dh.xs[i + 1], dh.xs[j]
        level = dh.ys[i + 1]
        if y2 - x2 < level:
            u = min(dh.xs[i + 1] - dh.xs[i], dh.xs[j + 1] - dh.xs[j], (level - (y2 - x2)) / 4)
            return x2 - u, y2 + u
    return None


# -- grid comparisons -----------------------------------------------------------

def grid_sup_distance(
    q1: QuasiCopulaEvaluator, q2: QuasiCopulaEvaluator, n: int, exact: bool = True,
    extra: Iterable[Fraction] = (),
) -> Fraction:
    pts = grid_points(n, q1.diagonal, exact, extra)
    z1, z2 = common_denominator([q1.scaled_grid(pts), q2.scaled_grid(pts)])
    return _unscale(np.abs(_values(z1, exact) - _values(z2, exact)).max(), z1, exact)


def cbar_k_grid_gap(d: DiagonalSection, n: int) -> Fraction:
    """sup |C-bar - K| on the refined grid, probing the witness point when there is one"""
    witness = cbar_k_witness(d)
    dh = delta_hat(d)
    return grid_sup_distance(cbar(d, dh), k_copula(d), n, extra=witness or ())


def cbar_a_grid_gap(d: DiagonalSection, n: int) -> Fraction:
    """sup |C-bar - A| on the refined grid, probing the witness point when there is one"""
    witness = cbar_a_witness(d)
    dh = delta_hat(d)
    return grid_sup_distance(cbar(d, dh), a_quasi(d, dh), n, extra=witness or ())


def mu_bruteforce(d: DiagonalSection, n: int, workers: Optional[int] = None) -> float:
    """max of C-bar(x, y) - B(x, y) over pairs x <= y of the uniform n-grid, in floats"""
    dh = delta_hat(d)
    pts = uniform_grid(n)
    x = np.array([float(p) for p in pts])
    hat = np.array([float(dh(p)) for p in pts])
    tv = np.array([float(dh.tv_prefix(p)) for p in pts])
    # minimum of dhat on each gap between grid neighbours, breakpoints included
    gap_min = np.array(
        [hat[0]] + [float(extremum_on_interval(dh, pts[k - 1], pts[k], "min")[0]) for k in range(1, len(pts))]
    )

    def scan(lo: int, hi: int) -> float:
        best = 0.0
        for i in range(lo, hi):
            y = x[i:]
            upper = np.minimum(x[i], y - 0.5 * (hat[i] + hat[i:] + tv[i:] - tv[i]))
            running = np.concatenate(([hat[i]], np.minimum.accumulate(gap_min[i + 1:])))
            lower = x[i] - running
            best = max(best, float(np.max(upper - lower)))
        return best

    best = max(map_rows(scan, len(pts), workers))
    logger.debug(f"Brute-force asymmetry on {n + 1} points: {best}")
    return best


def check_splice_inequality(d: DiagonalSection, n: int) -> Tuple[bool, Fraction]:
    """U(x, y) + B(y, x) <= delta(x) + delta(y) for grid pairs x <= y.

    Returns (holds, largest excess of the left side over the right side).
    """
    dh = delta_hat(d)
    pts = grid_points(n, d, exact=True)
    diag = [d(p) for p in pts]
    u, b = u_delta(d, dh).scaled_grid(pts), bertino(d, dh).scaled_grid(pts)
    denom = math.lcm(u.denom, b.denom, *(v.denominator for v in diag))
    u, b = u.rescaled(denom), b.rescaled(denom)
    diag_num = scale_to(denom, diag)
    excess = u.num + b.num.T - np.add.outer(diag_num, diag_num)
    upper = np.triu(np.ones(excess.shape, dtype=bool))
    worst = Fraction(int(excess[upper].max()), denom)
    return worst <= 0, worst


def copula_suite(d: DiagonalSection, n: int, exact: bool = True, workers: Optional[int] = None) -> dict:
    """Grid reports for every construction that is always a copula"""
    from src.core.asymmetry import max_asym_copula

    dh = delta_hat(d)
    family = build_family(d, dh)
    evaluators = {
        "U": family.u,
        "B": family.bertino,
        "K": family.k,
        "SPLICE": max_asym_copula(d, dh),
    }
    return {name: check_copula_grid(q, n, exact, workers=workers) for name, q in evaluators.items()}
