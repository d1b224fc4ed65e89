"""
Maximal asymmetry of copulas with a prescribed diagonal

mu is computed along independent routes (max-min of delta-hat along g_U,
the maximum of delta-hat over the intersection of g_U with H, and for
simple diagonals the single crossing point) plus a brute-force grid
oracle. Any disagreement raises RouteMismatch.
"""

import logging
from bisect import bisect_left, bisect_right
from fractions import Fraction
from itertools import combinations
from typing import List, Optional, Tuple

from src.core.bounds import QuasiCopulaEvaluator, bertino, build_fsplit, cbar, splice
from src.core.diagonal import DeltaHat, DiagonalSection, delta_hat, extremum_on_interval
from src.core.errors import EmptyOmega, NotSimple, RouteMismatch
from src.core.geometry import CurveSet, HSet, StepCurve, build_hset, g_upper_curve
from src.core.piecewise import ZERO, RationalLike, check_unit, to_rational
from src.models.copula_models import AsymmetryReport, OmegaComponent, RouteValues

logger = logging.getLogger(__name__)

Witness = Tuple[Fraction, Fraction]
THIRD = Fraction(1, 3)


def tau(dh: DeltaHat, g_u: StepCurve, x: RationalLike) -> Fraction:
    """Minimum of delta-hat over [x, g_U(x)]"""
    x = check_unit(to_rational(x))
    return extremum_on_interval(dh, x, g_u(x), "min")[0]


def _g_preimages(g_u: StepCurve, levels: List[Fraction]) -> List[Fraction]:
    """x strictly inside g_U pieces where the piece line hits one of the sorted levels"""
    found = []
    for a, b, slope, intercept in g_u.pieces:
        if slope == 0:
            continue
        lo, hi = slope * a + intercept, slope * b + intercept
        for level in levels[bisect_right(levels, lo):bisect_left(levels, hi)]:
            found.append((level - intercept) / slope)
    return found


def _line_through(p: Fraction, fp: Fraction, q: Fraction, fq: Fraction) -> Tuple[Fraction, Fraction]:
    slope = (fq - fp) / (q - p)
    return slope, fp - slope * p


def mu_maxmin(dh: DeltaHat, g_u: StepCurve) -> Witness:
    """Exact maximum of tau over [0, 1] and its smallest maximizer.

    Between consecutive candidate knots delta-hat(x) and delta-hat(g_U(x)) are
    affine and the breakpoints strictly inside [x, g_U(x)] do not change, so
    tau is the minimum of two lines and a constant there.
    """
    knots = sorted(set(g_u.knots).union(dh.xs, _g_preimages(g_u, list(dh.xs))))
    candidates = list(knots)

    slopes = dh.pl.slopes
    for a, b in zip(knots, knots[1:]):
        # (a, b) lies in one g_U piece and one delta-hat segment, and g_U maps it into one segment
        sg, cg = g_u.lines[bisect_right(g_u.knots, a) - 1]
        i = dh.pl.segment_index(a)
        mid = (a + b) / 2
        g_mid = sg * mid + cg
        k = dh.pl.segment_index(g_mid)
        own = (slopes[i], dh.ys[i] - slopes[i] * dh.xs[i])
        far = (slopes[k] * sg, dh.ys[k] + slopes[k] * (cg - dh.xs[k]))
        lines = [own, far]
        lo = bisect_right(dh.xs, mid)
        hi = bisect_left(dh.xs, g_mid) - 1
        idx = dh.min_table.query(lo, hi)
        if idx is not None:
            lines.append((ZERO, dh.ys[idx]))
        for (s1, c1), (s2, c2) in combinations(lines, 2):
            if s1 != s2:
                t = (c2 - c1) / (s1 - s2)
                if a < t < b:
                    candidates.append(t)

    best_value, best_x = None, None
    for x in sorted(set(candidates)):
        value = tau(dh, g_u, x)
        if best_value is None or value > best_value:
            best_value, best_x = value, x
    logger.debug(f"max-min route scanned {len(candidates)} candidates")
    return best_value, best_x


def omega_set(g_u: StepCurve, hset: HSet) -> List[OmegaComponent]:
    """Components of {x : (x, g_U(x)) in H, g_U(x) > x}"""
    h = hset.curve
    knots = sorted(set(g_u.knots).union(h.knots))

    def member_at(x: Fraction) -> bool:
        y = g_u(x)
        return y > x and hset.contains(x, y)

    # atoms in increasing order: (lo, hi, is_open_interval)
    atoms: List[Tuple[Fraction, Fraction, bool]] = []
    for i, k in enumerate(knots):
        if member_at(k):
            atoms.append((k, k, False))
        if i + 1 == len(knots):
            break
        a, b = k, knots[i + 1]
        p, q = a + (b - a) * THIRD, a + 2 * (b - a) * THIRD
        sg, cg = _line_through(p, g_u(p), q, g_u(q))
        sh, ch = _line_through(p, h(p), q, h(q))
        if (sg, cg) == (sh, ch):
            if g_u(p) > p or g_u(q) > q:
                atoms.append((a, b, True))
        elif sg != sh:
            t = (ch - cg) / (sg - sh)
            if a < t < b and sg * t + cg > t:
                atoms.append((t, t, False))

    components: List[OmegaComponent] = []
    for lo, hi, is_open in atoms:
        if components and components[-1].x_hi == lo:
            last = components[-1]
            if is_open and last.hi_closed:
                components[-1] = OmegaComponent(last.x_lo, hi, last.lo_closed, False)
                continue
            if not is_open and not last.hi_closed:
                components[-1] = OmegaComponent(last.x_lo, hi, last.lo_closed, True)
                continue
        components.append(OmegaComponent(lo, hi, not is_open, not is_open))
    logger.debug(f"Omega has {len(components)} components")
    return components


def mu_via_H(dh: DeltaHat, omega: List[OmegaComponent]) -> Witness:
    """Largest delta-hat over the witness set, at its smallest location"""
    if not omega:
        raise EmptyOmega("No point of g_U meets H strictly above the diagonal")
    best_value, best_x = None, None
    for component in omega:
        value, x = extremum_on_interval(dh, component.x_lo, component.x_hi, "max")
        if best_value is None or value > best_value:
            best_value, best_x = value, x
    return best_value, best_x


def is_simple(dh: DeltaHat) -> bool:
    """delta-hat rises (flats allowed) and then falls, never rising again"""
    falling = False
    for slope in dh.pl.slopes:
        if slope < 0:
            falling = True
        elif slope > 0 and falling:
            return False
    return True


def mu_simple(dh: DeltaHat, g_u: StepCurve, omega: List[OmegaComponent]) -> Witness:
    """mu for a simple diagonal: the witness point on the initial rising run of delta-hat"""
    if not is_simple(dh):
        raise NotSimple("delta-hat rises again after falling")
    if dh.is_zero():
        return ZERO, ZERO

    slopes = dh.pl.slopes
    first_fall = next(i for i, s in enumerate(slopes) if s < 0)
    rise_end = dh.xs[first_fall]

    component = next((c for c in omega if c.x_lo <= rise_end), None)
    if component is None:
        raise RouteMismatch(f"No witness point on the rising run [0, {rise_end}]")
    x0 = min(component.x_hi, rise_end)
    closed_end = x0 < component.x_hi or component.hi_closed or component.is_point
    if not closed_end:
        raise RouteMismatch(f"Witness component {component} is open at its right end")

    value = dh(x0)
    if dh(g_u(x0)) != value:
        raise RouteMismatch(
            f"delta-hat at g_U({x0}) = {g_u(x0)} is {dh(g_u(x0))}, expected {value}"
        )
    return value, x0


def max_asym_copula(d: DiagonalSection, dh: Optional[DeltaHat] = None) -> QuasiCopulaEvaluator:
    """C-bar above the diagonal spliced with Bertino below, which attains mu"""
    dh = dh or delta_hat(d)
    return splice(cbar(d, dh), bertino(d, dh))


def run_mu_algorithm(
    d: DiagonalSection,
    oracle_n: Optional[int] = 512,
    tolerance: float = 1e-12,
    curves: Optional[CurveSet] = None,
    workers: Optional[int] = None,
) -> AsymmetryReport:
    """Compute mu along every route and fail loudly if any two disagree"""
    from src.core.verify import mu_bruteforce

    dh = delta_hat(d)
    fs = build_fsplit(d, dh)
    if curves is None:
        # g_L plays no part in mu
        g_u, hset = g_upper_curve(fs, d), build_hset(dh)
    else:
        g_u, hset = curves.g_upper, curves.hset

    omega = omega_set(g_u, hset)
    maxmin_value, maxmin_x = mu_maxmin(dh, g_u)

    if dh.is_zero():
        if omega or maxmin_value != 0:
            raise RouteMismatch("Identity diagonal produced a nonzero asymmetry route")
        via_value, witness_x = ZERO, ZERO
    else:
        try:
            via_value, witness_x = mu_via_H(dh, omega)
        except EmptyOmega as e:
            raise RouteMismatch(f"delta-hat is not zero but {e}") from e

    simple = is_simple(dh)
    simple_value = mu_simple(dh, g_u, omega)[0] if simple else None

    if via_value != maxmin_value:
        logger.error(f"Route mismatch: max-min gives {maxmin_value}, H-intersection gives {via_value}")
        raise RouteMismatch(f"max-min route {maxmin_value} != H route {via_value}")
    if simple_value is not None and simple_value != via_value:
        logger.error(f"Route mismatch: simple route gives {simple_value}, expected {via_value}")
        raise RouteMismatch(f"simple route {simple_value} != {via_value}")

    mu = via_value
    if not ZERO <= mu <= THIRD:
        raise RouteMismatch(f"mu = {mu} lies outside [0, 1/3]")
    if (mu == 0) != dh.is_zero():
        raise RouteMismatch(f"mu = {mu} contradicts delta-hat being {'zero' if dh.is_zero() else 'nonzero'}")

    witness = (witness_x, g_u(witness_x))
    attained = max_asym_copula(d, dh)
    gap = attained(*witness) - attained(witness[1], witness[0])
    if gap != mu:
        raise RouteMismatch(f"Splice asymmetry at witness {witness} is {gap}, expected {mu}")

    oracle = None
    if oracle_n:
        oracle = mu_bruteforce(d, oracle_n, workers)
        if not float(mu) - 2.0 / oracle_n - tolerance <= oracle <= float(mu) + tolerance:
            logger.error(f"Grid oracle {oracle} (n={oracle_n}) is outside the band for mu={mu}")
            raise RouteMismatch(f"Grid oracle {oracle} inconsistent with mu = {mu}")

    return AsymmetryReport(
        mu=mu,
        witness=witness,
        omega=omega,
        route_values=RouteValues(
            maxmin=maxmin_value,
            via_h=via_value,
            simple=simple_value,
            grid_oracle=oracle,
            oracle_n=oracle_n or None,
        ),
        attained_by=attained.tag,
        is_simple=simple,
    )


def check_asymmetry_ceiling(
    q: QuasiCopulaEvaluator, d: DiagonalSection, n: int, tolerance: float = 1e-12
) -> Tuple[bool, Fraction, Fraction]:
    """Grid asymmetry of a copula with diagonal d never exceeds mu of d.

    Returns (holds, grid asymmetry, mu).
    """
    from src.core.verify import asymmetry_grid

    mu = run_mu_algorithm(d, oracle_n=None).mu
    value, _ = asymmetry_grid(q, n)
    return value <= mu + Fraction(tolerance), value, mu
