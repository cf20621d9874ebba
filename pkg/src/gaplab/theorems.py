"""Verifiers for the gap-count bounds and constructors for the unbounded families.

Every verifier returns a ``VerificationReport``.  Inputs for which a
statement claims nothing raise ``PreconditionViolation`` (or
``InvalidArgument`` for malformed parameters) instead of producing a report,
so a report with ``passed == False`` always means an observed bound violation.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

from gmpy2 import mpq

from . import scalar as sc
from .errors import HypothesisViolation, InvalidArgument, PreconditionViolation, SearchFailure
from .gaps import GapReport, circle_gaps, distinct_lengths, frac_orbit, gap_report, two_orbit_circle_gaps
from .periodic import (
    AnalyticPeriodic,
    PiecewiseLinearPeriodic,
    injective_on_fd,
    monotone_on_fd,
    pl,
    slope_stats,
    triangle,
)
from .roots import DEFAULT_GRID, find_first_zero
from .scalar import DEFAULT_CONTEXT, Scalar, ToleranceContext

STATEMENTS = (
    "three_gap",
    "affine",
    "general",
    "tightened",
    "two_piece_shift",
    "triangle",
    "five_distance",
    "main_construction",
    "c2_construction",
)


@dataclass(frozen=True)
class CirclePartition:
    lengths: tuple[Scalar, ...]
    distinct: tuple[Scalar, ...]

    @property
    def count(self) -> int:
        return len(self.distinct)

    def to_json(self) -> dict:
        return {
            "lengths": [sc.to_json(x) for x in self.lengths],
            "distinct": [sc.to_json(x) for x in self.distinct],
            "count": self.count,
        }


def circle_partition(points, ctx: ToleranceContext = DEFAULT_CONTEXT) -> CirclePartition:
    lengths = circle_gaps(points, ctx)
    return CirclePartition(tuple(lengths), tuple(distinct_lengths(lengths, ctx)))


@dataclass(frozen=True)
class VerificationReport:
    statement: str
    params: dict
    observed: int
    lower: int | None
    upper: int | None
    witness: Union[GapReport, CirclePartition]
    extra: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        if self.upper is not None and self.observed > self.upper:
            return False
        if self.lower is not None and self.observed < self.lower:
            return False
        return True

    def to_json(self) -> dict:
        return {
            "statement": self.statement,
            "params": {k: _json_value(v) for k, v in self.params.items()},
            "claimed": {"lower": self.lower, "upper": self.upper},
            "observed": self.observed,
            "pass": self.passed,
            "witness": self.witness.to_json(),
            "extra": {k: _json_value(v) for k, v in self.extra.items()},
        }


def _json_value(v):
    if v is None or isinstance(v, (bool, int, str)):
        return v
    if hasattr(v, "to_json"):
        return v.to_json()
    if isinstance(v, (list, tuple)):
        return [_json_value(x) for x in v]
    return sc.to_json(v)


# -- circle statements -----------------------------------------------------

def verify_three_gap(alpha, N: int, ctx: ToleranceContext = DEFAULT_CONTEXT) -> VerificationReport:
    if N < 1:
        raise InvalidArgument("N must be at least 1")
    part = circle_partition(frac_orbit(alpha, N, ctx=ctx), ctx)
    return VerificationReport("three_gap", {"alpha": sc.as_scalar(alpha), "N": N}, part.count, None, 3, part)


def verify_five_distance(alpha, beta, N: int, ctx: ToleranceContext = DEFAULT_CONTEXT) -> VerificationReport:
    beta = sc.as_scalar(beta)
    if beta == 0:
        raise PreconditionViolation("beta must be non-zero")
    if N < 1:
        raise InvalidArgument("N must be at least 1")
    lengths = two_orbit_circle_gaps(alpha, beta, N, ctx)
    part = CirclePartition(tuple(lengths), tuple(distinct_lengths(lengths, ctx)))
    return VerificationReport("five_distance", {"alpha": sc.as_scalar(alpha), "beta": beta, "N": N},
                              part.count, None, 5, part)


# -- piecewise-linear statements -------------------------------------------

def verify_affine(m, c, alpha, beta, N: int, ctx: ToleranceContext = DEFAULT_CONTEXT) -> VerificationReport:
    f = pl((0, 1, m, c))
    report = gap_report(f, alpha, beta, N, ctx)
    params = {"m": f.pieces[0].slope, "c": f.pieces[0].intercept, "alpha": sc.as_scalar(alpha),
              "beta": sc.as_scalar(beta), "N": N}
    return VerificationReport("affine", params, report.count, None, 3, report)


def verify_general_bound(f: PiecewiseLinearPeriodic, alpha, N: int,
                         ctx: ToleranceContext = DEFAULT_CONTEXT) -> VerificationReport:
    if not injective_on_fd(f):
        raise PreconditionViolation("the 3*mu + l bound is only claimed for injective functions")
    ell, mu = slope_stats(f)
    report = gap_report(f, alpha, 0, N, ctx)
    return VerificationReport("general", {"f": f, "alpha": sc.as_scalar(alpha), "N": N},
                              report.count, None, 3 * mu + ell, report, {"pieces": ell, "slope_magnitudes": mu})


def tightened_hypotheses(f: PiecewiseLinearPeriodic) -> bool:
    return injective_on_fd(f) and monotone_on_fd(f) and f.pieces[0].slope == f.pieces[-1].slope


def verify_tightened_bound(f: PiecewiseLinearPeriodic, alpha, N: int,
                           ctx: ToleranceContext = DEFAULT_CONTEXT) -> VerificationReport:
    if not tightened_hypotheses(f):
        raise PreconditionViolation("needs an injective, monotone function whose first and last slopes agree")
    ell, mu = slope_stats(f)
    report = gap_report(f, alpha, 0, N, ctx)
    return VerificationReport("tightened", {"f": f, "alpha": sc.as_scalar(alpha), "N": N},
                              report.count, None, 3 * mu + ell - 1, report,
                              {"pieces": ell, "slope_magnitudes": mu})


def two_piece_shift(kappa, beta) -> PiecewiseLinearPeriodic:
    """``x`` on [0, kappa), ``x - beta`` on [kappa, 1), for 0 < beta <= kappa < 1."""
    kappa, beta = sc.as_scalar(kappa), sc.as_scalar(beta)
    if not (0 < beta <= kappa < 1):
        raise InvalidArgument("need 0 < beta <= kappa < 1")
    return pl((0, kappa, 1, 0), (kappa, 1, 1, -beta))


def verify_two_piece_shift(kappa, beta, alpha, N: int,
                           ctx: ToleranceContext = DEFAULT_CONTEXT) -> VerificationReport:
    f = two_piece_shift(kappa, beta)
    report = gap_report(f, alpha, 0, N, ctx)
    params = {"kappa": f.pieces[0].right, "beta": -f.pieces[1].intercept, "alpha": sc.as_scalar(alpha), "N": N}
    return VerificationReport("two_piece_shift", params, report.count, None, 10, report)


def verify_triangle_bounds(alpha, N: int, ctx: ToleranceContext = DEFAULT_CONTEXT,
                           irrational: bool | None = None) -> VerificationReport:
    """Upper bound 4 always; lower bound 2 only for irrational-mode alpha and N >= 2.

    ``irrational`` defaults to "alpha is an approximate scalar".
    """
    alpha = sc.as_scalar(alpha)
    if irrational is None:
        irrational = sc.is_approx(alpha)
    report = gap_report(triangle(), alpha, 0, N, ctx)
    lower = 2 if irrational and N >= 2 else None
    return VerificationReport("triangle", {"alpha": alpha, "N": N}, report.count, lower, 4, report,
                              {"irrational": irrational})


# -- constructions ---------------------------------------------------------

@dataclass(frozen=True)
class UnboundedConstruction:
    n: int
    f: PiecewiseLinearPeriodic
    alpha: mpq
    N: int
    epsilon: mpq

    @property
    def ladder(self) -> list[mpq]:
        """The gaps ``k*eps/N`` for ``1 <= k <= N/2 - 1``."""
        return [k * self.epsilon / self.N for k in range(1, self.N // 2)]

    def to_json(self) -> dict:
        return {"n": self.n, "f": self.f.to_json(), "alpha": sc.to_json(self.alpha), "N": self.N,
                "epsilon": sc.to_json(self.epsilon)}


def construct_unbounded_pl(n: int) -> UnboundedConstruction:
    """Two-piece function with more than ``n`` distinct gaps.

    N = 2n + 4 is the smallest even N > 4 with n < N/2 - 1, and
    eps = 1/(N - 3) sits strictly below 2/(N - 4).
    """
    if n < 1:
        raise InvalidArgument("n must be at least 1")
    N = 2 * n + 4
    eps = mpq(1, N - 3)
    f = pl((0, mpq(1, 2), 1, 0, True), (mpq(1, 2), 1, 1 + eps, -(1 + eps) / 2))
    return UnboundedConstruction(n, f, mpq(1, N), N, eps)


def verify_main_construction(n: int, ctx: ToleranceContext = DEFAULT_CONTEXT) -> VerificationReport:
    con = construct_unbounded_pl(n)
    report = gap_report(con.f, con.alpha, 0, con.N, ctx)
    gaps = set(report.gap_set)
    ladder_ok = all(g in gaps for g in con.ladder)
    return VerificationReport("main_construction", {"n": n}, report.count, n + 1, None, report,
                              {"construction": con, "ladder_contained": ladder_ok})


@dataclass(frozen=True)
class C2Witness:
    I: Scalar
    I_prime: Scalar | None
    alpha: Scalar
    n: int

    def to_json(self) -> dict:
        return {
            "I": sc.to_json(self.I),
            "I_prime": None if self.I_prime is None else sc.to_json(self.I_prime),
            "alpha": sc.to_json(self.alpha),
            "n": self.n,
        }


_ZERO_CACHE: dict = {}


def _c2_zeros(f: AnalyticPeriodic, ctx: ToleranceContext, tol, grid_points: int):
    """(I, I') for ``f``; they do not depend on n, so sweeps memoize them."""
    try:
        key = (_code_key(f.df), _code_key(f.d2f), f.period_fn, ctx, str(tol), grid_points)
    except AttributeError:
        key = None
    if key is None or key not in _ZERO_CACHE:
        with ctx.working():
            if abs(f.d2f(sc.approx(0))) <= tol:
                raise HypothesisViolation(f"{f.name}: f''(0) vanishes")
            I = find_first_zero(f.d2f, 0, f.period, grid_points, tol, ctx)
            if I is None:
                raise SearchFailure(f"{f.name}: no zero of f'' on [0, P]")
            I_prime = find_first_zero(f.df, 0, I, grid_points, tol, ctx)
        if key is None:
            return I, I_prime
        _ZERO_CACHE[key] = (I, I_prime)
    return _ZERO_CACHE[key]


def _code_key(g):
    # two closures compute the same thing when code and captured values agree
    return g.__code__, tuple(repr(c.cell_contents) for c in g.__closure__ or ())


def construct_c2_witness(f: AnalyticPeriodic, n: int, ctx: ToleranceContext = DEFAULT_CONTEXT,
                         tol=None, grid_points: int = DEFAULT_GRID) -> tuple[C2Witness, VerificationReport]:
    """Step ``alpha`` forcing ``n`` distinct gaps among ``f(alpha), ..., f((n+1) alpha)``.

    I is the first zero of f'' on [0, P] and I' the first zero of f' on [0, I];
    alpha = I/(n+1) when I' is 0 (or absent), else I'/(n+1).
    """
    if n < 1:
        raise InvalidArgument("n must be at least 1")
    tol = ctx.equality_tolerance if tol is None else tol
    I, I_prime = _c2_zeros(f, ctx, tol, grid_points)
    with ctx.working():
        end = I if I_prime is None or I_prime <= tol else I_prime
        alpha = end / (n + 1)
    witness = C2Witness(I, I_prime, alpha, n)
    report = gap_report(f, alpha, 0, n + 1, ctx)
    return witness, VerificationReport("c2_construction", {"f": f, "n": n, "alpha": alpha},
                                       report.count, n, None, report, {"witness": witness})
