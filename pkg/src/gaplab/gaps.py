"""Orbits f(d*alpha + beta), gap-length sets, gap classification, circle partitions."""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Sequence

from . import scalar as sc
from .errors import InvalidArgument, Unsupported
from .periodic import AnalyticPeriodic, PeriodicFunction, PiecewiseLinearPeriodic, extrema
from .scalar import DEFAULT_CONTEXT, Scalar, ToleranceContext

INTERIOR = "interior"
NON_INTERIOR = "non_interior"
EXTREMAL = "extremal"


@dataclass(frozen=True)
class OrbitSample:
    d: int
    x_reduced: Scalar
    value: Scalar
    piece: int | None = None


@dataclass(frozen=True)
class GapEntry:
    lower_value: Scalar
    upper_value: Scalar
    length: Scalar
    kind: str | None = None
    piece: int | None = None
    lower_d: tuple[int, ...] = ()
    upper_d: tuple[int, ...] = ()


@dataclass(frozen=True)
class GapReport:
    """Sorted distinct orbit values, their gaps, and the distinct gap lengths.

    ``entries`` holds the n - 1 consecutive gaps followed by the extremal
    (wraparound) gap, so ``len(entries) == n``.
    """

    values: tuple[Scalar, ...]
    entries: tuple[GapEntry, ...]
    gap_set: tuple[Scalar, ...]
    inf_value: Scalar
    sup_value: Scalar
    ctx: ToleranceContext = DEFAULT_CONTEXT
    members: tuple[tuple[OrbitSample, ...], ...] = field(default=(), compare=False, repr=False)
    params: dict = field(default_factory=dict, compare=False)

    @property
    def n(self) -> int:
        return len(self.values)

    @property
    def count(self) -> int:
        return len(self.gap_set)

    @property
    def gap_multiset(self) -> list[Scalar]:
        return [e.length for e in self.entries]

    @property
    def total_length(self) -> Scalar:
        """Sum of the gap multiset; equals sup - inf."""
        with self.ctx.working():
            return sum(self.gap_multiset)

    @property
    def extremal(self) -> GapEntry:
        return self.entries[-1]

    @property
    def mode(self) -> str:
        return "exact" if sc.all_exact(self.gap_multiset) and sc.all_exact(self.values) else "approx"

    def to_json(self) -> dict:
        return {
            "params": {k: _param_json(v) for k, v in self.params.items()},
            "n": self.n,
            "values": [sc.to_json(v) for v in self.values],
            "gaps": [
                {
                    "length": sc.to_json(e.length),
                    "kind": e.kind or "unclassified",
                    "piece": e.piece,
                    "lower": sc.to_json(e.lower_value),
                    "upper": sc.to_json(e.upper_value),
                    "d_lower": list(e.lower_d),
                    "d_upper": list(e.upper_d),
                }
                for e in self.entries
            ],
            "gap_set": [sc.to_json(g) for g in self.gap_set],
            "count": self.count,
            "inf": sc.to_json(self.inf_value),
            "sup": sc.to_json(self.sup_value),
            "mode": self.mode,
        }

    def csv_rows(self) -> list[dict]:
        return [
            {
                "d_range": ";".join(map(str, e.lower_d)) + "->" + ";".join(map(str, e.upper_d)),
                "lower": sc.format_scalar(e.lower_value),
                "upper": sc.format_scalar(e.upper_value),
                "length": sc.format_scalar(e.length),
                "kind": e.kind or "unclassified",
                "piece": "" if e.piece is None else e.piece,
            }
            for e in self.entries
        ]


CSV_COLUMNS = ("d_range", "lower", "upper", "length", "kind", "piece")


def _param_json(v):
    if isinstance(v, (int, str, bool)) or v is None:
        return v
    return sc.to_json(v)


def orbit(f: PeriodicFunction, alpha, beta=0, N: int = 1,
          ctx: ToleranceContext = DEFAULT_CONTEXT) -> list[OrbitSample]:
    if N < 1:
        raise InvalidArgument("N must be at least 1")
    alpha, beta = sc.as_scalar(alpha), sc.as_scalar(beta)
    tol = ctx.equality_tolerance
    samples = []
    with ctx.working():
        P = f.period
        if isinstance(f, AnalyticPeriodic):
            for d in range(1, N + 1):
                x = d * alpha + beta
                samples.append(OrbitSample(d, sc.reduce_mod_period(x, P), f.f(x)))
        else:
            pieces = f.pieces
            for d in range(1, N + 1):
                xr = sc.reduce_mod_period(d * alpha + beta, P)
                i, xr = f.locate(xr, tol)
                samples.append(OrbitSample(d, xr, pieces[i](xr), i))
    return samples


def report_from_samples(f: PeriodicFunction, samples: Sequence[OrbitSample],
                        ctx: ToleranceContext = DEFAULT_CONTEXT, params: dict | None = None) -> GapReport:
    """Build the gap report for an already-evaluated orbit (any sample order)."""
    if not samples:
        raise InvalidArgument("empty orbit")
    ext = extrema(f)
    ordered = sorted(samples, key=lambda s: (s.value, s.d))
    with ctx.working():
        groups = sc.cluster_groups([s.value for s in ordered], ctx)
        members = tuple(tuple(ordered[k] for k in g) for g in groups)
        values = tuple(m[0].value for m in members)
        ds = [tuple(s.d for s in m) for m in members]
        entries = [
            GapEntry(values[j], values[j + 1], values[j + 1] - values[j], lower_d=ds[j], upper_d=ds[j + 1])
            for j in range(len(values) - 1)
        ]
        wrap = values[0] - ext.inf_value + ext.sup_value - values[-1]
        entries.append(GapEntry(values[0], values[-1], wrap, EXTREMAL, lower_d=ds[0], upper_d=ds[-1]))
        gap_set = tuple(sc.cluster_distinct(sorted(e.length for e in entries), ctx))
    return GapReport(values, tuple(entries), gap_set, ext.inf_value, ext.sup_value, ctx, members,
                     dict(params or {}))


def classify_gaps(report: GapReport, f: PeriodicFunction) -> GapReport:
    """Label each consecutive gap interior(piece) or non-interior.

    When one (clustered) value is hit by samples on several pieces, the gap is
    interior as soon as any pair of representatives shares a piece; the lowest
    such piece index is recorded.
    """
    if not isinstance(f, PiecewiseLinearPeriodic):
        raise Unsupported("gap classification needs a piecewise-linear function")
    if any(s.piece is None for m in report.members for s in m):
        raise Unsupported("orbit samples carry no piece annotations")
    pieces = [{s.piece for s in m} for m in report.members]
    entries = []
    for j, e in enumerate(report.entries[:-1]):
        common = pieces[j] & pieces[j + 1]
        kind, piece = (INTERIOR, min(common)) if common else (NON_INTERIOR, None)
        entries.append(GapEntry(e.lower_value, e.upper_value, e.length, kind, piece, e.lower_d, e.upper_d))
    entries.append(report.entries[-1])
    return replace(report, entries=tuple(entries))


def gap_report(f: PeriodicFunction, alpha, beta=0, N: int = 1,
               ctx: ToleranceContext = DEFAULT_CONTEXT, classify: bool = True) -> GapReport:
    """The gap-length set of ``f`` along ``d*alpha + beta``, ``d = 1..N``.

    Piecewise-linear reports are classified unless ``classify`` is False.
    """
    samples = orbit(f, alpha, beta, N, ctx)
    report = report_from_samples(f, samples, ctx, {"alpha": sc.as_scalar(alpha), "beta": sc.as_scalar(beta), "N": N})
    if classify and isinstance(f, PiecewiseLinearPeriodic):
        report = classify_gaps(report, f)
    return report


def distinct_lengths(lengths: Sequence[Scalar], ctx: ToleranceContext = DEFAULT_CONTEXT) -> list[Scalar]:
    with ctx.working():
        return sc.cluster_distinct(sorted(lengths), ctx)


# -- the circle picture ----------------------------------------------------

def circle_gaps(points: Sequence[Scalar], ctx: ToleranceContext = DEFAULT_CONTEXT) -> list[Scalar]:
    """Arc lengths cut out of R/Z by ``points`` (consecutive differences plus wraparound)."""
    if not points:
        raise InvalidArgument("need at least one point")
    pts = []
    for p in points:
        p = sc.as_scalar(p)
        if not 0 <= p < 1:
            raise InvalidArgument(f"circle point {p} outside [0, 1)")
        if sc.is_approx(p) and 1 - p <= ctx.equality_tolerance:
            # same circle point as 0
            p = type(p)(0)
        pts.append(p)
    with ctx.working():
        distinct = sc.cluster_distinct(sorted(pts), ctx)
        lengths = [b - a for a, b in zip(distinct, distinct[1:])]
        lengths.append(1 - (distinct[-1] - distinct[0]))
    return lengths


def frac_orbit(alpha, N: int, beta=0, start: int = 1, ctx: ToleranceContext = DEFAULT_CONTEXT) -> list[Scalar]:
    alpha, beta = sc.as_scalar(alpha), sc.as_scalar(beta)
    with ctx.working():
        return [sc.frac(d * alpha + beta) for d in range(start, N + 1)]


def two_orbit_circle_gaps(alpha, beta, N: int, ctx: ToleranceContext = DEFAULT_CONTEXT) -> list[Scalar]:
    """Circle partition by ``frac(d*alpha)`` and ``frac(d*alpha + beta)``, ``d = 0..N``."""
    if N < 1:
        raise InvalidArgument("N must be at least 1")
    points = frac_orbit(alpha, N, 0, 0, ctx) + frac_orbit(alpha, N, beta, 0, ctx)
    return circle_gaps(points, ctx)
