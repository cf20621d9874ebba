"""Periodic functions: validated piecewise-linear ones and analytic C^2 ones.

Piecewise-linear functions are given on the fundamental domain [0, P) by an
ordered list of pieces.  Each piece owns ``[left, right)`` by default; setting
``right_closed`` hands the boundary point to the piece on its left instead,
which is needed for constructions written as ``0 <= x <= 1/2, 1/2 < x < 1``.
"""
from __future__ import annotations

import random
from bisect import bisect_right
from dataclasses import dataclass, field
from typing import Callable, Sequence, Union

import gmpy2
from gmpy2 import mpfr, mpq

from . import scalar as sc
from .errors import InvalidArgument, InvalidPartition, NotMaximal
from .scalar import Scalar, ToleranceContext


@dataclass(frozen=True)
class Piece:
    left: Scalar
    right: Scalar
    slope: Scalar
    intercept: Scalar
    right_closed: bool = False

    def __call__(self, x: Scalar) -> Scalar:
        return self.slope * x + self.intercept

    @property
    def left_value(self) -> Scalar:
        return self(self.left)

    @property
    def right_value(self) -> Scalar:
        """Value (or one-sided limit, when the right end is open) at ``right``."""
        return self(self.right)


@dataclass(frozen=True)
class FunctionExtrema:
    inf_value: Scalar
    sup_value: Scalar


@dataclass(frozen=True)
class PiecewiseLinearPeriodic:
    period: Scalar
    pieces: tuple[Piece, ...]
    name: str | None = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "period", sc.as_scalar(self.period))
        pieces = tuple(
            Piece(sc.as_scalar(p.left), sc.as_scalar(p.right), sc.as_scalar(p.slope),
                  sc.as_scalar(p.intercept), bool(p.right_closed))
            for p in self.pieces
        )
        object.__setattr__(self, "pieces", pieces)
        _check_tiling(self.period, pieces)
        object.__setattr__(self, "_lefts", [p.left for p in pieces])

    def __len__(self) -> int:
        return len(self.pieces)

    def __call__(self, x) -> Scalar:
        return evaluate(self, x)

    def left_closed(self, i: int) -> bool:
        return i == 0 or not self.pieces[i - 1].right_closed

    def locate(self, x: Scalar, tol: float = 0) -> tuple[int, Scalar]:
        """Index of the piece owning a reduced coordinate ``x`` in [0, P).

        With ``tol > 0`` and approximate ``x``, a coordinate within ``tol`` of a
        breakpoint (or of P) is treated as sitting exactly on it, so that
        rounding cannot move a rational orbit point to the wrong piece.
        Returns the owning index and the (possibly snapped) coordinate.
        """
        if tol and sc.is_approx(x):
            if self.period - x <= tol:
                return 0, mpfr(0)
            j = bisect_right(self._lefts, x)
            for k in (j - 1, j):
                if 1 <= k < len(self.pieces) and abs(x - self._lefts[k]) <= tol:
                    owner = k - 1 if self.pieces[k - 1].right_closed else k
                    return owner, mpfr(self._lefts[k])
        i = bisect_right(self._lefts, x) - 1
        if i < 0:
            raise InvalidArgument(f"{x} is outside the fundamental domain")
        if i > 0 and x == self._lefts[i] and self.pieces[i - 1].right_closed:
            i -= 1
        return i, x

    def to_json(self) -> dict:
        return {
            "period": sc.to_json(self.period),
            "pieces": [
                {
                    "left": sc.to_json(p.left),
                    "right": sc.to_json(p.right),
                    "right_closed": p.right_closed,
                    "slope": sc.to_json(p.slope),
                    "intercept": sc.to_json(p.intercept),
                }
                for p in self.pieces
            ],
        }

    @classmethod
    def from_json(cls, doc: dict) -> "PiecewiseLinearPeriodic":
        try:
            pieces = [
                Piece(
                    sc.from_json(p["left"]),
                    sc.from_json(p["right"]),
                    sc.from_json(p["slope"]),
                    sc.from_json(p["intercept"]),
                    bool(p.get("right_closed", False)),
                )
                for p in doc["pieces"]
            ]
            period = sc.from_json(doc["period"])
        except (KeyError, TypeError) as err:
            raise InvalidArgument(f"malformed function document: {err}") from err
        return validate_pl(pieces, period)


def _check_tiling(period: Scalar, pieces: Sequence[Piece]) -> None:
    if not period > 0:
        raise InvalidArgument(f"period must be positive, got {period}")
    if not pieces:
        raise InvalidPartition("at least one piece is required")
    if pieces[0].left != 0:
        raise InvalidPartition(f"first piece starts at {pieces[0].left}, not 0")
    for i, p in enumerate(pieces):
        if not p.left < p.right:
            raise InvalidPartition(f"piece {i} has left >= right")
    for i, (p, q) in enumerate(zip(pieces, pieces[1:])):
        if p.right != q.left:
            raise InvalidPartition(f"pieces {i} and {i + 1} do not meet ({p.right} vs {q.left})")
        if p.slope == q.slope and p.right_value == q(q.left):
            raise NotMaximal(f"pieces {i} and {i + 1} are one linear function")
    if pieces[-1].right != period:
        raise InvalidPartition(f"last piece ends at {pieces[-1].right}, not at the period {period}")
    if pieces[-1].right_closed:
        raise InvalidPartition("the period itself is not in the fundamental domain")


def validate_pl(pieces: Sequence[Piece], period=1) -> PiecewiseLinearPeriodic:
    """Build a piecewise-linear periodic function, rejecting (never repairing) bad input."""
    return PiecewiseLinearPeriodic(period, tuple(pieces))


def pl(*specs, period=1, name=None) -> PiecewiseLinearPeriodic:
    """Shorthand: ``pl((0, "3/4", 1, 1), ("3/4", 1, 1, "-1/2"))``.

    Each spec is ``(left, right, slope, intercept[, right_closed])``.
    """
    return PiecewiseLinearPeriodic(period, tuple(Piece(*s) for s in specs), name=name)


@dataclass(frozen=True)
class AnalyticPeriodic:
    """A smooth periodic function with hand-written first and second derivatives.

    ``period_fn`` is called at the working precision, so transcendental
    periods such as 2*pi are always as accurate as the surrounding context.
    """

    name: str
    f: Callable[[Scalar], Scalar]
    df: Callable[[Scalar], Scalar]
    d2f: Callable[[Scalar], Scalar]
    period_fn: Callable[[], Scalar]
    inf_value: Scalar
    sup_value: Scalar
    params: dict = field(default_factory=dict, compare=False)

    @property
    def period(self) -> Scalar:
        return self.period_fn()

    def __call__(self, x) -> Scalar:
        return evaluate(self, x)

    def to_json(self) -> dict:
        doc = {"builtin": self.name}
        doc.update({k: sc.to_json(v) for k, v in self.params.items()})
        return doc


PeriodicFunction = Union[PiecewiseLinearPeriodic, AnalyticPeriodic]


def evaluate(f: PeriodicFunction, x, ctx: ToleranceContext | None = None) -> Scalar:
    x = sc.as_scalar(x)
    if isinstance(f, AnalyticPeriodic):
        return f.f(x)
    xr = sc.reduce_mod_period(x, f.period)
    i, xr = f.locate(xr, ctx.equality_tolerance if ctx else 0)
    return f.pieces[i](xr)


def slope_stats(f: PiecewiseLinearPeriodic) -> tuple[int, int]:
    """Return ``(pieces, distinct slope magnitudes)``."""
    return len(f.pieces), len({abs(p.slope) for p in f.pieces})


def extrema(f: PeriodicFunction) -> FunctionExtrema:
    """inf and sup over one period, using closures of the piece value ranges."""
    if isinstance(f, AnalyticPeriodic):
        return FunctionExtrema(f.inf_value, f.sup_value)
    ends = [v for p in f.pieces for v in (p.left_value, p.right_value)]
    return FunctionExtrema(min(ends), max(ends))


def _value_range(f: PiecewiseLinearPeriodic, i: int):
    """``(lo, hi, lo_closed, hi_closed)`` of the image of piece ``i``."""
    p = f.pieces[i]
    lc, rc = f.left_closed(i), p.right_closed
    if p.slope > 0:
        return p.left_value, p.right_value, lc, rc
    return p.right_value, p.left_value, rc, lc


def _intersect(a, b) -> bool:
    lo_a, hi_a, lc_a, hc_a = a
    lo_b, hi_b, lc_b, hc_b = b
    a_below_b = hi_a < lo_b or (hi_a == lo_b and not (hc_a and lc_b))
    b_below_a = hi_b < lo_a or (hi_b == lo_a and not (hc_b and lc_a))
    return not (a_below_b or b_below_a)


def injective_on_fd(f: PiecewiseLinearPeriodic) -> bool:
    if any(p.slope == 0 for p in f.pieces):
        return False
    ranges = [_value_range(f, i) for i in range(len(f.pieces))]
    for i in range(len(ranges)):
        for j in range(i + 1, len(ranges)):
            if _intersect(ranges[i], ranges[j]):
                return False
    return True


def monotone_on_fd(f: PiecewiseLinearPeriodic) -> bool:
    """Strictly monotone on [0, P)."""
    if all(p.slope > 0 for p in f.pieces):
        return all(p.right_value <= q.left_value for p, q in zip(f.pieces, f.pieces[1:]))
    if all(p.slope < 0 for p in f.pieces):
        return all(p.right_value >= q.left_value for p, q in zip(f.pieces, f.pieces[1:]))
    return False


def affine_image(f: PiecewiseLinearPeriodic, c1, c2) -> PiecewiseLinearPeriodic:
    """The function ``c1 * f + c2`` (``c1`` must be nonzero)."""
    c1, c2 = sc.as_scalar(c1), sc.as_scalar(c2)
    if c1 == 0:
        raise InvalidArgument("c1 must be nonzero")
    return PiecewiseLinearPeriodic(
        f.period,
        tuple(Piece(p.left, p.right, c1 * p.slope, c1 * p.intercept + c2, p.right_closed) for p in f.pieces),
    )


# -- analytic validation ---------------------------------------------------

def validate_analytic(f: AnalyticPeriodic, ctx: ToleranceContext = sc.DEFAULT_CONTEXT,
                      samples: int = 16, seed: int = 0) -> AnalyticPeriodic:
    """Spot-check periodicity and the derivative evaluators against finite differences."""
    rng = random.Random(seed)
    with ctx.working():
        P = f.period
        h = mpfr("1e-5")
        scale = 1 + max(abs(f.inf_value), abs(f.sup_value))
        # central differences are O(h^2); allow a generous constant
        fd_tol = 100 * h * h * scale
        for _ in range(samples):
            x = mpfr(rng.random()) * P
            k = rng.randint(-5, 5)
            if abs(f.f(x + k * P) - f.f(x)) > 1e-20 * scale:
                raise InvalidArgument(f"{f.name} is not periodic with period {P}")
            d1 = (f.f(x + h) - f.f(x - h)) / (2 * h)
            d2 = (f.f(x + h) - 2 * f.f(x) + f.f(x - h)) / (h * h)
            if abs(d1 - f.df(x)) > fd_tol:
                raise InvalidArgument(f"{f.name}: df disagrees with finite differences at {x}")
            if abs(d2 - f.d2f(x)) > fd_tol:
                raise InvalidArgument(f"{f.name}: d2f disagrees with finite differences at {x}")
    return f


# -- builtins --------------------------------------------------------------

def _two_pi():
    return 2 * gmpy2.const_pi()


def _approx(x):
    return x if sc.is_approx(x) else mpfr(x)


def cosine() -> AnalyticPeriodic:
    return AnalyticPeriodic(
        "cosine",
        f=lambda x: gmpy2.cos(_approx(x)),
        df=lambda x: -gmpy2.sin(_approx(x)),
        d2f=lambda x: -gmpy2.cos(_approx(x)),
        period_fn=_two_pi,
        inf_value=mpq(-1),
        sup_value=mpq(1),
    )


def shifted_cosine(shift) -> AnalyticPeriodic:
    """``cos(x - shift)``."""
    r = sc.as_scalar(shift)
    return AnalyticPeriodic(
        "shifted_cosine",
        f=lambda x: gmpy2.cos(_approx(x) - r),
        df=lambda x: -gmpy2.sin(_approx(x) - r),
        d2f=lambda x: -gmpy2.cos(_approx(x) - r),
        period_fn=_two_pi,
        inf_value=mpq(-1),
        sup_value=mpq(1),
        params={"shift": r},
    )


def sawtooth() -> PiecewiseLinearPeriodic:
    return pl((0, 1, 1, 0), name="sawtooth")


def triangle() -> PiecewiseLinearPeriodic:
    """Distance to the nearest integer."""
    return pl((0, "1/2", 1, 0), ("1/2", 1, -1, 1), name="triangle")


BUILTINS = ("sawtooth", "triangle", "cosine", "shifted_cosine")


def builtin(name: str, shift=None) -> PeriodicFunction:
    if name == "sawtooth":
        return sawtooth()
    if name == "triangle":
        return triangle()
    if name == "cosine":
        return cosine()
    if name == "shifted_cosine":
        if shift is None:
            raise InvalidArgument("shifted_cosine needs a shift")
        return shifted_cosine(shift)
    raise InvalidArgument(f"unknown builtin {name!r}; expected one of {', '.join(BUILTINS)}")
