"""Two-level number tower: exact rationals (``mpq``) and high-precision reals (``mpfr``).

A *scalar* is either a ``gmpy2.mpq`` (exact mode) or a ``gmpy2.mpfr`` (approx
mode).  gmpy2 already promotes mixed arithmetic to ``mpfr`` and keeps ``mpq``
in lowest terms with a positive denominator, so no wrapper class is needed.

Approximate arithmetic must run inside ``ctx.working()`` so that every
intermediate is rounded at the context's precision.
"""
from __future__ import annotations

import math
from contextlib import contextmanager
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Iterator, Sequence, Union

import gmpy2
from gmpy2 import mpfr, mpq, mpz

from .errors import InvalidArgument

Scalar = Union[mpq, mpfr]

DEFAULT_BITS = 256
DEFAULT_TOLERANCE = 1e-30
MIN_BITS = 64


@dataclass(frozen=True)
class ToleranceContext:
    """Comparison tolerance plus the working precision for approximate values.

    The tolerance only ever applies when at least one operand is approximate;
    two exact scalars are compared exactly.
    """

    equality_tolerance: float = DEFAULT_TOLERANCE
    precision_bits: int = DEFAULT_BITS

    def __post_init__(self):
        if not self.equality_tolerance >= 0:
            raise InvalidArgument(f"tolerance must be nonnegative, got {self.equality_tolerance}")
        if int(self.precision_bits) < MIN_BITS:
            raise InvalidArgument(f"precision must be at least {MIN_BITS} bits")

    @contextmanager
    def working(self) -> Iterator[None]:
        # gmpy2 contexts are thread-local, so this is safe under threads.
        with gmpy2.context(gmpy2.get_context(), precision=int(self.precision_bits)):
            yield

    def approx(self, x) -> mpfr:
        return approx(x, self.precision_bits)


DEFAULT_CONTEXT = ToleranceContext()


_EXACT_TYPES = (int, type(mpq()), type(mpz()), Fraction)
_MPFR = type(mpfr())


def is_exact(x) -> bool:
    if type(x) is _MPFR:
        return False
    return isinstance(x, _EXACT_TYPES) or isinstance(x, Rational)


def exact(x) -> mpq:
    """Coerce ints, Fractions, ``"p/q"`` strings and decimal strings to ``mpq``."""
    if isinstance(x, float):
        raise InvalidArgument("floats are not exact; pass a string or Fraction")
    if isinstance(x, Fraction):
        return mpq(x.numerator, x.denominator)
    if is_approx(x):
        raise InvalidArgument(f"{x!r} is approximate")
    try:
        return mpq(x)
    except (ValueError, TypeError, ZeroDivisionError) as err:
        raise InvalidArgument(f"cannot read {x!r} as a rational") from err


def is_approx(x) -> bool:
    return type(x) is _MPFR


def approx(x, bits: int | None = None) -> mpfr:
    if bits is None:
        return mpfr(x)
    return mpfr(x, int(bits))


def as_scalar(x) -> Scalar:
    """Normalise a Python number into the tower; floats become approx scalars."""
    if is_approx(x):
        return x
    if isinstance(x, float):
        return mpfr(x)
    return exact(x)


def floor(x: Scalar) -> mpz:
    if is_exact(x):
        return mpz(x.numerator) // mpz(x.denominator)
    return mpz(gmpy2.floor(x))


def frac(x: Scalar) -> Scalar:
    """Fractional part, always in [0, 1); exact input stays exact."""
    x = as_scalar(x)
    r = x - floor(x)
    if not is_exact(r) and r >= 1:
        # x just below an integer: x - floor(x) rounded up to 1
        r = mpfr(0)
    return r


def reduce_mod_period(x: Scalar, period: Scalar) -> Scalar:
    x = as_scalar(x)
    period = as_scalar(period)
    if not period > 0:
        raise InvalidArgument(f"period must be positive, got {period}")
    if is_exact(x) and is_exact(period):
        q = floor(x / period)
        return x - q * period
    q = gmpy2.floor(x / period)
    r = x - q * period
    if r < 0:
        r += period
    if r >= period:
        r -= period
    if r < 0:
        r = mpfr(0)
    return r


def eq_tol(a: Scalar, b: Scalar, ctx: ToleranceContext = DEFAULT_CONTEXT) -> bool:
    if is_exact(a) and is_exact(b):
        return a == b
    return abs(a - b) <= ctx.equality_tolerance


def cluster_distinct(values: Sequence[Scalar], ctx: ToleranceContext = DEFAULT_CONTEXT) -> list[Scalar]:
    """Collapse a sorted list to one representative (the first member) per cluster.

    A new cluster starts when a value is not ``eq_tol`` to the current
    representative, so consecutive representatives always differ by more than
    the tolerance.
    """
    return [values[group[0]] for group in cluster_groups(values, ctx)]


def cluster_groups(values: Sequence[Scalar], ctx: ToleranceContext = DEFAULT_CONTEXT) -> list[list[int]]:
    """Like ``cluster_distinct`` but return the member indices of every cluster."""
    groups: list[list[int]] = []
    rep = prev = None
    for i, v in enumerate(values):
        if prev is not None and v < prev:
            raise InvalidArgument("cluster_distinct expects values sorted ascending")
        prev = v
        if rep is None or not eq_tol(v, rep, ctx):
            groups.append([i])
            rep = v
        else:
            groups[-1].append(i)
    return groups


def all_exact(values: Iterable) -> bool:
    return all(is_exact(v) for v in values)


# -- serialisation ---------------------------------------------------------

def decimal_string(x: mpfr) -> str:
    """Scientific notation with enough digits to round-trip at ``x.precision``."""
    if gmpy2.is_zero(x):
        return "-0.0" if gmpy2.is_signed(x) else "0.0"
    if not gmpy2.is_finite(x):
        return str(x)
    ndigits = int(math.ceil(x.precision * math.log10(2))) + 2
    mantissa, exponent, _ = x.digits(10, ndigits)
    sign = ""
    if mantissa.startswith("-"):
        sign, mantissa = "-", mantissa[1:]
    return f"{sign}{mantissa[0]}.{mantissa[1:]}e{exponent - 1}"


def format_scalar(x: Scalar) -> str:
    x = as_scalar(x)
    if is_exact(x):
        return str(x) if x.denominator != 1 else str(x.numerator)
    return decimal_string(x)


def to_json(x: Scalar) -> dict:
    x = as_scalar(x)
    if is_exact(x):
        return {"rational": f"{x.numerator}/{x.denominator}"}
    return {"real": decimal_string(x), "bits": int(x.precision)}


def from_json(obj) -> Scalar:
    """Inverse of ``to_json``; bare ints and ``"p/q"`` strings are accepted as rationals."""
    if isinstance(obj, dict):
        if "rational" in obj:
            return exact(obj["rational"])
        if "real" in obj:
            return mpfr(obj["real"], int(obj.get("bits", DEFAULT_BITS)))
        raise InvalidArgument(f"not a scalar document: {obj!r}")
    if isinstance(obj, (int, str)):
        return exact(obj)
    raise InvalidArgument(f"not a scalar document: {obj!r}")
