"""Seeded random parameter draws and the batch sweep driver.

Random piecewise-linear functions use rational breakpoints with bounded
denominators and nonzero integer slopes in [-5, 5], so exact arithmetic stays
cheap.  Intercepts are chosen by stacking the piece images in a random
vertical order with random (possibly zero) spacing; candidates that still
fail validation or the requested property are rejected and redrawn.
"""
from __future__ import annotations

import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import gmpy2
from gmpy2 import mpfr, mpq, mpz

from . import theorems as th
from .errors import InvalidArgument
from .periodic import (
    Piece,
    PiecewiseLinearPeriodic,
    cosine,
    injective_on_fd,
    monotone_on_fd,
)
from .scalar import DEFAULT_CONTEXT, ToleranceContext

SLOPES = [m for m in range(-5, 6) if m != 0]


def random_unit(rng: random.Random, bits: int = 256) -> mpfr:
    """Uniform draw from (0, 1) carrying ``bits`` random mantissa bits."""
    while True:
        k = rng.getrandbits(bits)
        if k:
            return mpfr(mpq(k, mpz(2) ** bits), bits)    # exact: k < 2**bits


def random_rational(rng: random.Random, max_den: int = 12, open_interval: bool = True) -> mpq:
    """Rational in (0, 1) (or [0, 1) when ``open_interval`` is False)."""
    while True:
        q = rng.randint(1, max_den)
        p = rng.randint(0, q - 1)
        if p or not open_interval:
            return mpq(p, q)


def _breakpoints(rng, k, max_den):
    pts: set = set()
    while len(pts) < k - 1:
        pts.add(random_rational(rng, max_den))
    return [mpq(0)] + sorted(pts) + [mpq(1)]


def _stack(rng, slopes, bounds, order, max_den):
    """Intercepts placing piece images one above another in ``order``."""
    intercepts = [None] * len(slopes)
    base = mpq(rng.randint(-3, 3))
    for i in order:
        m, a, b = slopes[i], bounds[i], bounds[i + 1]
        lo_x = a if m > 0 else b
        intercepts[i] = base - m * lo_x
        base += abs(m) * (b - a)
        if rng.random() < 0.7:
            base += random_rational(rng, max_den, open_interval=False)
    return intercepts


def random_injective_pl(rng: random.Random, min_pieces: int = 2, max_pieces: int = 5,
                        monotone: bool = False, equal_end_slopes: bool = False,
                        max_den: int = 12, max_tries: int = 10_000) -> PiecewiseLinearPeriodic:
    for _ in range(max_tries):
        k = rng.randint(min_pieces, max_pieces)
        bounds = _breakpoints(rng, k, max_den)
        if monotone:
            sign = rng.choice((1, -1))
            slopes = [sign * rng.randint(1, 5) for _ in range(k)]
        else:
            slopes = [rng.choice(SLOPES) for _ in range(k)]
        if equal_end_slopes:
            slopes[-1] = slopes[0]
        if monotone:
            order = list(range(k)) if slopes[0] > 0 else list(reversed(range(k)))
        else:
            order = rng.sample(range(k), k)
        intercepts = _stack(rng, slopes, bounds, order, max_den)
        pieces = [Piece(bounds[i], bounds[i + 1], slopes[i], intercepts[i]) for i in range(k)]
        try:
            f = PiecewiseLinearPeriodic(1, tuple(pieces))
        except InvalidArgument:
            continue
        if not injective_on_fd(f):
            continue
        if monotone and not monotone_on_fd(f):
            continue
        return f
    raise RuntimeError("rejection sampling did not produce a function")


def random_pl(rng: random.Random, min_pieces: int = 1, max_pieces: int = 5, max_den: int = 12,
              max_tries: int = 10_000) -> PiecewiseLinearPeriodic:
    """Arbitrary (not necessarily injective) validated function with rational data."""
    for _ in range(max_tries):
        k = rng.randint(min_pieces, max_pieces)
        bounds = _breakpoints(rng, k, max_den)
        pieces = []
        for i in range(k):
            closed = i < k - 1 and rng.random() < 0.2
            slope = mpq(rng.randint(-5, 5), rng.randint(1, 3))
            intercept = mpq(rng.randint(-6, 6), rng.randint(1, max_den))
            pieces.append(Piece(bounds[i], bounds[i + 1], slope, intercept, closed))
        try:
            return PiecewiseLinearPeriodic(1, tuple(pieces))
        except InvalidArgument:
            continue
    raise RuntimeError("rejection sampling did not produce a function")


# -- sweeps ----------------------------------------------------------------

@dataclass(frozen=True)
class SweepConfig:
    statement: str
    draws: int = 100
    seed: int = 0
    max_N: int | None = None
    max_pieces: int = 4
    rational_fraction: float = 0.1
    workers: int = 1


DEFAULT_MAX_N = {
    "three_gap": 5000,
    "affine": 1000,
    "general": 2000,
    "tightened": 2000,
    "two_piece_shift": 1000,
    "triangle": 5000,
    "five_distance": 1000,
    "main_construction": 50,
    "c2_construction": 50,
}


def draw_params(statement: str, rng: random.Random, max_N: int, max_pieces: int = 4,
                rational_fraction: float = 0.1, bits: int = 256) -> dict:
    """One random parameter set for ``statement``."""

    def alpha():
        if rng.random() < rational_fraction:
            return random_rational(rng, 1000)
        return random_unit(rng, bits)

    N = rng.randint(1, max_N)
    if statement == "three_gap":
        return {"alpha": alpha(), "N": N}
    if statement == "affine":
        return {"m": mpq(rng.randint(-5, 5), rng.randint(1, 4)), "c": mpq(rng.randint(-8, 8), rng.randint(1, 8)),
                "alpha": alpha(), "beta": alpha(), "N": N}
    if statement == "general":
        return {"f": random_injective_pl(rng, 2, max(2, max_pieces)), "alpha": alpha(), "N": N}
    if statement == "tightened":
        f = random_injective_pl(rng, 1, max(2, max_pieces), monotone=True, equal_end_slopes=True)
        return {"f": f, "alpha": alpha(), "N": N}
    if statement == "two_piece_shift":
        if rng.random() < rational_fraction:
            kappa = random_rational(rng, 50)
            beta = kappa * random_rational(rng, 50) if rng.random() < 0.8 else kappa
        else:
            kappa = random_unit(rng, bits)
            beta = kappa * random_unit(rng, bits)
        return {"kappa": kappa, "beta": beta, "alpha": alpha(), "N": N}
    if statement == "triangle":
        # lower bound is only claimed for irrational-mode alpha
        return {"alpha": random_unit(rng, bits), "N": rng.randint(2, max(2, max_N))}
    if statement == "five_distance":
        return {"alpha": alpha(), "beta": alpha(), "N": N}
    if statement == "main_construction":
        return {"n": rng.randint(1, max_N)}
    if statement == "c2_construction":
        return {"n": rng.randint(1, max_N)}
    raise InvalidArgument(f"unknown statement {statement!r}")


def run_statement(statement: str, params: dict, ctx: ToleranceContext = DEFAULT_CONTEXT) -> th.VerificationReport:
    """Dispatch one parameter set to its verifier."""
    p = params
    if statement == "three_gap":
        return th.verify_three_gap(p["alpha"], p["N"], ctx)
    if statement == "affine":
        return th.verify_affine(p["m"], p["c"], p["alpha"], p.get("beta", 0), p["N"], ctx)
    if statement == "general":
        return th.verify_general_bound(p["f"], p["alpha"], p["N"], ctx)
    if statement == "tightened":
        return th.verify_tightened_bound(p["f"], p["alpha"], p["N"], ctx)
    if statement == "two_piece_shift":
        return th.verify_two_piece_shift(p["kappa"], p["beta"], p["alpha"], p["N"], ctx)
    if statement == "triangle":
        return th.verify_triangle_bounds(p["alpha"], p["N"], ctx, p.get("irrational"))
    if statement == "five_distance":
        return th.verify_five_distance(p["alpha"], p["beta"], p["N"], ctx)
    if statement == "main_construction":
        return th.verify_main_construction(p["n"], ctx)
    if statement == "c2_construction":
        return th.construct_c2_witness(p.get("f") or cosine(), p["n"], ctx)[1]
    raise InvalidArgument(f"unknown statement {statement!r}")


def _run_one(args):
    statement, params, ctx = args
    return run_statement(statement, params, ctx)


def run_sweep(cfg: SweepConfig, ctx: ToleranceContext = DEFAULT_CONTEXT) -> list[th.VerificationReport]:
    """Reports in draw order; the parameter draws depend only on ``cfg.seed``."""
    if cfg.draws < 1:
        raise InvalidArgument("draws must be at least 1")
    if cfg.statement not in th.STATEMENTS:
        raise InvalidArgument(f"unknown statement {cfg.statement!r}")
    rng = random.Random(cfg.seed)
    max_N = cfg.max_N or DEFAULT_MAX_N[cfg.statement]
    with gmpy2.context(gmpy2.get_context(), precision=ctx.precision_bits):
        draws = [draw_params(cfg.statement, rng, max_N, cfg.max_pieces, cfg.rational_fraction,
                             ctx.precision_bits) for _ in range(cfg.draws)]
    jobs = [(cfg.statement, p, ctx) for p in draws]
    if cfg.workers > 1:
        with ProcessPoolExecutor(cfg.workers) as pool:
            return list(pool.map(_run_one, jobs, chunksize=8))
    return [_run_one(j) for j in jobs]


def summarize(reports: list[th.VerificationReport]) -> dict:
    return {
        "draws": len(reports),
        "max_observed": max(r.observed for r in reports),
        "min_observed": min(r.observed for r in reports),
        "pass_rate": sum(r.passed for r in reports) / len(reports),
        "failures": [i for i, r in enumerate(reports) if not r.passed],
    }
