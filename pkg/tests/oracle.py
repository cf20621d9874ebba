"""Independent brute-force reference computations (no gaplab imports)."""
from fractions import Fraction
from math import floor

import mpmath

mpmath.mp.prec = 300


def frac(x):
    return x - floor(x)


def gap_lengths(values, inf, sup):
    """Consecutive gaps of the distinct sorted values plus the wraparound term."""
    s = sorted(set(values))
    return [b - a for a, b in zip(s, s[1:])] + [s[0] - inf + sup - s[-1]]


def exact_gap_set(f, alpha, N, inf, sup, beta=Fraction(0)):
    return set(gap_lengths([f(frac(d * alpha + beta)) for d in range(1, N + 1)], inf, sup))


def distinct(xs, tol):
    xs = sorted(xs)
    out = [xs[0]]
    for x in xs[1:]:
        if x - out[-1] > tol:
            out.append(x)
    return out


def circle_lengths(points, tol=mpmath.mpf("1e-40")):
    pts = distinct(points, tol)
    if len(pts) > 1 and 1 - pts[-1] <= tol:
        pts = pts[:-1]
    return [b - a for a, b in zip(pts, pts[1:])] + [1 - (pts[-1] - pts[0])]


def classify(f, piece_of, alpha, N):
    """Map each consecutive pair (s, s') of distinct values to 'interior'/'non_interior'.

    Interior when some d, d' with f(d alpha) = s and f(d' alpha) = s' have
    reduced coordinates in the same piece.
    """
    pre = {}
    for d in range(1, N + 1):
        x = frac(d * alpha)
        pre.setdefault(f(x), set()).add(piece_of(x))
    s = sorted(pre)
    return {(a, b): ("interior" if pre[a] & pre[b] else "non_interior") for a, b in zip(s, s[1:])}
