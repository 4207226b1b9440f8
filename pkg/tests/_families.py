"""Random inputs shared by the test modules."""

import math

import numpy as np

from lorentzmap import monotone as mm


def random_ray_map(rng, knots=4):
    """Piecewise-linear increasing bijection of [0, inf) fixing 0."""
    xs = np.concatenate([[0.0], np.cumsum(rng.uniform(0.2, 1.5, knots))])
    ys = np.concatenate([[0.0], np.cumsum(rng.uniform(0.2, 1.5, knots))])
    return mm.restrict(mm.PiecewiseLinear(xs, ys), 0.0, math.inf)


def random_unit_map(rng, knots=3):
    """Piecewise-linear increasing bijection of [0, 1] fixing both ends."""
    xs = np.concatenate([[0.0], np.sort(rng.uniform(0.05, 0.95, knots)), [1.0]])
    ys = np.concatenate([[0.0], np.sort(rng.uniform(0.05, 0.95, knots)), [1.0]])
    return mm.restrict(mm.PiecewiseLinear(xs, ys), 0.0, 1.0)


def random_smooth(rng):
    """Smooth increasing bijection of the line: a cubic or a scaled exponential."""
    a, b, c = rng.uniform(0.3, 2.0, 3)
    if rng.random() < 0.5:
        return mm.Polynomial([rng.uniform(-1, 1), a, 0.0, 0.3 * b])
    return mm.compose(mm.Affine(a, rng.uniform(-1, 1)), mm.Exp1(), mm.Affine(c, 0.0))


class SelfSimilar(mm.MonotoneMap):
    """f(0) = 0 and f(s) = 2^-n g(2^n s) on [2^-n, 2^(1-n)] for every integer n,
    where g is an increasing bijection of [1, 2]."""

    domain = (0.0, math.inf)
    direction = mm.INCREASING

    def __init__(self, g):
        self.g = g

    def _eval(self, s):
        out = np.zeros_like(s)
        pos = s > 0
        n = -np.floor(np.log2(s[pos]))
        scale = 2.0 ** n
        out[pos] = self.g(np.clip(scale * s[pos], 1.0, 2.0)) / scale
        return out

    def _limit(self, sign):
        return math.inf if sign > 0 else 0.0

    @property
    def spec(self):
        return f"selfsimilar({self.g.spec})"


def random_bracket_map(rng, knots=3):
    """Piecewise-linear increasing bijection of [1, 2]."""
    xs = np.concatenate([[1.0], np.sort(rng.uniform(1.05, 1.95, knots)), [2.0]])
    ys = np.concatenate([[1.0], np.sort(rng.uniform(1.05, 1.95, knots)), [2.0]])
    return mm.restrict(mm.PiecewiseLinear(xs, ys), 1.0, 2.0)


def four_scale_map(f, a, X0=0.0, Y0=0.0, U0=0.0, V0=0.0):
    """(h, k) built from f by scaling its argument by a1..a4 on the four
    half-lines around (X0, Y0)."""
    a1, a2, a3, a4 = a

    def side(scale, origin, left):
        if left:
            return mm.Negate(mm.Compose(f, mm.Affine(-scale, scale * origin)))
        return mm.Compose(f, mm.Affine(scale, -scale * origin))

    h = mm.Piecewise(X0, side(a3, X0, True), side(a1, X0, False))
    k = mm.Piecewise(Y0, side(a4, Y0, True), side(a2, Y0, False))
    return mm.compose(mm.Affine(1.0, U0), h), mm.compose(mm.Affine(1.0, V0), k)
