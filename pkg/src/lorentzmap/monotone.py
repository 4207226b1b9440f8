"""Strictly monotone real maps as immutable expression trees.

Every node evaluates vectorised over numpy arrays, knows its domain and (when
it can tell) its direction, and produces a structural inverse whenever one
exists.  Nodes that cannot be inverted structurally fall back to bracketed
bisection through :class:`Inverse`.

Folded inputs (even maps such as ``|t|**p`` or ``cos``) are representable so
that unfoldings and symmetry checks have something to work on; they report
``direction == 0`` and refuse inversion on their full domain.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    ConvergenceError,
    DomainError,
    DomainMismatch,
    NotFixingEndpoints,
    NotFixingOrigin,
    NotInvertible,
    NotMonotone,
    NonPositiveDensity,
    RangeError,
    ValidationError,
)

INF = math.inf
INCREASING, DECREASING, NONMONOTONE = 1, -1, 0

BISECT_MAXITER = 200
BRACKET_MAXITER = 1100
ENDPOINT_TOL = 1e-12
# sampled monotonicity checks look at most this far out on infinite domains
SAMPLE_HALFWIDTH = 50.0


def fmt(x: float) -> str:
    """Canonical number text for specs: integers bare, otherwise repr."""
    x = float(x)
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if x == int(x) and abs(x) < 1e15:
        return str(int(x))
    return repr(x)


def _slack(bound: float) -> float:
    return 1e-12 * max(1.0, abs(bound))


class MonotoneMap:
    """Base node.  Subclasses set ``domain`` and ``direction`` in __init__
    and never mutate afterwards."""

    domain: tuple[float, float] = (-INF, INF)
    direction: int = NONMONOTONE

    def __call__(self, t):
        arr = np.asarray(t, dtype=float)
        flat = np.atleast_1d(arr)
        out = self._eval(self._check_domain(flat))
        if arr.ndim == 0:
            return float(out[0])
        return out.reshape(arr.shape)

    def _check_domain(self, t: np.ndarray) -> np.ndarray:
        lo, hi = self.domain
        if np.isnan(t).any():
            raise DomainError(f"NaN argument for {self.spec}")
        if (t < lo - _slack(lo)).any() or (t > hi + _slack(hi)).any():
            bad = t[(t < lo - _slack(lo)) | (t > hi + _slack(hi))][0]
            raise DomainError(f"{bad!r} outside domain [{fmt(lo)}, {fmt(hi)}] of {self.spec}")
        if math.isfinite(lo) or math.isfinite(hi):
            t = np.clip(t, lo, hi)
        return t

    def _eval(self, t: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    # -- structure -----------------------------------------------------
    @property
    def spec(self) -> str:
        raise NotImplementedError

    @property
    def breakpoints(self) -> tuple[float, ...]:
        return ()

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.spec!r})"

    def __str__(self) -> str:
        return self.spec

    # -- limits and ranges --------------------------------------------
    def limit(self, t: float) -> float:
        """Value at t, or the limit when t is infinite (nan if none)."""
        if math.isfinite(t):
            return float(self(t))
        return self._limit(1 if t > 0 else -1)

    def _limit(self, sign: int) -> float:
        return math.nan

    def direction_on(self, lo: float, hi: float) -> int:
        if self.direction != NONMONOTONE:
            return self.direction
        return sampled_direction(self, lo, hi)

    def image_on(self, lo: float, hi: float) -> tuple[float, float]:
        a, b = self.limit(lo), self.limit(hi)
        return (a, b) if a <= b else (b, a)

    @property
    def image(self) -> tuple[float, float] | None:
        if self.direction == NONMONOTONE:
            return None
        return self.image_on(*self.domain)

    # -- inversion -----------------------------------------------------
    def inverse(self) -> MonotoneMap:
        if self.direction == NONMONOTONE:
            raise NotInvertible(f"{self.spec} is not monotone on its domain")
        return Inverse(self)

    def _closed_inverse(self, y: np.ndarray) -> np.ndarray | None:
        return None


# ---------------------------------------------------------------------------
# leaves


class Identity(MonotoneMap):
    direction = INCREASING

    def _eval(self, t):
        return t.copy()

    @property
    def spec(self):
        return "id"

    def _limit(self, sign):
        return sign * INF

    def inverse(self):
        return self


class Affine(MonotoneMap):
    def __init__(self, a: float, b: float = 0.0):
        if a == 0 or not math.isfinite(a) or not math.isfinite(b):
            raise ValidationError(f"affine map needs finite nonzero slope, got {a}, {b}")
        self.a, self.b = float(a), float(b)
        self.direction = INCREASING if a > 0 else DECREASING

    def _eval(self, t):
        return self.a * t + self.b

    @property
    def spec(self):
        return f"affine:{fmt(self.a)},{fmt(self.b)}"

    def _limit(self, sign):
        return sign * self.a * INF

    def inverse(self):
        return Affine(1.0 / self.a, -self.b / self.a)


class PowerOdd(MonotoneMap):
    """sgn(t)|t|**p."""

    direction = INCREASING

    def __init__(self, p: float):
        if not p > 0:
            raise ValidationError(f"power must be positive, got {p}")
        self.p = float(p)

    def _eval(self, t):
        return np.sign(t) * np.abs(t) ** self.p

    @property
    def spec(self):
        return f"odd(pow:{fmt(self.p)})"

    @property
    def breakpoints(self):
        return () if self.p == 1 else (0.0,)

    def _limit(self, sign):
        return sign * INF

    def inverse(self):
        return PowerOdd(1.0 / self.p)


class PowerEven(MonotoneMap):
    """|t|**p, the folded power; increasing on [0, inf)."""

    direction = NONMONOTONE

    def __init__(self, p: float):
        if not p > 0:
            raise ValidationError(f"power must be positive, got {p}")
        self.p = float(p)

    def _eval(self, t):
        return np.abs(t) ** self.p

    @property
    def spec(self):
        return f"pow:{fmt(self.p)}"

    @property
    def breakpoints(self):
        return (0.0,)

    def _limit(self, sign):
        return INF

    def direction_on(self, lo, hi):
        if lo >= 0:
            return INCREASING
        if hi <= 0:
            return DECREASING
        return NONMONOTONE


class Polynomial(MonotoneMap):
    def __init__(self, coeffs):
        c = [float(x) for x in coeffs]
        while len(c) > 1 and c[-1] == 0:
            c.pop()
        if not c:
            raise ValidationError("polynomial needs at least one coefficient")
        self.coeffs = tuple(c)
        self.direction = self._global_direction()

    def _global_direction(self) -> int:
        c = self.coeffs
        if len(c) == 1 or len(c) % 2 == 1:
            # constant or even degree: never monotone on the whole line
            return NONMONOTONE
        if len(c) == 2:
            return INCREASING if c[1] > 0 else DECREASING
        dp = np.polynomial.polynomial.polyder(c)
        roots = np.polynomial.polynomial.polyroots(dp)
        real = np.sort(roots[np.abs(roots.imag) < 1e-9].real)
        probes = np.concatenate([real[:1] - 1.0, (real[1:] + real[:-1]) / 2, real[-1:] + 1.0]) if real.size else np.array([0.0])
        signs = np.sign(np.polynomial.polynomial.polyval(probes, dp))
        if (signs > 0).all():
            return INCREASING
        if (signs < 0).all():
            return DECREASING
        return NONMONOTONE

    def _eval(self, t):
        return np.polynomial.polynomial.polyval(t, self.coeffs)

    @property
    def spec(self):
        return "poly:" + ",".join(fmt(x) for x in self.coeffs)

    def _limit(self, sign):
        n = len(self.coeffs) - 1
        lead = self.coeffs[-1]
        if n == 0:
            return lead
        return math.copysign(INF, lead * (sign ** n))


class PiecewiseLinear(MonotoneMap):
    """Linear interpolation through the nodes, extended linearly beyond the
    first and last node with the end-segment slopes."""

    def __init__(self, xs, ys):
        xs = np.asarray(xs, dtype=float)
        ys = np.asarray(ys, dtype=float)
        if xs.ndim != 1 or xs.shape != ys.shape or xs.size < 2:
            raise ValidationError("pwl needs at least two (x, y) nodes")
        if not (np.diff(xs) > 0).all():
            raise ValidationError("pwl nodes must have strictly increasing x")
        self.xs, self.ys = xs, ys
        dy = np.diff(ys)
        if (dy > 0).all():
            self.direction = INCREASING
        elif (dy < 0).all():
            self.direction = DECREASING
        else:
            self.direction = NONMONOTONE

    def _eval(self, t):
        xs, ys = self.xs, self.ys
        out = np.interp(t, xs, ys)
        left = t < xs[0]
        right = t > xs[-1]
        if left.any():
            s = (ys[1] - ys[0]) / (xs[1] - xs[0])
            out[left] = ys[0] + s * (t[left] - xs[0])
        if right.any():
            s = (ys[-1] - ys[-2]) / (xs[-1] - xs[-2])
            out[right] = ys[-1] + s * (t[right] - xs[-1])
        return out

    @property
    def spec(self):
        return "pwl:" + ";".join(f"{fmt(x)},{fmt(y)}" for x, y in zip(self.xs, self.ys))

    @property
    def breakpoints(self):
        return tuple(float(x) for x in self.xs)

    def _limit(self, sign):
        if sign > 0:
            s = self.ys[-1] - self.ys[-2]
            return float(self.ys[-1]) if s == 0 else math.copysign(INF, s)
        s = self.ys[1] - self.ys[0]
        return float(self.ys[0]) if s == 0 else math.copysign(INF, -s)

    def inverse(self):
        if self.direction == INCREASING:
            return PiecewiseLinear(self.ys, self.xs)
        if self.direction == DECREASING:
            return PiecewiseLinear(self.ys[::-1], self.xs[::-1])
        return super().inverse()


# -- named builtins -----------------------------------------------------------


class Exp1(MonotoneMap):
    """e**t - 1."""

    direction = INCREASING

    def _eval(self, t):
        return np.expm1(t)

    @property
    def spec(self):
        return "exp1"

    def _limit(self, sign):
        return INF if sign > 0 else -1.0

    def _closed_inverse(self, y):
        # the endpoint -1 maps to -inf, the limit of the domain
        with np.errstate(divide="ignore"):
            return np.log1p(y)


class Exp(MonotoneMap):
    direction = INCREASING

    def _eval(self, t):
        return np.exp(t)

    @property
    def spec(self):
        return "exp"

    def _limit(self, sign):
        return INF if sign > 0 else 0.0

    def _closed_inverse(self, y):
        return np.log(y)


class Sin(MonotoneMap):
    direction = NONMONOTONE

    def _eval(self, t):
        return np.sin(t)

    @property
    def spec(self):
        return "sin"


class Cos(MonotoneMap):
    direction = NONMONOTONE

    def _eval(self, t):
        return np.cos(t)

    @property
    def spec(self):
        return "cos"


class SinMono(MonotoneMap):
    """sin restricted to [-pi/2, pi/2], an increasing bijection onto [-1, 1]."""

    direction = INCREASING
    domain = (-math.pi / 2, math.pi / 2)

    def _eval(self, t):
        return np.sin(t)

    @property
    def spec(self):
        return "sinmono"

    def _closed_inverse(self, y):
        return np.arcsin(np.clip(y, -1.0, 1.0))


class Ridge(MonotoneMap):
    """2(1+a)t + t**2 for t >= 0 and 2(1-a)t - t**2 for t <= 0.

    Its zero-sum contour h(X) + h(Y) = 0 is the ridge y = -a|x|/(1+|x|).
    """

    direction = INCREASING

    def __init__(self, a: float):
        if not -1 < a < 1:
            raise ValidationError(f"ridge parameter must satisfy |a| < 1, got {a}")
        self.a = float(a)

    def _eval(self, t):
        a = self.a
        return np.where(t >= 0, 2 * (1 + a) * t + t * t, 2 * (1 - a) * t - t * t)

    @property
    def spec(self):
        return f"ridge:{fmt(self.a)}"

    @property
    def breakpoints(self):
        return (0.0,)

    def _limit(self, sign):
        return sign * INF

    def _closed_inverse(self, y):
        a = self.a
        up = -(1 + a) + np.sqrt((1 + a) ** 2 + np.maximum(y, 0.0))
        down = (1 - a) - np.sqrt((1 - a) ** 2 - np.minimum(y, 0.0))
        return np.where(y >= 0, up, down)


# ---------------------------------------------------------------------------
# combinators


class Compose(MonotoneMap):
    """outer(inner(t))."""

    def __init__(self, outer: MonotoneMap, inner: MonotoneMap):
        self.outer, self.inner = outer, inner
        self.domain = self._preimage_domain()
        if outer.direction and inner.direction:
            self.direction = outer.direction * inner.direction
        elif inner.direction:
            self.direction = outer.direction_on(*inner.image) * inner.direction
        else:
            self.direction = NONMONOTONE

    def _preimage_domain(self):
        lo, hi = self.inner.domain
        olo, ohi = self.outer.domain
        if self.inner.direction == NONMONOTONE or (olo == -INF and ohi == INF):
            return (lo, hi)
        try:
            inv = self.inner.inverse()
            ilo, ihi = self.inner.image
        except ValidationError:
            return (lo, hi)
        a, b = max(olo, ilo), min(ohi, ihi)
        if a > b:
            raise DomainMismatch(f"{self.inner.spec} never lands in the domain of {self.outer.spec}")
        pa = inv.limit(a) if a > ilo else None
        pb = inv.limit(b) if b < ihi else None
        if self.inner.direction == DECREASING:
            pa, pb = pb, pa
        if pa is not None and not math.isnan(pa):
            lo = max(lo, pa)
        if pb is not None and not math.isnan(pb):
            hi = min(hi, pb)
        return (lo, hi)

    def _eval(self, t):
        return self.outer(self.inner(t))

    @property
    def spec(self):
        return f"comp({self.outer.spec},{self.inner.spec})"

    @property
    def breakpoints(self):
        pts = set(self.inner.breakpoints)
        if self.outer.breakpoints and self.inner.direction:
            try:
                inv = self.inner.inverse()
                ilo, ihi = self.inner.image
                for b in self.outer.breakpoints:
                    if ilo <= b <= ihi:
                        pts.add(float(inv(b)))
            except ValidationError:
                pass
        return tuple(sorted(pts))

    def _limit(self, sign):
        v = self.inner._limit(sign)
        if math.isnan(v):
            return v
        return self.outer.limit(v)

    def direction_on(self, lo, hi):
        d_in = self.inner.direction_on(lo, hi)
        if d_in == NONMONOTONE:
            return sampled_direction(self, lo, hi)
        a, b = self.inner.image_on(max(lo, self.domain[0]), min(hi, self.domain[1]))
        d_out = self.outer.direction_on(a, b)
        return d_in * d_out

    def inverse(self):
        if self.direction == NONMONOTONE:
            raise NotInvertible(f"{self.spec} is not monotone on its domain")
        return compose(invert_on(self.inner, *self.domain), invert_on(self.outer, *self.inner.image_on(*self.domain)))


class Inverse(MonotoneMap):
    """Functional inverse; closed form when the inner node offers one,
    bracketed bisection otherwise."""

    def __init__(self, inner: MonotoneMap):
        if inner.direction == NONMONOTONE:
            raise NotInvertible(f"{inner.spec} is not monotone on its domain")
        self.inner = inner
        self.direction = inner.direction
        self.domain = inner.image

    def _check_domain(self, y):
        try:
            return super()._check_domain(y)
        except DomainError as exc:
            raise RangeError(f"{exc} (not in the range of {self.inner.spec})") from None

    def _eval(self, y):
        closed = self.inner._closed_inverse(y)
        if closed is not None:
            return closed
        return bisect_inverse(self.inner, y)

    @property
    def spec(self):
        return f"inv({self.inner.spec})"

    @property
    def breakpoints(self):
        out = []
        for b in self.inner.breakpoints:
            try:
                out.append(float(self.inner(b)))
            except ValidationError:
                pass
        return tuple(sorted(out))

    def _limit(self, sign):
        lo, hi = self.inner.domain
        if self.inner.direction == INCREASING:
            return hi if sign > 0 else lo
        return lo if sign > 0 else hi

    def inverse(self):
        return self.inner


class Negate(MonotoneMap):
    def __init__(self, inner: MonotoneMap):
        self.inner = inner
        self.domain = inner.domain
        self.direction = -inner.direction

    def _eval(self, t):
        return -self.inner(t)

    @property
    def spec(self):
        return f"neg({self.inner.spec})"

    @property
    def breakpoints(self):
        return self.inner.breakpoints

    def _limit(self, sign):
        return -self.inner._limit(sign)

    def direction_on(self, lo, hi):
        return -self.inner.direction_on(lo, hi)

    def inverse(self):
        if self.direction == NONMONOTONE:
            raise NotInvertible(f"{self.spec} is not monotone on its domain")
        return compose(self.inner.inverse(), Affine(-1.0, 0.0))


class OddExtension(MonotoneMap):
    """p(t) for t >= 0 and -p(-t) for t < 0."""

    def __init__(self, inner: MonotoneMap):
        lo, hi = inner.domain
        if lo > 0:
            raise DomainMismatch(f"odd extension needs 0 in the domain of {inner.spec}")
        if abs(inner(0.0)) > ENDPOINT_TOL:
            raise NotFixingOrigin(f"odd extension needs p(0) = 0, got {inner(0.0)!r} for {inner.spec}")
        d = inner.direction_on(0.0, hi)
        if d == NONMONOTONE:
            raise NotMonotone(f"{inner.spec} is not monotone on [0, {fmt(hi)}]")
        self.inner = inner
        self.domain = (-hi, hi)
        self.direction = d

    def _eval(self, t):
        out = np.empty_like(t)
        pos = t >= 0
        if pos.any():
            out[pos] = self.inner(t[pos])
        if (~pos).any():
            out[~pos] = -self.inner(-t[~pos])
        return out

    @property
    def spec(self):
        return f"odd({self.inner.spec})"

    @property
    def breakpoints(self):
        pos = {b for b in self.inner.breakpoints if b >= 0}
        return tuple(sorted(pos | {-b for b in pos} | {0.0}))

    def _limit(self, sign):
        return sign * self.inner.limit(INF)

    def inverse(self):
        return OddExtension(invert_on(self.inner, 0.0, self.domain[1]))


class Tilde(MonotoneMap):
    """1 - g(1 - s) on [0, 1]: the half-turn of the graph about (1/2, 1/2)."""

    domain = (0.0, 1.0)

    def __init__(self, inner: MonotoneMap):
        lo, hi = inner.domain
        if lo > 0 or hi < 1:
            raise DomainMismatch(f"tilde needs [0, 1] inside the domain of {inner.spec}")
        g0, g1 = inner(0.0), inner(1.0)
        if abs(g0) > ENDPOINT_TOL or abs(g1 - 1) > ENDPOINT_TOL:
            raise NotFixingEndpoints(f"tilde needs g(0) = 0 and g(1) = 1, got {g0!r}, {g1!r} for {inner.spec}")
        self.inner = inner
        self.direction = inner.direction_on(0.0, 1.0)

    def _eval(self, s):
        return 1.0 - self.inner(1.0 - s)

    @property
    def spec(self):
        return f"tilde({self.inner.spec})"

    @property
    def breakpoints(self):
        return tuple(sorted(1.0 - b for b in self.inner.breakpoints if 0 <= b <= 1))

    def inverse(self):
        if self.direction == NONMONOTONE:
            raise NotInvertible(f"{self.spec} is not monotone on [0, 1]")
        return Tilde(invert_on(self.inner, 0.0, 1.0))


class Piecewise(MonotoneMap):
    """left(t) below the split, right(t) above.  The split point itself goes
    to the left branch unless ``closed == 'right'``."""

    def __init__(self, split: float, left: MonotoneMap, right: MonotoneMap, closed: str = "left"):
        if closed not in ("left", "right"):
            raise ValidationError(f"closed must be 'left' or 'right', got {closed!r}")
        self.split = float(split)
        self.left, self.right, self.closed = left, right, closed
        lo, hi = left.domain[0], right.domain[1]
        if left.domain[1] < self.split - _slack(self.split) or right.domain[0] > self.split + _slack(self.split):
            raise DomainMismatch(f"branches of piece at {fmt(split)} do not reach the split")
        self.domain = (lo, hi)
        self.direction = self._direction()

    def _direction(self) -> int:
        lo, hi = self.domain
        dl = self.left.direction_on(lo, self.split)
        dr = self.right.direction_on(self.split, hi)
        if dl == NONMONOTONE or dl != dr:
            return NONMONOTONE
        jump = float(self.right(self.split)) - float(self.left(self.split))
        if jump * dl < -1e-12 * max(1.0, abs(float(self.left(self.split)))):
            return NONMONOTONE
        return dl

    def _eval(self, t):
        out = np.empty_like(t)
        lmask = t <= self.split if self.closed == "left" else t < self.split
        if lmask.any():
            out[lmask] = self.left(t[lmask])
        if (~lmask).any():
            out[~lmask] = self.right(t[~lmask])
        return out

    @property
    def spec(self):
        name = "piece" if self.closed == "left" else "rpiece"
        return f"{name}({fmt(self.split)},{self.left.spec},{self.right.spec})"

    @property
    def breakpoints(self):
        pts = {b for b in self.left.breakpoints if b < self.split}
        pts |= {b for b in self.right.breakpoints if b > self.split}
        pts.add(self.split)
        return tuple(sorted(pts))

    def _limit(self, sign):
        return self.right._limit(1) if sign > 0 else self.left._limit(-1)

    def inverse(self):
        if self.direction == NONMONOTONE:
            raise NotInvertible(f"{self.spec} is not monotone on its domain")
        lo, hi = self.domain
        at_split = self.left if self.closed == "left" else self.right
        v = float(at_split(self.split))
        linv = invert_on(self.left, lo, self.split)
        rinv = invert_on(self.right, self.split, hi)
        if self.direction == INCREASING:
            return Piecewise(v, linv, rinv, self.closed)
        flipped = "right" if self.closed == "left" else "left"
        return Piecewise(v, rinv, linv, flipped)


class Restrict(MonotoneMap):
    def __init__(self, inner: MonotoneMap, lo: float, hi: float):
        ilo, ihi = inner.domain
        lo, hi = max(float(lo), ilo), min(float(hi), ihi)
        if not lo < hi:
            raise DomainMismatch(f"empty restriction of {inner.spec} to [{fmt(lo)}, {fmt(hi)}]")
        self.inner = inner
        self.domain = (lo, hi)
        self.direction = inner.direction_on(lo, hi)

    def _eval(self, t):
        return self.inner(t)

    @property
    def spec(self):
        lo, hi = self.domain
        return f"restrict({fmt(lo)},{fmt(hi)},{self.inner.spec})"

    @property
    def breakpoints(self):
        lo, hi = self.domain
        return tuple(b for b in self.inner.breakpoints if lo <= b <= hi)

    def _limit(self, sign):
        return self.inner._limit(sign)

    def _closed_inverse(self, y):
        return self.inner._closed_inverse(y)

    def inverse(self):
        if self.direction == NONMONOTONE:
            raise NotInvertible(f"{self.spec} is not monotone on its domain")
        return invert_on(self.inner, *self.domain)


class Pinned(MonotoneMap):
    """inner(t), except at the listed points where the value is exactly the
    pinned one.  Used to fix corner values that rounding would nudge."""

    def __init__(self, inner: MonotoneMap, xs, ys):
        xs = tuple(float(x) for x in xs)
        ys = tuple(float(y) for y in ys)
        if len(xs) != len(ys) or not xs:
            raise ValidationError("pin needs matching, non-empty point lists")
        for x, y in zip(xs, ys):
            got = float(inner(x))
            if abs(got - y) > 1e-9 * max(1.0, abs(y)):
                raise ValidationError(f"pinning {inner.spec} at {fmt(x)} to {fmt(y)} moves it by {abs(got - y):.3g}")
        self.inner, self.xs, self.ys = inner, xs, ys
        self.domain = inner.domain
        self.direction = inner.direction

    def _eval(self, t):
        out = self.inner(t)
        for x, y in zip(self.xs, self.ys):
            out[t == x] = y
        return out

    @property
    def spec(self):
        pts = ",".join(f"{fmt(x)},{fmt(y)}" for x, y in zip(self.xs, self.ys))
        return f"pin({pts},{self.inner.spec})"

    @property
    def breakpoints(self):
        return self.inner.breakpoints

    def _limit(self, sign):
        return self.inner._limit(sign)

    def direction_on(self, lo, hi):
        return self.inner.direction_on(lo, hi)

    def inverse(self):
        return Pinned(self.inner.inverse(), self.ys, self.xs)


class Antiderivative(MonotoneMap):
    """t -> integral of a positive density from 0 to t, on a finite interval.

    The density is tabulated once with 10-point Gauss-Legendre on cells of
    width at most 0.05 anchored at 0; evaluation adds a partial-cell rule.
    """

    direction = INCREASING
    CELL = 0.05
    _gl_x, _gl_w = np.polynomial.legendre.leggauss(10)

    def __init__(self, density: MonotoneMap, lo: float, hi: float):
        lo, hi = float(lo), float(hi)
        if not (math.isfinite(lo) and math.isfinite(hi) and lo <= 0 <= hi and lo < hi):
            raise ValidationError(f"antiderivative needs a finite interval containing 0, got [{lo}, {hi}]")
        dlo, dhi = density.domain
        if dlo > lo or dhi < hi:
            raise DomainMismatch(f"density {density.spec} is not defined on [{fmt(lo)}, {fmt(hi)}]")
        probe = density(np.linspace(lo, hi, 4001))
        if not (probe > 0).all():
            raise NonPositiveDensity(f"density {density.spec} is not strictly positive on [{fmt(lo)}, {fmt(hi)}]")
        self.density = density
        self.domain = (lo, hi)
        n_left = int(math.ceil(-lo / self.CELL)) if lo < 0 else 0
        n_right = int(math.ceil(hi / self.CELL)) if hi > 0 else 0
        left = np.linspace(lo, 0.0, n_left + 1) if n_left else np.array([0.0])
        right = np.linspace(0.0, hi, n_right + 1) if n_right else np.array([0.0])
        self._nodes = np.concatenate([left[:-1], right])
        cells = self._gl(self._nodes[:-1], self._nodes[1:])
        cum = np.concatenate([[0.0], np.cumsum(cells)])
        i0 = n_left
        self._cum = cum - cum[i0]

    def _gl(self, a, b):
        a = np.asarray(a, dtype=float)
        b = np.asarray(b, dtype=float)
        mid, half = (a + b) / 2, (b - a) / 2
        pts = mid[..., None] + half[..., None] * self._gl_x
        return half * (self.density(pts) * self._gl_w).sum(axis=-1)

    def _eval(self, t):
        idx = np.clip(np.searchsorted(self._nodes, t, side="right") - 1, 0, self._nodes.size - 2)
        a = self._nodes[idx]
        return self._cum[idx] + self._gl(a, t)

    @property
    def spec(self):
        lo, hi = self.domain
        return f"int({fmt(lo)},{fmt(hi)},{self.density.spec})"


# ---------------------------------------------------------------------------
# numerics


def sampled_direction(f: MonotoneMap, lo: float, hi: float, n: int = 2001) -> int:
    """Direction of f on [lo, hi] judged on a grid (0 if not strictly monotone)."""
    lo, hi = max(lo, f.domain[0]), min(hi, f.domain[1])
    a = lo if math.isfinite(lo) else (min(hi, 0.0) - SAMPLE_HALFWIDTH if math.isfinite(hi) else -SAMPLE_HALFWIDTH)
    b = hi if math.isfinite(hi) else (max(lo, 0.0) + SAMPLE_HALFWIDTH if math.isfinite(lo) else SAMPLE_HALFWIDTH)
    if not a < b:
        return NONMONOTONE
    try:
        d = np.diff(f(np.linspace(a, b, n)))
    except ValidationError:
        return NONMONOTONE
    if (d > 0).all():
        return INCREASING
    if (d < 0).all():
        return DECREASING
    return NONMONOTONE


def _interior_point(lo: float, hi: float) -> float:
    if lo <= 0 <= hi:
        return 0.0
    if math.isfinite(lo) and math.isfinite(hi):
        return 0.5 * (lo + hi)
    return lo + 1.0 if math.isfinite(lo) else hi - 1.0


def bisect_inverse(f: MonotoneMap, y, maxiter: int = BISECT_MAXITER) -> np.ndarray:
    """Solve f(t) = y elementwise for monotone f by bracketed bisection.

    Brackets on infinite domains are found by doubling away from an interior
    point.  Raises RangeError for targets outside the image and
    ConvergenceError when no bracket turns up.
    """
    if f.direction == NONMONOTONE:
        raise NotInvertible(f"{f.spec} is not monotone on its domain")
    y = np.atleast_1d(np.asarray(y, dtype=float))
    s = float(f.direction)
    lo_d, hi_d = f.domain
    ilo, ihi = f.image
    if ((y < ilo - _slack(ilo)) | (y > ihi + _slack(ihi))).any():
        bad = y[(y < ilo - _slack(ilo)) | (y > ihi + _slack(ihi))][0]
        raise RangeError(f"{bad!r} outside range [{fmt(ilo)}, {fmt(ihi)}] of {f.spec}")
    target = s * y
    g = lambda t: s * f(t)  # noqa: E731  increasing view of f

    c = _interior_point(lo_d, hi_d)
    a = np.full_like(y, lo_d)
    b = np.full_like(y, hi_d)
    gc = g(np.array([c]))[0]
    right = target >= gc
    if not math.isfinite(hi_d) and right.any():
        a[right] = c
        step = 1.0
        todo = right.copy()
        for _ in range(BRACKET_MAXITER):
            cand = c + step
            gv = g(np.array([cand]))[0]
            hit = todo & (target <= gv)
            b[hit] = cand
            todo &= ~hit
            if not todo.any():
                break
            a[todo] = cand
            step *= 2.0
            if not math.isfinite(c + step):
                break
        if todo.any():
            raise ConvergenceError(f"no bracket found inverting {f.spec}")
    elif right.any():
        a[right] = c
    left = ~right
    if not math.isfinite(lo_d) and left.any():
        b[left] = c
        step = 1.0
        todo = left.copy()
        for _ in range(BRACKET_MAXITER):
            cand = c - step
            gv = g(np.array([cand]))[0]
            hit = todo & (target >= gv)
            a[hit] = cand
            todo &= ~hit
            if not todo.any():
                break
            b[todo] = cand
            step *= 2.0
            if not math.isfinite(c - step):
                break
        if todo.any():
            raise ConvergenceError(f"no bracket found inverting {f.spec}")
    elif left.any():
        b[left] = c

    for _ in range(maxiter):
        mid = 0.5 * (a + b)
        active = (mid > a) & (mid < b)
        if not active.any():
            break
        below = g(mid) < target
        a = np.where(active & below, mid, a)
        b = np.where(active & ~below, mid, b)
    ra = np.abs(g(a) - target)
    rb = np.abs(g(b) - target)
    return np.where(ra <= rb, a, b)


def derivative(f: MonotoneMap, t, step: float = 1e-6, side: int = 0):
    """Finite-difference derivative.

    side=0 is central unless a stored breakpoint sits inside the stencil,
    in which case the second-order one-sided stencil pointing away from it is
    used.  side=+1/-1 force right/left derivatives.
    """
    t_arr = np.atleast_1d(np.asarray(t, dtype=float))
    h = step
    lo, hi = f.domain
    bps = np.asarray(f.breakpoints, dtype=float)
    sides = np.full(t_arr.shape, side, dtype=int)
    if side == 0:
        if bps.size:
            dist = t_arr[:, None] - bps[None, :]
            near = (np.abs(dist) < 2 * h) & (dist != 0)
            has = near.any(axis=1)
            if has.any():
                nearest = np.where(near, dist, np.inf)
                k = np.argmin(np.abs(nearest), axis=1)
                sides[has] = np.where(dist[has, k[has]] > 0, 1, -1)
        sides[(sides == 0) & (t_arr + h > hi)] = -1
        sides[(sides == 0) & (t_arr - h < lo)] = 1
    out = np.empty_like(t_arr)
    c = sides == 0
    if c.any():
        out[c] = (f(t_arr[c] + h) - f(t_arr[c] - h)) / (2 * h)
    r = sides > 0
    if r.any():
        tt = t_arr[r]
        out[r] = (-3 * f(tt) + 4 * f(tt + h) - f(tt + 2 * h)) / (2 * h)
    l_ = sides < 0
    if l_.any():
        tt = t_arr[l_]
        out[l_] = (3 * f(tt) - 4 * f(tt - h) + f(tt - 2 * h)) / (2 * h)
    if np.ndim(t) == 0:
        return float(out[0])
    return out.reshape(np.shape(t))


@dataclass(frozen=True)
class MonotoneReport:
    passed: bool
    direction: int
    violation: tuple[float, float] | None
    interval: tuple[float, float]

    def __bool__(self):
        return self.passed


def check_monotone(f: MonotoneMap, grid_size: int = 1001, lo: float | None = None,
                   hi: float | None = None, expect: int | None = None) -> MonotoneReport:
    """Strict monotonicity on a uniform grid; reports the first bad pair.

    Infinite domain ends are cut at +-50.  ``expect`` pins the direction;
    otherwise it is read off the first step.
    """
    if grid_size < 2:
        raise ValidationError("grid_size must be at least 2")
    dlo, dhi = f.domain
    lo = dlo if lo is None else max(lo, dlo)
    hi = dhi if hi is None else min(hi, dhi)
    if not math.isfinite(lo):
        lo = (min(hi, 0.0) if math.isfinite(hi) else 0.0) - SAMPLE_HALFWIDTH
    if not math.isfinite(hi):
        hi = max(lo, 0.0) + SAMPLE_HALFWIDTH
    t = np.linspace(lo, hi, grid_size)
    d = np.diff(f(t))
    direction = expect if expect is not None else (INCREASING if d[0] > 0 else DECREASING if d[0] < 0 else NONMONOTONE)
    if direction == NONMONOTONE:
        return MonotoneReport(False, NONMONOTONE, (float(t[0]), float(t[1])), (lo, hi))
    bad = np.nonzero(direction * d <= 0)[0]
    if bad.size:
        i = int(bad[0])
        return MonotoneReport(False, direction, (float(t[i]), float(t[i + 1])), (lo, hi))
    return MonotoneReport(True, direction, None, (lo, hi))


# ---------------------------------------------------------------------------
# smart constructors


def identity() -> MonotoneMap:
    return Identity()


def affine(a: float, b: float = 0.0) -> MonotoneMap:
    return Affine(a, b)


def compose(outer: MonotoneMap, inner: MonotoneMap, *more: MonotoneMap) -> MonotoneMap:
    """outer o inner (o more...), folding identities and affine pairs."""
    if more:
        return compose(outer, compose(inner, *more))
    if isinstance(inner, Identity):
        return outer
    if isinstance(outer, Identity):
        return inner
    if isinstance(outer, Affine) and isinstance(inner, Affine):
        return Affine(outer.a * inner.a, outer.a * inner.b + outer.b)
    return Compose(outer, inner)


def invert(f: MonotoneMap) -> MonotoneMap:
    return f.inverse()


def invert_on(f: MonotoneMap, lo: float, hi: float) -> MonotoneMap:
    """Inverse of f restricted to [lo, hi]."""
    dlo, dhi = f.domain
    lo, hi = max(lo, dlo), min(hi, dhi)
    if f.direction != NONMONOTONE:
        inv = f.inverse()
        if (lo, hi) == (dlo, dhi):
            return inv
        a, b = f.image_on(lo, hi)
        if (a, b) == inv.domain:
            return inv
        return Restrict(inv, a, b)
    if isinstance(f, PowerEven):
        if lo >= 0:
            return invert_on(PowerOdd(f.p), lo, hi)
        if hi <= 0:
            return invert_on(compose(PowerOdd(f.p), Affine(-1.0, 0.0)), lo, hi)
    if isinstance(f, Restrict):
        return invert_on(f.inner, lo, hi)
    if isinstance(f, Compose):
        d_in = f.inner.direction_on(lo, hi)
        if d_in != NONMONOTONE:
            a, b = f.inner.image_on(lo, hi)
            return compose(invert_on(f.inner, lo, hi), invert_on(f.outer, a, b))
    r = Restrict(f, lo, hi)
    if r.direction == NONMONOTONE:
        raise NotInvertible(f"{f.spec} is not monotone on [{fmt(lo)}, {fmt(hi)}]")
    return Inverse(r)


def restrict(f: MonotoneMap, lo: float, hi: float) -> MonotoneMap:
    if (max(lo, f.domain[0]), min(hi, f.domain[1])) == f.domain:
        return f
    return Restrict(f, lo, hi)


def negate(f: MonotoneMap) -> MonotoneMap:
    if isinstance(f, Negate):
        return f.inner
    return Negate(f)


def tilde(g: MonotoneMap) -> MonotoneMap:
    if isinstance(g, Identity):
        return g
    return Tilde(g)


def odd_extend(p_plus: MonotoneMap) -> MonotoneMap:
    return OddExtension(p_plus)


def piecewise(split: float, left: MonotoneMap, right: MonotoneMap, closed: str = "left") -> MonotoneMap:
    return Piecewise(split, left, right, closed)


def positive_part(f: MonotoneMap) -> MonotoneMap:
    """f_+(s) = f(s) for s >= 0."""
    return Restrict(f, 0.0, INF)


def negative_part(f: MonotoneMap) -> MonotoneMap:
    """f_-(s) = -f(-s) for s >= 0."""
    return Restrict(Negate(Compose(f, Affine(-1.0, 0.0))), 0.0, INF)


def reflect(f: MonotoneMap) -> MonotoneMap:
    """t -> f(-t)."""
    return compose(f, Affine(-1.0, 0.0))


def assemble(plus: MonotoneMap, minus: MonotoneMap, closed: str = "left") -> MonotoneMap:
    """Glue the map whose positive part is ``plus`` and negative part ``minus``."""
    if plus.domain[0] > 0 or minus.domain[0] > 0:
        raise DomainMismatch("half-line parts must be defined at 0")
    left = Negate(compose(minus, Affine(-1.0, 0.0)))
    return Piecewise(0.0, left, plus, closed)
