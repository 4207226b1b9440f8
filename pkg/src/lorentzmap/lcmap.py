"""Lorentz-conformal maps of the plane in decoupled form.

In characteristic coordinates such a map is (U, V) = (h(X), k(Y)), or the
axis-swapped (U, V) = (k(Y), h(X)).  Points in the plain frame are converted
with :func:`coords.to_characteristic` on the way in and
:func:`coords.from_characteristic` on the way out.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.optimize import minimize_scalar

from . import monotone as mm
from .coords import from_characteristic, to_characteristic
from .errors import (
    DegeneratePoint,
    NondifferentiableCrossing,
    NotInvertible,
    NonPositiveDensity,
    RangeError,
    ValidationError,
)
from .grammar import as_map


@dataclass(frozen=True)
class LCMap:
    h: mm.MonotoneMap
    k: mm.MonotoneMap
    swapped: bool = False

    @classmethod
    def from_specs(cls, h: str, k: str, swapped: bool = False) -> LCMap:
        return cls(as_map(h), as_map(k), swapped)

    @property
    def invertible(self) -> bool:
        return self.h.direction != 0 and self.k.direction != 0

    def char_eval(self, X, Y):
        """(U, V) from characteristic (X, Y)."""
        hx, ky = self.h(X), self.k(Y)
        return (ky, hx) if self.swapped else (hx, ky)

    def __call__(self, x, y):
        X, Y = to_characteristic(x, y)
        U, V = self.char_eval(X, Y)
        u, v = from_characteristic(U, V)
        if np.ndim(u) == 0:
            return float(u), float(v)
        return u, v

    def invert_point(self, u, v):
        if not self.invertible:
            raise NotInvertible("map has a non-monotone component")
        U, V = to_characteristic(u, v)
        if self.swapped:
            X, Y = self.h.inverse()(V), self.k.inverse()(U)
        else:
            X, Y = self.h.inverse()(U), self.k.inverse()(V)
        x, y = from_characteristic(X, Y)
        if np.ndim(x) == 0:
            return float(x), float(y)
        return x, y

    @property
    def spec(self) -> dict:
        return {"h": self.h.spec, "k": self.k.spec, "swapped": self.swapped}


# ---------------------------------------------------------------------------
# Jacobian and Lorentz Cauchy-Riemann checks


def _fd_jacobian(F: Callable, x, y, step: float):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    up, vp = F(x + step, y)
    um, vm = F(x - step, y)
    ux, vx = (np.asarray(up) - um) / (2 * step), (np.asarray(vp) - vm) / (2 * step)
    up, vp = F(x, y + step)
    um, vm = F(x, y - step)
    uy, vy = (np.asarray(up) - um) / (2 * step), (np.asarray(vp) - vm) / (2 * step)
    return ux, uy, vx, vy


def _form_residuals(ux, uy, vx, vy):
    res_a = np.maximum(np.abs(ux - vy), np.abs(uy - vx))
    res_b = np.maximum(np.abs(ux + vy), np.abs(uy + vx))
    return res_a, res_b


@dataclass(frozen=True)
class JacobianData:
    ux: float
    uy: float
    vx: float
    vy: float
    form: str  # "A" for [[a,b],[b,a]], "B" for [[-a,-b],[b,a]]
    residual: float
    H2: float
    orientation: int
    signature: int

    @property
    def matrix(self) -> np.ndarray:
        return np.array([[self.ux, self.uy], [self.vx, self.vy]])

    @property
    def det(self) -> float:
        return self.ux * self.vy - self.uy * self.vx


def jacobian(m, x: float, y: float, step: float = 1e-6, tol: float = 1e-5) -> JacobianData:
    """Central-difference Jacobian of an LCMap (or any (x,y)->(u,v) callable),
    classified into one of the two Lorentz-conformal matrix forms."""
    ux, uy, vx, vy = (float(a) for a in _fd_jacobian(m, x, y, step))
    ra, rb = (float(r) for r in _form_residuals(ux, uy, vx, vy))
    scale = max(1.0, abs(ux), abs(uy), abs(vx), abs(vy))
    form, res = ("A", ra) if ra <= rb else ("B", rb)
    if res > tol * scale:
        raise DegeneratePoint(f"Jacobian at ({x}, {y}) fits neither form (residual {res:.3g})")
    det = ux * vy - uy * vx
    q = ux * ux - vx * vx
    return JacobianData(ux, uy, vx, vy, form, res, abs(q), int(np.sign(det)), int(np.sign(q)))


@dataclass(frozen=True)
class CRReport:
    passed: bool
    max_residual: float
    metric_residual: float
    n_points: int
    n_first: int  # points satisfying u_x = v_y, u_y = v_x
    n_second: int  # points satisfying u_x = -v_y, u_y = -v_x
    failures: tuple = ()

    def __bool__(self):
        return self.passed


def verify_lorentz_cr(m, window=(-1.0, 1.0, -1.0, 1.0), resolution: int = 21,
                      step: float = 1e-6, tol: float = 1e-5) -> CRReport:
    """Check the Lorentz Cauchy-Riemann equations on a cell-centred grid.

    At every point one of the two systems must hold to ``tol`` (relative to
    the Jacobian size), together with the metric identities that make
    du^2 - dv^2 a multiple of dx^2 - dy^2.
    """
    x0, x1, y0, y1 = window
    n = resolution
    xs = x0 + (np.arange(n) + 0.5) * (x1 - x0) / n
    ys = y0 + (np.arange(n) + 0.5) * (y1 - y0) / n
    x, y = np.meshgrid(xs, ys, indexing="ij")
    x, y = x.ravel(), y.ravel()
    ux, uy, vx, vy = _fd_jacobian(m, x, y, step)
    ra, rb = _form_residuals(ux, uy, vx, vy)
    scale = np.maximum.reduce([np.ones_like(ux), np.abs(ux), np.abs(uy), np.abs(vx), np.abs(vy)])
    res = np.minimum(ra, rb) / scale
    # metric: du^2 - dv^2 = q (dx^2 - dy^2) needs a zero cross term and opposite diagonal terms
    metric = np.maximum(np.abs(ux * uy - vx * vy), np.abs((ux**2 - vx**2) + (uy**2 - vy**2))) / scale**2
    bad = (res > tol) | (metric > tol)
    failures = tuple((float(a), float(b)) for a, b in zip(x[bad][:10], y[bad][:10]))
    return CRReport(
        passed=not bad.any(),
        max_residual=float(res.max()),
        metric_residual=float(metric.max()),
        n_points=int(x.size),
        n_first=int(((ra <= rb) & (res <= tol)).sum()),
        n_second=int(((rb < ra) & (res <= tol)).sum()),
        failures=failures,
    )


# ---------------------------------------------------------------------------
# contours


def _level_relation(m: LCMap, family: str, level: float):
    """Return (sigma, c) with the contour being k(Y) = sigma*h(X) + c."""
    if family == "u":
        return 1.0, (2 * level if m.swapped else -2 * level)
    if family == "v":
        return -1.0, 2 * level
    raise ValidationError(f"family must be 'u' or 'v', got {family!r}")


def monotone_pieces(f: mm.MonotoneMap, lo: float, hi: float, n: int = 4001) -> list[tuple[float, float]]:
    """Split [lo, hi] into maximal intervals on which f is strictly monotone.
    Turning points are located on a grid and polished with a bounded scalar
    minimisation."""
    d = f.direction_on(lo, hi)
    if d != 0:
        return [(lo, hi)]
    t = np.linspace(lo, hi, n)
    vals = f(t)
    dv = np.sign(np.diff(vals))
    cuts = []
    for i in range(1, dv.size):
        if dv[i] != dv[i - 1] and dv[i] != 0 and dv[i - 1] != 0:
            a, b = t[i - 1], t[i + 1]
            sgn = 1.0 if dv[i - 1] < 0 else -1.0  # minimum if it was decreasing
            r = minimize_scalar(lambda s: sgn * float(f(s)), bounds=(a, b), method="bounded",
                                options={"xatol": 1e-14})
            # exact turning points (breakpoints, the origin) beat the polished estimate
            best = float(r.x)
            for c in (*f.breakpoints, 0.0):
                if a < c < b and sgn * float(f(c)) <= sgn * float(f(best)):
                    best = c
            cuts.append(best)
    edges = [lo, *cuts, hi]
    return [(a, b) for a, b in zip(edges[:-1], edges[1:]) if b > a]


def _branches(f: mm.MonotoneMap, window: tuple[float, float]):
    if f.direction != 0:
        return [(f.domain, f.inverse())]
    lo = max(window[0], f.domain[0])
    hi = min(window[1], f.domain[1])
    return [((a, b), mm.invert_on(f, a, b)) for a, b in monotone_pieces(f, lo, hi)]


def _solve(inv: mm.MonotoneMap, target: np.ndarray) -> np.ndarray:
    out = np.full(target.shape, np.nan)
    lo, hi = inv.domain
    ok = (target >= lo) & (target <= hi) & np.isfinite(target)
    if ok.any():
        out[ok] = inv(target[ok])
    return out


def _split_runs(param: np.ndarray, other: np.ndarray, by: str):
    """Cut at NaNs into contiguous runs of (X, Y) points."""
    segs = []
    good = np.isfinite(other)
    idx = np.nonzero(good)[0]
    if idx.size == 0:
        return segs
    breaks = np.nonzero(np.diff(idx) > 1)[0]
    for run in np.split(idx, breaks + 1):
        p, o = param[run], other[run]
        pts = np.column_stack([p, o] if by == "X" else [o, p])
        segs.append(pts)
    return segs


@dataclass
class Contour:
    family: str
    level: float
    segments: list = field(default_factory=list)  # arrays of (X, Y) rows
    skipped: list = field(default_factory=list)

    @property
    def points(self) -> np.ndarray:
        if not self.segments:
            return np.empty((0, 2))
        return np.vstack(self.segments)

    def xy_segments(self) -> list:
        out = []
        for s in self.segments:
            x, y = from_characteristic(s[:, 0], s[:, 1])
            out.append(np.column_stack([x, y]))
        return out

    def residual(self, m: LCMap) -> float:
        pts = self.points
        if pts.size == 0:
            return 0.0
        U, V = m.char_eval(pts[:, 0], pts[:, 1])
        if self.family == "u":
            r = (U - V) - 2 * self.level
        else:
            r = (U + V) - 2 * self.level
        return float(np.max(np.abs(r)))


def contour(m: LCMap, family: str, level: float, samples, window: tuple[float, float] | None = None,
            by: str = "X") -> Contour:
    """Sample the constant-u or constant-v curve through the given X (or Y)
    values.  Non-monotone components give one segment per monotone branch;
    ``window`` bounds the branch search in the solved-for variable."""
    samples = np.asarray(samples, dtype=float)
    sigma, c = _level_relation(m, family, level)
    if window is None:
        window = (float(samples.min()), float(samples.max()))
    out = Contour(family, float(level))
    if by == "X":
        target = sigma * m.h(samples) + c
        solver = m.k
    elif by == "Y":
        # h(X) = sigma * (k(Y) - c)
        target = sigma * (m.k(samples) - c)
        solver = m.h
    else:
        raise ValidationError(f"by must be 'X' or 'Y', got {by!r}")
    hit = np.zeros(samples.shape, dtype=bool)
    for (a, b), inv in _branches(solver, window):
        sol = _solve(inv, target)
        hit |= np.isfinite(sol)
        out.segments.extend(_split_runs(samples, sol, by))
    out.skipped = [float(s) for s in samples[~hit]]
    return out


def contour_function(m: LCMap, family: str, level: float) -> Callable:
    """Y as a function of X along a contour (both components monotone)."""
    if not m.invertible:
        raise NotInvertible("contour functions need monotone h and k")
    sigma, c = _level_relation(m, family, level)
    kinv = m.k.inverse()
    return lambda X: kinv(sigma * m.h(X) + c)


def contours_through(m: LCMap, X0: float, Y0: float):
    """The u- and v-contours through (X0, Y0), as Y-of-X functions."""
    U, V = m.char_eval(X0, Y0)
    u0, v0 = (U - V) / 2, (U + V) / 2
    return contour_function(m, "u", u0), contour_function(m, "v", v0)


def admissible_contour(f: Callable, samples) -> dict:
    """Secant test for curves that must meet each characteristic line once:
    every secant slope has magnitude at most 1, and no two consecutive
    secants both sit at magnitude 1."""
    t = np.asarray(samples, dtype=float)
    vals = np.asarray(f(t), dtype=float)
    s = np.diff(vals) / np.diff(t)
    mag = np.abs(s)
    steep = np.nonzero(mag > 1 + 1e-12)[0]
    flat_one = np.nonzero((mag[:-1] >= 1 - 1e-9) & (mag[1:] >= 1 - 1e-9))[0]
    report = {"passed": True, "max_slope": float(mag.max()), "reason": None, "at": None}
    if steep.size:
        i = int(steep[0])
        report.update(passed=False, reason="slope exceeds 1", at=(float(t[i]), float(t[i + 1])))
    elif flat_one.size:
        i = int(flat_one[0])
        report.update(passed=False, reason="slope equals 1 on an interval", at=(float(t[i]), float(t[i + 2])))
    return report


def _one_sided(f: Callable, x0: float, h: float, side: int) -> float:
    f0 = float(f(x0))
    f1 = float(f(x0 + side * h))
    f2 = float(f(x0 + 2 * side * h))
    return side * (-3 * f0 + 4 * f1 - f2) / (2 * h)


@dataclass(frozen=True)
class SlopeReport:
    m_minus: float
    m_plus: float
    n_minus: float
    n_plus: float
    residual: float
    passed: bool

    @property
    def products(self):
        return self.m_minus * self.m_plus, self.n_minus * self.n_plus


def crossing_tangent_check(f_u: Callable, f_v: Callable, X0: float, step: float = 1e-4,
                           tol: float = 1e-6) -> SlopeReport:
    """One-sided slopes of two crossing contours given as Y-of-X functions.

    m+- are the slopes of the u-contour, n+- the negated slopes of the
    v-contour, so all four are positive for admissible contours.
    """
    slopes = []
    for f, sgn in ((f_u, 1.0), (f_v, -1.0)):
        for side in (-1, 1):
            d1 = _one_sided(f, X0, step, side)
            d2 = _one_sided(f, X0, step / 2, side)
            if not (math.isfinite(d1) and math.isfinite(d2)) or abs(d1 - d2) > 1e-4 * max(1.0, abs(d2)):
                raise NondifferentiableCrossing(f"one-sided slope at X={X0} does not settle ({d1} vs {d2})")
            slopes.append(sgn * (4 * d2 - d1) / 3)
    m_minus, m_plus, n_minus, n_plus = slopes
    p, q = m_minus * m_plus, n_minus * n_plus
    res = abs(p - q)
    return SlopeReport(m_minus, m_plus, n_minus, n_plus, res, res <= tol * max(1.0, abs(p)))


@dataclass(frozen=True)
class TangencyReport:
    x: np.ndarray
    y: np.ndarray
    tangent: np.ndarray  # boolean mask over the grid

    @property
    def locus(self) -> np.ndarray:
        return np.column_stack([self.x[self.tangent], self.y[self.tangent]])

    @property
    def empty(self) -> bool:
        return not self.tangent.any()


def tangency_locus(m: LCMap, window=(-3.0, 3.0, -3.0, 3.0), resolution: int = 101,
                   threshold: float = 1e-6, step: float = 1e-7) -> TangencyReport:
    """Grid points where the contour families touch: h'(X)/k'(Y) is zero or
    infinite up to ``threshold``."""
    x0, x1, y0, y1 = window
    xs = np.linspace(x0, x1, resolution)
    ys = np.linspace(y0, y1, resolution)
    x, y = np.meshgrid(xs, ys, indexing="ij")
    x, y = x.ravel(), y.ravel()
    X, Y = to_characteristic(x, y)
    dh = np.abs(mm.derivative(m.h, X, step))
    dk = np.abs(mm.derivative(m.k, Y, step))
    big = np.maximum(dh, dk)
    small = np.minimum(dh, dk)
    tangent = ~np.isfinite(big) | (small <= threshold * big)
    return TangencyReport(x, y, tangent)


def klein_gordon_flatten(nu, mu, domain=(-2.0, 2.0)) -> LCMap:
    """LCMap whose components are antiderivatives of the densities nu, mu,
    anchored at 0."""
    lo, hi = domain
    nu, mu = as_map(nu), as_map(mu)
    for name, f in (("nu", nu), ("mu", mu)):
        flo, fhi = f.domain
        if flo > lo or fhi < hi:
            raise RangeError(f"{name} is not defined on [{lo}, {hi}]")
        if not (f(np.linspace(lo, hi, 4001)) > 0).all():
            raise NonPositiveDensity(f"{name} = {f.spec} is not strictly positive on [{lo}, {hi}]")
    return LCMap(mm.Antiderivative(nu, lo, hi), mm.Antiderivative(mu, lo, hi))
