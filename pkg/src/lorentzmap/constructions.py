"""Building Lorentz-conformal maps with prescribed contours.

Crossing case: four rays leave the origin in characteristic coordinates,

    C1: Y = g1(X), X >= 0          C2: X = -g2(Y), Y >= 0
    C3: Y = -g3(-X), X <= 0        C4: X = g4(-Y), Y <= 0

with C1, C3 on the u = 0 contour and C2, C4 on v = 0.  They are realisable
exactly when g4 o g3 o g2 o g1 is the identity.

Square case: four sides join the unit vertices (+-1, 0), (0, +-1),

    C1: Y = g1(1 - X), X in [0, 1]     C2: X = -g2(1 - Y), Y in [0, 1]
    C3: Y = -g3(1 + X), X in [-1, 0]   C4: X = g4(1 + Y), Y in [-1, 0]

and are mapped onto the sides of the standard square exactly when
g4 o ~g3 o g2 o ~g1 is the identity, where ~g(s) = 1 - g(1 - s).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from . import monotone as mm
from .errors import (
    CyclicViolation,
    DomainMismatch,
    InconsistentGauge,
    NonPositiveDerivative,
    NotBijectiveOnHalfLine,
    NotEven,
    NotFixingEndpoints,
    NotFixingOrigin,
    NotMonotone,
    NotOdd,
    ValidationError,
    VerticesNotOnAxes,
)
from .grammar import as_map
from .lcmap import LCMap

CYCLIC_ACCEPT = 1e-6
GAUGE_TOL = 1e-9
UNIT_SAMPLES = np.linspace(0.0, 1.0, 201)
RAY_SAMPLES = np.concatenate([np.linspace(0.0, 1.0, 101), np.linspace(1.0, 10.0, 91)[1:]])


# ---------------------------------------------------------------------------
# input validation


def check_ray_map(g, name: str = "g") -> mm.MonotoneMap:
    """An increasing bijection of [0, inf) fixing 0."""
    g = as_map(g)
    lo, hi = g.domain
    if lo > 0 or hi < math.inf:
        raise DomainMismatch(f"{name} = {g.spec} must be defined on [0, inf)")
    if abs(g(0.0)) > mm.ENDPOINT_TOL:
        raise NotFixingOrigin(f"{name} = {g.spec} must fix 0, got {g(0.0)!r}")
    if g.direction_on(0.0, math.inf) != mm.INCREASING:
        raise NotMonotone(f"{name} = {g.spec} is not increasing on [0, inf)")
    if g.limit(math.inf) != math.inf:
        raise NotMonotone(f"{name} = {g.spec} is bounded on [0, inf)")
    return g


def check_unit_map(g, name: str = "g") -> mm.MonotoneMap:
    """An increasing bijection of [0, 1] fixing both endpoints."""
    g = as_map(g)
    lo, hi = g.domain
    if lo > 0 or hi < 1:
        raise DomainMismatch(f"{name} = {g.spec} must be defined on [0, 1]")
    g0, g1 = g(0.0), g(1.0)
    if abs(g0) > mm.ENDPOINT_TOL or abs(g1 - 1) > mm.ENDPOINT_TOL:
        raise NotFixingEndpoints(f"{name} = {g.spec} must fix 0 and 1, got {g0!r}, {g1!r}")
    if g.direction_on(0.0, 1.0) != mm.INCREASING:
        raise NotMonotone(f"{name} = {g.spec} is not increasing on [0, 1]")
    return g


def _sym_samples(f: mm.MonotoneMap, n: int = 201, reach: float = 10.0) -> np.ndarray:
    lo, hi = f.domain
    r = min(-lo, hi, reach)
    if not r > 0:
        raise DomainMismatch(f"{f.spec} is not defined on a symmetric interval")
    return np.linspace(-r, r, n)


def odd_residual(f: mm.MonotoneMap, samples=None) -> float:
    t = _sym_samples(f) if samples is None else np.asarray(samples, dtype=float)
    v = f(t)
    return float(np.max(np.abs(f(-t) + v) / np.maximum(1.0, np.abs(v))))


def even_residual(f: mm.MonotoneMap, samples=None) -> float:
    t = _sym_samples(f) if samples is None else np.asarray(samples, dtype=float)
    v = f(t)
    return float(np.max(np.abs(f(-t) - v) / np.maximum(1.0, np.abs(v))))


# ---------------------------------------------------------------------------
# crossing rays


@dataclass(frozen=True)
class RayFamily:
    g1: mm.MonotoneMap | None = None
    g2: mm.MonotoneMap | None = None
    g3: mm.MonotoneMap | None = None
    g4: mm.MonotoneMap | None = None

    @classmethod
    def of(cls, g1=None, g2=None, g3=None, g4=None) -> RayFamily:
        gs = [None if g is None else check_ray_map(g, f"g{i}") for i, g in enumerate((g1, g2, g3, g4), 1)]
        return cls(*gs)

    @property
    def maps(self) -> tuple:
        return (self.g1, self.g2, self.g3, self.g4)

    @property
    def missing(self) -> list[int]:
        return [i for i, g in enumerate(self.maps, 1) if g is None]

    def complete(self) -> RayFamily:
        miss = self.missing
        if not miss:
            return self
        if len(miss) > 1:
            raise ValidationError(f"need three rays to derive the fourth, missing {miss}")
        return replace(self, **{f"g{miss[0]}": fourth_ray(self)})

    def ray_points(self, j: int, t) -> np.ndarray:
        """Points of ray Cj in (X, Y) at parameters t >= 0."""
        t = np.asarray(t, dtype=float)
        g = self.maps[j - 1]
        if j == 1:
            return np.column_stack([t, g(t)])
        if j == 2:
            return np.column_stack([-g(t), t])
        if j == 3:
            return np.column_stack([-t, -g(t)])
        return np.column_stack([g(t), -t])


def fourth_ray(rays: RayFamily) -> mm.MonotoneMap:
    """The missing ray map forced by g4 o g3 o g2 o g1 = id."""
    miss = rays.missing
    if len(miss) != 1:
        raise ValidationError(f"exactly one ray must be missing, got {miss or 'none'}")
    g1, g2, g3, g4 = rays.maps
    j = miss[0]
    if j == 4:
        return mm.invert(mm.compose(g3, g2, g1))
    if j == 1:
        return mm.invert(mm.compose(g4, g3, g2))
    if j == 2:
        return mm.invert(mm.compose(g1, g4, g3))
    return mm.invert(mm.compose(g2, g1, g4))


def cyclic_residual(rays: RayFamily, samples=None) -> float:
    """max |g4(g3(g2(g1(t)))) - t| / max(1, t) over samples in [0, inf)."""
    t = RAY_SAMPLES if samples is None else np.asarray(samples, dtype=float)
    g1, g2, g3, g4 = rays.maps
    r = np.abs(g4(g3(g2(g1(t)))) - t) / np.maximum(1.0, np.abs(t))
    return float(r.max())


def realize_crossing(rays: RayFamily, p=None) -> LCMap:
    """A map whose u = 0 contour holds C1, C3 and whose v = 0 contour holds
    C2, C4.  ``p`` is the free choice k_- (default the identity)."""
    rays = RayFamily.of(*rays.maps).complete()
    res = cyclic_residual(rays)
    if res > CYCLIC_ACCEPT:
        raise CyclicViolation(f"g4 o g3 o g2 o g1 differs from the identity by {res:.3g}")
    p = check_ray_map(mm.Identity() if p is None else p, "p")
    g1, g2, g3, _ = rays.maps
    k_minus = p
    h_minus = mm.compose(p, g3)
    k_plus = mm.compose(p, g3, g2)
    h_plus = mm.compose(p, g3, g2, g1)
    return LCMap(mm.assemble(h_plus, h_minus), mm.assemble(k_plus, k_minus))


def crossing_ray_residuals(m: LCMap, rays: RayFamily, t=None) -> list[float]:
    """Per ray, the largest |u| (C1, C3) or |v| (C2, C4) at the sampled points."""
    t = RAY_SAMPLES if t is None else np.asarray(t, dtype=float)
    out = []
    for j in range(1, 5):
        pts = rays.ray_points(j, t)
        U, V = m.char_eval(pts[:, 0], pts[:, 1])
        r = (U - V) if j in (1, 3) else (U + V)
        out.append(float(np.max(np.abs(r) / 2)))
    return out


def ridge_rays(a: float) -> RayFamily:
    """The crossing rays of the ridge map: C1, C3 along the diagonal, C2, C4
    bent so that the v = 0 contour is y = -a|x|/(1+|x|)."""
    r = mm.Ridge(a)
    # g2 solves h_-(g2(t)) = h_+(t) for the ridge quadratics
    g2 = mm.compose(mm.invert(mm.negative_part(r)), mm.positive_part(r))
    return RayFamily.of(mm.Identity(), g2, mm.Identity(), mm.invert(g2))


# -- gauge freedom -----------------------------------------------------------


def _shifted(ell: mm.MonotoneMap, c: float) -> mm.MonotoneMap:
    if c == 0:
        return ell
    return mm.compose(mm.Affine(1.0, c), ell, mm.Affine(1.0, -c))


def gauge_equivalent_crossing(m: LCMap, ell, u0: float = 0.0, v0: float = 0.0) -> LCMap:
    """Compose m with the gauge map built from the odd bijection ell, which
    keeps the u = u0 and v = v0 contours in place."""
    ell = as_map(ell)
    if ell.direction != mm.INCREASING:
        raise NotMonotone(f"gauge {ell.spec} must be increasing")
    if odd_residual(ell) > GAUGE_TOL:
        raise NotOdd(f"gauge {ell.spec} is not odd")
    U0, V0 = u0 + v0, -u0 + v0
    return LCMap(mm.compose(_shifted(ell, U0), m.h), mm.compose(_shifted(ell, V0), m.k), m.swapped)


@dataclass(frozen=True)
class GaugeReport:
    ell: mm.MonotoneMap
    odd_residual: float
    k_residual: float


def recover_gauge(m1: LCMap, m2: LCMap, u0: float = 0.0, v0: float = 0.0,
                  tol: float = GAUGE_TOL) -> GaugeReport:
    """Recover ell with m2 = (gauge of ell) o m1 and check it is odd and
    acts on k the same way it acts on h."""
    U0, V0 = u0 + v0, -u0 + v0
    ell = mm.compose(m2.h, mm.invert(m1.h))
    ell = mm.compose(mm.Affine(1.0, -U0), ell, mm.Affine(1.0, U0)) if U0 else ell
    lo, hi = ell.domain
    r = min(-lo, hi, 10.0)
    s = np.linspace(-r, r, 201)
    odd = odd_residual(ell, s)
    if odd > tol:
        raise NotOdd(f"recovered gauge is not odd (residual {odd:.3g})")
    klo, khi = m1.k.domain
    t = np.linspace(max(klo, -10.0), min(khi, 10.0), 201)
    kr = float(np.max(np.abs(m2.k(t) - (ell(m1.k(t) - V0) + V0))))
    if kr > tol * max(1.0, float(np.max(np.abs(m2.k(t))))):
        raise InconsistentGauge(f"k is not related by the same gauge (residual {kr:.3g})")
    return GaugeReport(ell, odd, kr)


# ---------------------------------------------------------------------------
# square case


@dataclass(frozen=True)
class Quadrilateral:
    g1: mm.MonotoneMap | None = None
    g2: mm.MonotoneMap | None = None
    g3: mm.MonotoneMap | None = None
    g4: mm.MonotoneMap | None = None
    vertices: tuple[float, float, float, float] = (1.0, 1.0, 1.0, 1.0)  # X1, X2, Y1, Y2

    @classmethod
    def of(cls, g1=None, g2=None, g3=None, g4=None, vertices=(1.0, 1.0, 1.0, 1.0)) -> Quadrilateral:
        gs = [None if g is None else check_unit_map(g, f"g{i}") for i, g in enumerate((g1, g2, g3, g4), 1)]
        vertices = tuple(float(v) for v in vertices)
        if len(vertices) != 4 or not all(v > 0 and math.isfinite(v) for v in vertices):
            raise VerticesNotOnAxes(f"vertices must be four positive axis distances, got {vertices}")
        return cls(*gs, vertices=vertices)

    @property
    def maps(self) -> tuple:
        return (self.g1, self.g2, self.g3, self.g4)

    @property
    def missing(self) -> list[int]:
        return [i for i, g in enumerate(self.maps, 1) if g is None]

    @property
    def normalized(self) -> bool:
        return self.vertices == (1.0, 1.0, 1.0, 1.0)

    def complete(self) -> Quadrilateral:
        miss = self.missing
        if not miss:
            return self
        if len(miss) > 1:
            raise ValidationError(f"need three sides to derive the fourth, missing {miss}")
        return replace(self, **{f"g{miss[0]}": fourth_side_square(self)})

    def side_points(self, j: int, s) -> np.ndarray:
        """Points of side Cj in (X, Y), s in [0, 1] running along the side."""
        s = np.asarray(s, dtype=float)
        g = self.maps[j - 1]
        if j == 1:
            X = s
            Y = g(1 - s)
        elif j == 2:
            Y = s
            X = -g(1 - s)
        elif j == 3:
            X = -s
            Y = -g(1 - s)
        else:
            Y = -s
            X = g(1 - s)
        X1, X2, Y1, Y2 = self.vertices
        X = np.where(X >= 0, X * X1, X * X2)
        Y = np.where(Y >= 0, Y * Y1, Y * Y2)
        return np.column_stack([X, Y])


def twisted_residual(q: Quadrilateral, samples=None) -> float:
    """max |g4(~g3(g2(~g1(s)))) - s| over s in [0, 1]."""
    s = UNIT_SAMPLES if samples is None else np.asarray(samples, dtype=float)
    g1, g2, g3, g4 = q.maps
    return float(np.max(np.abs(g4(mm.tilde(g3)(g2(mm.tilde(g1)(s)))) - s)))


def fourth_side_square(q: Quadrilateral) -> mm.MonotoneMap:
    """The missing side map forced by g4 o ~g3 o g2 o ~g1 = id."""
    miss = q.missing
    if len(miss) != 1:
        raise ValidationError(f"exactly one side must be missing, got {miss or 'none'}")
    g1, g2, g3, g4 = q.maps
    t = mm.tilde
    j = miss[0]
    if j == 4:
        return mm.invert(mm.compose(t(g3), g2, t(g1)))
    if j == 1:
        return t(mm.invert(mm.compose(g4, t(g3), g2)))
    if j == 2:
        return mm.invert(mm.compose(t(g1), g4, t(g3)))
    return t(mm.invert(mm.compose(g2, t(g1), g4)))


def quad_normalize(q: Quadrilateral) -> tuple[Quadrilateral, LCMap]:
    """Rescale the four half-axes so the vertices sit at unit distance.

    Returns the normalised quadrilateral and the scaling map that takes the
    original one onto it.
    """
    X1, X2, Y1, Y2 = q.vertices
    if not all(v > 0 and math.isfinite(v) for v in q.vertices):
        raise VerticesNotOnAxes(f"vertices must be four positive axis distances, got {q.vertices}")

    def scale(pos, neg):
        if pos == 1 and neg == 1:
            return mm.Identity()
        f = mm.Piecewise(0.0, mm.Affine(1.0 / neg, 0.0), mm.Affine(1.0 / pos, 0.0))
        # pinned so the vertices land on +-1 without rounding
        return mm.Pinned(f, (-neg, 0.0, pos), (-1.0, 0.0, 1.0))

    return replace(q, vertices=(1.0, 1.0, 1.0, 1.0)), LCMap(scale(X1, X2), scale(Y1, Y2))


def _square_component(plus: mm.MonotoneMap, minus: mm.MonotoneMap) -> mm.MonotoneMap:
    core = mm.assemble(mm.Restrict(plus, 0.0, 1.0), mm.Restrict(minus, 0.0, 1.0))
    # identity outside [-1, 1]; the pins keep the square's corners exact
    glued = mm.Piecewise(-1.0, mm.Identity(), mm.Piecewise(1.0, core, mm.Identity()))
    return mm.Pinned(glued, (-1.0, 0.0, 1.0), (-1.0, 0.0, 1.0))


def realize_square(q: Quadrilateral, p=None) -> LCMap:
    """Map the (normalised) quadrilateral onto the standard square, sending
    side Cj onto the matching side.  ``p`` (default the identity) is the
    free choice h_- o ~g3^{-1}."""
    q = Quadrilateral.of(*q.maps, vertices=q.vertices).complete()
    if not q.normalized:
        raise VerticesNotOnAxes("normalise the quadrilateral first (quad_normalize)")
    res = twisted_residual(q)
    if res > CYCLIC_ACCEPT:
        raise CyclicViolation(f"g4 o ~g3 o g2 o ~g1 differs from the identity by {res:.3g}")
    p = check_unit_map(mm.Identity() if p is None else p, "p")
    g1, g2, g3, _ = q.maps
    t = mm.tilde
    k_minus = t(p)
    h_minus = mm.compose(p, t(g3))
    k_plus = mm.compose(t(p), g3, t(g2))
    h_plus = mm.compose(p, t(g3), g2, t(g1))
    return LCMap(_square_component(h_plus, h_minus), _square_component(k_plus, k_minus))


def square_side_residuals(m: LCMap, q: Quadrilateral, s=None) -> list[float]:
    """Per side, the distance of the image from the matching side of the
    standard square, measured in (U, V)."""
    s = UNIT_SAMPLES if s is None else np.asarray(s, dtype=float)
    out = []
    for j in range(1, 5):
        pts = q.side_points(j, s)
        U, V = m.char_eval(pts[:, 0], pts[:, 1])
        if j == 1:
            r = np.abs(U + V - 1) + np.maximum(0, -U) + np.maximum(0, -V)
        elif j == 2:
            r = np.abs(V - U - 1) + np.maximum(0, U) + np.maximum(0, -V)
        elif j == 3:
            r = np.abs(U + V + 1) + np.maximum(0, U) + np.maximum(0, V)
        else:
            r = np.abs(U - V - 1) + np.maximum(0, -U) + np.maximum(0, V)
        out.append(float(r.max()))
    return out


def flat_top_bottom(g, p=None) -> tuple[Quadrilateral, LCMap]:
    """Quadrilateral with flat top and bottom and lateral sides from g."""
    g = check_unit_map(g, "g")
    q = Quadrilateral.of(mm.Identity(), g, mm.Identity(), mm.invert(g))
    return q, realize_square(q, p)


def left_right_symmetric(g, p=None) -> tuple[Quadrilateral, LCMap]:
    """Quadrilateral with flat bottom whose top is symmetric about the
    y-axis; the left side comes from g."""
    g = check_unit_map(g, "g")
    gt_inv = mm.invert(mm.tilde(g))
    q = Quadrilateral.of(mm.compose(gt_inv, g), g, mm.Identity(), gt_inv)
    return q, realize_square(q, p)


# ---------------------------------------------------------------------------
# unfolding and cropping


def unfold_component(p, negated: bool = False) -> mm.MonotoneMap:
    """Odd extension of the half-line part of the even map p (negated when
    asked, which corresponds to keeping p on (-inf, 0])."""
    p = as_map(p)
    t = np.linspace(0.0, min(p.domain[1], -p.domain[0], 10.0), 201)[1:]
    if even_residual(p, t) > 1e-12:
        raise NotEven(f"{p.spec} is not even")
    if abs(p(0.0)) > mm.ENDPOINT_TOL:
        raise NotBijectiveOnHalfLine(f"{p.spec} does not vanish at 0")
    if p.direction_on(0.0, p.domain[1]) != mm.INCREASING:
        raise NotBijectiveOnHalfLine(f"{p.spec} is not increasing on [0, inf)")
    if isinstance(p, mm.PowerEven):
        h = mm.PowerOdd(p.p)
    else:
        h = mm.OddExtension(mm.Restrict(p, 0.0, p.domain[1]))
    return mm.Negate(h) if negated else h


def unfold(p, negated: bool = False) -> LCMap:
    """Replace the even map p by the odd extension of its half-line part,
    turning (p(X), p(Y)) into an invertible map that agrees with it on the
    quadrant X, Y > 0 (on X, Y < 0 when ``negated``)."""
    h = unfold_component(p, negated)
    return LCMap(h, h)


def crop_map(h, c: float) -> mm.MonotoneMap:
    """H_c(t) = h(t + c) - h(c) for t >= 0 and h(t - c) - h(-c) for t <= 0."""
    h = as_map(h)
    if not c >= 0 or not math.isfinite(c):
        raise ValidationError(f"crop width must be a nonnegative number, got {c}")
    if odd_residual(h) > 1e-12:
        raise NotOdd(f"{h.spec} is not odd")
    if h.direction != mm.INCREASING or not mm.check_monotone(h, 2001, -10.0, 10.0, expect=1):
        raise NonPositiveDerivative(f"{h.spec} is not strictly increasing")
    if c == 0:
        return h
    hc = float(h(c))
    right = mm.compose(mm.Affine(1.0, -hc), h, mm.Affine(1.0, c))
    left = mm.compose(mm.Affine(1.0, hc), h, mm.Affine(1.0, -c))
    return mm.Piecewise(0.0, left, right)


def crop(h, c: float) -> LCMap:
    H = crop_map(h, c)
    return LCMap(H, H)
