"""Geometric oracles that do not go through the functional identities.

Curves are taken in their natural characteristic parameterisation: the odd
curves C1, C3 as graphs Y = c(X) and the even curves C2, C4 as graphs
X = c(Y).  Chasing a characteristic rectangle around the four curves is then
plain function evaluation, with no root finding.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import monotone as mm
from .errors import DegenerateRectangle, RayEscapes, ValidationError
from .grammar import as_map


@dataclass(frozen=True)
class Curve:
    """Graph of ``func`` over the parameter interval [lo, hi]."""

    func: Callable
    lo: float
    hi: float

    @classmethod
    def from_points(cls, params, values) -> Curve:
        params = np.asarray(params, dtype=float)
        values = np.asarray(values, dtype=float)
        order = np.argsort(params)
        p, v = params[order], values[order]
        return cls(lambda t: np.interp(t, p, v), float(p[0]), float(p[-1]))

    def __call__(self, t):
        return self.func(t)

    def contains(self, t: float, slack: float = 1e-12) -> bool:
        return self.lo - slack <= t <= self.hi + slack


@dataclass(frozen=True)
class CurveFamily:
    kind: str  # "crossing" or "square"
    curves: tuple[Curve, Curve, Curve, Curve]

    @property
    def scale(self) -> float:
        return max(1.0, *(max(abs(c.lo), abs(c.hi)) for c in self.curves))


def crossing_curves(g1, g2, g3, g4, reach: float = 5.0) -> CurveFamily:
    g1, g2, g3, g4 = (as_map(g) if isinstance(g, str) else g for g in (g1, g2, g3, g4))
    return CurveFamily("crossing", (
        Curve(lambda X: g1(X), 0.0, reach),
        Curve(lambda Y: -g2(Y), 0.0, reach),
        Curve(lambda X: -g3(-X), -reach, 0.0),
        Curve(lambda Y: g4(-Y), -reach, 0.0),
    ))


def square_curves(g1, g2, g3, g4) -> CurveFamily:
    g1, g2, g3, g4 = (as_map(g) if isinstance(g, str) else g for g in (g1, g2, g3, g4))
    return CurveFamily("square", (
        Curve(lambda X: g1(1 - X), 0.0, 1.0),
        Curve(lambda Y: -g2(1 - Y), 0.0, 1.0),
        Curve(lambda X: -g3(1 + X), -1.0, 0.0),
        Curve(lambda Y: g4(1 + Y), -1.0, 0.0),
    ))


def family_from_maps(kind: str, maps, reach: float = 5.0) -> CurveFamily:
    if kind == "crossing":
        return crossing_curves(*maps, reach=reach)
    if kind == "square":
        return square_curves(*maps)
    raise ValidationError(f"family kind must be 'crossing' or 'square', got {kind!r}")


def load_family(path: str) -> CurveFamily:
    """Read ``{"kind": ..., "g1": spec, ..., "g4": spec}`` from a JSON file."""
    with open(path, encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"{path}: {exc}") from None
    try:
        maps = [as_map(data[f"g{i}"]) for i in range(1, 5)]
        kind = data["kind"]
    except KeyError as exc:
        raise ValidationError(f"{path}: missing key {exc}") from None
    return family_from_maps(kind, maps, float(data.get("reach", 5.0)))


def rectangle_vertex(fam: CurveFamily, start: int, t: float) -> tuple[float, float]:
    """Chase the characteristic rectangle that starts at parameter t on
    curve ``start`` (0-based) through the next two curves.

    Returns (predicted, actual): the fourth curve's graph value at the
    rectangle's free coordinate and the coordinate the rectangle demands.
    """
    cs = fam.curves
    j = start
    p = [0.0, 0.0]  # (X, Y) of the current vertex
    axis = 0 if j % 2 == 0 else 1  # which coordinate parameterises curve j
    p[axis] = t
    p[1 - axis] = float(cs[j](t))
    first = tuple(p)
    for step in (1, 2):
        c = cs[(j + step) % 4]
        axis = 1 - axis
        # move along a characteristic line, keeping the parameter coordinate of c
        if not c.contains(p[axis]):
            raise DegenerateRectangle(f"vertex {step} misses curve {(j + step) % 4 + 1}")
        p[1 - axis] = float(c(p[axis]))
    last = cs[(j + 3) % 4]
    axis = 1 - axis
    # the fourth vertex shares one coordinate with the third and one with the first
    fourth = [0.0, 0.0]
    fourth[1 - axis] = first[1 - axis]
    fourth[axis] = p[axis]
    if not last.contains(fourth[axis]):
        raise DegenerateRectangle(f"fourth vertex misses curve {(j + 3) % 4 + 1}")
    width = abs(first[0] - p[0]) * abs(first[1] - p[1])
    if width < 1e-14:
        raise DegenerateRectangle("rectangle collapsed")
    return float(last(fourth[axis])), fourth[1 - axis]


@dataclass(frozen=True)
class RectangleReport:
    passed: bool
    max_residual: float
    tolerance: float
    trials: int
    degenerate: int
    residuals: np.ndarray

    def __bool__(self):
        return self.passed

    def csv(self) -> str:
        lines = ["trial,max_residual,pass"]
        for i, r in enumerate(self.residuals):
            lines.append(f"{i},{r:.12g},{int(r < self.tolerance)}")
        return "\n".join(lines) + "\n"

    def text(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        return (f"rectangle rule: {verdict} max_residual={self.max_residual:.3g} "
                f"tolerance={self.tolerance:.3g} trials={self.trials} degenerate={self.degenerate}")


def rectangle_rule_test(fam: CurveFamily, trials: int = 200, seed: int | None = 0,
                        tol: float = 1e-6) -> RectangleReport:
    """Random characteristic rectangles with three vertices on three curves;
    the residual is how far the fourth vertex sits from the fourth curve."""
    if trials < 1:
        raise ValidationError("trials must be positive")
    rng = np.random.default_rng(seed)
    res = []
    degenerate = 0
    for i in range(trials):
        j = i % 4
        c = fam.curves[j]
        t = rng.uniform(c.lo, c.hi)
        try:
            pred, actual = rectangle_vertex(fam, j, t)
        except DegenerateRectangle:
            degenerate += 1
            continue
        res.append(abs(pred - actual))
    res = np.asarray(res)
    thr = tol * fam.scale
    worst = float(res.max()) if res.size else math.nan
    return RectangleReport(bool(res.size) and worst < thr, worst, thr, trials, degenerate, res)


def signal_bounce_top(bottom: mm.MonotoneMap, left: mm.MonotoneMap, right: mm.MonotoneMap,
                      samples=101) -> np.ndarray:
    """Trace the top side of a unit quadrilateral from the other three.

    From each bottom point (X, -g3(1 + X)) the constant-X characteristic meets
    the left side at Y = 1 - g2^{-1}(-X) and the constant-Y characteristic
    meets the right side at X' = g4(1 + Y).  The top vertex of that
    characteristic rectangle is (X', 1 - g2^{-1}(-X)).  Returns an (n, 2)
    array of (X, Y) points.
    """
    g3, g2, g4 = as_map(bottom), as_map(left), as_map(right)
    Xb = -np.linspace(0.0, 1.0, samples) if np.ndim(samples) == 0 else np.asarray(samples, dtype=float)
    Yb = -g3(1 + Xb)
    s = 1 + Yb
    if (s < -1e-12).any() or (s > 1 + 1e-12).any():
        raise RayEscapes("constant-Y characteristic misses the right side")
    Xtop = g4(np.clip(s, 0.0, 1.0))
    g2inv = mm.invert_on(g2, 0.0, 1.0)
    r = -Xb
    if (r < -1e-12).any() or (r > 1 + 1e-12).any():
        raise RayEscapes("constant-X characteristic misses the left side")
    Ytop = 1 - g2inv(np.clip(r, 0.0, 1.0))
    return np.column_stack([Xtop, Ytop])


def top_side_distance(points: np.ndarray, g1) -> float:
    """Largest |Y - g1(1 - X)| over the given (X, Y) points."""
    g1 = as_map(g1)
    return float(np.max(np.abs(points[:, 1] - g1(1 - points[:, 0]))))
