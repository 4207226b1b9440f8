"""D4 symmetries of Lorentz-conformal maps.

A pair (g, g') belongs to the symmetry set of a map a when a o g = g' o a,
with D4 acting on (X, Y) in the domain and on (U, V) in the target by the
same matrices.  Away from the axes and diagonals the stabiliser is trivial,
so g' is unique and g -> g' is a homomorphism from a subgroup S1 onto S2.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import monotone as mm
from .constructions import unfold_component
from .coords import ELEMENTS, SUBGROUP_GENERATORS, D4Element, d4_apply, subgroup_name
from .errors import ConstantFunction, NonUniqueImage, ValidationError
from .lcmap import LCMap

SYM_TOL = 1e-9
GRID_N = 17

e, s, t = D4Element.e, D4Element.s, D4Element.t
st, st2, st3 = D4Element.st, D4Element.st2, D4Element.st3
tst, sts = D4Element.tst, D4Element.sts


def _radius(m: LCMap) -> float:
    r = 1.5
    for f in (m.h, m.k):
        lo, hi = f.domain
        r = min(r, 0.99 * -lo, 0.99 * hi)
    if not r > 0:
        raise ValidationError("components must be defined on an interval around 0")
    return r


def sample_grid(m: LCMap, n: int = GRID_N):
    """Off-axis, off-diagonal grid in (X, Y)."""
    r = _radius(m)
    X = -r + (np.arange(n) + 0.3) * 2 * r / n
    Y = -r + (np.arange(n) + 0.6) * 2 * r / n
    XX, YY = np.meshgrid(X, Y, indexing="ij")
    return XX.ravel(), YY.ravel()


def verify_pair(m: LCMap, g, gp, samples=None) -> float:
    """max |a(g p) - g'(a(p))| / max(1, |a(p)|) over the samples."""
    X, Y = sample_grid(m) if samples is None else samples
    gX, gY = d4_apply(g, (X, Y))
    lhs = m.char_eval(gX, gY)
    U, V = m.char_eval(X, Y)
    rhs = d4_apply(gp, (U, V))
    scale = np.maximum(1.0, np.maximum(np.abs(U), np.abs(V)))
    r = np.maximum(np.abs(lhs[0] - rhs[0]), np.abs(lhs[1] - rhs[1])) / scale
    return float(r.max())


# ---------------------------------------------------------------------------


CONDITIONS = ("h_even", "h_odd", "k_even", "k_odd", "h_eq_k", "h_eq_neg_k", "h_refl_eq_k", "h_refl_eq_neg_k")


@dataclass(frozen=True)
class ConditionProfile:
    residuals: dict
    tol: float = SYM_TOL

    def __getitem__(self, name: str) -> bool:
        return self.residuals[name] < self.tol

    @property
    def flags(self) -> dict:
        return {k: self[k] for k in CONDITIONS}

    @property
    def true_flags(self) -> list[str]:
        return [k for k in CONDITIONS if self[k]]


def detect_conditions(m: LCMap, samples: int = 64, tol: float = SYM_TOL) -> ConditionProfile:
    """Sampled parity and coincidence conditions on (h, k)."""
    r = _radius(m)
    tt = np.linspace(r / samples, r, samples) * (1 - 0.3 / samples)
    tt = np.concatenate([-tt[::-1], tt])
    h, k = m.h, m.k
    hp, hm, kp, km = h(tt), h(-tt), k(tt), k(-tt)
    for name, v in (("h", hp), ("k", kp)):
        if np.ptp(v) <= tol * max(1.0, float(np.max(np.abs(v)))):
            raise ConstantFunction(f"{name} is constant on the sample window")

    def rel(a, b):
        return float(np.max(np.abs(a - b) / np.maximum(1.0, np.maximum(np.abs(a), np.abs(b)))))

    res = {
        "h_even": rel(hm, hp),
        "h_odd": rel(hm, -hp),
        "k_even": rel(km, kp),
        "k_odd": rel(km, -kp),
        "h_eq_k": rel(hp, kp),
        "h_eq_neg_k": rel(hp, -kp),
        "h_refl_eq_k": rel(hm, kp),
        "h_refl_eq_neg_k": rel(hm, -kp),
    }
    prof = ConditionProfile(res, tol)
    if prof["h_even"] and prof["h_odd"]:
        raise ConstantFunction("h is both even and odd")
    if prof["k_even"] and prof["k_odd"]:
        raise ConstantFunction("k is both even and odd")
    return prof


@dataclass(frozen=True)
class SymmetryHom:
    """Phi: S1 -> S2 with a o g = Phi(g) o a."""

    phi: dict
    residuals: dict = field(default_factory=dict, compare=False)

    @property
    def source(self) -> frozenset:
        return frozenset(self.phi)

    @property
    def target(self) -> frozenset:
        return frozenset(self.phi.values())

    @property
    def source_name(self) -> str | None:
        return subgroup_name(self.source)

    @property
    def target_name(self) -> str | None:
        return subgroup_name(self.target)

    def on_generators(self) -> dict:
        gens = SUBGROUP_GENERATORS.get(self.source_name, ())
        return {g: self.phi[g] for g in gens}

    @property
    def is_identity(self) -> bool:
        return all(a is b for a, b in self.phi.items())

    def is_homomorphism(self) -> bool:
        return all(self.phi[a * b] is self.phi[a] * self.phi[b] for a in self.phi for b in self.phi)

    def conjugated(self, c: D4Element) -> SymmetryHom:
        """g -> c Phi(g) c^-1, the homomorphism of c o a."""
        ci = c.inverse()
        return SymmetryHom({g: c * gp * ci for g, gp in self.phi.items()}, self.residuals)

    def describe(self) -> str:
        if self.is_identity:
            images = "identity"
        else:
            images = ",".join(f"{g.value}->{gp.value}" for g, gp in self.on_generators().items())
        return f"{self.source_name}->{self.target_name} {images}".rstrip()


def full_symmetry_group(m: LCMap, tol: float = SYM_TOL) -> SymmetryHom:
    """Test all 64 pairs (g, g') and assemble the homomorphism."""
    grid = sample_grid(m)
    phi, residuals = {}, {}
    for g in ELEMENTS:
        for gp in ELEMENTS:
            r = verify_pair(m, g, gp, grid)
            residuals[(g, gp)] = r
            if r < tol:
                if g in phi:
                    raise NonUniqueImage(f"{g.value} has images {phi[g].value} and {gp.value}")
                phi[g] = gp
    return SymmetryHom(phi, residuals)


# ---------------------------------------------------------------------------
# table lookup

# (table, row, source subgroup, generator images, condition on (h, k))
TABLE_ROWS = [
    (3, 1, "D4", {s: e, st: t}, ("h_eq_k", "h_even")),
    (3, 2, "D4", {s: s, st: st}, ("h_eq_k", "h_odd")),
    (3, 3, "D4", {s: e, st: sts}, ("h_eq_neg_k", "h_even")),
    (3, 4, "D4", {s: s, st: st3}, ("h_eq_neg_k", "h_odd")),
    (4, 1, "RXY", {s: e, tst: e}, ("h_even", "k_even")),
    (4, 2, "RXY", {s: e, tst: tst}, ("h_even", "k_odd")),
    (4, 3, "RXY", {s: s, tst: e}, ("h_odd", "k_even")),
    (4, 4, "RXY", {s: s, tst: tst}, ("h_odd", "k_odd")),
    (5, 1, "RX", {s: e}, ("h_even",)),
    (5, 2, "RX", {s: s}, ("h_odd",)),
    (5, 3, "RY", {tst: e}, ("k_even",)),
    (5, 4, "RY", {tst: tst}, ("k_odd",)),
    (5, 5, "Ry", {sts: t}, ("h_refl_eq_k",)),
    (5, 6, "Ry", {sts: sts}, ("h_refl_eq_neg_k",)),
    (5, 7, "Rx", {t: t}, ("h_eq_k",)),
    (5, 8, "Rx", {t: sts}, ("h_eq_neg_k",)),
]


@dataclass(frozen=True)
class Classification:
    hom: SymmetryHom
    table: int | None
    row: int | None
    profile: ConditionProfile | None
    suggestions: tuple = ()

    @property
    def label(self) -> str:
        if self.table is None:
            if self.hom.source_name == "e":
                return "no D4 symmetry"
            return f"unclassified {self.hom.describe()}"
        return f"Table{self.table}:row{self.row} {self.hom.describe()}"

    @property
    def conditions_agree(self) -> bool | None:
        """Cross-check of the table row against the sampled conditions."""
        if self.table is None or self.profile is None:
            return None
        conds = next(r[4] for r in TABLE_ROWS if r[0] == self.table and r[1] == self.row)
        return all(self.profile[c] for c in conds)


def match_table(hom: SymmetryHom):
    name = hom.source_name
    gens = hom.on_generators()
    for table, row, src, images, _ in TABLE_ROWS:
        if src == name and all(gens.get(g) is gp for g, gp in images.items()):
            return table, row
    return None, None


def _unfold_suggestions(m: LCMap) -> tuple:
    out = []
    for name in ("h", "k"):
        f = getattr(m, name)
        try:
            h = unfold_component(f)
        except ValidationError:
            continue
        parts = {"h": m.h, "k": m.k, name: h}
        unfolded = LCMap(parts["h"], parts["k"], m.swapped)
        out.append((name, h.spec, classify(unfolded, suggest=False).label))
    if len(out) == 2:
        both = LCMap(unfold_component(m.h), unfold_component(m.k), m.swapped)
        out.append(("hk", f"{both.h.spec};{both.k.spec}", classify(both, suggest=False).label))
    return tuple(out)


def classify(m: LCMap, suggest: bool = True) -> Classification:
    """Locate the map in the symmetry tables.

    Swapped maps are reduced to the unswapped pair (h, k) by conjugating the
    target action with the coordinate swap.
    """
    hom = full_symmetry_group(m)
    base = hom.conjugated(t) if m.swapped else hom
    table, row = match_table(base)
    try:
        profile = detect_conditions(m)
    except ConstantFunction:
        profile = None
    sugg = _unfold_suggestions(m) if suggest else ()
    return Classification(base, table, row, profile, sugg)


def is_folded_component(f: mm.MonotoneMap) -> bool:
    return f.direction == mm.NONMONOTONE
