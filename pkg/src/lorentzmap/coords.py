"""Characteristic coordinates and the dihedral group of the square.

The 45-degree rotated frame is X = x + y, Y = -x + y.  D4 is generated by
s (the reflection X -> -X) and t (the reflection swapping X and Y); in the
plain frame t is the reflection in the y-axis.
"""

from __future__ import annotations

from enum import Enum

import numpy as np

from .errors import ValidationError


def to_characteristic(x, y):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    return x + y, y - x


def from_characteristic(X, Y):
    X = np.asarray(X, dtype=float)
    Y = np.asarray(Y, dtype=float)
    return (X - Y) / 2, (X + Y) / 2


# rotation / reflection matrices acting on column vectors (X, Y)
_S = np.array([[-1, 0], [0, 1]])
_T = np.array([[0, 1], [1, 0]])
_ST = _S @ _T


class D4Element(Enum):
    """Elements of D4 by word in the generators s, t; composition applies the
    right-hand factor first, so ``st`` means s after t."""

    e = "e"
    st = "st"
    st2 = "st2"
    st3 = "st3"
    s = "s"
    t = "t"
    tst = "tst"
    sts = "sts"

    @property
    def matrix(self) -> np.ndarray:
        return _MATRICES[self]

    def __mul__(self, other: D4Element) -> D4Element:
        return _TABLE[(self, other)]

    def inverse(self) -> D4Element:
        for g in D4Element:
            if (self * g) is D4Element.e:
                return g
        raise AssertionError("unreachable")

    @property
    def std_matrix(self) -> np.ndarray:
        # conjugate by the change of frame (x, y) -> (X, Y)
        return _P_INV @ self.matrix @ _P


_MATRICES = {
    D4Element.e: np.eye(2, dtype=int),
    D4Element.st: _ST,
    D4Element.st2: _ST @ _ST,
    D4Element.st3: _ST @ _ST @ _ST,
    D4Element.s: _S,
    D4Element.t: _T,
    D4Element.tst: _T @ _S @ _T,
    D4Element.sts: _S @ _T @ _S,
}
_P = np.array([[1.0, 1.0], [-1.0, 1.0]])
_P_INV = np.linalg.inv(_P)


def _lookup(m: np.ndarray) -> D4Element:
    for g, gm in _MATRICES.items():
        if np.array_equal(gm, m):
            return g
    raise AssertionError("matrix outside D4")


_TABLE = {(a, b): _lookup(a.matrix @ b.matrix) for a in D4Element for b in D4Element}

E = D4Element.e
ELEMENTS = tuple(D4Element)


def d4_compose(*elements: D4Element) -> D4Element:
    out = D4Element.e
    for g in elements:
        out = out * g
    return out


def d4_apply(g: D4Element | str, p, system: str = "char"):
    """Image of a point (or stacked arrays of points) under g.

    ``system`` selects whether p is given in characteristic ('char') or
    plain ('std') coordinates; the result is in the same frame.
    """
    g = as_element(g)
    a, b = p
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if system == "char":
        m = g.matrix
    elif system == "std":
        m = g.std_matrix
    else:
        raise ValidationError(f"unknown coordinate system {system!r}")
    return m[0, 0] * a + m[0, 1] * b, m[1, 0] * a + m[1, 1] * b


def as_element(g) -> D4Element:
    if isinstance(g, D4Element):
        return g
    try:
        return D4Element(g)
    except ValueError:
        raise ValidationError(f"unknown D4 element {g!r}") from None


def generated(*gens: D4Element) -> frozenset[D4Element]:
    """Subgroup generated by the given elements."""
    group = {D4Element.e, *gens}
    while True:
        new = {a * b for a in group for b in group} - group
        if not new:
            return frozenset(group)
        group |= new


# named subgroups with their generators
SUBGROUP_GENERATORS: dict[str, tuple[D4Element, ...]] = {
    "D4": (D4Element.s, D4Element.st),
    "RXY": (D4Element.s, D4Element.tst),
    "Rxy": (D4Element.t, D4Element.sts),
    "T": (D4Element.st,),
    "RX": (D4Element.s,),
    "RY": (D4Element.tst,),
    "Rx": (D4Element.t,),
    "Ry": (D4Element.sts,),
    "Tpi": (D4Element.st2,),
    "e": (),
}
SUBGROUPS: dict[str, frozenset[D4Element]] = {k: generated(*v) for k, v in SUBGROUP_GENERATORS.items()}


def subgroup_name(elements) -> str | None:
    fs = frozenset(elements)
    for name, grp in SUBGROUPS.items():
        if grp == fs:
            return name
    return None
