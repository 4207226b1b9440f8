"""Lorentz-conformal maps of the plane.

Maps are written in characteristic coordinates X = x + y, Y = -x + y as
(U, V) = (h(X), k(Y)) with monotone h, k built from small expression trees.
"""

from .constructions import (
    Quadrilateral,
    RayFamily,
    crop,
    flat_top_bottom,
    fourth_ray,
    fourth_side_square,
    gauge_equivalent_crossing,
    left_right_symmetric,
    quad_normalize,
    realize_crossing,
    realize_square,
    recover_gauge,
    unfold,
)
from .coords import D4Element, d4_apply, d4_compose, from_characteristic, to_characteristic
from .grammar import parse
from .lcmap import LCMap, contour, jacobian, klein_gordon_flatten, tangency_locus, verify_lorentz_cr
from .render import render_contours
from .symmetry import classify, full_symmetry_group
from .verify import rectangle_rule_test, signal_bounce_top

__version__ = "0.1.0"

__all__ = [
    "D4Element",
    "LCMap",
    "Quadrilateral",
    "RayFamily",
    "classify",
    "contour",
    "crop",
    "d4_apply",
    "d4_compose",
    "flat_top_bottom",
    "fourth_ray",
    "fourth_side_square",
    "from_characteristic",
    "full_symmetry_group",
    "gauge_equivalent_crossing",
    "jacobian",
    "klein_gordon_flatten",
    "left_right_symmetric",
    "parse",
    "quad_normalize",
    "realize_crossing",
    "realize_square",
    "recover_gauge",
    "rectangle_rule_test",
    "render_contours",
    "signal_bounce_top",
    "tangency_locus",
    "to_characteristic",
    "unfold",
    "verify_lorentz_cr",
]
