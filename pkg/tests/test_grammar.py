import numpy as np
import pytest

from lorentzmap import monotone as mm
from lorentzmap.errors import SpecSyntaxError
from lorentzmap.grammar import as_map, parse

SPECS = [
    "id",
    "affine:2,-1",
    "pow:2",
    "odd(pow:2)",
    "exp1",
    "ridge:0.5",
    "sinmono",
    "pwl:0,0;1,2;3,3",
    "tilde(restrict(0,1,pow:3))",
    "inv(exp1)",
    "comp(exp1,affine:0.5,0)",
    "neg(id)",
    "piece(0,affine:3,0,exp1)",
    "rpiece(0,affine:3,0,exp1)",
    "poly:0,1,0,1",
    "int(-2,2,exp)",
    "pin(0,0,comp(exp1,id))",
    "odd(restrict(0,inf,exp1))",
]


@pytest.mark.parametrize("spec", SPECS)
def test_spec_round_trip(spec):
    f = parse(spec)
    g = parse(f.spec)
    lo, hi = f.domain
    t = np.linspace(max(lo + 1e-3, -1.5), min(hi, 1.5), 100)
    assert np.max(np.abs(f(t) - g(t))) <= 1e-12


def test_whitespace_and_scientific():
    f = parse(" comp( affine:2e0 , 0 ,\n exp1 ) ")
    assert f(1.0) == pytest.approx(2 * (np.e - 1))


def test_odd_power_is_closed_form():
    assert isinstance(parse("odd(pow:2)"), mm.PowerOdd)


def test_abs_is_even_power():
    f = parse("abs")
    assert f(-2.5) == 2.5


@pytest.mark.parametrize("bad", ["", "foo", "affine:1", "comp(id)", "id)", "pwl:0", "pin(0,id)", "odd("])
def test_syntax_errors(bad):
    with pytest.raises(SpecSyntaxError):
        parse(bad)


def test_as_map_passes_maps_through():
    f = mm.Identity()
    assert as_map(f) is f
    assert as_map("id").spec == "id"
