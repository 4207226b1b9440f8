"""Parser for the textual function specs used on the command line and in
family files.

Builtins::

    id  affine:a,b  pow:p  exp1  exp  ridge:a  sin  cos  sinmono  abs
    poly:c0,c1,...  pwl:x0,y0;x1,y1;...

Combinators::

    odd(f)  tilde(f)  inv(f)  neg(f)  comp(f,g)  piece(s,f,g)  rpiece(s,f,g)
    restrict(lo,hi,f)  int(lo,hi,f)  pin(x0,y0,x1,y1,...,f)

``pow:p`` is the folded power |t|**p; ``odd(pow:p)`` is the signed power.
Whitespace is ignored.  ``parse(m.spec)`` rebuilds an equivalent map.
"""

from __future__ import annotations

import re

from . import monotone as mm
from .errors import SpecSyntaxError

_NUMBER = re.compile(r"[+-]?(?:inf|(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)")
_NAME = re.compile(r"[a-z][a-z0-9]*")

_LEAVES = {
    "id": (0, lambda: mm.Identity()),
    "exp1": (0, lambda: mm.Exp1()),
    "exp": (0, lambda: mm.Exp()),
    "sin": (0, lambda: mm.Sin()),
    "cos": (0, lambda: mm.Cos()),
    "sinmono": (0, lambda: mm.SinMono()),
    "abs": (0, lambda: mm.PowerEven(1.0)),
    "affine": (2, lambda a, b: mm.Affine(a, b)),
    "pow": (1, lambda p: mm.PowerEven(p)),
    "ridge": (1, lambda a: mm.Ridge(a)),
}

# name -> (leading numeric args, function args)
_COMBINATORS = {
    "odd": (0, 1),
    "tilde": (0, 1),
    "inv": (0, 1),
    "neg": (0, 1),
    "comp": (0, 2),
    "piece": (1, 2),
    "rpiece": (1, 2),
    "restrict": (2, 1),
    "int": (2, 1),
    "pin": (None, 1),
}


class _Parser:
    def __init__(self, text: str):
        self.src = text
        self.s = "".join(text.split())
        self.i = 0

    def fail(self, msg: str):
        raise SpecSyntaxError(f"{msg} at position {self.i} in {self.src!r}")

    def peek(self) -> str:
        return self.s[self.i] if self.i < len(self.s) else ""

    def expect(self, ch: str):
        if self.peek() != ch:
            self.fail(f"expected {ch!r}")
        self.i += 1

    def number(self) -> float:
        m = _NUMBER.match(self.s, self.i)
        if not m:
            self.fail("expected a number")
        self.i = m.end()
        return float(m.group())

    def numbers(self, sep: str = ",") -> list[float]:
        out = [self.number()]
        while self.peek() == sep and _NUMBER.match(self.s, self.i + 1):
            self.i += 1
            out.append(self.number())
        return out

    def expr(self) -> mm.MonotoneMap:
        m = _NAME.match(self.s, self.i)
        if not m:
            self.fail("expected a function name")
        name = m.group()
        self.i = m.end()
        if name in _COMBINATORS:
            return self.combinator(name)
        if name == "poly":
            self.expect(":")
            return mm.Polynomial(self.numbers())
        if name == "pwl":
            self.expect(":")
            return self.pwl()
        if name in _LEAVES:
            arity, make = _LEAVES[name]
            if arity == 0:
                return make()
            self.expect(":")
            args = self.numbers()
            if len(args) != arity:
                self.fail(f"{name} takes {arity} argument(s), got {len(args)}")
            return make(*args)
        self.i = m.start()
        self.fail(f"unknown function {name!r}")

    def pwl(self) -> mm.MonotoneMap:
        xs, ys = [], []
        while True:
            x = self.number()
            self.expect(",")
            y = self.number()
            xs.append(x)
            ys.append(y)
            if self.peek() == ";":
                self.i += 1
                continue
            return mm.PiecewiseLinear(xs, ys)

    def pin(self) -> mm.MonotoneMap:
        self.expect("(")
        nums = []
        while _NUMBER.match(self.s, self.i):
            nums.append(self.number())
            self.expect(",")
        if not nums or len(nums) % 2:
            self.fail("pin needs (x, y) pairs before the function")
        f = self.expr()
        self.expect(")")
        return mm.Pinned(f, nums[0::2], nums[1::2])

    def combinator(self, name: str) -> mm.MonotoneMap:
        if name == "pin":
            return self.pin()
        n_num, n_fn = _COMBINATORS[name]
        self.expect("(")
        nums = []
        for _ in range(n_num):
            nums.append(self.number())
            self.expect(",")
        fns = [self.expr()]
        for _ in range(n_fn - 1):
            self.expect(",")
            fns.append(self.expr())
        self.expect(")")
        if name == "odd":
            f = fns[0]
            if isinstance(f, mm.PowerEven):
                return mm.PowerOdd(f.p)
            return mm.OddExtension(f)
        if name == "tilde":
            return mm.Tilde(fns[0])
        if name == "inv":
            return mm.invert(fns[0])
        if name == "neg":
            return mm.Negate(fns[0])
        if name == "comp":
            return mm.Compose(fns[0], fns[1])
        if name == "piece":
            return mm.Piecewise(nums[0], fns[0], fns[1], "left")
        if name == "rpiece":
            return mm.Piecewise(nums[0], fns[0], fns[1], "right")
        if name == "restrict":
            return mm.Restrict(fns[0], nums[0], nums[1])
        return mm.Antiderivative(fns[0], nums[0], nums[1])


def parse(text: str) -> mm.MonotoneMap:
    """Parse a function spec into a map."""
    if not isinstance(text, str) or not text.strip():
        raise SpecSyntaxError("empty function spec")
    p = _Parser(text)
    f = p.expr()
    if p.i != len(p.s):
        p.fail("trailing input")
    return f


def as_map(f) -> mm.MonotoneMap:
    """Accept either a map or a spec string."""
    if isinstance(f, mm.MonotoneMap):
        return f
    return parse(f)
