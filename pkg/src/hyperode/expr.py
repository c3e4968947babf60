"""Coefficient expressions h(x) with exact first and second derivatives.

Text such as ``"x^2 - 1/(1+x^2)"`` or ``"-omega^2"`` is parsed into a small
immutable syntax tree.  Evaluation runs the tree on second-order jets
``(value, d/dx, d2/dx2)`` so every consumer gets h, h' and h'' without
finite differencing.

Grammar (whitespace-insensitive)::

    expr   := term (("+" | "-") term)*
    term   := unary (("*" | "/") unary)*
    unary  := "-" unary | power
    power  := atom ("^" unary)?          # right-associative
    atom   := number | ident | ident "(" expr ")" | "(" expr ")"

Unary minus binds looser than ``^`` so ``-omega^2`` means ``-(omega^2)``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Callable, Mapping, Union

import numpy as np

from .errors import DomainError, ParseError, UnboundParameterError, UnknownFunctionError

__all__ = [
    "Jet2",
    "Expression",
    "Num",
    "Var",
    "Param",
    "Neg",
    "BinOp",
    "Call",
    "FUNCTIONS",
    "parse",
    "HFunction",
    "eval_jet",
]

Scalar = Union[float, np.ndarray]


def _check(*values) -> None:
    for v in values:
        if not np.all(np.isfinite(v)):
            raise DomainError("non-finite value produced during evaluation")


# --------------------------------------------------------------------------- jets


@dataclass(frozen=True)
class Jet2:
    """Truncated Taylor jet ``(v, v', v'')`` of a scalar function of one variable.

    Components may be floats or equally-shaped numpy arrays.
    """

    v: Scalar
    d1: Scalar = 0.0
    d2: Scalar = 0.0

    @staticmethod
    def const(c) -> "Jet2":
        return Jet2(c, 0.0 * c, 0.0 * c) if isinstance(c, np.ndarray) else Jet2(c, 0.0, 0.0)

    @staticmethod
    def variable(x) -> "Jet2":
        if isinstance(x, np.ndarray):
            return Jet2(x, np.ones_like(x), np.zeros_like(x))
        return Jet2(x, 1.0, 0.0)

    def __iter__(self):
        yield self.v
        yield self.d1
        yield self.d2

    def __add__(self, other):
        if not isinstance(other, Jet2):
            return Jet2(self.v + other, self.d1, self.d2)
        return Jet2(self.v + other.v, self.d1 + other.d1, self.d2 + other.d2)

    __radd__ = __add__

    def __neg__(self):
        return Jet2(-self.v, -self.d1, -self.d2)

    def __sub__(self, other):
        if not isinstance(other, Jet2):
            return Jet2(self.v - other, self.d1, self.d2)
        return Jet2(self.v - other.v, self.d1 - other.d1, self.d2 - other.d2)

    def __rsub__(self, other):
        return Jet2(other - self.v, -self.d1, -self.d2)

    def __mul__(self, other):
        if not isinstance(other, Jet2):
            return Jet2(self.v * other, self.d1 * other, self.d2 * other)
        a, b = self, other
        return Jet2(
            a.v * b.v,
            a.d1 * b.v + a.v * b.d1,
            a.d2 * b.v + 2.0 * a.d1 * b.d1 + a.v * b.d2,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, Jet2):
            other = Jet2.const(other)
        b = other
        if np.any(b.v == 0):
            raise DomainError("division by zero")
        q = self.v / b.v
        q1 = (self.d1 - q * b.d1) / b.v
        q2 = (self.d2 - 2.0 * q1 * b.d1 - q * b.d2) / b.v
        return Jet2(q, q1, q2)

    def __rtruediv__(self, other):
        return Jet2.const(other) / self

    def chain(self, f, df, d2f) -> "Jet2":
        """Compose a scalar function given its value and two derivatives at ``self.v``."""
        return Jet2(f, df * self.d1, d2f * self.d1 * self.d1 + df * self.d2)

    def powi(self, n: int) -> "Jet2":
        """Integer power by repeated multiplication (keeps the sign of negative bases)."""
        if n == 0:
            one = Jet2.const(1.0 + 0.0 * self.v)
            return one
        base = self if n > 0 else 1.0 / self
        k = abs(n)
        result = None
        while k:
            if k & 1:
                result = base if result is None else result * base
            k >>= 1
            if k:
                base = base * base
        return result

    # elementary functions -----------------------------------------------------

    def sin(self):
        s, c = np.sin(self.v), np.cos(self.v)
        return self.chain(s, c, -s)

    def cos(self):
        s, c = np.sin(self.v), np.cos(self.v)
        return self.chain(c, -s, -c)

    def tan(self):
        c = np.cos(self.v)
        if np.any(c == 0):
            raise DomainError("tan pole")
        t = np.tan(self.v)
        sec2 = 1.0 + t * t
        return self.chain(t, sec2, 2.0 * t * sec2)

    def exp(self):
        e = np.exp(self.v)
        return self.chain(e, e, e)

    def ln(self):
        if np.any(self.v <= 0):
            raise DomainError("ln of non-positive argument")
        inv = 1.0 / self.v
        return self.chain(np.log(self.v), inv, -inv * inv)

    def sqrt(self):
        if np.any(self.v < 0):
            raise DomainError("sqrt of negative argument")
        if np.any(self.v == 0):
            raise DomainError("sqrt is not differentiable at 0")
        r = np.sqrt(self.v)
        return self.chain(r, 0.5 / r, -0.25 / (r * self.v))

    def abs(self):
        s = np.sign(self.v)
        return self.chain(np.abs(self.v), s, 0.0 * s)

    def tanh(self):
        t = np.tanh(self.v)
        sech2 = 1.0 - t * t
        return self.chain(t, sech2, -2.0 * t * sech2)

    def cosh(self):
        return self.chain(np.cosh(self.v), np.sinh(self.v), np.cosh(self.v))

    def sinh(self):
        return self.chain(np.sinh(self.v), np.cosh(self.v), np.sinh(self.v))

    def __pow__(self, other):
        if not isinstance(other, Jet2):
            other = Jet2.const(other)
        if _is_integer_constant(other):
            return self.powi(int(np.ravel(other.v)[0]))
        if np.any(self.v <= 0):
            raise DomainError("non-integer power of a non-positive base")
        return (other * self.ln()).exp()


def _is_integer_constant(j: Jet2) -> bool:
    v = np.ravel(j.v)
    if v.size == 0 or not (np.all(j.d1 == 0) and np.all(j.d2 == 0)):
        return False
    first = float(v[0])
    return bool(np.all(v == first)) and first.is_integer() and abs(first) < 2**31


FUNCTIONS: dict[str, Callable[[Jet2], Jet2]] = {
    "sin": Jet2.sin,
    "cos": Jet2.cos,
    "tan": Jet2.tan,
    "exp": Jet2.exp,
    "ln": Jet2.ln,
    "sqrt": Jet2.sqrt,
    "abs": Jet2.abs,
    "tanh": Jet2.tanh,
    "cosh": Jet2.cosh,
    "sinh": Jet2.sinh,
}

CONSTANTS = {"pi": math.pi}


# --------------------------------------------------------------------------- AST


class Expression:
    """Base class of syntax-tree nodes.  Nodes are immutable and hashable."""

    def params(self) -> frozenset[str]:
        return frozenset()

    def to_text(self) -> str:
        raise NotImplementedError

    def __str__(self) -> str:
        return self.to_text()


@dataclass(frozen=True)
class Num(Expression):
    value: float

    def to_text(self) -> str:
        return repr(float(self.value))


@dataclass(frozen=True)
class Var(Expression):
    name: str = "x"

    def to_text(self) -> str:
        return self.name


@dataclass(frozen=True)
class Param(Expression):
    name: str

    def params(self):
        return frozenset({self.name})

    def to_text(self) -> str:
        return self.name


@dataclass(frozen=True)
class Neg(Expression):
    arg: Expression

    def params(self):
        return self.arg.params()

    def to_text(self) -> str:
        return f"(-{self.arg.to_text()})"


@dataclass(frozen=True)
class BinOp(Expression):
    op: str
    left: Expression
    right: Expression

    def params(self):
        return self.left.params() | self.right.params()

    def to_text(self) -> str:
        return f"({self.left.to_text()} {self.op} {self.right.to_text()})"


@dataclass(frozen=True)
class Call(Expression):
    fn: str
    arg: Expression

    def params(self):
        return self.arg.params()

    def to_text(self) -> str:
        return f"{self.fn}({self.arg.to_text()})"


# --------------------------------------------------------------------------- parser

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*/^()])
    """,
    re.VERBOSE,
)


@dataclass
class _Token:
    kind: str  # "number", "ident", one of the operator characters, or "end"
    text: str
    offset: int


def _tokenize(text: str) -> list[_Token]:
    raw = text.encode("utf-8")
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            offset = len(text[:pos].encode("utf-8"))
            raise ParseError(f"unexpected character {text[pos]!r}", offset,
                             {"number", "identifier", "operator"})
        kind = m.lastgroup
        if kind != "ws":
            offset = len(text[: m.start()].encode("utf-8"))
            tokens.append(_Token(m.group() if kind == "op" else kind, m.group(), offset))
        pos = m.end()
    tokens.append(_Token("end", "", len(raw)))
    return tokens


class _Parser:
    def __init__(self, text: str, variable: str):
        self.tokens = _tokenize(text)
        self.i = 0
        self.variable = variable

    @property
    def tok(self) -> _Token:
        return self.tokens[self.i]

    def advance(self) -> _Token:
        t = self.tokens[self.i]
        self.i += 1
        return t

    def expect(self, kind: str) -> _Token:
        if self.tok.kind != kind:
            raise ParseError(f"unexpected {self.tok.text or 'end of input'!r}",
                             self.tok.offset, {kind})
        return self.advance()

    def parse(self) -> Expression:
        node = self.expr()
        if self.tok.kind != "end":
            raise ParseError(f"unexpected {self.tok.text!r}", self.tok.offset,
                             {"+", "-", "*", "/", "^", "end"})
        return node

    def expr(self) -> Expression:
        node = self.term()
        while self.tok.kind in ("+", "-"):
            op = self.advance().kind
            node = BinOp(op, node, self.term())
        return node

    def term(self) -> Expression:
        node = self.unary()
        while self.tok.kind in ("*", "/"):
            op = self.advance().kind
            node = BinOp(op, node, self.unary())
        return node

    def unary(self) -> Expression:
        if self.tok.kind == "-":
            self.advance()
            return Neg(self.unary())
        return self.power()

    def power(self) -> Expression:
        base = self.atom()
        if self.tok.kind == "^":
            self.advance()
            return BinOp("^", base, self.unary())
        return base

    def atom(self) -> Expression:
        t = self.tok
        if t.kind == "number":
            self.advance()
            return Num(float(t.text))
        if t.kind == "ident":
            self.advance()
            if self.tok.kind == "(":
                if t.text not in FUNCTIONS:
                    raise UnknownFunctionError(f"unknown function {t.text!r}", t.offset,
                                               set(FUNCTIONS))
                self.advance()
                arg = self.expr()
                self.expect(")")
                return Call(t.text, arg)
            if t.text in FUNCTIONS:
                raise ParseError(f"function {t.text!r} needs an argument",
                                 self.tok.offset, {"("})
            if t.text == self.variable:
                return Var(self.variable)
            if t.text in CONSTANTS:
                return Num(CONSTANTS[t.text])
            return Param(t.text)
        if t.kind == "(":
            self.advance()
            node = self.expr()
            self.expect(")")
            return node
        raise ParseError(f"unexpected {t.text or 'end of input'!r}", t.offset,
                         {"number", "identifier", "(", "-"})


def parse(text: str, variable: str = "x") -> Expression:
    """Parse expression text into a syntax tree.

    ``variable`` names the independent variable; every other identifier that
    is not a function name or ``pi`` becomes a parameter.
    """
    if not text or not text.strip():
        raise ParseError("empty expression", 0, {"number", "identifier", "(", "-"})
    return _Parser(text, variable).parse()


# --------------------------------------------------------------------------- evaluation


def _evaluate(node: Expression, x: Jet2, env: Mapping[str, float]) -> Jet2:
    if isinstance(node, Num):
        return Jet2.const(node.value + 0.0 * x.v)
    if isinstance(node, Var):
        return x
    if isinstance(node, Param):
        return Jet2.const(env[node.name] + 0.0 * x.v)
    if isinstance(node, Neg):
        return -_evaluate(node.arg, x, env)
    if isinstance(node, Call):
        out = FUNCTIONS[node.fn](_evaluate(node.arg, x, env))
        _check(*out)
        return out
    if isinstance(node, BinOp):
        a = _evaluate(node.left, x, env)
        if node.op == "^" and isinstance(node.right, Num) and float(node.right.value).is_integer():
            out = a.powi(int(node.right.value))
            _check(*out)
            return out
        b = _evaluate(node.right, x, env)
        if node.op == "+":
            out = a + b
        elif node.op == "-":
            out = a - b
        elif node.op == "*":
            out = a * b
        elif node.op == "/":
            out = a / b
        else:
            out = a ** b
        _check(*out)
        return out
    raise TypeError(f"not an expression node: {node!r}")


@dataclass(frozen=True)
class HFunction:
    """A parsed coefficient function with its parameter bindings.

    Callable: ``h(x)`` returns the value, ``h.jet(x)`` the full jet.
    Works on floats and numpy arrays alike.
    """

    expr: Expression
    bindings: Mapping[str, float] = field(default_factory=dict)
    text: str = ""

    def __post_init__(self):
        missing = self.expr.params() - set(self.bindings)
        if missing:
            raise UnboundParameterError(f"unbound parameter(s): {', '.join(sorted(missing))}")
        object.__setattr__(self, "bindings", dict(self.bindings))

    def __hash__(self):
        return hash((self.expr, tuple(sorted(self.bindings.items()))))

    @classmethod
    def parse(cls, text: str, variable: str = "x", **bindings: float) -> "HFunction":
        return cls(parse(text, variable), {k: float(v) for k, v in bindings.items()}, text)

    @classmethod
    def constant(cls, c: float) -> "HFunction":
        return cls(Num(float(c)), {}, repr(float(c)))

    def jet(self, x) -> Jet2:
        if isinstance(x, (list, tuple)):
            x = np.asarray(x, dtype=float)
        elif not isinstance(x, np.ndarray):
            x = float(x)
        # overflow and invalid results are caught by the finiteness checks
        with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
            return _evaluate(self.expr, Jet2.variable(x), self.bindings)

    def __call__(self, x):
        return self.jet(x).v

    def deriv(self, x):
        return self.jet(x).d1

    def __repr__(self) -> str:
        src = self.text or self.expr.to_text()
        if self.bindings:
            binds = ", ".join(f"{k}={v!r}" for k, v in sorted(self.bindings.items()))
            return f"HFunction({src!r}, {binds})"
        return f"HFunction({src!r})"


def eval_jet(h, x) -> Jet2:
    """``(h(x), h'(x), h''(x))`` from jet arithmetic; raises DomainError off-domain."""
    return h.jet(x)
