"""Expression language for scenario files and the command line.

Syntax is infix over integers, the field generator ``t`` and the function
argument ``x``, plus constructor calls::

    id  der(u)  sub(r)  comp(m1, m2)  lin(c1*m1 + c2*m2)          additive maps
    pull(a, k)  prod(a1, ..., ak)  blocks(F; 2, 1)  sum(c*F + ...)  forms
    poly[a0, a1, ..., ak]                                         polynomials
    trace(F)  apply(m)  const(c)  at(f, P)  polyof(P, f)          functions of x
    delta(f; y1, y2)  delta_mult(f; y1)

Parsing is two passes: a recursive-descent pass builds a generic tree whose
nodes carry (line, column); elaboration then turns it into a field element,
map, form, polynomial or function depending on what the context asks for.
Maps, forms, constants and polynomials used where a function of ``x`` is
expected are read as ``apply(m)``, ``trace(F)``, ``const(c)`` and ``P(x)``.
So ``der(1)^2`` is the function d(x)^2 in general, but the second derivative
where a map is required (``hod``, ``comp``, ``prod``).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

from fecheck import atoms, multiadd
from fecheck.exactfield import ONE, FieldElem, T
from fecheck.genpoly import AtPoly, ClassicalPoly


class ParseError(ValueError):
    def __init__(self, message: str, line: int = 1, column: int = 1):
        super().__init__(f"{message} at line {line}, column {column}")
        self.message = message
        self.line = line
        self.column = column


# ---------------------------------------------------------------------------
# tokens and generic tree

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*/^(),;\[\]]))")


@dataclass(frozen=True)
class Token:
    kind: str  # 'num' | 'name' | 'op' | 'eof'
    text: str
    line: int
    column: int


def tokenize(src: str) -> list[Token]:
    tokens = []
    pos = 0
    line, line_start = 1, 0
    while True:
        m = _TOKEN.match(src, pos)
        skipped = src[pos:m.start(m.lastgroup)] if m and m.lastgroup else src[pos:]
        # track newlines inside skipped whitespace
        for i, ch in enumerate(skipped):
            if ch == "\n":
                line += 1
                line_start = pos + i + 1
        if m is None or m.lastgroup is None:
            rest = src[pos:]
            if rest.strip():
                off = pos + len(rest) - len(rest.lstrip())
                raise ParseError(f"unexpected character {src[off]!r}", line, off - line_start + 1)
            tokens.append(Token("eof", "", line, len(src) - line_start + 1))
            return tokens
        start = m.start(m.lastgroup)
        tokens.append(Token(m.lastgroup, m.group(m.lastgroup), line, start - line_start + 1))
        pos = m.end()


@dataclass(frozen=True)
class Node:
    line: int
    column: int


@dataclass(frozen=True)
class Num(Node):
    value: int


@dataclass(frozen=True)
class Name(Node):
    name: str


@dataclass(frozen=True)
class Call(Node):
    name: str
    args: tuple
    extra: tuple = ()  # arguments after ';'


@dataclass(frozen=True)
class PolyLit(Node):
    args: tuple


@dataclass(frozen=True)
class Group(Node):
    inner: Node


@dataclass(frozen=True)
class Neg(Node):
    inner: Node


@dataclass(frozen=True)
class Pow(Node):
    base: Node
    exp: int


@dataclass(frozen=True)
class Chain(Node):
    """Left-associated run of one operator class: ('+'|'-') or ('*'|'/')."""

    first: Node
    rest: tuple  # ((op, node), ...)


class _Parser:
    def __init__(self, src: str):
        self.tokens = tokenize(src)
        self.i = 0

    def peek(self) -> Token:
        return self.tokens[self.i]

    def take(self) -> Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def error(self, message: str, tok: Token | None = None):
        tok = tok or self.peek()
        raise ParseError(message, tok.line, tok.column)

    def expect(self, text: str) -> Token:
        tok = self.peek()
        if tok.text != text or tok.kind == "eof":
            self.error(f"expected {text!r}" + (f", found {tok.text!r}" if tok.text else ""))
        return self.take()

    def parse(self) -> Node:
        node = self.expr()
        if self.peek().kind != "eof":
            self.error(f"unexpected {self.peek().text!r}")
        return node

    def expr(self) -> Node:
        return self._chain(self.term, "+-")

    def term(self) -> Node:
        return self._chain(self.unary, "*/")

    def _chain(self, sub, ops) -> Node:
        start = self.peek()
        first = sub()
        rest = []
        while self.peek().kind == "op" and self.peek().text in ops:
            op = self.take().text
            rest.append((op, sub()))
        if not rest:
            return first
        return Chain(start.line, start.column, first, tuple(rest))

    def unary(self) -> Node:
        tok = self.peek()
        if tok.kind == "op" and tok.text == "-":
            self.take()
            return Neg(tok.line, tok.column, self.unary())
        return self.power()

    def power(self) -> Node:
        base = self.atom()
        if self.peek().text == "^" and self.peek().kind == "op":
            self.take()
            sign = 1
            if self.peek().text == "-":
                self.take()
                sign = -1
            tok = self.peek()
            if tok.kind != "num":
                self.error("exponent must be an integer literal")
            self.take()
            return Pow(base.line, base.column, base, sign * int(tok.text))
        return base

    def atom(self) -> Node:
        tok = self.peek()
        if tok.kind == "num":
            self.take()
            return Num(tok.line, tok.column, int(tok.text))
        if tok.kind == "name":
            self.take()
            if tok.text == "poly" and self.peek().text == "[":
                self.take()
                args = self._args("]")
                return PolyLit(tok.line, tok.column, tuple(args))
            if self.peek().text == "(" and self.peek().kind == "op":
                self.take()
                args = self._args(")", allow_semicolon=True)
                main, extra = args if isinstance(args, tuple) else (args, [])
                return Call(tok.line, tok.column, tok.text, tuple(main), tuple(extra))
            return Name(tok.line, tok.column, tok.text)
        if tok.kind == "op" and tok.text == "(":
            self.take()
            inner = self.expr()
            self.expect(")")
            return Group(tok.line, tok.column, inner)
        self.error("expected expression" if tok.kind == "eof" else f"unexpected {tok.text!r}")

    def _args(self, close: str, allow_semicolon: bool = False):
        main: list[Node] = []
        extra: list[Node] = []
        current = main
        if self.peek().text == close and self.peek().kind == "op":
            self.take()
            return (main, extra) if allow_semicolon else main
        while True:
            current.append(self.expr())
            tok = self.peek()
            if tok.kind == "op" and tok.text == ",":
                self.take()
                continue
            if allow_semicolon and tok.kind == "op" and tok.text == ";" and current is main:
                self.take()
                current = extra
                continue
            self.expect(close)
            return (main, extra) if allow_semicolon else main


def parse_tree(src: str) -> Node:
    return _Parser(src).parse()


# ---------------------------------------------------------------------------
# elaboration

MAP_HEADS = {"der", "sub", "comp", "lin"}
FORM_HEADS = {"pull", "prod", "blocks", "sum"}
FN_HEADS = {"trace", "apply", "const", "at", "polyof", "delta", "delta_mult"}

Value = Union[FieldElem, atoms.AdditiveMap, multiadd.SymForm, ClassicalPoly, multiadd.UnaryFn]


def _err(node: Node, message: str):
    raise ParseError(message, node.line, node.column)


def _strip(node: Node) -> Node:
    while isinstance(node, Group):
        node = node.inner
    return node


def infer_kind(node: Node) -> str:
    if isinstance(node, Num):
        return "elem"
    if isinstance(node, Name):
        if node.name == "t":
            return "elem"
        if node.name == "x":
            return "fn"
        if node.name == "id":
            return "map"
        _err(node, f"unknown identifier {node.name!r}")
    if isinstance(node, Call):
        if node.name in MAP_HEADS:
            return "map"
        if node.name in FORM_HEADS:
            return "form"
        if node.name in FN_HEADS:
            return "fn"
        _err(node, f"unknown identifier {node.name!r}")
    if isinstance(node, PolyLit):
        return "poly"
    if isinstance(node, (Group, Neg)):
        return infer_kind(node.inner)
    if isinstance(node, Pow):
        return "elem" if infer_kind(node.base) == "elem" else "fn"
    if isinstance(node, Chain):
        kinds = [infer_kind(node.first)] + [infer_kind(n) for _, n in node.rest]
        ops = {op for op, _ in node.rest}
        if all(k == "elem" for k in kinds):
            return "elem"
        if "fn" in kinds:
            return "fn"
        if ops <= {"+", "-"}:
            distinct = set(kinds)
            return distinct.pop() if len(distinct) == 1 else "fn"
        nonscalar = [k for k in kinds if k != "elem"]
        if len(nonscalar) == 1 and nonscalar[0] in ("map", "form", "poly"):
            # scalar multiples; division only by scalars
            if all(op == "*" or infer_kind(n) == "elem" for op, n in node.rest):
                return nonscalar[0]
        return "fn"
    raise AssertionError(node)


def to_elem(node: Node) -> FieldElem:
    if isinstance(node, Num):
        return FieldElem.coerce(node.value)
    if isinstance(node, Name):
        if node.name == "t":
            return T
        _err(node, f"expected a field element, found {node.name!r}")
    if isinstance(node, Group):
        return to_elem(node.inner)
    if isinstance(node, Neg):
        return -to_elem(node.inner)
    if isinstance(node, Pow):
        base = to_elem(node.base)
        if node.exp < 0 and base.is_zero():
            _err(node, "division by zero")
        return base**node.exp
    if isinstance(node, Chain):
        acc = to_elem(node.first)
        for op, n in node.rest:
            v = to_elem(n)
            if op == "+":
                acc = acc + v
            elif op == "-":
                acc = acc - v
            elif op == "*":
                acc = acc * v
            else:
                if v.is_zero():
                    _err(n, "division by zero")
                acc = acc / v
        return acc
    _err(node, "expected a field element")


def _int_arg(node: Node) -> int:
    v = to_elem(node)
    if not v.is_constant() or v.constant_value().denominator != 1:
        _err(node, "expected an integer")
    return int(v.constant_value())


def _linear_terms(node: Node, kind: str, build) -> list[tuple[FieldElem, object]]:
    """Flatten c1*v1 + c2*v2 - ... into (coefficient, value) pairs."""
    node = _strip(node)
    if isinstance(node, Neg):
        return [(-c, v) for c, v in _linear_terms(node.inner, kind, build)]
    if isinstance(node, Chain) and node.rest[0][0] in "+-":
        terms = _linear_terms(node.first, kind, build)
        for op, n in node.rest:
            sub = _linear_terms(n, kind, build)
            terms += sub if op == "+" else [(-c, v) for c, v in sub]
        return terms
    if isinstance(node, Chain):
        coeff = ONE
        value = None
        items = [("*", node.first)] + list(node.rest)
        for op, n in items:
            if infer_kind(n) == "elem":
                c = to_elem(n)
                if op == "/":
                    if c.is_zero():
                        _err(n, "division by zero")
                    c = c.inv()
                coeff = coeff * c
            elif value is None and op == "*":
                value = build(n)
            else:
                _err(n, f"expected a linear combination of {kind}s")
        if value is None:
            _err(node, f"expected a {kind}")
        return [(coeff, value)]
    return [(ONE, build(node))]


def to_map(node: Node) -> atoms.AdditiveMap:
    inner = _strip(node)
    if isinstance(inner, Name) and inner.name == "id":
        return atoms.Identity()
    if isinstance(inner, Call) and inner.name in MAP_HEADS:
        args = inner.args
        if inner.name in ("der", "sub"):
            if len(args) != 1:
                _err(inner, f"{inner.name} takes exactly one argument")
            value = to_elem(args[0])
            if inner.name == "der":
                return atoms.Derivation(value)
            if value.is_constant():
                _err(args[0], "sub needs a nonconstant argument")
            return atoms.Substitution(value)
        if inner.name == "comp":
            if not args:
                _err(inner, "comp needs at least one map")
            return atoms.Compose(tuple(to_map(a) for a in args))
        if len(args) != 1:
            _err(inner, "lin takes one linear combination")
        return atoms.LinComb(tuple(_linear_terms(args[0], "map", to_map)))
    if isinstance(inner, Pow) and infer_kind(inner.base) == "map":
        # where a map is required, m^k is the k-fold composition
        if inner.exp < 0:
            _err(inner, "a map power needs a nonnegative exponent")
        return atoms.power(to_map(inner.base), inner.exp)
    if infer_kind(node) == "map":
        return atoms.LinComb(tuple(_linear_terms(node, "map", to_map)))
    _err(node, "expected an additive map")


def to_form(node: Node) -> multiadd.SymForm:
    inner = _strip(node)
    if isinstance(inner, Call) and inner.name in FORM_HEADS:
        args, extra = inner.args, inner.extra
        try:
            if inner.name == "pull":
                if len(args) != 2:
                    _err(inner, "pull takes a map and an arity")
                return multiadd.PullbackProduct(to_map(args[0]), _int_arg(args[1]))
            if inner.name == "prod":
                if not args:
                    _err(inner, "prod needs at least one map")
                return multiadd.AtomProduct(tuple(to_map(a) for a in args))
            if inner.name == "blocks":
                if len(args) != 1:
                    _err(inner, "blocks takes a form, then ';' and the exponents")
                return multiadd.PowerBlocks(to_form(args[0]), tuple(_int_arg(a) for a in extra))
            if len(args) != 1:
                _err(inner, "sum takes one linear combination")
            return multiadd.FormSum(tuple(_linear_terms(args[0], "form", to_form)))
        except multiadd.ArityError as exc:
            _err(inner, str(exc))
    if infer_kind(node) == "form":
        try:
            return multiadd.FormSum(tuple(_linear_terms(node, "form", to_form)))
        except multiadd.ArityError as exc:
            _err(node, str(exc))
    _err(node, "expected a symmetric form")


def to_poly(node: Node) -> ClassicalPoly:
    inner = _strip(node)
    if isinstance(inner, PolyLit):
        return ClassicalPoly(tuple(to_elem(a) for a in inner.args))
    # a polynomial expression in x
    return _classical(node)


def _classical(node: Node) -> ClassicalPoly:
    if isinstance(node, Group):
        return _classical(node.inner)
    if isinstance(node, PolyLit):
        return ClassicalPoly(tuple(to_elem(a) for a in node.args))
    if isinstance(node, Name) and node.name == "x":
        return ClassicalPoly.monomial(1)
    if infer_kind(node) == "elem":
        return ClassicalPoly((to_elem(node),))
    if isinstance(node, Neg):
        return _classical(node.inner) * FieldElem.coerce(-1)
    if isinstance(node, Pow):
        if node.exp < 0:
            _err(node, "negative power in a polynomial")
        return _classical(node.base) ** node.exp
    if isinstance(node, Chain):
        acc = _classical(node.first)
        for op, n in node.rest:
            if op == "+":
                acc = acc + _classical(n)
            elif op == "-":
                acc = acc + _classical(n) * FieldElem.coerce(-1)
            elif op == "*":
                acc = acc * _classical(n)
            else:
                if infer_kind(n) != "elem":
                    _err(n, "can only divide a polynomial by a constant")
                acc = acc * to_elem(n).inv()
        return acc
    _err(node, "expected a polynomial in x")


def to_fn(node: Node) -> multiadd.UnaryFn:
    kind = infer_kind(node)
    if kind == "elem":
        return multiadd.Const(to_elem(node))
    if kind == "map":
        return multiadd.AtomFn(to_map(node))
    if kind == "form":
        return multiadd.Trace(to_form(node))
    if kind == "poly":
        return multiadd.PolyOf(to_poly(node), multiadd.ArgPower(1))
    if isinstance(node, Group):
        return to_fn(node.inner)
    if isinstance(node, Name):  # x
        return multiadd.ArgPower(1)
    if isinstance(node, Neg):
        return multiadd.Scaled(-ONE, to_fn(node.inner))
    if isinstance(node, Pow):
        if isinstance(node.base, Name) and node.base.name == "x" and node.exp >= 0:
            return multiadd.ArgPower(node.exp)
        return multiadd.Power(to_fn(node.base), node.exp)
    if isinstance(node, Call):
        return _fn_call(node)
    if isinstance(node, Chain):
        ops = [op for op, _ in node.rest]
        if ops[0] in "+-":
            terms = [to_fn(node.first)]
            for op, n in node.rest:
                f = to_fn(n)
                terms.append(f if op == "+" else multiadd.Scaled(-ONE, f))
            return multiadd.FnSum(tuple(terms))
        if ops == ["*"] and infer_kind(node.first) == "elem":
            return multiadd.Scaled(to_elem(node.first), to_fn(node.rest[0][1]))
        acc = to_fn(node.first)
        factors = [acc]
        for op, n in node.rest:
            if op == "*":
                factors.append(to_fn(n))
            else:
                num = factors[0] if len(factors) == 1 else multiadd.Product(tuple(factors))
                factors = [multiadd.Quotient(num, to_fn(n))]
        return factors[0] if len(factors) == 1 else multiadd.Product(tuple(factors))
    _err(node, "expected a function of x")


def _fn_call(node: Call) -> multiadd.UnaryFn:
    name, args, extra = node.name, node.args, node.extra

    def arity(n):
        if len(args) != n:
            _err(node, f"{name} takes {n} argument{'s' if n != 1 else ''}")

    if name == "trace":
        arity(1)
        return multiadd.Trace(to_form(args[0]))
    if name == "apply":
        arity(1)
        return multiadd.AtomFn(to_map(args[0]))
    if name == "const":
        arity(1)
        return multiadd.Const(to_elem(args[0]))
    if name == "at":
        arity(2)
        return AtPoly(to_fn(args[0]), to_poly(args[1]))
    if name == "polyof":
        arity(2)
        return multiadd.PolyOf(to_poly(args[0]), to_fn(args[1]))
    arity(1)
    ys = [to_elem(a) for a in extra]
    if name == "delta":
        return multiadd.delta(to_fn(args[0]), ys)
    if any(y.is_zero() for y in ys):
        _err(node, "multiplicative increments must be nonzero")
    return multiadd.delta_mult(to_fn(args[0]), ys)


_BUILDERS = {"elem": to_elem, "map": to_map, "form": to_form, "poly": to_poly, "fn": to_fn}


def parse_expression(src: str, kind: str | None = None) -> Value:
    """Parse ``src``; ``kind`` forces one of elem/map/form/poly/fn."""
    tree = parse_tree(src)
    kind = kind or infer_kind(tree)
    if kind not in _BUILDERS:
        raise ValueError(f"unknown kind {kind!r}")
    return _BUILDERS[kind](tree)


def parse_elem(src: str) -> FieldElem:
    return parse_expression(src, "elem")


def parse_map(src: str) -> atoms.AdditiveMap:
    return parse_expression(src, "map")


def parse_form(src: str) -> multiadd.SymForm:
    return parse_expression(src, "form")


def parse_fn(src: str) -> multiadd.UnaryFn:
    return parse_expression(src, "fn")
